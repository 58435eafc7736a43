"""Cohort construction: labeling timelines and drawing balanced samples.

A patient indexes on the day of their first AED_FAILURE. Cases accumulate at
least four more failures strictly after that day; controls have exactly one
failure in total. Anything in between, or failure-free, is excluded. Only
events strictly before the index day may feed features downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, ParseError
from .events import EventRecord, EventTable

CASE = "CASE"
CONTROL = "CONTROL"

COHORT_HEADER = "patient_id,index_day,label"


@dataclass(frozen=True)
class PatientTimeline:
    """All events for one patient, in day order."""

    patient_id: str
    events: tuple[EventRecord, ...]


@dataclass(frozen=True)
class LabeledPatient:
    patient_id: str
    index_day: int
    label: str


@dataclass(frozen=True)
class LabeledCohort:
    """A sampled cohort: cases first, then controls, each id-sorted."""

    patients: tuple[LabeledPatient, ...]
    sampling_seed: int

    def ids(self) -> list[str]:
        return [p.patient_id for p in self.patients]

    def labels(self) -> list[str]:
        return [p.label for p in self.patients]


def build_timelines(table: EventTable) -> list[PatientTimeline]:
    """Group a table into one timeline per patient, in table (id) order."""
    timelines: list[PatientTimeline] = []
    current: list[EventRecord] = []
    for rec in table:
        if current and current[-1].patient_id != rec.patient_id:
            timelines.append(PatientTimeline(current[0].patient_id, tuple(current)))
            current = []
        current.append(rec)
    if current:
        timelines.append(PatientTimeline(current[0].patient_id, tuple(current)))
    return timelines


def label_patient(timeline: PatientTimeline) -> LabeledPatient | None:
    """Apply the case/control rule; None means the patient is excluded."""
    failure_days = [e.day for e in timeline.events if e.event_kind == "AED_FAILURE"]
    if not failure_days:
        return None
    index_day = min(failure_days)
    future = sum(1 for d in failure_days if d > index_day)
    if future >= 4:
        return LabeledPatient(timeline.patient_id, index_day, CASE)
    if future == 0 and len(failure_days) == 1:
        return LabeledPatient(timeline.patient_id, index_day, CONTROL)
    return None


def label_timelines(timelines: list[PatientTimeline]) -> list[LabeledPatient]:
    return [lp for t in timelines if (lp := label_patient(t)) is not None]


def pre_index_events(timeline: PatientTimeline, index_day: int) -> list[EventRecord]:
    """Events strictly before the index day; index-day events are excluded."""
    return [e for e in timeline.events if e.day < index_day]


def sample_cohort(labeled: list[LabeledPatient], n_per_class: int, seed: int) -> LabeledCohort:
    """Draw n_per_class cases and controls uniformly without replacement.

    Candidates are id-sorted before sampling so the draw depends only on the
    seed and the candidate sets, not on input order.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be positive")
    rng = np.random.default_rng(seed)
    chosen: list[LabeledPatient] = []
    for label in (CASE, CONTROL):
        pool = sorted((p for p in labeled if p.label == label), key=lambda p: p.patient_id)
        if len(pool) < n_per_class:
            raise CapacityError(f"{label}: need {n_per_class}, have {len(pool)}")
        picks = rng.choice(len(pool), size=n_per_class, replace=False)
        chosen.extend(sorted((pool[i] for i in picks), key=lambda p: p.patient_id))
    return LabeledCohort(tuple(chosen), sampling_seed=seed)


def write_cohort(cohort: LabeledCohort, path: str | Path) -> None:
    lines = [COHORT_HEADER]
    lines.extend(f"{p.patient_id},{p.index_day},{p.label}" for p in cohort.patients)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_cohort(path: str | Path, sampling_seed: int = 0) -> LabeledCohort:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != COHORT_HEADER:
        raise ParseError(1, f"expected header {COHORT_HEADER!r}")
    patients = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(lineno, f"expected 3 fields, got {len(fields)}")
        pid, day_field, label = fields
        if label not in (CASE, CONTROL):
            raise ParseError(lineno, f"unknown label {label!r}")
        if not (day_field.isascii() and day_field.isdigit()):
            raise ParseError(lineno, f"index_day must be a non-negative integer, got {day_field!r}")
        patients.append(LabeledPatient(pid, int(day_field), label))
    return LabeledCohort(tuple(patients), sampling_seed=sampling_seed)
