import numpy as np
import pytest

import refractory as r
from refractory import synth


def test_determinism():
    cfg = r.GeneratorConfig(n_case=12, n_control=12, n_codes=30, n_signal_codes=4, seed=7)
    assert r.generate_events(cfg) == r.generate_events(cfg)


def test_seed_changes_output():
    a = r.GeneratorConfig(n_case=12, n_control=12, n_codes=30, n_signal_codes=4, seed=7)
    b = r.GeneratorConfig(n_case=12, n_control=12, n_codes=30, n_signal_codes=4, seed=8)
    assert r.generate_events(a) != r.generate_events(b)


def test_patient_counts_and_rules():
    cfg = r.GeneratorConfig(n_case=5, n_control=5, n_codes=20, n_signal_codes=4, seed=3)
    table = r.generate_events(cfg)
    assert len(table.patient_ids()) == 10
    labeled = r.label_timelines(r.build_timelines(table))
    labels = [p.label for p in labeled]
    assert labels.count(r.CASE) == 5
    assert labels.count(r.CONTROL) == 5


def test_case_and_control_failure_structure():
    cfg = r.GeneratorConfig(n_case=8, n_control=8, n_codes=20, n_signal_codes=4, seed=1)
    table = r.generate_events(cfg)
    for timeline in r.build_timelines(table):
        days = [e.day for e in timeline.events if e.event_kind == "AED_FAILURE"]
        if timeline.patient_id.startswith("case"):
            assert sum(1 for d in days if d > min(days)) >= 4
        else:
            assert len(days) == 1


def test_index_day_in_middle_third():
    cfg = r.GeneratorConfig(n_case=20, n_control=20, n_codes=20, n_signal_codes=4, seed=5)
    table = r.generate_events(cfg)
    for patient in r.label_timelines(r.build_timelines(table)):
        assert synth.TIMELINE_DAYS // 3 <= patient.index_day < 2 * synth.TIMELINE_DAYS // 3


def test_all_days_inside_timeline():
    cfg = r.GeneratorConfig(n_case=10, n_control=10, n_codes=25, n_signal_codes=4, seed=9)
    for rec in r.generate_events(cfg):
        assert 0 <= rec.day < synth.TIMELINE_DAYS


def test_signal_events_land_before_index():
    cfg = r.GeneratorConfig(n_case=10, n_control=10, n_codes=25, n_signal_codes=6, seed=2)
    table = r.generate_events(cfg)
    signal = set(cfg.signal_codes())
    for timeline in r.build_timelines(table):
        index_day = min(e.day for e in timeline.events if e.event_kind == "AED_FAILURE")
        for e in timeline.events:
            if e.code in signal and e.event_kind == "DIAGNOSIS":
                assert e.day < index_day


def test_code_helpers():
    cfg = r.GeneratorConfig(n_case=2, n_control=2, n_codes=10, n_signal_codes=3, seed=0)
    names = cfg.code_names()
    assert len(names) == 10
    assert names[0] == "C0000"
    assert cfg.signal_codes() == names[:3]
    assert cfg.background_codes() == names[3:]
    scales = synth.code_scales(4)
    assert scales[0] == 1.0
    assert np.all(np.diff(scales) < 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_case=0),
        dict(n_control=0),
        dict(n_signal_codes=1),
        dict(n_signal_codes=600),
        dict(shell_radii=(0.0, 5.0)),
        dict(shell_radii=(2.0, 2.0)),
        dict(noise_scale=-0.1),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        r.GeneratorConfig(**kwargs)


def test_class_means_stay_close():
    # The planted signal must be invisible to per-code marginals: class mean
    # count gaps stay under the generator's declared bound on default-size
    # data for the pinned seeds.
    for seed in range(3):
        cfg = r.GeneratorConfig(seed=seed)
        table = r.generate_events(cfg)
        timelines = r.build_timelines(table)
        sampled = r.sample_cohort(r.label_timelines(timelines), 200, seed)
        by_id = {t.patient_id: t for t in timelines}
        window = [r.pre_index_events(by_id[p.patient_id], p.index_day) for p in sampled.patients]
        matrix = r.featurize(sampled, by_id, r.build_vocabulary(window))
        y = np.array([1 if lab == r.CASE else 0 for lab in matrix.labels])
        gaps = np.abs(matrix.values[y == 1].mean(axis=0) - matrix.values[y == 0].mean(axis=0))
        assert gaps.max() <= synth.MEAN_GAP_THRESHOLD


def test_signal_pairs_agree_more_for_cases(tiny_dataset):
    # Pair agreement is the carried signal; check the generated counts show
    # it once per-code states are recovered by thresholding between shells.
    cfg, table, sampled, matrix, y = tiny_dataset
    names = matrix.vocabulary.column_names()
    scales = synth.code_scales(cfg.n_signal_codes)
    lo, hi = cfg.shell_radii
    cuts = (lo + hi) / 2.0 * scales
    cols = []
    for j, code in enumerate(cfg.signal_codes()):
        cols.append(names.index(f"DIAGNOSIS:{code}"))
    states = matrix.values[:, cols] > cuts[None, :]
    agree = (states[:, 0::2] == states[:, 1::2]).mean(axis=1)
    assert agree[y == 1].mean() > 0.7
    assert agree[y == 0].mean() < 0.3
