import random

import pytest

from seqdfa.dfa import DfaModel, universal_dfa
from seqdfa.errors import DataError
from seqdfa.metrics import (
    UtilityFunction,
    cca,
    early_utility,
    evaluation_report,
    multilabel_accuracy,
    multilabel_predict,
    pca,
)
from seqdfa.traces import Alphabet


def test_cca_all_correct():
    preds = [[(0, 1.0)] * 3, [(0, 1.0)] * 5]
    labels = [0, 0]
    for t in (1, 2, 3, 7):
        assert cca(preds, labels, t) == 100.0


def test_cca_collapses_to_full_trace_accuracy():
    preds = [[(1, 0.6), (0, 0.9), (0, 0.9)], [(1, 0.5), (1, 0.5)]]
    labels = [0, 0]
    assert cca(preds, labels, 3) == pytest.approx(50.0)
    assert cca(preds, labels, 10) == pytest.approx(pca(preds, labels, 100))


def test_cca_hand_example():
    # trace 1 correct only at its final step (length 3); trace 2 always correct
    preds = [[(1, 0.5), (1, 0.5), (0, 0.9)], [(0, 0.9), (0, 0.9), (0, 0.9)]]
    labels = [0, 0]
    assert cca(preds, labels, 1) == pytest.approx(50.0)
    assert cca(preds, labels, 3) == pytest.approx(100.0)


def test_cca_validation():
    with pytest.raises(DataError):
        cca([], [], 1)
    with pytest.raises(DataError):
        cca([[(0, 1.0)]], [0], 0)


def test_pca_observation_counts():
    # 10-observation trace at x=20 uses 2 observations
    preds = [[(1, 0.5), (0, 0.9)] + [(1, 0.5)] * 8]
    assert pca(preds, [0], 20) == 100.0
    # 7-observation trace at x=40 uses ceil(2.8) = 3 observations
    preds_wrong_until_3 = [[(1, 0.5), (1, 0.5), (0, 0.9)] + [(1, 0.5)] * 4]
    assert pca(preds_wrong_until_3, [0], 40) == 100.0
    assert pca(preds_wrong_until_3, [0], 20) == 0.0  # ceil(0.2*7)=2


def test_pca_uses_at_least_one_observation():
    preds = [[(0, 1.0)] * 5]
    assert pca(preds, [0], 0.001) == 100.0
    with pytest.raises(DataError):
        pca(preds, [0], 0)
    with pytest.raises(DataError):
        pca(preds, [0], 101)


def test_pca_100_is_full_trace():
    preds = [[(1, 0.5), (0, 0.5)], [(1, 0.9)]]
    labels = [0, 1]
    assert pca(preds, labels, 100) == pytest.approx(100.0)


def test_utility_function_shape():
    u = UtilityFunction()
    assert u.horizon == 40
    assert u(0) == 1.0
    assert u(40) == 0.0
    assert u(100) == 0.0
    values = [u(t) for t in range(0, 45)]
    assert values == sorted(values, reverse=True)


def test_early_utility_perfect_confidence():
    preds = [[(0, 1.0)] * 6 for _ in range(4)]
    labels = [0, 0, 0, 0]
    assert early_utility(preds, labels) == pytest.approx(1 - 1 / 40, abs=1e-12)


def test_early_utility_all_wrong_is_zero():
    preds = [[(1, 1.0)] * 4]
    assert early_utility(preds, [0]) == 0.0


def test_early_utility_beyond_horizon_earns_zero():
    # classifier only becomes correct after t=40: either t* falls before
    # the horizon where it is wrong, or U has already clamped to zero
    row = [(1, 0.5)] * 44 + [(0, 1.0)] * 6
    assert early_utility([row], [0]) == 0.0
    row_zero_conf = [(1, 0.0)] * 44 + [(0, 1.0)] * 6
    assert early_utility([row_zero_conf], [0]) == 0.0


def test_early_utility_tie_prefers_earliest():
    u = UtilityFunction(horizon=40)
    # same U(t)*conf at t=1 and t=2 would need rising conf; make them equal
    conf2 = u(1) / u(2)
    row = [(0, 1.0), (1, min(conf2, 1.0))]
    # if the tie resolved to t=2 the prediction (class 1) would be wrong
    assert early_utility([row], [0]) == pytest.approx(u(1))


def test_early_utility_invariant_to_trailing_low_scores():
    row = [(0, 0.9), (0, 0.5)]
    extended = row + [(1, 0.01)] * 5
    assert early_utility([row], [0]) == early_utility([extended], [0])


def test_metrics_permutation_invariant():
    rng = random.Random(4)
    preds = [[(rng.randint(0, 1), rng.random()) for _ in range(rng.randint(1, 6))]
             for _ in range(10)]
    labels = [rng.randint(0, 1) for _ in range(10)]
    order = list(range(10))
    rng.shuffle(order)
    shuffled_preds = [preds[i] for i in order]
    shuffled_labels = [labels[i] for i in order]
    assert cca(preds, labels, 2) == cca(shuffled_preds, shuffled_labels, 2)
    assert pca(preds, labels, 50) == pca(shuffled_preds, shuffled_labels, 50)
    assert early_utility(preds, labels) == pytest.approx(
        early_utility(shuffled_preds, shuffled_labels))


def _symbol_detector(alpha, symbol):
    sid = alpha.index[symbol]
    n = len(alpha)
    return DfaModel(2, 0, frozenset({1}), frozenset({1}),
                    (tuple(1 if s == sid else 0 for s in range(n)), (1,) * n), alpha)


def test_multilabel_predict_sets():
    alpha = Alphabet.build(["a", "b", "c"])
    dfas = {"A": _symbol_detector(alpha, "a"), "B": _symbol_detector(alpha, "b")}
    assert multilabel_predict(dfas, alpha.encode(["c"])) == set()
    assert multilabel_predict(dfas, alpha.encode(["a", "b"])) == {"A", "B"}
    assert multilabel_predict(dfas, alpha.encode(["b", "c"])) == {"B"}


def test_multilabel_accuracy_matches_independent_recount():
    alpha = Alphabet.build(["a", "b", "c"])
    dfas = {"A": _symbol_detector(alpha, "a"), "B": _symbol_detector(alpha, "b")}
    traces = [["a", "b"], ["a"], ["c"], ["b", "b"], ["c", "a"]]
    truths = [{"A", "B"}, {"A"}, {"B"}, {"B"}, {"A"}]
    predicted = [multilabel_predict(dfas, alpha.encode(t)) for t in traces]
    per_label, mean = multilabel_accuracy(predicted, truths, ["A", "B"])

    # independent recount from the raw confusion entries
    for label in ("A", "B"):
        hits = 0
        for t, truth in zip(traces, truths):
            present = label.lower() in t
            hits += present == (label in truth)
        assert per_label[label] == pytest.approx(hits / len(traces))
    assert mean == pytest.approx(sum(per_label.values()) / 2)


def test_evaluation_report_structure():
    preds = [[(0, 0.8), (0, 0.9)], [(1, 0.7)]]
    labels = [0, 1]
    report = evaluation_report(preds, labels, ["A", "B"])
    assert set(report) == {"cca", "pca", "early_utility", "per_class"}
    assert set(report["pca"]) == {"20", "40", "60", "80", "100"}
    assert report["cca"]["2"] == 100.0
    assert report["per_class"]["A"]["count"] == 1


def test_universal_dfa_multilabel():
    alpha = Alphabet.build(["a"])
    dfas = {"X": universal_dfa(alpha)}
    assert multilabel_predict(dfas, (0,)) == {"X"}
