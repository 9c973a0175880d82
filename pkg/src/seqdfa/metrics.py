"""Evaluation metrics for prefix-wise sequence classification.

A prediction table holds, for each test trace, the (class, confidence)
pair produced after each of its observations.  CCA fixes the
observation count, PCA fixes the observed fraction of each trace, and
the early-utility score lets the classifier pick its decision time to
maximize expected utility under a linearly decaying utility function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DataError

# PrefixPredictions: list over traces of [(class_id, confidence), ...]
# with one entry per observation of that trace.


@dataclass(frozen=True)
class UtilityFunction:
    """U(t) = max(1 - t/horizon, 0): full utility at t=0, none at the horizon."""

    horizon: int = 40

    def __call__(self, t: int) -> float:
        return max(1.0 - t / self.horizon, 0.0)


def _check_table(preds, labels):
    if not preds:
        raise DataError("empty test set")
    if len(preds) != len(labels):
        raise DataError("predictions and labels differ in length")
    for row in preds:
        if not row:
            raise DataError("every trace needs at least one prefix prediction")
        if any(not (0.0 <= conf <= 1.0) for _, conf in row):
            raise DataError("confidences must lie in [0, 1]")


def cca(preds, labels, t: int) -> float:
    """Percent of traces correct after min(t, trace length) observations."""
    if t < 1:
        raise DataError("t must be at least 1")
    _check_table(preds, labels)
    correct = 0
    for row, label in zip(preds, labels):
        idx = min(t, len(row)) - 1
        correct += row[idx][0] == label
    return 100.0 * correct / len(preds)


def pca(preds, labels, x: float) -> float:
    """Percent of traces correct after the first x percent of observations."""
    if not (0 < x <= 100):
        raise DataError("x must be in (0, 100]")
    _check_table(preds, labels)
    correct = 0
    for row, label in zip(preds, labels):
        idx = max(1, math.ceil(x / 100.0 * len(row))) - 1
        correct += row[idx][0] == label
    return 100.0 * correct / len(preds)


def early_utility(preds, labels, utility: UtilityFunction = UtilityFunction()) -> float:
    """Mean utility earned when each trace picks t* = argmax U(t)*conf(t).

    Ties go to the earliest t; a wrong prediction at t* earns nothing.
    """
    _check_table(preds, labels)
    total = 0.0
    for row, label in zip(preds, labels):
        best_t = 1
        best_value = utility(1) * row[0][1]
        for t in range(2, len(row) + 1):
            value = utility(t) * row[t - 1][1]
            if value > best_value:
                best_t, best_value = t, value
        if row[best_t - 1][0] == label:
            total += utility(best_t)
    return total / len(preds)


def multilabel_predict(dfas: dict, trace) -> set:
    """All classes whose DFA accepts the trace; no posterior layer."""
    return {c for c, model in dfas.items() if model.accepts(trace)}


def multilabel_accuracy(predicted_sets, true_sets, classes):
    """Per-label accuracy plus its mean over labels."""
    if not predicted_sets:
        raise DataError("empty test set")
    if len(predicted_sets) != len(true_sets):
        raise DataError("predictions and labels differ in length")
    per_label = {}
    for c in classes:
        correct = sum(
            (c in pred) == (c in true)
            for pred, true in zip(predicted_sets, true_sets)
        )
        per_label[c] = correct / len(predicted_sets)
    mean = sum(per_label.values()) / len(per_label) if per_label else 0.0
    return per_label, mean


def evaluation_report(preds, labels, classes, utility: UtilityFunction = UtilityFunction(),
                      pca_points=(20, 40, 60, 80, 100)) -> dict:
    """JSON-ready summary: CCA per step, PCA at fixed fractions, early utility."""
    _check_table(preds, labels)
    max_len = max(len(row) for row in preds)
    report = {
        "cca": {str(t): cca(preds, labels, t) for t in range(1, max_len + 1)},
        "pca": {str(x): pca(preds, labels, x) for x in pca_points},
        "early_utility": early_utility(preds, labels, utility),
        "per_class": {},
    }
    for c, name in enumerate(classes):
        indices = [i for i, label in enumerate(labels) if label == c]
        if not indices:
            continue
        sub_preds = [preds[i] for i in indices]
        sub_labels = [labels[i] for i in indices]
        report["per_class"][name] = {
            "count": len(indices),
            "full_trace_accuracy": pca(sub_preds, sub_labels, 100),
        }
    return report
