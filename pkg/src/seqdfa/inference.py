"""Posterior inference over class labels from per-class DFA decisions.

Each class's DFA independently accepts or rejects a trace.  Treating
those decisions as conditionally independent given the true label, and
their distributions as depending only on whether the decided class is
the true one, the posterior for class c reduces to

    score(c) = prior(c) * p(D_c | true = c) / p(D_c | true != c)

normalized over classes.  The accept probabilities are estimated on a
held-out validation set with additive smoothing so likelihood ratios
are always finite and never exactly 0 or 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .dfa import DfaModel, from_json_dict, to_json
from .errors import DataError, SchemaError
from .traces import LabeledDataset, Trace


@dataclass(frozen=True)
class ClassifierEnsemble:
    classes: tuple  # class names
    dfas: tuple  # DfaModel per class, aligned with classes
    prior: tuple  # prior probability per class
    lik_match: tuple  # p(accept | true class is this one)
    lik_mismatch: tuple  # p(accept | true class is another)
    fallback_classes: tuple = ()  # classes absent from the validation set

    def __post_init__(self):
        k = len(self.classes)
        if not (len(self.dfas) == len(self.prior) == len(self.lik_match) == len(self.lik_mismatch) == k):
            raise DataError("ensemble fields must have one entry per class")
        if abs(sum(self.prior) - 1.0) > 1e-9:
            raise DataError("prior must sum to 1")
        for p in self.lik_match + self.lik_mismatch:
            if not (0.0 < p < 1.0):
                raise DataError("smoothed likelihoods must lie strictly inside (0, 1)")

    @property
    def alphabet(self):
        return self.dfas[0].alphabet


@dataclass(frozen=True)
class Posterior:
    probabilities: tuple  # per class, sums to 1
    decisions: tuple  # per class, True for accept

    def as_dict(self, classes) -> dict:
        return {c: p for c, p in zip(classes, self.probabilities)}


def estimate_likelihoods(classes, dfas, training: LabeledDataset,
                         validation: LabeledDataset, smoothing: float = 0.5,
                         uniform_prior: bool = False) -> ClassifierEnsemble:
    """Estimate accept probabilities on full validation traces.

    lik_match(c) is the smoothed rate at which the class-c DFA accepts
    validation traces of class c; lik_mismatch(c) the rate over all
    other validation traces.  A class with no validation traces falls
    back to the uninformative 0.5/0.5 pair (its decision then leaves
    the posterior at the prior) and is reported in fallback_classes.
    """
    if smoothing <= 0:
        raise DataError("smoothing pseudocount must be positive")
    if not len(validation):
        raise DataError("validation set is empty")
    k = len(classes)

    counts = training.class_counts()
    total = sum(counts)
    if uniform_prior:
        prior = tuple(1.0 / k for _ in range(k))
    else:
        prior = tuple((counts[c] + smoothing) / (total + smoothing * k) for c in range(k))

    lik_match = []
    lik_mismatch = []
    fallback = []
    for c in range(k):
        model = dfas[c]
        match_accepts = match_total = 0
        mismatch_accepts = mismatch_total = 0
        for trace, label in validation.items:
            accepted = model.accepts(trace)
            if label == c:
                match_total += 1
                match_accepts += accepted
            else:
                mismatch_total += 1
                mismatch_accepts += accepted
        if match_total == 0:
            fallback.append(classes[c])
            lik_match.append(0.5)
            lik_mismatch.append(0.5)
        else:
            lik_match.append((match_accepts + smoothing) / (match_total + 2 * smoothing))
            lik_mismatch.append((mismatch_accepts + smoothing) / (mismatch_total + 2 * smoothing))

    return ClassifierEnsemble(
        classes=tuple(classes),
        dfas=tuple(dfas),
        prior=prior,
        lik_match=tuple(lik_match),
        lik_mismatch=tuple(lik_mismatch),
        fallback_classes=tuple(fallback),
    )


def posterior_from_decisions(ensemble: ClassifierEnsemble, decisions) -> Posterior:
    """Normalized posterior given each class DFA's accept/reject decision."""
    scores = []
    for c in range(len(ensemble.classes)):
        if decisions[c]:
            ratio = ensemble.lik_match[c] / ensemble.lik_mismatch[c]
        else:
            ratio = (1.0 - ensemble.lik_match[c]) / (1.0 - ensemble.lik_mismatch[c])
        scores.append(ensemble.prior[c] * ratio)
    total = sum(scores)
    return Posterior(
        probabilities=tuple(s / total for s in scores),
        decisions=tuple(bool(d) for d in decisions),
    )


def posterior(ensemble: ClassifierEnsemble, trace: Trace) -> Posterior:
    decisions = tuple(model.accepts(trace) for model in ensemble.dfas)
    return posterior_from_decisions(ensemble, decisions)


def predict(ensemble: ClassifierEnsemble, trace: Trace):
    """Most probable class and its posterior probability (ties by class order)."""
    post = posterior(ensemble, trace)
    best = 0
    for c in range(1, len(post.probabilities)):
        if post.probabilities[c] > post.probabilities[best]:
            best = c
    return ensemble.classes[best], post.probabilities[best]


def predict_prefixes(ensemble: ClassifierEnsemble, trace: Trace) -> list:
    """Posterior after each observation, maintaining DFA states incrementally."""
    states = [model.initial for model in ensemble.dfas]
    posteriors = []
    for symbol in trace:
        decisions = []
        for c, model in enumerate(ensemble.dfas):
            states[c] = model.step(states[c], symbol)
            decisions.append(states[c] in model.accepting)
        posteriors.append(posterior_from_decisions(ensemble, tuple(decisions)))
    return posteriors


def ensemble_to_json(ensemble: ClassifierEnsemble, metadata=None) -> str:
    payload = {
        "model_type": "ensemble",
        "classes": list(ensemble.classes),
        "dfas": {c: json.loads(to_json(m)) for c, m in zip(ensemble.classes, ensemble.dfas)},
        "prior": {c: p for c, p in zip(ensemble.classes, ensemble.prior)},
        "lik_match": {c: p for c, p in zip(ensemble.classes, ensemble.lik_match)},
        "lik_mismatch": {c: p for c, p in zip(ensemble.classes, ensemble.lik_mismatch)},
        "fallback_classes": list(ensemble.fallback_classes),
        "metadata": metadata or {},
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def ensemble_from_json(text) -> ClassifierEnsemble:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid ensemble JSON: {exc.msg}") from None
    required = {"classes", "dfas", "prior", "lik_match", "lik_mismatch"}
    if not isinstance(payload, dict) or not required.issubset(payload):
        raise SchemaError("ensemble JSON missing required fields")
    classes = tuple(payload["classes"])
    try:
        dfas = tuple(from_json_dict(payload["dfas"][c]) for c in classes)
        return ClassifierEnsemble(
            classes=classes,
            dfas=dfas,
            prior=tuple(float(payload["prior"][c]) for c in classes),
            lik_match=tuple(float(payload["lik_match"][c]) for c in classes),
            lik_mismatch=tuple(float(payload["lik_mismatch"][c]) for c in classes),
            fallback_classes=tuple(payload.get("fallback_classes", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"invalid ensemble JSON: {exc}") from None


def class_dfa(ensemble: ClassifierEnsemble, class_name: str) -> DfaModel:
    try:
        return ensemble.dfas[ensemble.classes.index(class_name)]
    except ValueError:
        raise DataError(f"unknown class: {class_name!r}") from None
