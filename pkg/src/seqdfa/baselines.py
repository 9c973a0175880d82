"""Reference classifiers: full-tree DFA (DFA-FT) and n-gram models.

DFA-FT memorizes the full observation tree.  Per class, tree regions
whose traces are uniformly positive (respectively negative) collapse
into a positive (negative) absorbing state; every other node carries
the empirical probability that a trace through it is positive.  A trace
that steps off the tree holds its last node's probability.

The n-gram models score a trace as prior(c) times the product of
add-alpha smoothed conditional symbol probabilities, with the context
being the previous n-1 observations (a synthetic start token at t=1
for bigrams).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import DataError, SchemaError, UnknownSymbolError
from .traces import Alphabet, LabeledDataset, Trace

START = -1  # synthetic bigram context before the first observation


@dataclass(frozen=True)
class DfaFtModel:
    classes: tuple
    alphabet: Alphabet
    children: tuple  # node id -> dict symbol -> node id (node 0 is the root)
    totals: tuple  # node id -> traces through node
    class_counts: tuple  # node id -> tuple of per-class trace counts

    def probability(self, node: int, target: int) -> float:
        return self.class_counts[node][target] / self.totals[node]

    def is_pure_positive(self, node: int, target: int) -> bool:
        return self.class_counts[node][target] == self.totals[node]

    def is_pure_negative(self, node: int, target: int) -> bool:
        return self.class_counts[node][target] == 0

    def class_state_count(self, target: int) -> int:
        """States of the per-class automaton: impure nodes plus the two sinks."""
        impure = sum(
            1 for node in range(len(self.totals))
            if not self.is_pure_positive(node, target) and not self.is_pure_negative(node, target)
        )
        return impure + 2


def dfa_ft_train(dataset: LabeledDataset) -> DfaFtModel:
    if not len(dataset):
        raise DataError("cannot train on an empty dataset")
    k = len(dataset.classes)
    children = [{}]
    totals = [0]
    counts = [[0] * k]
    for trace, label in dataset.items:
        node = 0
        totals[0] += 1
        counts[0][label] += 1
        for symbol in trace:
            child = children[node].get(symbol)
            if child is None:
                child = len(children)
                children[node][symbol] = child
                children.append({})
                totals.append(0)
                counts.append([0] * k)
            node = child
            totals[node] += 1
            counts[node][label] += 1
    return DfaFtModel(
        classes=dataset.classes,
        alphabet=dataset.alphabet,
        children=tuple(children),
        totals=tuple(totals),
        class_counts=tuple(tuple(c) for c in counts),
    )


def _dfa_ft_class_prob(model: DfaFtModel, target: int, trace: Trace) -> float:
    node = 0
    prob = model.probability(0, target)
    on_tree = True
    for symbol in trace:
        if not (0 <= symbol < len(model.alphabet)):
            raise UnknownSymbolError(symbol)
        if not on_tree:
            continue  # off the tree: the last node's probability is held
        if model.is_pure_positive(node, target) or model.is_pure_negative(node, target):
            continue  # absorbed: decision frozen
        child = model.children[node].get(symbol)
        if child is None:
            on_tree = False
            continue
        node = child
        prob = model.probability(node, target)
    return prob


def dfa_ft_predict(model: DfaFtModel, trace: Trace):
    """All class automata run in parallel; argmax probability wins."""
    best = 0
    best_prob = _dfa_ft_class_prob(model, 0, trace)
    for c in range(1, len(model.classes)):
        p = _dfa_ft_class_prob(model, c, trace)
        if p > best_prob:
            best, best_prob = c, p
    return model.classes[best], best_prob


def dfa_ft_predict_prefixes(model: DfaFtModel, trace: Trace) -> list:
    return [dfa_ft_predict(model, trace[:t]) for t in range(1, len(trace) + 1)]


@dataclass(frozen=True)
class NgramModel:
    n: int
    alpha: float
    classes: tuple
    alphabet: Alphabet
    prior: tuple
    counts: tuple  # per class: dict context -> list of per-symbol counts
    context_totals: tuple  # per class: dict context -> total count

    def conditional(self, target: int, context, symbol: int) -> float:
        n_symbols = len(self.alphabet)
        table = self.counts[target].get(context)
        seen = table[symbol] if table else 0
        total = self.context_totals[target].get(context, 0)
        return (seen + self.alpha) / (total + self.alpha * n_symbols)


def _context(n: int, trace: Trace, t: int):
    if n == 1:
        return ()
    return (trace[t - 1],) if t > 0 else (START,)


def ngram_train(dataset: LabeledDataset, n: int, alpha: float = 0.5) -> NgramModel:
    if n not in (1, 2):
        raise DataError(f"n must be 1 or 2, got {n}")
    if alpha <= 0:
        raise DataError("alpha must be positive")
    if not len(dataset):
        raise DataError("cannot train on an empty dataset")
    k = len(dataset.classes)
    n_symbols = len(dataset.alphabet)
    counts = [dict() for _ in range(k)]
    totals = [dict() for _ in range(k)]
    class_totals = [0] * k
    for trace, label in dataset.items:
        class_totals[label] += 1
        for t, symbol in enumerate(trace):
            ctx = _context(n, trace, t)
            table = counts[label].setdefault(ctx, [0] * n_symbols)
            table[symbol] += 1
            totals[label][ctx] = totals[label].get(ctx, 0) + 1
    total = sum(class_totals)
    return NgramModel(
        n=n,
        alpha=alpha,
        classes=dataset.classes,
        alphabet=dataset.alphabet,
        prior=tuple(c / total for c in class_totals),
        counts=tuple(counts),
        context_totals=tuple(totals),
    )


def _ngram_log_scores(model: NgramModel, trace: Trace) -> list:
    n_symbols = len(model.alphabet)
    scores = [math.log(p) if p > 0 else -math.inf for p in model.prior]
    for t, symbol in enumerate(trace):
        if not (0 <= symbol < n_symbols):
            raise UnknownSymbolError(symbol)
        ctx = _context(model.n, trace, t)
        for c in range(len(model.classes)):
            scores[c] += math.log(model.conditional(c, ctx, symbol))
    return scores


def _normalize_log(scores):
    top = max(scores)
    if top == -math.inf:
        return [1.0 / len(scores)] * len(scores)
    expd = [math.exp(s - top) for s in scores]
    total = sum(expd)
    return [e / total for e in expd]


def ngram_predict(model: NgramModel, trace: Trace):
    """Argmax class with normalized confidence; ties go to class order."""
    probs = _normalize_log(_ngram_log_scores(model, trace))
    best = 0
    for c in range(1, len(probs)):
        if probs[c] > probs[best]:
            best = c
    return model.classes[best], probs[best]


def ngram_predict_prefixes(model: NgramModel, trace: Trace) -> list:
    """Per-prefix predictions with incremental score updates."""
    n_symbols = len(model.alphabet)
    scores = [math.log(p) if p > 0 else -math.inf for p in model.prior]
    out = []
    for t, symbol in enumerate(trace):
        if not (0 <= symbol < n_symbols):
            raise UnknownSymbolError(symbol)
        ctx = _context(model.n, trace, t)
        for c in range(len(model.classes)):
            scores[c] += math.log(model.conditional(c, ctx, symbol))
        probs = _normalize_log(scores)
        best = 0
        for c in range(1, len(probs)):
            if probs[c] > probs[best]:
                best = c
        out.append((model.classes[best], probs[best]))
    return out


def dfa_ft_to_json(model: DfaFtModel) -> str:
    payload = {
        "model_type": "dfa-ft",
        "classes": list(model.classes),
        "alphabet": list(model.alphabet.symbols),
        "children": [{str(s): c for s, c in kids.items()} for kids in model.children],
        "totals": list(model.totals),
        "class_counts": [list(row) for row in model.class_counts],
    }
    return json.dumps(payload, sort_keys=True)


def dfa_ft_from_json(text) -> DfaFtModel:
    payload = _load_payload(text, "dfa-ft")
    try:
        return DfaFtModel(
            classes=tuple(payload["classes"]),
            alphabet=Alphabet.build(payload["alphabet"]),
            children=tuple({int(s): int(c) for s, c in kids.items()} for kids in payload["children"]),
            totals=tuple(int(t) for t in payload["totals"]),
            class_counts=tuple(tuple(int(x) for x in row) for row in payload["class_counts"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"invalid dfa-ft JSON: {exc}") from None


def ngram_to_json(model: NgramModel) -> str:
    def ctx_key(ctx):
        return ",".join(str(s) for s in ctx)

    payload = {
        "model_type": f"ngram{model.n}",
        "n": model.n,
        "alpha": model.alpha,
        "classes": list(model.classes),
        "alphabet": list(model.alphabet.symbols),
        "prior": list(model.prior),
        "counts": [{ctx_key(ctx): table for ctx, table in per_class.items()}
                   for per_class in model.counts],
    }
    return json.dumps(payload, sort_keys=True)


def ngram_from_json(text) -> NgramModel:
    payload = _load_payload(text, "ngram")

    def parse_ctx(key):
        return () if key == "" else tuple(int(s) for s in key.split(","))

    try:
        counts = tuple(
            {parse_ctx(key): list(table) for key, table in per_class.items()}
            for per_class in payload["counts"]
        )
        totals = tuple(
            {ctx: sum(table) for ctx, table in per_class.items()}
            for per_class in counts
        )
        return NgramModel(
            n=int(payload["n"]),
            alpha=float(payload["alpha"]),
            classes=tuple(payload["classes"]),
            alphabet=Alphabet.build(payload["alphabet"]),
            prior=tuple(float(p) for p in payload["prior"]),
            counts=counts,
            context_totals=totals,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"invalid ngram JSON: {exc}") from None


def _load_payload(text, expected_prefix):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid model JSON: {exc.msg}") from None
    if not isinstance(payload, dict) or not str(payload.get("model_type", "")).startswith(expected_prefix):
        raise SchemaError(f"expected a {expected_prefix} model file")
    return payload
