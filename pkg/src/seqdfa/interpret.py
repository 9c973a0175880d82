"""Interpretability services over DFA classifiers.

* minimal unit-cost edit scripts from a trace into the accepted
  language (dynamic program over trace position x DFA state),
* counterfactual explanations and their natural-language narration,
* property verification by product/complement/emptiness with a
  shortest witness on violation,
* classifier modification by language intersection, checked back
  against the training data.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .dfa import DfaModel, complement, find_accepted_witness, product
from .errors import DataError, InternalError
from .traces import Alphabet, LabeledDataset, Trace

REPLACE = "replace"
INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class EditOp:
    """One unit-cost edit, positioned relative to the input trace.

    ``position`` indexes the source trace for replace/delete.  For
    insert it is the source index the new symbol is placed before, so
    the inserted symbol follows source[position-1] (position 0 inserts
    at the start).
    """

    kind: str
    position: int
    old_symbol: int | None = None
    new_symbol: int | None = None

    def __post_init__(self):
        shapes = {REPLACE: (True, True), INSERT: (False, True), DELETE: (True, False)}
        if self.kind not in shapes:
            raise DataError(f"unknown edit kind: {self.kind!r}")
        needs_old, needs_new = shapes[self.kind]
        if (self.old_symbol is not None) != needs_old or (self.new_symbol is not None) != needs_new:
            raise DataError(f"malformed {self.kind} op")


@dataclass(frozen=True)
class CounterfactualExplanation:
    source_trace: Trace
    target_trace: Trace
    ops: tuple
    distance: int


def apply_edits(source: Trace, ops) -> Trace:
    """Apply an ordered edit script to a trace."""
    result = []
    i = 0
    for op in ops:
        while i < op.position:
            result.append(source[i])
            i += 1
        if op.kind == REPLACE:
            if i >= len(source) or source[i] != op.old_symbol:
                raise DataError(f"replace op does not match source at {op.position}")
            result.append(op.new_symbol)
            i += 1
        elif op.kind == DELETE:
            if i >= len(source) or source[i] != op.old_symbol:
                raise DataError(f"delete op does not match source at {op.position}")
            i += 1
        else:
            result.append(op.new_symbol)
    result.extend(source[i:])
    return tuple(result)


def _accept_distances(m: DfaModel):
    """Per state, edge count of the shortest path into an accepting state."""
    reverse = [[] for _ in range(m.n_states)]
    for q in range(m.n_states):
        for target in m.delta[q]:
            reverse[target].append(q)
    dist = [math.inf] * m.n_states
    queue = deque()
    for q in m.accepting:
        dist[q] = 0
        queue.append(q)
    while queue:
        q = queue.popleft()
        for prev in reverse[q]:
            if dist[prev] == math.inf:
                dist[prev] = dist[q] + 1
                queue.append(prev)
    return dist


def edit_distance_to_language(m: DfaModel, trace: Trace):
    """Minimal edits from the trace to an accepted trace.

    Returns (distance, target trace, edit ops).  Cost-to-go table:
    G[i][q] is the cheapest way to edit the suffix trace[i:] so that the
    DFA, currently in state q, ends accepting.  The canonical script is
    reconstructed greedily from the front, preferring match, then
    replace, delete, insert, with the smallest symbol id breaking ties.
    """
    n_symbols = len(m.alphabet)
    for symbol in trace:
        if not (0 <= symbol < n_symbols):
            raise DataError(f"trace symbol {symbol} outside the model alphabet")
    n = len(trace)
    states = range(m.n_states)

    g_final = _accept_distances(m)
    layers = [None] * (n + 1)
    layers[n] = list(g_final)
    for i in range(n - 1, -1, -1):
        nxt = layers[i + 1]
        layer = []
        for q in states:
            best = nxt[m.delta[q][trace[i]]]  # match
            for sigma in range(n_symbols):
                if sigma != trace[i]:
                    best = min(best, 1 + nxt[m.delta[q][sigma]])  # replace
            best = min(best, 1 + nxt[q])  # delete
            layer.append(best)
        _relax_inserts(m, layer)
        layers[i] = layer

    distance = layers[0][m.initial]
    if distance == math.inf:
        raise DataError("the classifier accepts no trace; no edit target exists")

    ops = []
    target = []
    i, q = 0, m.initial
    steps = 0
    limit = 2 * (n + m.n_states + int(distance)) + 4
    while i < n or q not in m.accepting:
        steps += 1
        if steps > limit:
            raise InternalError("edit script reconstruction did not terminate")
        here = layers[i][q]
        if i < n:
            nxt = layers[i + 1]
            symbol = trace[i]
            if nxt[m.delta[q][symbol]] == here:
                target.append(symbol)
                q = m.delta[q][symbol]
                i += 1
                continue
            replaced = False
            for sigma in range(n_symbols):
                if sigma != symbol and 1 + nxt[m.delta[q][sigma]] == here:
                    ops.append(EditOp(REPLACE, i, old_symbol=symbol, new_symbol=sigma))
                    target.append(sigma)
                    q = m.delta[q][sigma]
                    i += 1
                    replaced = True
                    break
            if replaced:
                continue
            if 1 + nxt[q] == here:
                ops.append(EditOp(DELETE, i, old_symbol=symbol))
                i += 1
                continue
        inserted = False
        for sigma in range(n_symbols):
            if 1 + layers[i][m.delta[q][sigma]] == here:
                ops.append(EditOp(INSERT, i, new_symbol=sigma))
                target.append(sigma)
                q = m.delta[q][sigma]
                inserted = True
                break
        if not inserted:
            raise InternalError("edit table inconsistent during reconstruction")

    return int(distance), tuple(target), tuple(ops)


def _relax_inserts(m: DfaModel, layer):
    """Close a DP layer under single-symbol insertions (unit cost each)."""
    changed = True
    while changed:
        changed = False
        for q in range(m.n_states):
            for target in m.delta[q]:
                if 1 + layer[target] < layer[q]:
                    layer[q] = 1 + layer[target]
                    changed = True


def counterfactual_explain(m: DfaModel, trace: Trace) -> CounterfactualExplanation:
    if m.accepts(trace):
        raise DataError("trace is already accepted; nothing to explain")
    distance, target, ops = edit_distance_to_language(m, trace)
    explanation = CounterfactualExplanation(
        source_trace=tuple(trace), target_trace=target, ops=ops, distance=distance)
    if apply_edits(explanation.source_trace, ops) != target:
        raise InternalError("edit script does not reproduce its target")
    if not m.accepts(target):
        raise InternalError("edit target is not accepted")
    return explanation


def narrate(explanation: CounterfactualExplanation, alphabet: Alphabet) -> str:
    """English sentence describing the counterfactual edits."""
    if not explanation.ops:
        raise DataError("cannot narrate an empty edit script")
    clauses = []
    for op in explanation.ops:
        if op.kind == REPLACE:
            new = alphabet.symbols[op.new_symbol]
            old = alphabet.symbols[op.old_symbol]
            clauses.append(f"had {new} been observed instead of {old}")
        elif op.kind == DELETE:
            old = alphabet.symbols[op.old_symbol]
            clauses.append(f"had {old} been removed from the trace")
        else:
            new = alphabet.symbols[op.new_symbol]
            if op.position == 0:
                clauses.append(f"had {new} been observed at the start of the trace")
            else:
                anchor = alphabet.symbols[explanation.source_trace[op.position - 1]]
                clauses.append(f"had {new} been observed following the observation of {anchor}")
    return "The binary classifier would have accepted the trace " + " and ".join(clauses)


def out_of_vocabulary_ops(explanation: CounterfactualExplanation,
                          alphabet: Alphabet, vocabulary) -> tuple:
    """Indices of ops touching symbols outside an explanation vocabulary.

    Such ops are still reported in full; this flags them so a caller can
    mark them as outside the vocabulary of interest.
    """
    vocab_ids = {alphabet.index[s] for s in vocabulary if s in alphabet.index}
    flagged = []
    for idx, op in enumerate(explanation.ops):
        touched = {s for s in (op.old_symbol, op.new_symbol) if s is not None}
        if not touched <= vocab_ids:
            flagged.append(idx)
    return tuple(flagged)


@dataclass(frozen=True)
class VerificationResult:
    holds: bool
    witness: Trace | None = None


def verify_property(m: DfaModel, prop: DfaModel) -> VerificationResult:
    """Language containment check: every trace m accepts satisfies prop.

    Decided by emptiness of m intersected with the property's
    complement; the shortest accepted counterexample is returned as a
    witness when the property is violated.
    """
    counterexamples = product(m, complement(prop), mode="intersection")
    witness = find_accepted_witness(counterexamples)
    if witness is None:
        return VerificationResult(holds=True)
    return VerificationResult(holds=False, witness=witness)


def property_template(name: str, alphabet: Alphabet, symbols) -> DfaModel:
    """Small property automata: eventually / never / precedes.

    ``eventually s``: accepts traces containing s.
    ``never s``: accepts traces without s.
    ``precedes a1 .. ak b``: accepts traces where none of a1..ak occurs
    strictly before the first b (vacuously true when b never occurs).
    """
    ids = alphabet.encode(symbols)
    n_symbols = len(alphabet)
    if name == "eventually":
        if len(ids) != 1:
            raise DataError("eventually takes exactly one symbol")
        row0 = tuple(1 if s == ids[0] else 0 for s in range(n_symbols))
        return DfaModel(2, 0, frozenset({1}), frozenset({1}),
                        (row0, (1,) * n_symbols), alphabet)
    if name == "never":
        if len(ids) != 1:
            raise DataError("never takes exactly one symbol")
        row0 = tuple(1 if s == ids[0] else 0 for s in range(n_symbols))
        return DfaModel(2, 0, frozenset({0}), frozenset({1}),
                        (row0, (1,) * n_symbols), alphabet)
    if name == "precedes":
        if len(ids) < 2:
            raise DataError("precedes takes one or more guarded symbols then the trigger")
        guarded = set(ids[:-1])
        trigger = ids[-1]
        if trigger in guarded:
            raise DataError("the trigger symbol cannot also be guarded")
        row0 = tuple(1 if s == trigger else (2 if s in guarded else 0)
                     for s in range(n_symbols))
        return DfaModel(3, 0, frozenset({0, 1}), frozenset({1, 2}),
                        (row0, (1,) * n_symbols, (2,) * n_symbols), alphabet)
    raise DataError(f"unknown property template: {name!r}")


def modify_classifier(m: DfaModel, criterion: DfaModel) -> DfaModel:
    """Enforce an extra acceptance criterion via the intersection product."""
    return product(m, criterion, mode="intersection")


@dataclass(frozen=True)
class ConsistencyReport:
    target: str
    total_positive: int
    rejected_trace_ids: tuple

    @property
    def rejected_count(self) -> int:
        return len(self.rejected_trace_ids)


def check_dataset_consistency(modified: DfaModel, dataset: LabeledDataset,
                              target: int) -> ConsistencyReport:
    """List positive training traces the modified classifier now rejects."""
    if not (0 <= target < len(dataset.classes)):
        raise DataError(f"invalid target class id: {target}")
    rejected = []
    total = 0
    for idx, (trace, label) in enumerate(dataset.items):
        if label != target:
            continue
        total += 1
        if not modified.accepts(trace):
            rejected.append(idx)
    return ConsistencyReport(
        target=dataset.classes[target],
        total_positive=total,
        rejected_trace_ids=tuple(rejected),
    )
