"""The DFA model and its language algebra.

A :class:`DfaModel` is total and deterministic: ``delta`` maps every
(state, symbol id) pair to a state.  Absorbing states self-transition
on every symbol, freezing the classifier's decision.  All operations
here are pure; models are immutable and freely shareable.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from . import regex as rx
from .errors import InternalError, SchemaError, UnknownSymbolError
from .traces import Alphabet, Trace


@dataclass(frozen=True)
class DfaModel:
    n_states: int
    initial: int
    accepting: frozenset
    absorbing: frozenset
    delta: tuple  # row-major: delta[state][symbol id] -> state
    alphabet: Alphabet

    def __post_init__(self):
        if self.n_states < 1:
            raise SchemaError("a DFA needs at least one state")
        if not (0 <= self.initial < self.n_states):
            raise SchemaError("initial state out of range")
        if not all(0 <= q < self.n_states for q in self.accepting | self.absorbing):
            raise SchemaError("accepting/absorbing state out of range")
        if len(self.delta) != self.n_states:
            raise SchemaError("delta must have one row per state")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise SchemaError("delta rows must cover the whole alphabet")
            if not all(0 <= t < self.n_states for t in row):
                raise SchemaError("delta target out of range")
            if q in self.absorbing and any(t != q for t in row):
                raise SchemaError(f"absorbing state {q} must self-transition on every symbol")

    def run(self, trace: Trace) -> tuple:
        """State sequence visited on the trace, starting with the initial state."""
        n_symbols = len(self.alphabet)
        states = [self.initial]
        current = self.initial
        for symbol in trace:
            if not (0 <= symbol < n_symbols):
                raise UnknownSymbolError(symbol)
            current = self.delta[current][symbol]
            states.append(current)
        return tuple(states)

    def accepts(self, trace: Trace) -> bool:
        return self.run(trace)[-1] in self.accepting

    def step(self, state: int, symbol: int) -> int:
        if not (0 <= symbol < len(self.alphabet)):
            raise UnknownSymbolError(symbol)
        return self.delta[state][symbol]

    def nonself_transition_count(self) -> int:
        return sum(1 for q, row in enumerate(self.delta) for t in row if t != q)


def universal_dfa(alphabet: Alphabet) -> DfaModel:
    """One accepting absorbing state: the language of all traces."""
    return DfaModel(
        n_states=1,
        initial=0,
        accepting=frozenset({0}),
        absorbing=frozenset({0}),
        delta=((0,) * len(alphabet),),
        alphabet=alphabet,
    )


def product(m1: DfaModel, m2: DfaModel, mode: str = "intersection") -> DfaModel:
    """Reachable product automaton combining acceptance per ``mode``."""
    if m1.alphabet.symbols != m2.alphabet.symbols:
        raise SchemaError("product requires identical alphabets")
    combine = {
        "intersection": lambda a, b: a and b,
        "union": lambda a, b: a or b,
        "difference": lambda a, b: a and not b,
    }.get(mode)
    if combine is None:
        raise SchemaError(f"unknown product mode: {mode!r}")

    n_symbols = len(m1.alphabet)
    start = (m1.initial, m2.initial)
    ids = {start: 0}
    order = [start]
    rows = []
    queue = deque([start])
    while queue:
        q1, q2 = queue.popleft()
        row = []
        for symbol in range(n_symbols):
            target = (m1.delta[q1][symbol], m2.delta[q2][symbol])
            if target not in ids:
                ids[target] = len(order)
                order.append(target)
                queue.append(target)
            row.append(ids[target])
        rows.append(row)

    accepting = frozenset(
        ids[pair] for pair in order
        if combine(pair[0] in m1.accepting, pair[1] in m2.accepting)
    )
    absorbing = frozenset(
        ids[pair] for pair in order
        if pair[0] in m1.absorbing and pair[1] in m2.absorbing
    )
    return DfaModel(
        n_states=len(order),
        initial=0,
        accepting=accepting,
        absorbing=absorbing,
        delta=tuple(tuple(row) for row in rows),
        alphabet=m1.alphabet,
    )


def complement(m: DfaModel) -> DfaModel:
    """Same transitions, inverted acceptance."""
    return DfaModel(
        n_states=m.n_states,
        initial=m.initial,
        accepting=frozenset(range(m.n_states)) - m.accepting,
        absorbing=m.absorbing,
        delta=m.delta,
        alphabet=m.alphabet,
    )


def find_accepted_witness(m: DfaModel):
    """Shortest accepted trace by BFS, ties broken by symbol order.

    Returns None iff the language is empty.
    """
    if m.initial in m.accepting:
        return ()
    n_symbols = len(m.alphabet)
    back = {m.initial: None}
    queue = deque([m.initial])
    while queue:
        state = queue.popleft()
        for symbol in range(n_symbols):
            target = m.delta[state][symbol]
            if target in back:
                continue
            back[target] = (state, symbol)
            if target in m.accepting:
                path = []
                current = target
                while back[current] is not None:
                    prev, sym = back[current]
                    path.append(sym)
                    current = prev
                return tuple(reversed(path))
            queue.append(target)
    return None


def extract_regex(m: DfaModel) -> str:
    """Regular expression with the same language, by state elimination.

    Elimination order is deterministic: highest-id non-initial
    non-accepting states first, then remaining non-initial states, the
    initial state last.
    """
    start, end = "S", "T"
    edges = {}

    def add(src, dst, r):
        key = (src, dst)
        edges[key] = rx.union(edges.get(key, rx.EMPTY), r)

    add(start, m.initial, rx.EPS)
    for q in m.accepting:
        add(q, end, rx.EPS)
    for q in range(m.n_states):
        for symbol, target in enumerate(m.delta[q]):
            add(q, target, rx.Sym(m.alphabet.symbols[symbol]))

    plain = sorted((q for q in range(m.n_states) if q != m.initial and q not in m.accepting), reverse=True)
    rest = sorted((q for q in range(m.n_states) if q != m.initial and q in m.accepting), reverse=True)
    for victim in plain + rest + [m.initial]:
        loop = edges.pop((victim, victim), rx.EMPTY)
        incoming = [(src, r) for (src, dst), r in edges.items() if dst == victim and src != victim]
        outgoing = [(dst, r) for (src, dst), r in edges.items() if src == victim and dst != victim]
        for (src, _) in incoming:
            edges.pop((src, victim))
        for (dst, _) in outgoing:
            edges.pop((victim, dst))
        bridge = rx.star(loop)
        for src, rin in incoming:
            for dst, rout in outgoing:
                add(src, dst, rx.concat(rx.concat(rin, bridge), rout))

    return rx.render(edges.get((start, end), rx.EMPTY))


def regex_matches(regex_text: str, trace: Trace, alphabet: Alphabet) -> bool:
    """Match a trace of symbol ids against a regex over the same alphabet."""
    matcher = rx.RegexMatcher(regex_text)
    return matcher.matches(alphabet.symbols[i] for i in trace)


def to_json(m: DfaModel) -> str:
    payload = {
        "n_states": m.n_states,
        "initial": m.initial,
        "accepting": sorted(m.accepting),
        "absorbing": sorted(m.absorbing),
        "alphabet": list(m.alphabet.symbols),
        "delta": [list(row) for row in m.delta],
    }
    return json.dumps(payload, sort_keys=True)


def from_json(text) -> DfaModel:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid DFA JSON: {exc.msg}") from None
    return from_json_dict(payload)


def from_json_dict(payload) -> DfaModel:
    required = {"n_states", "initial", "accepting", "absorbing", "alphabet", "delta"}
    if not isinstance(payload, dict) or not required.issubset(payload):
        missing = required - set(payload) if isinstance(payload, dict) else required
        raise SchemaError(f"DFA JSON missing fields: {sorted(missing)}")
    alphabet = Alphabet.build(payload["alphabet"])
    if len(alphabet) != len(payload["alphabet"]):
        raise SchemaError("alphabet contains duplicate symbols")
    try:
        return DfaModel(
            n_states=int(payload["n_states"]),
            initial=int(payload["initial"]),
            accepting=frozenset(int(q) for q in payload["accepting"]),
            absorbing=frozenset(int(q) for q in payload["absorbing"]),
            delta=tuple(tuple(int(t) for t in row) for row in payload["delta"]),
            alphabet=alphabet,
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"invalid DFA JSON: {exc}") from None


def to_dot(m: DfaModel) -> str:
    """Graphviz rendering: accepting states double-circled, absorbing annotated.

    Parallel edges between the same pair of states are merged into one
    edge with a combined symbol label.
    """
    lines = ["digraph dfa {", "  rankdir=LR;", "  __start__ [shape=point];"]
    for q in range(m.n_states):
        shape = "doublecircle" if q in m.accepting else "circle"
        note = " (absorbing)" if q in m.absorbing else ""
        lines.append(f'  q{q} [shape={shape}, label="q{q}{note}"];')
    lines.append(f"  __start__ -> q{m.initial};")
    for q in range(m.n_states):
        grouped = {}
        for symbol, target in enumerate(m.delta[q]):
            grouped.setdefault(target, []).append(m.alphabet.symbols[symbol])
        for target in sorted(grouped):
            label = ",".join(grouped[target])
            lines.append(f'  q{q} -> q{target} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines)


def replay_expected(m: DfaModel, trace: Trace, expected_states) -> None:
    """Internal consistency helper: assert a replay matches expectations."""
    got = m.run(trace)
    if tuple(got) != tuple(expected_states):
        raise InternalError(f"replay mismatch: expected {expected_states}, got {got}")
