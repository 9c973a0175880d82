"""Regular-expression support for automaton round trips.

The syntax is deliberately small: symbol literals (any run of
characters other than the metacharacters), alternation ``|``, Kleene
star ``*``, parentheses, the empty language ``@empty@`` written as
``∅`` and the empty string written as ``ε``.  Concatenation
is juxtaposition; tokens are separated by whitespace where needed
(symbols may be multi-character, e.g. ``H1`` or ``coffee``).

Matching is done by compiling back to an automaton (Thompson
construction plus on-the-fly subset stepping), so equality tests
between an extracted regex and its source DFA never depend on a
second regex engine.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError

EMPTY_SET = "∅"
EPSILON = "ε"
_META = {"|", "*", "(", ")", EMPTY_SET, EPSILON}


class Regex:
    pass


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Eps(Regex):
    pass


@dataclass(frozen=True)
class Sym(Regex):
    name: str


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


EMPTY = Empty()
EPS = Eps()


def union(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    parts = []
    for r in (a, b):
        for p in (r.parts if isinstance(r, Union) else (r,)):
            if p not in parts:
                parts.append(p)
    return parts[0] if len(parts) == 1 else Union(tuple(parts))


def concat(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return EMPTY
    if isinstance(a, Eps):
        return b
    if isinstance(b, Eps):
        return a
    parts = []
    for r in (a, b):
        parts.extend(r.parts if isinstance(r, Concat) else (r,))
    return Concat(tuple(parts))


def star(a: Regex) -> Regex:
    if isinstance(a, (Empty, Eps)):
        return EPS
    if isinstance(a, Star):
        return a
    return Star(a)


def render(regex: Regex) -> str:
    """Deterministic text form; symbols must not contain metacharacters."""
    return _render(regex, 0)


# precedence levels: 0 union, 1 concat, 2 atom/star
def _render(r: Regex, level: int) -> str:
    if isinstance(r, Empty):
        return EMPTY_SET
    if isinstance(r, Eps):
        return EPSILON
    if isinstance(r, Sym):
        bad = _META | {" ", "\t", "\n"}
        if any(ch in bad for ch in r.name) or not r.name:
            raise DataError(f"symbol {r.name!r} cannot be rendered in a regex")
        return r.name
    if isinstance(r, Star):
        inner = _render(r.inner, 2)
        if isinstance(r.inner, (Sym, Eps, Empty)):
            return inner + "*"
        return "(" + _render(r.inner, 0) + ")*"
    if isinstance(r, Concat):
        text = " ".join(_render(p, 1) for p in r.parts)
        return "(" + text + ")" if level > 1 else text
    if isinstance(r, Union):
        text = "|".join(_render(p, 1) for p in r.parts)
        return "(" + text + ")" if level > 0 else text
    raise TypeError(f"not a regex node: {r!r}")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _META:
            tokens.append(ch)
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in _META:
            j += 1
        tokens.append(text[i:j])
        i = j
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_union(self) -> Regex:
        result = self.parse_concat()
        while self.peek() == "|":
            self.take()
            result = union(result, self.parse_concat())
        return result

    def parse_concat(self) -> Regex:
        result = None
        while True:
            tok = self.peek()
            if tok is None or tok in ("|", ")"):
                break
            term = self.parse_term()
            result = term if result is None else concat(result, term)
        if result is None:
            raise DataError("empty regex fragment")
        return result

    def parse_term(self) -> Regex:
        tok = self.take()
        if tok == "(":
            inner = self.parse_union()
            if self.take() != ")":
                raise DataError("unbalanced parenthesis in regex")
            node = inner
        elif tok == EMPTY_SET:
            node = EMPTY
        elif tok == EPSILON:
            node = EPS
        elif tok in ("|", ")", "*", None):
            raise DataError(f"unexpected token in regex: {tok!r}")
        else:
            node = Sym(tok)
        while self.peek() == "*":
            self.take()
            node = star(node)
        return node


def parse(text: str) -> Regex:
    tokens = _tokenize(text)
    if not tokens:
        raise DataError("empty regex")
    parser = _Parser(tokens)
    result = parser.parse_union()
    if parser.peek() is not None:
        raise DataError(f"trailing regex tokens at {parser.peek()!r}")
    return result


class Nfa:
    """Thompson-construction NFA with epsilon moves over symbol names."""

    def __init__(self):
        self.eps = []  # state -> set of states
        self.trans = []  # state -> dict symbol name -> set of states
        self.start = self._new_state()
        self.accept = self._new_state()

    def _new_state(self):
        self.eps.append(set())
        self.trans.append({})
        return len(self.eps) - 1

    def _closure(self, states):
        stack = list(states)
        seen = set(states)
        while stack:
            s = stack.pop()
            for t in self.eps[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def initial_set(self):
        return self._closure({self.start})

    def step(self, states, symbol):
        moved = set()
        for s in states:
            moved.update(self.trans[s].get(symbol, ()))
        return self._closure(moved)

    def accepts_set(self, states) -> bool:
        return self.accept in states

    def accepts(self, symbols) -> bool:
        current = self.initial_set()
        for symbol in symbols:
            current = self.step(current, symbol)
        return self.accepts_set(current)


def compile_nfa(regex: Regex) -> Nfa:
    nfa = Nfa()

    def build(node, src, dst):
        if isinstance(node, Empty):
            return  # no path
        if isinstance(node, Eps):
            nfa.eps[src].add(dst)
        elif isinstance(node, Sym):
            nfa.trans[src].setdefault(node.name, set()).add(dst)
        elif isinstance(node, Concat):
            prev = src
            for part in node.parts[:-1]:
                mid = nfa._new_state()
                build(part, prev, mid)
                prev = mid
            build(node.parts[-1], prev, dst)
        elif isinstance(node, Union):
            for part in node.parts:
                build(part, src, dst)
        elif isinstance(node, Star):
            hub = nfa._new_state()
            nfa.eps[src].add(hub)
            nfa.eps[hub].add(dst)
            build(node.inner, hub, hub)
        else:
            raise TypeError(f"not a regex node: {node!r}")

    build(regex, nfa.start, nfa.accept)
    return nfa


class RegexMatcher:
    """Matcher caching subset-construction steps for repeated queries."""

    def __init__(self, text: str):
        self.nfa = compile_nfa(parse(text))
        self._initial = self.nfa.initial_set()
        self._cache = {}

    def initial_state(self):
        return self._initial

    def step(self, state, symbol):
        key = (state, symbol)
        nxt = self._cache.get(key)
        if nxt is None:
            nxt = self.nfa.step(state, symbol)
            self._cache[key] = nxt
        return nxt

    def is_accepting(self, state) -> bool:
        return self.nfa.accepts_set(state)

    def matches(self, symbols) -> bool:
        state = self._initial
        for symbol in symbols:
            state = self.step(state, symbol)
        return self.is_accepting(state)
