"""Synthetic office-domain fixture.

An agent starts in office A, office B, or the exit E of a small floor
plan and walks a shortest path through the hallways H1/H2/H3 to one of
the goal regions: an office, the exit, the coffee machine, or one of
the two restrooms.  A trace is the sequence of regions visited,
labeled with the goal region.  The bundled path list is hand-derived
from the floor geometry (doors between B/A and all three hallways, the
left-column rooms reachable only from H1, the exit only from H3); when
two monotone routes tie in walking distance both are listed.  It is
checked for internal consistency -- every path visits only hallways
between its start and its goal -- and ships as data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .dfa import DfaModel
from .errors import DataError
from .traces import Alphabet

HALLWAYS = ("H1", "H2", "H3")
STARTS = ("A", "B", "E")
GOALS = ("A", "B", "E", "coffee", "female", "male")

# (start, goal) -> all shortest region sequences
_DEFAULT_PATHS = (
    ("A", "B", (("A", "H2", "B"),)),
    ("A", "E", (("A", "H3", "E"),)),
    ("A", "coffee", (("A", "H1", "coffee"), ("A", "H2", "H1", "coffee"))),
    ("A", "female", (("A", "H1", "female"),)),
    ("A", "male", (("A", "H1", "male"), ("A", "H2", "H1", "male"))),
    ("B", "A", (("B", "H2", "A"),)),
    ("B", "E", (("B", "H3", "E"),)),
    ("B", "coffee", (("B", "H1", "coffee"), ("B", "H2", "H1", "coffee"))),
    ("B", "female", (("B", "H1", "female"), ("B", "H2", "H1", "female"))),
    ("B", "male", (("B", "H1", "male"),)),
    ("E", "A", (("E", "H3", "A"),)),
    ("E", "B", (("E", "H3", "B"),)),
    ("E", "coffee", (("E", "H3", "H2", "H1", "coffee"),)),
    ("E", "female", (("E", "H3", "H2", "H1", "female"),)),
    ("E", "male", (("E", "H3", "H2", "H1", "male"),)),
)


@dataclass(frozen=True)
class FixtureEntry:
    start: str
    goal: str
    paths: tuple


@dataclass(frozen=True)
class PathFixture:
    entries: tuple

    def validate(self):
        seen = set()
        for entry in self.entries:
            if not entry.paths:
                raise DataError(f"no paths for {entry.start}->{entry.goal}")
            for path in entry.paths:
                if not path:
                    raise DataError("empty path in fixture")
                if path[0] != entry.start:
                    raise DataError(f"path {path} does not start at {entry.start}")
                if path[-1] != entry.goal:
                    raise DataError(f"path {path} does not end at {entry.goal}")
                if any(region not in HALLWAYS for region in path[1:-1]):
                    raise DataError(f"path {path} leaves the hallways mid-route")
                if path in seen:
                    raise DataError(f"duplicate path in fixture: {path}")
                seen.add(path)

    def traces(self):
        for entry in self.entries:
            for path in entry.paths:
                yield path, entry.goal


def default_office_fixture() -> PathFixture:
    return PathFixture(tuple(
        FixtureEntry(start, goal, paths) for start, goal, paths in _DEFAULT_PATHS
    ))


def gen_office(fixture: PathFixture, out_path) -> int:
    """Write the fixture as a JSONL dataset; returns the record count."""
    fixture.validate()
    count = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for path, goal in fixture.traces():
            fh.write(json.dumps({"trace": list(path), "label": goal}) + "\n")
            count += 1
    return count


def office_alphabet() -> Alphabet:
    """The alphabet a loader builds from the generated fixture file."""
    return Alphabet.build(
        region for path, _ in default_office_fixture().traces() for region in path
    )


def reference_coffee_dfa(alphabet: Alphabet | None = None) -> DfaModel:
    """Hand-built 4-state classifier for the coffee goal.

    State 0 tracks "in the left half or a start room", state 3 tracks
    "committed to the middle/right hallways"; reaching the coffee
    machine from state 0 accepts and absorbs (state 2), entering a
    restroom or re-entering an office from state 3 rejects and absorbs
    (state 1).
    """
    if alphabet is None:
        alphabet = office_alphabet()
    moves = {
        0: {"female": 1, "male": 1, "coffee": 2, "H2": 3, "H3": 3},
        1: {},
        2: {},
        3: {"H1": 0, "H2": 0, "A": 1, "B": 1},
    }
    delta = tuple(
        tuple(moves[q].get(symbol, q) for symbol in alphabet.symbols)
        for q in range(4)
    )
    return DfaModel(
        n_states=4,
        initial=0,
        accepting=frozenset({2}),
        absorbing=frozenset({1, 2}),
        delta=delta,
        alphabet=alphabet,
    )
