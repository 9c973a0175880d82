import random

import pytest

from oracles import all_strings, random_dfa
from seqdfa import regex as rx
from seqdfa.dfa import DfaModel, extract_regex, regex_matches, universal_dfa
from seqdfa.errors import DataError
from seqdfa.traces import Alphabet


def test_simplification_rules():
    a, b = rx.Sym("a"), rx.Sym("b")
    assert rx.union(rx.EMPTY, a) is a
    assert rx.union(a, a) is a
    assert rx.concat(rx.EMPTY, a) is rx.EMPTY
    assert rx.concat(rx.EPS, a) is a
    assert rx.star(rx.EMPTY) is rx.EPS
    assert rx.star(rx.star(a)) == rx.star(a)
    assert rx.render(rx.union(a, b)) == "a|b"
    assert rx.render(rx.concat(rx.union(a, b), rx.star(a))) == "(a|b) a*"


def test_parse_render_round_trip():
    texts = ["a|b", "(a|b) a*", "a b c", "ε", "∅", "(a b)*|c"]
    for text in texts:
        ast = rx.parse(text)
        assert rx.parse(rx.render(ast)) == ast


def test_parse_errors():
    for bad in ["", "(a", "a)", "*", "a |"]:
        with pytest.raises(DataError):
            rx.parse(bad)


def test_matcher_basics():
    matcher = rx.RegexMatcher("(a|b) a*")
    assert matcher.matches(["a"])
    assert matcher.matches(["b", "a", "a"])
    assert not matcher.matches([])
    assert not matcher.matches(["a", "b"])


def test_sigma_star_from_single_state():
    model = universal_dfa(Alphabet.build(["a", "b", "c"]))
    assert extract_regex(model) == "(a|b|c)*"


def test_empty_language_regex():
    alpha = Alphabet.build(["a"])
    model = DfaModel(1, 0, frozenset(), frozenset(), ((0,),), alpha)
    assert extract_regex(model) == "∅"


def test_regex_matches_own_dfa_exhaustively():
    rng = random.Random(13)
    for _ in range(30):
        model = random_dfa(rng, rng.randint(1, 4), rng.randint(1, 3))
        text = extract_regex(model)
        matcher = rx.RegexMatcher(text)
        for s in all_strings(len(model.alphabet), 5):
            names = [model.alphabet.symbols[i] for i in s]
            assert matcher.matches(names) == model.accepts(s), (text, s)


def test_regex_matches_helper():
    model = universal_dfa(Alphabet.build(["a"]))
    assert regex_matches("a*", (0, 0), model.alphabet)
    assert not regex_matches("a a", (0,), model.alphabet)


def test_extraction_is_deterministic():
    rng = random.Random(3)
    model = random_dfa(rng, 4, 2)
    assert extract_regex(model) == extract_regex(model)
