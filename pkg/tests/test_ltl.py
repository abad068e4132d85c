"""LTL evaluation, parsing, and the automaton route."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from ratsynth.buchi import ltl_to_nbw, nbw_accepts_lasso
from ratsynth.ltl import (And, LassoWord, Next, Not, Or, Until, atoms_of,
                          eval_lasso, eventually, always, parse)
from ratsynth.randgen import random_lasso_word, random_ltl

PROPS = ("p", "q")


def seeded(seed):
    return random.Random(seed)


@given(st.integers(0, 10**9))
def test_parse_print_roundtrip(seed):
    rng = seeded(seed)
    phi = random_ltl(rng, PROPS, 3)
    assert parse(str(phi)) == phi


def test_parse_surface_forms():
    assert parse("G F p") == always(eventually(parse("p")))
    assert parse("p U (q & !p)") == Until(parse("p"),
                                          And(parse("q"), Not(parse("p"))))
    assert parse("X p | q") == Or(Next(parse("p")), parse("q"))
    assert atoms_of(parse("p U q")) == frozenset({"p", "q"})


@given(st.integers(0, 10**9))
def test_eval_matches_automaton_route(seed):
    rng = seeded(seed)
    phi = random_ltl(rng, PROPS, 3)
    word = random_lasso_word(rng, PROPS)
    assert eval_lasso(phi, word) == nbw_accepts_lasso(ltl_to_nbw(phi), word)


@given(st.integers(0, 10**9))
def test_eval_invariant_under_unrolling(seed):
    rng = seeded(seed)
    phi = random_ltl(rng, PROPS, 3)
    word = random_lasso_word(rng, PROPS)
    assert eval_lasso(phi, word) == eval_lasso(phi, word.unroll_once())


@given(st.integers(0, 10**9))
def test_next_shifts_evaluation(seed):
    rng = seeded(seed)
    phi = random_ltl(rng, PROPS, 2)
    word = random_lasso_word(rng, PROPS)
    shifted = (LassoWord(word.prefix[1:], word.cycle) if word.prefix
               else LassoWord(word.cycle[1:], word.cycle))
    assert eval_lasso(Next(phi), word) == eval_lasso(phi, shifted)


@given(st.integers(0, 10**9))
def test_boolean_structure(seed):
    rng = seeded(seed)
    a = random_ltl(rng, PROPS, 2)
    b = random_ltl(rng, PROPS, 2)
    word = random_lasso_word(rng, PROPS)
    va, vb = eval_lasso(a, word), eval_lasso(b, word)
    assert eval_lasso(Not(a), word) == (not va)
    assert eval_lasso(And(a, b), word) == (va and vb)
    assert eval_lasso(Or(a, b), word) == (va or vb)
