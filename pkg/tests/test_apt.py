"""Alternating parity tree automata: formulas, membership, composition,
emptiness, and the history-marked base construction."""

import random

import pytest

from ratsynth.apt import (AptCeilingError, AptUnsupportedError, PAtom, PFalse,
                          PTrue, apt_base, apt_compose, apt_emptiness,
                          apt_run_regular_tree, constant_tree, dealternate,
                          dual, minimal_models, pand, por, RegularTree)
from ratsynth.ltl import parse
from ratsynth.randgen import history_tree_oracle, random_history_tree, \
    random_ltl

SIGMA = (frozenset(), frozenset({"a"}), frozenset({"a", "b"}))


def test_positive_formula_helpers():
    a, b, c = PAtom("a"), PAtom("b"), PAtom("c")
    assert pand([]) == PTrue()
    assert por([]) == PFalse()
    assert pand([a, pand([b, c])]) == pand([a, b, c])
    f = por([pand([a, b]), c])
    assert dual(dual(f)) == f
    assert dual(f) == pand([por([a, b]), c])
    models = minimal_models(f)
    assert frozenset({"c"}) in models
    assert frozenset({"a", "b"}) in models
    assert len(models) == 2  # supersets pruned


def test_base_membership_matches_direct_semantics():
    rng = random.Random(41)
    for _ in range(40):
        tree, hist = random_history_tree(rng, SIGMA)
        psi = random_ltl(rng, ("a", "b"), 2)
        got = apt_run_regular_tree(apt_base(psi, SIGMA), tree)
        assert got == history_tree_oracle(tree, psi, hist)


def test_illegal_markings_rejected():
    apt = apt_base(parse("true"), SIGMA)
    # an everywhere-marked tree has no final history node: illegal
    assert not apt_run_regular_tree(
        apt, constant_tree((SIGMA[1], True), apt.directions))
    # an everywhere-unmarked tree has no marked root: illegal
    assert not apt_run_regular_tree(
        apt, constant_tree((SIGMA[1], False), apt.directions))


def test_diverging_marks_rejected():
    """Two different marked children of a marked node break the single-path
    discipline even when the objective is trivially true."""
    apt = apt_base(parse("true"), SIGMA)
    d0, d1 = SIGMA[0], SIGMA[1]
    succ = {}
    for d in SIGMA:
        succ[("r", d)] = "m" if d in (d0, d1) else "o"
        succ[("m", d)] = "o"
        succ[("o", d)] = "o"
    tree = RegularTree(("r", "m", "o"), "r", succ,
                       {"r": (d0, True), "m": (d0, True), "o": (d0, False)})
    tree.validate(apt.directions)
    assert not apt_run_regular_tree(apt, tree)


def test_compose_verdict_algebra():
    rng = random.Random(42)
    formulas = [parse(s) for s in
                ("F a", "G a", "a U b", "X b", "F (a & b)", "a")]
    for _ in range(12):
        tree, _ = random_history_tree(rng, SIGMA)
        p1, p2 = rng.sample(formulas, 2)
        a1, a2 = apt_base(p1, SIGMA), apt_base(p2, SIGMA)
        r1 = apt_run_regular_tree(a1, tree)
        r2 = apt_run_regular_tree(a2, tree)
        comp = apt_compose("complement", [a1])
        assert apt_run_regular_tree(comp, tree) == (not r1)
        back = apt_compose("complement", [comp])
        assert back.priority == a1.priority  # complement is involutive
        assert apt_run_regular_tree(back, tree) == r1
        union = apt_compose("union", [a1, a2])
        assert apt_run_regular_tree(union, tree) == (r1 or r2)
        inter = apt_compose("intersection", [a1, a2])
        assert apt_run_regular_tree(inter, tree) == (r1 and r2)


def test_dealternation_preserves_membership():
    rng = random.Random(43)
    for _ in range(10):
        tree, _ = random_history_tree(rng, SIGMA)
        psi = random_ltl(rng, ("a", "b"), 2)
        apt = apt_base(psi, SIGMA)
        nd = dealternate(apt)
        assert set(nd.priority.values()) <= {0, 1}
        assert apt_run_regular_tree(nd, tree) == \
            apt_run_regular_tree(apt, tree)


def test_projection_erases_the_marking():
    apt = apt_base(parse("F a"), SIGMA)
    # erase component 1 (the history mark): accept iff some marking works
    projected = apt_compose("project", [apt], component=1)
    tree = constant_tree((SIGMA[1],), apt.directions)
    assert apt_run_regular_tree(projected, tree)
    # no marking can make an objective-violating tree accepted
    apt_false = apt_base(parse("false"), SIGMA)
    projected_false = apt_compose("project", [apt_false], component=1)
    assert not apt_run_regular_tree(projected_false, tree)


def test_emptiness_witness_is_rechecked_member():
    apt = apt_base(parse("F a"), SIGMA)
    witness = apt_emptiness(apt)
    assert witness is not None
    assert apt_run_regular_tree(apt, witness)
    assert apt_emptiness(apt_base(parse("false"), SIGMA)) is None


def test_state_ceiling_enforced():
    apt = apt_base(parse("a U b"), SIGMA)
    with pytest.raises(AptCeilingError):
        dealternate(apt, state_ceiling=2)


def test_parity_beyond_buchi_is_reported_unsupported():
    apt = apt_base(parse("F a"), SIGMA)
    shifted = apt_compose("complement", [apt])  # priorities become {1, 2}
    with pytest.raises(AptUnsupportedError):
        dealternate(shifted)
