"""Algebraic laws of the finite De Morgan lattices."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsynth.lattice import (Lattice, boolean2, chain, chain3, diamond,
                              ji_below, join_irreducibles, powerset,
                              validate_lattice)

MENU = [boolean2(), chain3(), chain(4), diamond(), powerset("xy"),
        powerset("xyz")]


@st.composite
def lattice_and_elements(draw, n=3):
    lat = draw(st.sampled_from(MENU))
    elems = [draw(st.sampled_from(lat.elements)) for _ in range(n)]
    return (lat, *elems)


@given(lattice_and_elements())
def test_lattice_laws(case):
    lat, a, b, c = case
    assert lat.join(a, b) == lat.join(b, a)
    assert lat.meet(a, b) == lat.meet(b, a)
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.meet(a, lat.meet(b, c)) == lat.meet(lat.meet(a, b), c)
    # absorption and idempotence
    assert lat.join(a, lat.meet(a, b)) == a
    assert lat.meet(a, lat.join(a, b)) == a
    # distributivity
    assert lat.meet(a, lat.join(b, c)) == \
        lat.join(lat.meet(a, b), lat.meet(a, c))
    # De Morgan complement: involutive and order-reversing
    assert lat.neg(lat.neg(a)) == a
    assert lat.neg(lat.join(a, b)) == lat.meet(lat.neg(a), lat.neg(b))
    if lat.leq(a, b):
        assert lat.leq(lat.neg(b), lat.neg(a))


@given(lattice_and_elements())
def test_order_agrees_with_operations(case):
    lat, a, b, _ = case
    assert lat.leq(a, b) == (lat.join(a, b) == b)
    assert lat.leq(a, b) == (lat.meet(a, b) == a)
    assert lat.leq(lat.bottom, a) and lat.leq(a, lat.top)


@pytest.mark.parametrize("lat", MENU, ids=lambda l: str(len(l.elements)))
def test_menu_lattices_satisfy_all_laws(lat):
    assert validate_lattice(lat) == []


def test_validation_catches_broken_table():
    lat = diamond()
    join = dict(lat.join_table)
    join[("a", "b")] = "a"  # break commutative join of incomparables
    broken = Lattice(elements=lat.elements, leq_pairs=lat.leq_pairs,
                     join_table=join, meet_table=lat.meet_table,
                     neg_table=lat.neg_table, top=lat.top, bottom=lat.bottom)
    assert validate_lattice(broken) != []


@pytest.mark.parametrize("lat", MENU, ids=lambda l: str(len(l.elements)))
def test_birkhoff_decomposition(lat):
    ji = join_irreducibles(lat)
    for j in ji:
        # join-irreducible: not the join of two strictly smaller elements
        for a in lat.elements:
            for b in lat.elements:
                if lat.join(a, b) == j:
                    assert a == j or b == j
    for e in lat.elements:
        assert lat.join_all(ji_below(lat, e)) == e


@pytest.mark.parametrize("lat", MENU, ids=lambda l: str(len(l.elements)))
def test_join_irreducibles_are_join_prime(lat):
    rng = random.Random(0)
    for _ in range(50):
        j = rng.choice(sorted(join_irreducibles(lat), key=repr))
        a, b = rng.choice(lat.elements), rng.choice(lat.elements)
        if lat.leq(j, lat.join(a, b)):
            assert lat.leq(j, a) or lat.leq(j, b)
