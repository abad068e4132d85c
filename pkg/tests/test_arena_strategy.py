"""Arenas, strategies, and outcome computation."""

import random

import pytest

from ratsynth.arena import ArenaError, History, validate_arena
from ratsynth.fixtures import FIXTURES, load_fixture
from ratsynth.randgen import random_arena, random_profile
from ratsynth.strategy import outcome, shifted_outcome


def test_fixtures_load_and_validate():
    for name in FIXTURES:
        load_fixture(name)
    for name in ("fig1", "p2p"):
        assert validate_arena(load_fixture(name)) == []
    with pytest.raises(ArenaError):
        load_fixture("no-such-fixture")


def test_fig1_dotted_outcome_cycle():
    arena = load_fixture("fig1")
    lasso = outcome(arena, load_fixture("fig1-dotted"))
    lasso.validate(arena)
    assert tuple(p.vertex for p in lasso.cycle) == ("n2", "gAB", "n0")


def test_fig1_dashed_outcome_cycle():
    arena = load_fixture("fig1")
    lasso = outcome(arena, load_fixture("fig1-dashed"))
    lasso.validate(arena)
    assert tuple(p.vertex for p in lasso.cycle) == ("n1", "gAC", "n0")


def test_titfortat_outcome_alternates_grants():
    arena = load_fixture("p2p")
    lasso = outcome(arena, load_fixture("titfortat"))
    lasso.validate(arena)
    word = lasso.word(arena)
    letters = set(word.prefix) | set(word.cycle)
    # eventually each side both uploads for the peer and downloads
    assert any("d0" in l and "u1" in l for l in word.cycle)
    assert any("d1" in l and "u0" in l for l in word.cycle)
    assert letters  # sanity


def test_random_arenas_validate_and_outcomes_are_consistent():
    rng = random.Random(5)
    for _ in range(40):
        arena = random_arena(rng)
        assert validate_arena(arena) == []
        profile = random_profile(rng, arena, 2)
        lasso = outcome(arena, profile)
        lasso.validate(arena)


def test_shifted_outcome_follows_history_then_profile():
    arena = load_fixture("fig1")
    profile = load_fixture("fig1-dotted")
    # take the dashed first move instead: n0 -> n1
    history = History(("n0", "n1"))
    history.validate(arena)
    lasso = shifted_outcome(arena, profile, history)
    lasso.validate(arena)
    assert lasso.positions()[0].vertex == "n0"
    assert lasso.positions()[1].vertex == "n1"


def test_history_must_start_at_initial():
    arena = load_fixture("fig1")
    with pytest.raises(ArenaError):
        History(("n1",)).validate(arena)
