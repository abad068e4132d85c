"""JSON document round-trips for every supported kind."""

import json
import random

import pytest

from ratsynth.apt import apt_base, apt_emptiness, PAtom, pand, por
from ratsynth.fixtures import load_fixture
from ratsynth.jsonio import (JsonError, from_json, load_path,
                             pformula_from_str, pformula_to_str, to_json)
from ratsynth.lattice import chain3, diamond, powerset
from ratsynth.latticed import LatticedGame, Ldbw
from ratsynth.ltl import parse
from ratsynth.randgen import (random_latticed_game, random_lattice,
                              random_ldbw)

SIGMA = (frozenset(), frozenset({"a"}))


def roundtrip(value):
    doc = to_json(value)
    json.dumps(doc)  # must be pure JSON
    return from_json(doc)


def test_arena_profile_objectives_roundtrip():
    for name in ("fig1", "p2p"):
        arena = load_fixture(name)
        assert roundtrip(arena) == arena
    for name in ("fig1-dotted", "fig1-dashed", "titfortat"):
        profile = load_fixture(name)
        assert roundtrip(profile) == profile
    for name in ("fig1-F", "fig1-GF", "p2p-objectives"):
        objectives = load_fixture(name)
        assert roundtrip(objectives) == objectives


def test_lattice_documents_roundtrip():
    for lat in (chain3(), diamond(), powerset("xy")):
        assert roundtrip(lat) == lat


def test_latticed_game_and_automaton_roundtrip():
    rng = random.Random(71)
    for _ in range(10):
        lat = random_lattice(rng)
        game = random_latticed_game(rng, lat)
        assert roundtrip(game) == game
        letters = (frozenset(), frozenset({"p"}))
        aut = random_ldbw(rng, lat, letters)
        assert roundtrip(aut) == aut


def test_apt_and_witness_tree_roundtrip():
    apt = apt_base(parse("F a"), SIGMA)
    assert roundtrip(apt) == apt
    witness = apt_emptiness(apt)
    assert witness is not None
    assert roundtrip(witness) == witness


def test_positive_formula_text_roundtrip():
    f = por([pand([PAtom(("d", 1)), PAtom("x")]), PAtom(frozenset({"a"}))])
    assert pformula_from_str(pformula_to_str(f)) == f
    for text in ("true", "false"):
        g = pformula_from_str(text)
        assert pformula_to_str(g) == text


def test_malformed_documents_rejected():
    with pytest.raises(JsonError):
        from_json({"format": "ratsynth.unknown/1"})
    with pytest.raises(JsonError):
        from_json({"no_format": True})
    with pytest.raises(JsonError):
        load_path("/nonexistent/path.json")
