"""Lattice-valued Buchi games: play values, single-strategy solving,
automata payoffs, latticed Nash checking and synthesis."""

import random

from ratsynth.arena import Arena
from ratsynth.boolgames import solve_buchi_classic
from ratsynth.equilibria import check_nash
from ratsynth.fixtures import (fig1_arena, fig1_objectives_f,
                               fig1_profile_dashed, fig1_profile_dotted)
from ratsynth.lattice import boolean2, chain3, diamond, ji_below
from ratsynth.latticed import (LatticedGame, Ldbw, _step_trackers,
                               achievable_values, can_ensure, certify_ensure,
                               check_latticed_nash, ldbw_payoff,
                               latticed_synthesize_bounded, play_value,
                               simplify_game)
from ratsynth.ltl import LassoWord
from ratsynth.randgen import random_latticed_game, random_lattice
from ratsynth.strategy import Profile, positional_strategy


def test_tracker_monotonicity():
    """Along any play the maximizer tracker only falls and the minimizer
    tracker only rises."""
    rng = random.Random(61)
    for _ in range(60):
        lat = random_lattice(rng)
        game = random_latticed_game(rng, lat)
        u = game.initial
        x, y = lat.top, lat.bottom
        for _ in range(12):
            v = rng.choice(sorted(game.successors(u)))
            x2, y2 = _step_trackers(game, u, x, y, v)
            assert lat.leq(x2, x) and lat.leq(y, y2)
            u, x, y = v, x2, y2


def test_play_value_boolean_degeneration():
    """On the two-element lattice a play is worth top iff its cycle hits an
    accepting vertex (edges are all full-valued by construction)."""
    lat = boolean2()
    rng = random.Random(62)
    for _ in range(60):
        game = random_latticed_game(rng, lat)
        u = game.initial
        path = [u]
        for _ in range(8):
            u = rng.choice(sorted(game.successors(u)))
            path.append(u)
        first = path.index(path[-1])
        prefix, cycle = path[:first], path[first:-1]
        if not cycle:
            continue
        value = play_value(game, prefix, cycle)
        classical = any(game.accept[v] == lat.top for v in cycle)
        assert (value == lat.top) == classical


def test_play_value_examples():
    lat = diamond()
    game = LatticedGame(lattice=lat, vertices=("s",), vee=frozenset({"s"}),
                        initial="s", edges={("s", "s"): lat.top},
                        accept={"s": "a"})
    assert play_value(game, [], ["s"]) == "a"
    c3 = chain3()
    game2 = LatticedGame(lattice=c3, vertices=("s", "t"),
                         vee=frozenset({"s"}), initial="s",
                         edges={("s", "t"): "1", ("t", "s"): "1"},
                         accept={"s": "half", "t": "1"})
    assert play_value(game2, [], ["s", "t"]) == "1"


def test_simplified_game_size_bound():
    rng = random.Random(63)
    for _ in range(40):
        lat = random_lattice(rng)
        game = random_latticed_game(rng, lat)
        for l in lat.elements:
            if l == lat.bottom:
                continue
            simplified = simplify_game(game, l)
            bound = len(game.vertices) * len(lat.elements) ** 2
            assert len(simplified.vertices) <= bound
            assert len(simplified.accept_family) == len(ji_below(lat, l))


def test_can_ensure_matches_classical_solver_on_boolean_lattice():
    lat = boolean2()
    rng = random.Random(64)
    for _ in range(60):
        game = random_latticed_game(rng, lat)
        accept = {v for v in game.vertices if game.accept[v] == lat.top}
        edges = {u: tuple(sorted(v for v in game.vertices
                                 if game.edge_value(u, v) == lat.top))
                 for u in game.vertices}
        owner = {v: 0 if v in game.vee else 1 for v in game.vertices}
        classical = game.initial in solve_buchi_classic(
            game.vertices, owner, edges, accept)
        ensured, strat = can_ensure(game, lat.top)
        assert ensured == classical
        if ensured:
            assert certify_ensure(game, lat.top, strat) == []


def test_achievable_values_form_antichain_with_downward_closure():
    rng = random.Random(65)
    for _ in range(25):
        lat = random_lattice(rng)
        game = random_latticed_game(rng, lat)
        frontier = achievable_values(game)
        for a in frontier:
            for b in frontier:
                if a != b:
                    assert not lat.leq(a, b)
        for l in lat.elements:
            expect = any(lat.leq(l, a) for a in frontier)
            assert can_ensure(game, l)[0] == expect


def test_ldbw_payoff_meets_traversal_and_joins_recurrence():
    c3 = chain3()
    letters = (frozenset(), frozenset({"g"}))
    delta = {("q", letters[0]): "q", ("q", letters[1]): "r",
             ("r", letters[0]): "q", ("r", letters[1]): "r"}
    tvalue = {k: "1" for k in delta}
    tvalue[("q", letters[0])] = "half"  # staying silent costs precision
    aut = Ldbw(lattice=c3, states=("q", "r"), initial="q", delta=delta,
               tvalue=tvalue, accept={"q": "half", "r": "1"})
    # always the good letter: full payoff
    assert ldbw_payoff(aut, LassoWord((), (letters[1],))) == "1"
    # always silent: capped by the traversed transition value
    assert ldbw_payoff(aut, LassoWord((), (letters[0],))) == "half"


def test_latticed_nash_agrees_with_boolean_nash_on_reachability():
    lat = boolean2()
    arena = fig1_arena()
    objectives_f = fig1_objectives_f()
    letters = sorted(set(arena.labels.values()), key=repr)

    def reach_aut(prop):
        delta, tvalue = {}, {}
        for s in ("wait", "acc"):
            for letter in letters:
                delta[(s, letter)] = "acc" if (s == "acc" or prop in letter) \
                    else "wait"
                tvalue[(s, letter)] = lat.top
        return Ldbw(lattice=lat, states=("wait", "acc"), initial="wait",
                    delta=delta, tvalue=tvalue,
                    accept={"wait": lat.bottom, "acc": lat.top})

    objectives = (reach_aut("a"), reach_aut("b"), reach_aut("c"))
    for profile in (fig1_profile_dotted(), fig1_profile_dashed()):
        for deviators in ([0], [1], [2], [0, 1, 2]):
            latticed = check_latticed_nash(arena, objectives, profile,
                                           deviators)
            boolean = check_nash(arena, objectives_f, profile, deviators)
            assert latticed.holds == boolean.holds


def _one_shot_arena():
    """Player 1 chooses once whether to move to a goal vertex."""
    w = "w"
    available = {(0, "u"): (w,), (0, "g"): (w,),
                 (1, "u"): ("stay", "go"), (1, "g"): (w,)}
    delta = {("u", (w, "stay")): "u", ("u", (w, "go")): "g",
             ("g", (w, w)): "g"}
    return Arena(name="one-shot", vertices=("u", "g"), initial="u",
                 n_players=2, actions=((w,), ("stay", "go", w)),
                 available=available, delta=delta,
                 labels={"u": frozenset(), "g": frozenset({"p"})},
                 props=frozenset({"p"}))


def _diamond_automata():
    lat = diamond()
    letters = (frozenset(), frozenset({"p"}))
    delta, tvalue = {}, {}
    for s in ("s0", "sp"):
        for letter in letters:
            delta[(s, letter)] = "sp" if "p" in letter else "s0"
            tvalue[(s, letter)] = lat.top
    def aut(accept):
        return Ldbw(lattice=lat, states=("s0", "sp"), initial="s0",
                    delta=delta, tvalue=tvalue, accept=accept)
    return lat, aut


def test_latticed_nash_detects_profitable_deviation():
    arena = _one_shot_arena()
    lat, aut = _diamond_automata()
    # player 1 scores 'a' at home, top at the goal: staying is irrational
    objectives = (aut({"s0": lat.top, "sp": lat.top}),
                  aut({"s0": "a", "sp": lat.top}))
    profile = Profile((positional_strategy(arena, 0, {"u": "w", "g": "w"}),
                       positional_strategy(arena, 1,
                                           {"u": "stay", "g": "w"})))
    verdict = check_latticed_nash(arena, objectives, profile)
    assert not verdict.holds
    assert verdict.deviator == 1
    assert verdict.element == "b"
    assert verdict.payoffs[1] == "a"


def test_latticed_synthesis_respects_threshold():
    arena = _one_shot_arena()
    lat, aut = _diamond_automata()
    capped = aut({"s0": "a", "sp": "a"})
    full = aut({"s0": "a", "sp": lat.top})
    assert latticed_synthesize_bounded(arena, (full, full), "a", 1) \
        is not None
    # system payoff can never exceed 'a': synthesis for top must fail fast
    assert latticed_synthesize_bounded(arena, (capped, full), lat.top, 1) \
        is None
