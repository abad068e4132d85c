"""Acceptance suite: nine end-to-end criteria, each printing one PASS/FAIL
line with its runtime.  Tolerances and instance counts are pinned in the
test bodies; random corpora use fixed seeds."""

import random
import sys
import time

from ratsynth.apt import apt_base, apt_compose, apt_run_regular_tree
from ratsynth.boolgames import solve_buchi_classic
from ratsynth.bruteforce import (oracle_check_dominant, oracle_check_nash,
                                 oracle_check_spe)
from ratsynth.buchi import ltl_to_nbw, nbw_accepts_lasso
from ratsynth.equilibria import (agent_payoff, check_dominant, check_nash,
                                 check_spe)
from ratsynth.esl import alternation_depth, build_solution_formula, pretty
from ratsynth.fixtures import load_fixture
from ratsynth.lattice import boolean2, ji_below
from ratsynth.latticed import (can_ensure, certify_ensure,
                               check_latticed_nash, Ldbw, play_value,
                               simplify_game)
from ratsynth.ltl import eval_lasso, parse
from ratsynth.randgen import (history_tree_oracle, random_arena,
                              random_history_tree, random_lasso_word,
                              random_latticed_game, random_lattice,
                              random_ltl, random_profile)
from ratsynth.strategy import outcome, positional_strategy
from ratsynth.synthesis import SynthesisInstance, synthesize_bounded


def report(number, name, ok, elapsed, limit):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    line = (f"[criterion {number}] {name}: {status} "
            f"({elapsed:.1f}s of {limit:.0f}s budget)\n")
    sys.__stdout__.write(line)
    sys.__stdout__.flush()
    assert ok, line
    assert elapsed < limit, line


# -- 1. figure-1 suite, reach-once objectives ----------------------------------


def test_criterion_1_fig1_reach_once_suite():
    t0 = time.monotonic()
    arena = load_fixture("fig1")
    objectives = load_fixture("fig1-F")
    dotted = load_fixture("fig1-dotted")
    dashed = load_fixture("fig1-dashed")
    ok = check_nash(arena, objectives, dotted).holds
    ok &= check_spe(arena, objectives, dotted).holds
    ok &= check_nash(arena, objectives, dashed).holds
    spe = check_spe(arena, objectives, dashed)
    ok &= not spe.holds
    ok &= spe.witness.history.vertices[-1] == "n2"
    ok &= spe.witness.deviator == 1
    ok &= spe.witness.deviation.positions()[0].joint[1] == "b1"
    expected = {(0, "n0", "a1"): False, (0, "n0", "a2"): False,
                (1, "n2", "b1"): True, (1, "n2", "b2"): False,
                (2, "n1", "c1"): True, (2, "n1", "c2"): True}
    for (i, vertex, act), want in expected.items():
        profile = dotted.replace(
            i, positional_strategy(arena, i, {vertex: act}))
        ok &= check_dominant(arena, objectives, profile, [i]).holds == want
    report(1, "figure-1 reach-once suite", ok, time.monotonic() - t0, 5.0)


# -- 2. peer-to-peer fixture ----------------------------------------------------


def test_criterion_2_p2p_titfortat_and_synthesis():
    t0 = time.monotonic()
    arena = load_fixture("p2p")
    objectives = load_fixture("p2p-objectives")
    profile = load_fixture("titfortat")
    ok = check_nash(arena, objectives, profile).holds
    word = outcome(arena, profile).word(arena)
    for phi in objectives:
        ok &= eval_lasso(phi, word)
    result = synthesize_bounded(SynthesisInstance(
        arena=arena, objectives=objectives, concept="nash", memory_bound=2))
    ok &= result is not None and result.certified
    report(2, "peer-to-peer tit-for-tat + synthesis", ok,
           time.monotonic() - t0, 10.0)


# -- 3. oracle equivalence for the boolean concepts -----------------------------


def test_criterion_3_oracle_equivalence():
    """Exact verdicts vs. budget-capped brute-force deviation enumeration.

    Instances whose brute-force search exhausts its step budget are skipped
    and replaced so that at least 200 full three-way comparisons happen; the
    memory-3 re-check runs wherever its own budget allows."""
    t0 = time.monotonic()
    rng = random.Random(1003)
    compared = 0
    disagreements = []
    bound3_checked = 0
    while compared < 200:
        arena = random_arena(rng, 3, 3, 2)
        profile = random_profile(rng, arena, 2)
        objectives = tuple(random_ltl(rng, ("p", "q"), 3)
                           for _ in range(arena.n_players))
        deviators = range(arena.n_players)
        exact = {
            "nash": check_nash(arena, objectives, profile, deviators).holds,
            "spe": check_spe(arena, objectives, profile, deviators).holds,
            "ds": check_dominant(arena, objectives, profile,
                                 deviators).holds,
        }
        try:
            brute2 = {
                "nash": oracle_check_nash(arena, objectives, profile,
                                          deviators, 2, budget=150000),
                "spe": oracle_check_spe(arena, objectives, profile,
                                        deviators, 2, 3, budget=150000),
                "ds": oracle_check_dominant(arena, objectives, profile,
                                            deviators, 2, budget=150000),
            }
        except RuntimeError:
            continue  # budget exhausted: replace the instance
        compared += 1
        for concept in exact:
            if exact[concept] != brute2[concept]:
                disagreements.append((concept, 2, exact[concept]))
        for concept, fn in (
                ("nash", lambda: oracle_check_nash(
                    arena, objectives, profile, deviators, 3, budget=60000)),
                ("spe", lambda: oracle_check_spe(
                    arena, objectives, profile, deviators, 3, 3,
                    budget=60000)),
                ("ds", lambda: oracle_check_dominant(
                    arena, objectives, profile, deviators, 3,
                    budget=60000))):
            try:
                brute3 = fn()
            except RuntimeError:
                continue
            bound3_checked += 1
            if brute3 != brute2[concept]:
                disagreements.append((concept, 3, brute3))
    ok = compared >= 200 and not disagreements and bound3_checked >= 400
    report(3, f"oracle equivalence ({compared} instances, "
              f"{bound3_checked} memory-3 re-checks)", ok,
           time.monotonic() - t0, 600.0)


# -- 4. LTL dual path ------------------------------------------------------------


def test_criterion_4_ltl_dual_path():
    t0 = time.monotonic()
    rng = random.Random(1004)
    bad = 0
    for _ in range(500):
        phi = random_ltl(rng, ("p", "q"), 3)
        word = random_lasso_word(rng, ("p", "q"))
        if eval_lasso(phi, word) != nbw_accepts_lasso(ltl_to_nbw(phi), word):
            bad += 1
    report(4, "LTL evaluation vs automaton route (500 pairs)", bad == 0,
           time.monotonic() - t0, 60.0)


# -- 5. history-marked tree automaton theorem ------------------------------------


def test_criterion_5_apt_base_theorem_and_compose():
    t0 = time.monotonic()
    rng = random.Random(1005)
    sigma = (frozenset(), frozenset({"a"}), frozenset({"a", "b"}))
    bad = 0
    for trial in range(100):
        tree, hist = random_history_tree(rng, sigma)
        psi = random_ltl(rng, ("a", "b"), 2)
        apt = apt_base(psi, sigma)
        got = apt_run_regular_tree(apt, tree)
        if got != history_tree_oracle(tree, psi, hist):
            bad += 1
            continue
        # composition algebra on the same corpus
        other = apt_base(random_ltl(rng, ("a", "b"), 2), sigma)
        r_other = apt_run_regular_tree(other, tree)
        comp = apt_compose("complement", [apt])
        if apt_run_regular_tree(comp, tree) != (not got):
            bad += 1
            continue
        union = apt_compose("union", [apt, other])
        if apt_run_regular_tree(union, tree) != (got or r_other):
            bad += 1
    report(5, "history-marked tree automaton theorem (100 pairs)", bad == 0,
           time.monotonic() - t0, 300.0)


# -- 6. latticed single-strategy theorem -----------------------------------------


def _independent_ensure(game, l):
    """Decide the simplified generalized-Buchi game with the classical
    recurrence-fixpoint solver on its counter degeneralization: an
    algorithm-independent completeness oracle covering arbitrary strategies
    (which subsumes brute force over memory up to the acceptance-family
    size)."""
    lat = game.lattice
    if l == lat.bottom:
        return True
    s = simplify_game(game, l)
    k = len(s.accept_family)
    nodes = tuple((v, j) for v in s.vertices for j in range(k))
    owner = {(v, j): 0 if v in s.vee else 1 for (v, j) in nodes}
    edges = {}
    targets = set()
    for v, j in nodes:
        hit = v in s.accept_family[j]
        nj = (j + 1) % k if hit else j
        edges[(v, j)] = tuple((w, nj) for w in s.edges[v])
        if hit and j == k - 1:
            targets.add((v, j))
    win = solve_buchi_classic(nodes, owner, edges, targets)
    return (s.initial, 0) in win


def test_criterion_6_latticed_single_strategy_theorem():
    t0 = time.monotonic()
    rng = random.Random(1006)
    bad = 0
    for _ in range(100):
        lat = random_lattice(rng)
        game = random_latticed_game(rng, lat, 4)
        size_bound = len(game.vertices) * len(lat.elements) ** 2
        for l in lat.elements:
            if l != lat.bottom:
                s = simplify_game(game, l)
                if len(s.vertices) > size_bound:
                    bad += 1
                if len(s.accept_family) != len(ji_below(lat, l)):
                    bad += 1
            ensured, strat = can_ensure(game, l)
            # soundness: the extracted witness certifies by product evaluation
            if ensured and strat is not None \
                    and certify_ensure(game, l, strat) != []:
                bad += 1
            # completeness: independent solver finds no missed strategy
            if ensured != _independent_ensure(game, l):
                bad += 1
    report(6, "latticed ensure-value theorem (100 games, every threshold)",
           bad == 0, time.monotonic() - t0, 900.0)


# -- 7. boolean degeneration ------------------------------------------------------


def test_criterion_7_boolean_degeneration():
    t0 = time.monotonic()
    lat = boolean2()
    rng = random.Random(1007)
    bad = 0
    # games: latticed solving vs the classical solver
    for _ in range(100):
        game = random_latticed_game(rng, lat, 4)
        accept = {v for v in game.vertices if game.accept[v] == lat.top}
        edges = {u: tuple(sorted(v for v in game.vertices
                                 if game.edge_value(u, v) == lat.top))
                 for u in game.vertices}
        owner = {v: 0 if v in game.vee else 1 for v in game.vertices}
        classical = game.initial in solve_buchi_classic(
            game.vertices, owner, edges, accept)
        if can_ensure(game, lat.top)[0] != classical:
            bad += 1
        # play values degenerate to cycle acceptance
        u, path = game.initial, [game.initial]
        for _ in range(8):
            u = rng.choice(sorted(game.successors(u)))
            path.append(u)
        first = path.index(path[-1])
        cycle = path[first:-1]
        if cycle:
            value = play_value(game, path[:first], cycle)
            hit = any(game.accept[v] == lat.top for v in cycle)
            if (value == lat.top) != hit:
                bad += 1
    # equilibrium checking: boolean automata payoffs vs LTL reachability
    for _ in range(100):
        arena = random_arena(rng, 3, 2, 2)
        letters = sorted({arena.letter(v, j) for v in arena.vertices
                          for j in arena.legal_joints(v)}, key=repr)
        def reach(prop):
            delta, tvalue = {}, {}
            for s in ("wait", "acc"):
                for letter in letters:
                    delta[(s, letter)] = "acc" if (s == "acc" or
                                                   prop in letter) else "wait"
                    tvalue[(s, letter)] = lat.top
            return Ldbw(lattice=lat, states=("wait", "acc"), initial="wait",
                        delta=delta, tvalue=tvalue,
                        accept={"wait": lat.bottom, "acc": lat.top})
        props = [rng.choice(("p", "q")) for _ in range(arena.n_players)]
        automata = tuple(reach(p) for p in props)
        formulas = tuple(parse(f"F {p}") for p in props)
        profile = random_profile(rng, arena, 2)
        deviators = range(arena.n_players)
        latticed = check_latticed_nash(arena, automata, profile, deviators)
        boolean = check_nash(arena, formulas, profile, deviators)
        if latticed.holds != boolean.holds:
            bad += 1
        payoffs = tuple(p == lat.top for p in latticed.payoffs)
        direct = tuple(agent_payoff(arena, profile, f) for f in formulas)
        if payoffs != direct:
            bad += 1
    report(7, "boolean degeneration (200 instances)", bad == 0,
           time.monotonic() - t0, 600.0)


# -- 8. golden solution formulas ---------------------------------------------------


def test_criterion_8_solution_formula_golden():
    t0 = time.monotonic()
    objectives = (parse("p0"), parse("p1"), parse("p2"))
    golden = {
        "ds": "(forall z1:1. forall z2:2. ([p1](y0,z1,z2) -> [p1](y0,y1,z2))"
              " & forall z1:1. forall z2:2. "
              "([p2](y0,z1,z2) -> [p2](y0,z1,y2)))",
        "nash": "(forall z1:1. ([p1](y0,z1,y2) -> [p1](y0,y1,y2))"
                " & forall z2:2. ([p2](y0,y1,z2) -> [p2](y0,y1,y2)))",
        "spe": "forall h. (forall z1:1. "
               "([p1](y0,z1,y2; h) -> [p1](y0,y1,y2; h))"
               " & forall z2:2. ([p2](y0,y1,z2; h) -> [p2](y0,y1,y2; h)))",
    }
    ok = True
    for gamma, want in golden.items():
        psi, phi = build_solution_formula(gamma, objectives)
        ok &= pretty(psi) == want
        ok &= alternation_depth(phi) == 1
    report(8, "golden solution formulas, alternation depth 1", ok,
           time.monotonic() - t0, 10.0)


# -- 9. figure-1 regression under the recurring reading -----------------------------


def test_criterion_9_fig1_recurring_reading_regression():
    """Frozen verdicts for the infinitely-often objective reading.  They
    differ from the reach-once reading (the dashed profile becomes
    subgame-perfect and no single action is dominant), which is exactly why
    they are pinned: the objective reading is part of the claim."""
    t0 = time.monotonic()
    arena = load_fixture("fig1")
    objectives = load_fixture("fig1-GF")
    dotted = load_fixture("fig1-dotted")
    dashed = load_fixture("fig1-dashed")
    golden = {
        ("dotted", "nash"): True, ("dotted", "spe"): True,
        ("dashed", "nash"): True, ("dashed", "spe"): True,
    }
    ok = True
    for name, profile in (("dotted", dotted), ("dashed", dashed)):
        ok &= check_nash(arena, objectives, profile).holds == \
            golden[(name, "nash")]
        ok &= check_spe(arena, objectives, profile).holds == \
            golden[(name, "spe")]
    golden_dominant = {(0, "n0", "a1"): False, (0, "n0", "a2"): False,
                       (1, "n2", "b1"): False, (1, "n2", "b2"): False,
                       (2, "n1", "c1"): False, (2, "n1", "c2"): False}
    for (i, vertex, act), want in golden_dominant.items():
        profile = dotted.replace(
            i, positional_strategy(arena, i, {vertex: act}))
        ok &= check_dominant(arena, objectives, profile, [i]).holds == want
    report(9, "figure-1 recurring-reading regression", ok,
           time.monotonic() - t0, 10.0)
