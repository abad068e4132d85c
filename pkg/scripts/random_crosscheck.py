#!/usr/bin/env python3
"""Randomized cross-checks of the exact algorithms against brute force.

Four independent checks, all seeded and reproducible:
  ltl      eval_lasso vs. the Buchi-automaton route
  equil    check_nash / check_spe / check_dominant vs. exhaustive deviation
           search with bounded memory
  apt      tree-automaton membership for the history-marked construction
           vs. direct path-extraction semantics
  lattice  latticed operations on the 2-element lattice vs. their classical
           counterparts

Exits nonzero on the first disagreement.
"""

import argparse
import random
import sys
import time

from ratsynth.apt import apt_base, apt_run_regular_tree
from ratsynth.boolgames import solve_buchi_classic
from ratsynth.bruteforce import (oracle_check_dominant, oracle_check_nash,
                                 oracle_check_spe)
from ratsynth.buchi import ltl_to_nbw, nbw_accepts_lasso
from ratsynth.equilibria import check_dominant, check_nash, check_spe
from ratsynth.lattice import boolean2
from ratsynth.latticed import can_ensure
from ratsynth.ltl import eval_lasso
from ratsynth.randgen import (history_tree_oracle, random_arena,
                              random_history_tree, random_lasso_word,
                              random_latticed_game, random_ltl,
                              random_profile)

CHECKS = ("ltl", "equil", "apt", "lattice")


def check_ltl(rng, trials):
    for t in range(trials):
        phi = random_ltl(rng, ("p", "q"), 3)
        word = random_lasso_word(rng, ("p", "q"))
        direct = eval_lasso(phi, word)
        via_nbw = nbw_accepts_lasso(ltl_to_nbw(phi), word)
        if direct != via_nbw:
            return f"trial {t}: {phi} on {word}: {direct} vs {via_nbw}"
    return None


def check_equil(rng, trials):
    for t in range(trials):
        arena = random_arena(rng)
        profile = random_profile(rng, arena, 2)
        objectives = tuple(random_ltl(rng, ("p", "q"), 2)
                           for _ in range(arena.n_players))
        deviators = range(arena.n_players)
        for name, exact, want in (
                ("nash", check_nash,
                 oracle_check_nash(arena, objectives, profile, deviators, 2)),
                ("spe", check_spe,
                 oracle_check_spe(arena, objectives, profile, deviators,
                                  2, 4)),
                ("ds", check_dominant,
                 oracle_check_dominant(arena, objectives, profile,
                                       deviators, 2))):
            got = exact(arena, objectives, profile).holds
            if got != want:
                return f"trial {t} ({name}): exact {got}, brute force {want}"
    return None


def check_apt(rng, trials):
    sigma = (frozenset(), frozenset({"a"}), frozenset({"a", "b"}))
    for t in range(trials):
        tree, hist = random_history_tree(rng, sigma)
        psi = random_ltl(rng, ("a", "b"), 2)
        got = apt_run_regular_tree(apt_base(psi, sigma), tree)
        want = history_tree_oracle(tree, psi, hist)
        if got != want:
            return f"trial {t}: {psi}: automaton {got}, direct {want}"
    return None


def check_lattice(rng, trials):
    lat = boolean2()
    for t in range(trials):
        game = random_latticed_game(rng, lat)
        accept = frozenset(v for v in game.vertices
                           if game.accept[v] == lat.top)
        edges = {u: tuple(sorted(v for v in game.vertices
                                 if game.edge_value(u, v) == lat.top))
                 for u in game.vertices}
        classical = game.initial in solve_buchi_classic(
            nodes=game.vertices,
            owner={v: 0 if v in game.vee else 1 for v in game.vertices},
            edges=edges, targets=accept)
        latticed, _ = can_ensure(game, lat.top)
        if latticed != classical:
            return f"trial {t}: latticed {latticed}, classical {classical}"
    return None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=50,
                        help="trials per check")
    parser.add_argument("--checks", nargs="+", choices=CHECKS,
                        default=list(CHECKS))
    args = parser.parse_args()
    failed = False
    for name in args.checks:
        rng = random.Random(args.seed)
        fn = globals()[f"check_{name}"]
        t0 = time.time()
        problem = fn(rng, args.trials)
        dt = time.time() - t0
        if problem is None:
            print(f"{name}: {args.trials} trials agree ({dt:.1f}s)")
        else:
            print(f"{name}: DISAGREEMENT {problem}")
            failed = True
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
