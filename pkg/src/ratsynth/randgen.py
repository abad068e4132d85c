"""Seeded random-instance generators for cross-checking the exact
algorithms against brute-force oracles.

Everything takes an explicit ``random.Random`` so that test runs and the
command-line cross-check driver are reproducible from a seed.
"""

from __future__ import annotations

import random

from .apt import RegularTree
from .arena import Arena
from .lattice import Lattice, boolean2, chain3, diamond, powerset
from .latticed import LatticedGame, Ldbw
from .ltl import (And, Atom, Ff, LassoWord, LtlFormula, Next, Not, Or,
                  Release, Tt, Until, eval_lasso)
from .strategy import Profile, Strategy, latent_strategy

# -- LTL and lasso words -------------------------------------------------------


def random_ltl(rng: random.Random, props, depth: int) -> LtlFormula:
    props = list(props)
    if depth <= 0:
        return rng.choice([Atom(rng.choice(props)), Tt(), Ff()])
    kind = rng.randrange(6)
    a = random_ltl(rng, props, depth - 1)
    if kind == 0:
        return Not(a)
    if kind == 1:
        return Next(a)
    b = random_ltl(rng, props, depth - 1)
    if kind == 2:
        return And(a, b)
    if kind == 3:
        return Or(a, b)
    if kind == 4:
        return Until(a, b)
    return Release(a, b)


def random_lasso_word(rng: random.Random, props,
                      max_prefix: int = 3, max_cycle: int = 3) -> LassoWord:
    props = list(props)

    def letter():
        return frozenset(p for p in props if rng.random() < 0.5)

    prefix = tuple(letter() for _ in range(rng.randrange(max_prefix + 1)))
    cycle = tuple(letter() for _ in range(1, rng.randrange(1, max_cycle + 1) + 1))
    return LassoWord(prefix, cycle)


# -- arenas, strategies, profiles ----------------------------------------------


def random_arena(rng: random.Random, max_vertices: int = 3,
                 max_players: int = 3, max_actions: int = 2) -> Arena:
    n_v = rng.randrange(1, max_vertices + 1)
    n_p = rng.randrange(1, max_players + 1)
    vertices = tuple(f"v{i}" for i in range(n_v))
    actions = tuple(
        tuple(f"p{j}a{k}" for k in range(rng.randrange(1, max_actions + 1)))
        for j in range(n_p))
    available = {}
    for j in range(n_p):
        for v in vertices:
            n_avail = rng.randrange(1, len(actions[j]) + 1)
            available[(j, v)] = tuple(rng.sample(actions[j], n_avail))
    delta = {}

    def joints(v):
        out = [()]
        for j in range(n_p):
            out = [t + (a,) for t in out for a in available[(j, v)]]
        return out

    for v in vertices:
        for joint in joints(v):
            delta[(v, joint)] = rng.choice(vertices)
    props = ("p", "q")
    labels = {v: frozenset(x for x in props if rng.random() < 0.5)
              for v in vertices}
    return Arena(name="random", vertices=vertices, initial=vertices[0],
                 n_players=n_p, actions=actions, available=available,
                 delta=delta, labels=labels, props=frozenset(props))


def random_strategy(rng: random.Random, arena: Arena, owner: int,
                    memory: int) -> Strategy:
    m = rng.randrange(1, memory + 1)
    latent_update = {}
    choice = {}
    for l in range(m):
        for v in arena.vertices:
            latent_update[(l, v)] = rng.randrange(m)
            choice[(l, v)] = rng.choice(
                sorted(arena.available_actions(owner, v)))
    return latent_strategy(arena, owner, m, latent_update, choice)


def random_profile(rng: random.Random, arena: Arena, memory: int) -> Profile:
    return Profile(tuple(random_strategy(rng, arena, j, memory)
                         for j in range(arena.n_players)))


# -- strategy-history trees ----------------------------------------------------


def random_history_tree(rng: random.Random, sigma):
    """A regular tree over the marked alphabet whose marks trace one finite
    history path from the root; returns (tree, history directions)."""
    sigma = tuple(sigma)
    hist_len = rng.randrange(0, 4)
    n_off = rng.randrange(1, 4)
    offs = [("o", i) for i in range(n_off)]
    hs = [("h", i) for i in range(hist_len + 1)]
    label, succ = {}, {}
    hist_dirs = [rng.choice(sigma) for _ in range(hist_len)]
    for i, h in enumerate(hs):
        label[h] = (rng.choice(sigma), True)
        for d in sigma:
            if i < hist_len and d == hist_dirs[i]:
                succ[(h, d)] = hs[i + 1]
            else:
                succ[(h, d)] = rng.choice(offs)
    for o in offs:
        label[o] = (rng.choice(sigma), False)
        for d in sigma:
            succ[(o, d)] = rng.choice(offs)
    tree = RegularTree(tuple(hs + offs), hs[0], succ, label)
    return tree, hist_dirs


def history_tree_oracle(tree: RegularTree, psi: LtlFormula,
                        hist_dirs) -> bool:
    """Direct semantics: some marked prefix has an obedient continuation
    (always following the advised letter) whose word satisfies psi."""
    for k in range(len(hist_dirs) + 1):
        w = hist_dirs[:k]
        t = tree.initial
        for d in w:
            t = tree.succ[(t, d)]
        letters = list(w)
        seen = {}
        while t not in seen:
            seen[t] = len(letters)
            advised = tree.label[t][0]
            letters.append(advised)
            t = tree.succ[(t, advised)]
        cyc = seen[t]
        word = LassoWord(tuple(letters[:cyc]), tuple(letters[cyc:]))
        if eval_lasso(psi, word):
            return True
    return False


# -- latticed games and automata -----------------------------------------------

LATTICE_MENU = (boolean2, chain3, diamond, lambda: powerset("xyz"))


def random_lattice(rng: random.Random) -> Lattice:
    return rng.choice(LATTICE_MENU)()


def random_latticed_game(rng: random.Random, lat: Lattice,
                         max_vertices: int = 4) -> LatticedGame:
    n_v = rng.randrange(1, max_vertices + 1)
    vertices = tuple(f"g{i}" for i in range(n_v))
    vee = frozenset(v for v in vertices if rng.random() < 0.5)
    nontrivial = [e for e in lat.elements if e != lat.bottom]
    edges = {}
    for u in vertices:
        succs = rng.sample(vertices, rng.randrange(1, n_v + 1))
        for v in succs:
            edges[(u, v)] = rng.choice(nontrivial)
    accept = {v: rng.choice(lat.elements) for v in vertices}
    return LatticedGame(lattice=lat, vertices=vertices, vee=vee,
                        initial=vertices[0], edges=edges, accept=accept)


def random_ldbw(rng: random.Random, lat: Lattice, letters,
                max_states: int = 3) -> Ldbw:
    letters = tuple(letters)
    n = rng.randrange(1, max_states + 1)
    states = tuple(f"q{i}" for i in range(n))
    nontrivial = [e for e in lat.elements if e != lat.bottom]
    delta, tvalue = {}, {}
    for q in states:
        for letter in letters:
            delta[(q, letter)] = rng.choice(states)
            tvalue[(q, letter)] = rng.choice(nontrivial)
    accept = {q: rng.choice(lat.elements) for q in states}
    return Ldbw(lattice=lat, states=states, initial=states[0], delta=delta,
                tvalue=tvalue, accept=accept)
