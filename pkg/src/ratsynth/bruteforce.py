"""Bounded brute-force enumeration oracles.

These are deliberately naive cross-checks for the exact procedures in
:mod:`ratsynth.equilibria`: they quantify over finite-memory strategies up to
an explicit latent-state bound by demand-driven DFS over machine tables,
branching only at (state, input) points actually reached by the play being
simulated.  Latent states are allocated in first-use order so isomorphic
machines are enumerated once.
"""

from __future__ import annotations

from itertools import product as iproduct

from .arena import Arena, History, Lasso, Position, action_key
from .ltl import eval_lasso
from .strategy import Profile, Strategy, advance_through, latent_strategy


def all_latent_controllers(arena: Arena, owner: int, max_latent: int):
    """Yield all latent-state controllers of the owner, smallest first.

    For vertex-input arenas a controller is a pair of tables over
    (latent, vertex): the action chosen at the vertex and the next latent
    state; it compiles to a Mealy strategy with memory latent x vertex.  For
    action-input (variable) arenas the controller is a Mealy machine over
    joint actions directly.  Only use on small instances.
    """
    if arena.variable_based:
        yield from _all_action_controllers(arena, owner, max_latent)
        return
    for m in range(1, max_latent + 1):
        points = [(l, v) for l in range(m) for v in arena.vertices]
        act_choices = [sorted(arena.available_actions(owner, v), key=action_key)
                       for (_, v) in points]
        upd_choices = [list(range(m))] * len(points)
        for acts in iproduct(*act_choices):
            for upds in iproduct(*upd_choices):
                if m > 1 and not _uses_all_latents(points, upds, m):
                    continue
                choice = {p: a for p, a in zip(points, acts)}
                latent_update = {p: u for p, u in zip(points, upds)}
                yield latent_strategy(arena, owner, m, latent_update, choice)


def _uses_all_latents(points, upds, m):
    return set(upds) | {0} >= set(range(m))


def _all_action_controllers(arena: Arena, owner: int, max_latent: int):
    joints = [tuple(t) for t in iproduct(*[sorted(acts, key=action_key)
                                           for acts in arena.actions])]
    acts = sorted(arena.actions[owner], key=action_key)
    for m in range(1, max_latent + 1):
        states = tuple(range(m))
        for outs in iproduct(acts, repeat=m):
            for upds in iproduct(states, repeat=m * len(joints)):
                if m > 1 and set(upds) | {0} < set(states):
                    continue
                update = {}
                k = 0
                for s in states:
                    for t in joints:
                        update[(s, t)] = upds[k]
                        k += 1
                output = {s: outs[s] for s in states}
                yield Strategy(owner=owner, memory=states, initial_memory=0,
                               update=update, output=output,
                               input_kind="actions")


class _Budget:
    def __init__(self, limit):
        self.left = limit

    def spend(self):
        if self.left is not None:
            self.left -= 1
            if self.left < 0:
                raise RuntimeError("brute-force search budget exhausted")


def oracle_deviation_exists(arena: Arena, profile: Profile, deviator: int,
                            objective, max_latent: int,
                            history: History | None = None,
                            budget: int | None = None) -> bool:
    """Does some deviator strategy with at most ``max_latent`` latent states
    satisfy the objective against the rest of the profile (after ``history``)?

    Demand-driven DFS over the deviator's machine tables: the play under a
    partial table is simulated until it either folds into a lasso (evaluate)
    or reaches an unassigned (latent, input) point (branch on its entries,
    allocating fresh latent states in canonical order).
    """
    guard = _Budget(budget)
    if history is None:
        history = History((arena.initial,), ())
    vertex_input = not arena.variable_based
    hist_joints = history.realize_joints(arena)
    others0 = advance_through(arena, profile, history)
    hist_positions = tuple(Position(history.vertices[k], hist_joints[k])
                           for k in range(len(hist_joints)))

    def dev_input(vertex, joint):
        return vertex if vertex_input else tuple(joint)

    def branch_update(assign, used, key):
        """Branch on a memory-update entry, allocating latent states in
        first-use order (at most one fresh state per branch point)."""
        for nl in range(min(used + 1, max_latent)):
            assign2 = dict(assign)
            assign2[key] = nl
            if run(assign2, max(used, nl + 1)):
                return True
        return False

    def run(assign, used):
        """Simulate under a partial table; branch at unassigned entries."""
        guard.spend()
        # advance the deviator's memory through the history (vertex inputs
        # consume the history's vertices; action inputs consume its joints)
        dl = 0
        for hv, hj in zip(history.vertices[:-1], hist_joints):
            key = ("upd", dl, dev_input(hv, hj))
            if key not in assign:
                return branch_update(assign, used, key)
            dl = assign[key]

        v = history.last
        others = list(others0)
        seen = {}
        positions = []
        while True:
            key = ("act", dl, v) if vertex_input else ("act", dl)
            if key not in assign:
                for a in sorted(arena.available_actions(deviator, v),
                                key=action_key):
                    assign2 = dict(assign)
                    assign2[key] = a
                    if run(assign2, used):
                        return True
                return False
            a = assign[key]
            joint = tuple(profile[j].act(others[j], v) if j != deviator else a
                          for j in range(arena.n_players))
            config = (dl, tuple(x for j, x in enumerate(others)
                                if j != deviator), v)
            if config in seen:
                k = seen[config]
                lasso = Lasso(hist_positions + tuple(positions[:k]),
                              tuple(positions[k:]))
                return eval_lasso(objective, lasso.word(arena))
            seen[config] = len(positions)
            positions.append(Position(v, joint))
            ukey = ("upd", dl, dev_input(v, joint))
            if ukey not in assign:
                return branch_update(assign, used, ukey)
            others = [profile[j].advance(others[j], v, joint)
                      if j != deviator else None
                      for j in range(arena.n_players)]
            v = arena.delta[(v, joint)]
            dl = assign[ukey]

    return run({}, 1)


def oracle_check_nash(arena, objectives, profile, deviators, max_latent,
                      budget=None):
    """Nash verdict by bounded deviator enumeration (may miss deviations that
    need more memory — sound for violations, incomplete for holdings)."""
    from .equilibria import agent_payoff
    for i in sorted(deviators):
        if agent_payoff(arena, profile, objectives[i]):
            continue
        if oracle_deviation_exists(arena, profile, i, objectives[i],
                                   max_latent, budget=budget):
            return False
    return True


def all_histories(arena: Arena, max_len: int):
    """All delta-consistent histories with at most ``max_len`` vertices."""
    out = [History((arena.initial,), ())]
    frontier = out[:]
    while frontier:
        nxt = []
        for h in frontier:
            if len(h) >= max_len:
                continue
            for t in arena.legal_joints(h.last):
                w = arena.delta[(h.last, t)]
                h2 = History(h.vertices + (w,), h.joints + (t,))
                out.append(h2)
                nxt.append(h2)
        frontier = nxt
    return out


def oracle_check_spe(arena, objectives, profile, deviators, max_latent,
                     max_history, budget=None):
    from .ltl import eval_lasso as ev
    from .strategy import shifted_outcome
    for h in all_histories(arena, max_history):
        for i in sorted(deviators):
            if ev(objectives[i], shifted_outcome(arena, profile, h).word(arena)):
                continue
            if oracle_deviation_exists(arena, profile, i, objectives[i],
                                       max_latent, history=h, budget=budget):
                return False
    return True


def oracle_check_dominant(arena, objectives, profile, deviators, max_latent,
                          budget=None):
    """Dominance by joint enumeration of full alternative profiles.

    Player i's strategy fails iff some profile of bounded machines for all
    players yields a play satisfying the objective while replacing player i's
    machine with its profile strategy yields one violating it.  The two plays
    are simulated against partial tables in one DFS.
    """
    for i in sorted(deviators):
        if _dominance_counterexample(arena, objectives[i], profile, i,
                                     max_latent, budget):
            return False
    return True


def _dominance_counterexample(arena, objective, profile, i, max_latent,
                              budget=None):
    guard = _Budget(budget)
    vertex_input = not arena.variable_based
    n = arena.n_players

    def dev_input(vertex, joint):
        return vertex if vertex_input else tuple(joint)

    def act_key_of(j, lat, v):
        return ("act", j, lat, v) if vertex_input else ("act", j, lat)

    def simulate(assign, play_kind):
        """Run one play; returns ('done', bool-word-satisfies) or
        ('need', key, options)."""
        guard.spend()
        lat = [0] * n  # latent state per player (alternative machines)
        mem_i = profile[i].initial_memory  # play B: player i adheres
        v = arena.initial
        seen = {}
        positions = []
        while True:
            joint = []
            for j in range(n):
                if j == i and play_kind == "B":
                    joint.append(profile[i].act(mem_i, v))
                    continue
                key = act_key_of(j, lat[j], v)
                got = assign.get(key)
                if got is None:
                    opts = [(a,) for a in
                            sorted(arena.available_actions(j, v), key=action_key)]
                    return ("need", key, opts)
                joint.append(got[0])
            joint = tuple(joint)
            config = (tuple(lat), mem_i if play_kind == "B" else None, v)
            if config in seen:
                k = seen[config]
                lasso = Lasso(tuple(positions[:k]), tuple(positions[k:]))
                return ("done", eval_lasso(objective, lasso.word(arena)))
            seen[config] = len(positions)
            positions.append(Position(v, joint))
            inp = dev_input(v, joint)
            for j in range(n):
                if j == i and play_kind == "B":
                    continue
                key = ("upd", j, lat[j], inp)
                got = assign.get(key)
                if got is None:
                    used = assign.get(("used", j), 1)
                    opts = [(nl,) for nl in range(min(used + 1, max_latent))]
                    return ("need", key, opts)
            new_lat = list(lat)
            for j in range(n):
                if j == i and play_kind == "B":
                    continue
                new_lat[j] = assign[("upd", j, lat[j], inp)][0]
            if play_kind == "B":
                mem_i = profile[i].advance(mem_i, v, joint)
            lat = new_lat
            v = arena.delta[(v, joint)]

    def search(assign):
        ra = simulate(assign, "A")
        if ra[0] == "need":
            return expand(assign, ra[1], ra[2])
        if not ra[1]:
            return False  # play A must satisfy the objective
        rb = simulate(assign, "B")
        if rb[0] == "need":
            return expand(assign, rb[1], rb[2])
        return not rb[1]  # play B must violate it

    def expand(assign, key, opts):
        for opt in opts:
            assign2 = dict(assign)
            assign2[key] = opt
            if key[0] == "upd":
                j = key[1]
                used = assign.get(("used", j), 1)
                assign2[("used", j)] = max(used, opt[0] + 1)
            if search(assign2):
                return True
        return False

    return search({})
