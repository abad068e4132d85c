"""Lattice-valued Buchi games and latticed Nash verification.

A latticed game annotates edges and vertices with elements of a finite
distributive De Morgan lattice; the value of a play combines the acceptance
values recurring along it with the values the two players relinquished while
moving.  Deciding whether the maximizing player can ensure a value with one
strategy reduces to a Boolean generalized-Buchi game over the original
vertices paired with the two relinquishment trackers.  Agent payoffs are
given by deterministic latticed Buchi word automata, and Nash checking
decomposes payoff comparisons into join-irreducible elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arena import Arena, Lasso, Position, action_key
from .boolgames import GenBuchiGame, solve_generalized_buchi
from .lattice import Lattice, join_irreducibles, ji_below
from .ltl import LassoWord
from .strategy import Profile, outcome


class LatticedError(ValueError):
    pass


@dataclass(frozen=True)
class LatticedGame:
    """Two-player turn-based game with lattice-valued edges and acceptance.

    ``vee`` holds the maximizing player's vertices; the rest belong to the
    minimizing player.  An absent or bottom-valued edge does not exist.
    """

    lattice: Lattice
    vertices: tuple
    vee: frozenset
    initial: object
    edges: dict  # (u, v) -> lattice element
    accept: dict  # vertex -> lattice element

    def edge_value(self, u, v):
        return self.edges.get((u, v), self.lattice.bottom)

    def successors(self, u) -> tuple:
        return tuple(v for v in self.vertices
                     if self.edge_value(u, v) != self.lattice.bottom)

    def validate(self) -> None:
        if self.initial not in self.vertices:
            raise LatticedError("initial vertex not in the game")
        for u in self.vertices:
            if u not in self.accept:
                raise LatticedError(f"vertex {u!r} has no acceptance value")
            if not self.successors(u):
                raise LatticedError(f"vertex {u!r} has no outgoing edge")


def _step_trackers(game: LatticedGame, u, x, y, v) -> tuple:
    """One tracker update: moving from u to v, the mover may relinquish
    value.  The maximizer taking a low-valued edge caps what it can still
    claim (x falls to the edge value, except for what the minimizer already
    relinquished); the minimizer taking a low-valued edge only contests the
    play up to that value and relinquishes the De Morgan complement (a
    full-valued minimizer move relinquishes nothing, which is what makes the
    two-element lattice degenerate to a classical Buchi game)."""
    lat = game.lattice
    e = game.edge_value(u, v)
    if e == lat.bottom:
        raise LatticedError(f"no edge from {u!r} to {v!r}")
    if u in game.vee:
        return lat.meet(x, lat.join(e, y)), y
    return x, lat.join(y, lat.meet(lat.neg(e), x))


def play_value(game: LatticedGame, prefix, cycle):
    """Value of the lasso play prefix.(cycle)^omega.

    The trackers stabilize (x never increases, y never decreases over a
    finite lattice); the value is the join of the join-irreducible elements
    x such that either the minimizer relinquished x (limit y >= x) or the
    maximizer kept x while acceptance values >= x recur.
    """
    lat = game.lattice
    prefix = tuple(prefix)
    cycle = tuple(cycle)
    if not cycle:
        raise LatticedError("a lasso play needs a nonempty cycle")
    x, y = lat.top, lat.bottom
    seq = prefix + cycle
    for i in range(len(seq)):
        nxt = cycle[0] if i == len(seq) - 1 else seq[i + 1]
        x, y = _step_trackers(game, seq[i], x, y, nxt)
    # iterate the cycle until the trackers stabilize
    while True:
        x0, y0 = x, y
        for i in range(len(cycle)):
            nxt = cycle[(i + 1) % len(cycle)]
            x, y = _step_trackers(game, cycle[i], x, y, nxt)
        if (x, y) == (x0, y0):
            break
    recurring = lat.join_all(game.accept[u] for u in cycle)
    value_parts = []
    for j in sorted(join_irreducibles(lat)):
        if lat.leq(j, y) or (lat.leq(j, x) and lat.leq(j, recurring)):
            value_parts.append(j)
    return lat.join_all(value_parts) if value_parts else lat.bottom


@dataclass(frozen=True)
class SimplifiedGame:
    """Boolean generalized-Buchi game over (vertex, x-tracker, y-tracker)."""

    game: LatticedGame
    threshold: object
    vertices: tuple  # reachable triples (u, x, y)
    initial: tuple
    vee: frozenset
    edges: dict  # triple -> tuple of successor triples
    accept_family: tuple  # one frozenset per join irreducible below threshold
    elements: tuple  # the join irreducibles, aligned with accept_family


def simplify_game(game: LatticedGame, l) -> SimplifiedGame:
    """The Boolean game whose winner decides whether the maximizer can
    ensure value >= l with a single strategy.

    States pair a game vertex with the two relinquishment trackers; for each
    join-irreducible x <= l the acceptance set F_x holds the states where
    the minimizer relinquished x (y >= x) or the acceptance value covers x
    and the maximizer has not relinquished it (F(u) >= x and x-tracker >= x).
    """
    lat = game.lattice
    game.validate()
    init = (game.initial, lat.top, lat.bottom)
    edges = {}
    frontier = [init]
    seen = {init}
    while frontier:
        node = frontier.pop()
        u, x, y = node
        succs = []
        for v in game.successors(u):
            x2, y2 = _step_trackers(game, u, x, y, v)
            nxt = (v, x2, y2)
            succs.append(nxt)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
        edges[node] = tuple(succs)
    vertices = tuple(sorted(seen, key=repr))
    xs = sorted(ji_below(lat, l))
    family = []
    for xel in xs:
        fx = frozenset(
            (u, a, b) for (u, a, b) in vertices
            if lat.leq(xel, b)
            or (lat.leq(xel, game.accept[u]) and lat.leq(xel, a)))
        family.append(fx)
    return SimplifiedGame(
        game=game, threshold=l, vertices=vertices, initial=init,
        vee=frozenset(v for v in vertices if v[0] in game.vee),
        edges=edges, accept_family=tuple(family), elements=tuple(xs))


@dataclass(frozen=True)
class EnsureStrategy:
    """Finite-memory maximizer strategy pulled back from the simplified
    game: memory holds the current tracker pair and the awaited-set index."""

    game: LatticedGame
    threshold: object
    initial_state: tuple  # ((u, x, y), mem)
    moves: dict  # ((u, x, y), mem) -> ((u', x', y'), mem') on vee vertices
    memory_next: dict  # ((u, x, y), mem) -> mem'

    def advise(self, state):
        """The successor vertex chosen at a maximizer-owned state."""
        (triple, mem) = state
        nxt = self.moves.get((triple, mem))
        if nxt is None:
            raise LatticedError(f"no move recorded at {state!r}")
        return nxt[0][0]

    def advance(self, state, v):
        """Next strategy state after the play moves to vertex ``v``."""
        (triple, mem) = state
        u, x, y = triple
        x2, y2 = _step_trackers(self.game, u, x, y, v)
        mem2 = self.memory_next[(triple, mem)]
        return ((v, x2, y2), mem2)


def can_ensure(game: LatticedGame, l):
    """Whether the maximizer has one strategy guaranteeing value >= l; on
    success the certified finite-memory witness strategy is returned."""
    lat = game.lattice
    if not ji_below(lat, l):  # l is bottom: vacuously ensured, no witness
        game.validate()
        return True, None
    simp = simplify_game(game, l)
    gb = GenBuchiGame(nodes=simp.vertices,
                      owner={v: 0 if v in simp.vee else 1
                             for v in simp.vertices},
                      edges=simp.edges,
                      accept_family=simp.accept_family)
    sol = solve_generalized_buchi(gb)
    if simp.initial not in sol.player0_wins:
        return False, None
    strat = EnsureStrategy(game=game, threshold=l,
                           initial_state=(simp.initial, 0),
                           moves=dict(sol.moves),
                           memory_next=dict(sol.memory_next))
    issues = certify_ensure(game, l, strat)
    if issues:
        raise LatticedError(f"internal error: witness fails: {issues[0]}")
    return True, strat


def certify_ensure(game: LatticedGame, l, strat: EnsureStrategy) -> list:
    """Exhaustive product check that a strategy ensures value >= l: in the
    strategy-vs-game product no reachable cycle may avoid any F_x set."""
    lat = game.lattice
    xs = sorted(ji_below(lat, l))
    nodes = set()
    edges = {}
    frontier = [strat.initial_state]
    nodes.add(strat.initial_state)
    while frontier:
        state = frontier.pop()
        (triple, mem) = state
        u = triple[0]
        succ_vertices = ([strat.advise(state)] if u in game.vee
                         else list(game.successors(u)))
        nexts = []
        for v in succ_vertices:
            nstate = strat.advance(state, v)
            nexts.append(nstate)
            if nstate not in nodes:
                nodes.add(nstate)
                frontier.append(nstate)
        edges[state] = tuple(nexts)
    issues = []
    for xel in xs:
        good = {s for s in nodes
                if lat.leq(xel, s[0][2])
                or (lat.leq(xel, game.accept[s[0][0]])
                    and lat.leq(xel, s[0][1]))}
        if _has_cycle_avoiding(nodes, edges, good):
            issues.append(f"a consistent play avoids the accept set of "
                          f"{xel!r}")
    return issues


def _has_cycle_avoiding(nodes, edges, good) -> bool:
    """Is there a cycle within nodes \\ good (reachability within the
    product is already guaranteed by construction)?"""
    rest = set(nodes) - set(good)
    # iteratively strip vertices without successors inside the candidate set
    changed = True
    while changed and rest:
        changed = False
        for v in list(rest):
            if not any(w in rest for w in edges.get(v, ())):
                rest.discard(v)
                changed = True
    return bool(rest)


def achievable_values(game: LatticedGame) -> tuple:
    """The maximal lattice elements the maximizer can ensure with a single
    strategy.  The ensurable set is downward closed but not closed under
    join, so the full antichain is reported rather than a single value."""
    lat = game.lattice
    ensurable = [l for l in lat.elements if can_ensure(game, l)[0]]
    maximal = [l for l in ensurable
               if not any(m != l and lat.leq(l, m) for m in ensurable)]
    return tuple(sorted(maximal))


# -- deterministic latticed Buchi word automata ---------------------------------


@dataclass(frozen=True)
class Ldbw:
    """Deterministic word automaton with lattice-valued transitions and
    acceptance; the payoff of a word is the meet of the traversed transition
    values joined over the acceptance values recurring along the run."""

    lattice: Lattice
    states: tuple
    initial: object
    delta: dict  # (state, letter) -> state
    tvalue: dict  # (state, letter) -> lattice element
    accept: dict  # state -> lattice element

    def step(self, q, letter):
        key = (q, letter)
        if key not in self.delta:
            raise LatticedError(f"no transition at {key!r}")
        return self.delta[key], self.tvalue.get(key, self.lattice.top)


def ldbw_payoff(aut: Ldbw, word: LassoWord):
    """Run the automaton on the lasso word and combine the values: the meet
    of every transition value taken, met with the join of the acceptance
    values of the states visited infinitely often."""
    lat = aut.lattice
    q = aut.initial
    meet_val = lat.top
    for a in word.prefix:
        q, tv = aut.step(q, a)
        meet_val = lat.meet(meet_val, tv)
    # iterate the cycle until the automaton state recurs at its start
    seen = {q: 0}
    cycle_states = [q]
    while True:
        for a in word.cycle:
            q, tv = aut.step(q, a)
            meet_val = lat.meet(meet_val, tv)
        if q in seen:
            k = seen[q]
            recurring = cycle_states[k:]
            break
        seen[q] = len(cycle_states)
        cycle_states.append(q)
    rec_states = set(recurring)
    for start in recurring:
        p = start
        for a in word.cycle:
            rec_states.add(p)
            p, _ = aut.step(p, a)
    rec_val = lat.join_all(aut.accept[s] for s in rec_states)
    return lat.meet(meet_val, rec_val)


# -- latticed Nash checking ------------------------------------------------------


@dataclass(frozen=True)
class LatticedNashVerdict:
    holds: bool
    payoffs: tuple
    deviator: int | None = None
    element: object = None  # join-irreducible payoff the deviation reaches
    deviation: Lasso | None = None


def _deviation_reaches(arena: Arena, profile: Profile, deviator: int,
                       aut: Ldbw, j):
    """A deviation lasso whose payoff under ``aut`` is >= j, or None.

    All transition values along the play must cover j and an acceptance
    value covering j must recur, so the search runs over the product of the
    arena, the opponents' memories, and the automaton, keeping only
    j-covered transitions.
    """
    from .equilibria import _search_lasso, _opponent_joint

    lat = aut.lattice

    def succ_fn(node):
        v, mems, q = node
        out = []
        for a in sorted(arena.available_actions(deviator, v), key=action_key):
            joint = _opponent_joint(arena, profile, mems, v, deviator, a)
            letter = arena.letter(v, joint)
            q2, tv = aut.step(q, letter)
            if not lat.leq(j, tv):
                continue
            v2 = arena.delta[(v, joint)]
            mems2 = tuple(profile[k].advance(mems[k], v, joint)
                          if k != deviator else None
                          for k in range(arena.n_players))
            out.append((Position(v, joint), (v2, mems2, q2)))
        return out

    mems0 = tuple(s.initial_memory if k != deviator else None
                  for k, s in enumerate(profile.strategies))
    start = (arena.initial, mems0, aut.initial)
    hit = _search_lasso([start], succ_fn,
                        lambda nd: lat.leq(j, aut.accept[nd[2]]))
    if hit is None:
        return None
    return Lasso(tuple(hit[0]), tuple(hit[1]))


def check_latticed_nash(arena: Arena, objectives, profile: Profile,
                        deviators=None) -> LatticedNashVerdict:
    """Exact latticed Nash check: no deviator can raise their payoff.

    Payoff comparison decomposes over join-irreducible elements: the profile
    fails iff some deviator i and join-irreducible j exist with j not below
    payoff_i such that a deviation reaches payoff >= j.
    """
    if len(objectives) != arena.n_players:
        raise LatticedError("need exactly one objective per player")
    if deviators is None:
        deviators = range(1, arena.n_players)
    word = outcome(arena, profile).word(arena)
    payoffs = tuple(ldbw_payoff(objectives[k], word)
                    for k in range(arena.n_players))
    for i in sorted(deviators):
        aut = objectives[i]
        lat = aut.lattice
        for j in sorted(join_irreducibles(lat)):
            if lat.leq(j, payoffs[i]):
                continue
            dev = _deviation_reaches(arena, profile, i, aut, j)
            if dev is not None:
                return LatticedNashVerdict(holds=False, payoffs=payoffs,
                                           deviator=i, element=j,
                                           deviation=dev)
    return LatticedNashVerdict(holds=True, payoffs=payoffs)


# -- bounded latticed synthesis ---------------------------------------------------


def _best_payoff_possible(arena: Arena, aut: Ldbw, v) -> bool:
    """Can any arena lasso reach payoff >= v for this automaton?  Searched
    over the arena-automaton product restricted to v-covered transitions; a
    cycle works iff the acceptance values over some reachable cycle join to
    at least v, which is maximized over each strongly connected component.
    """
    lat = aut.lattice
    if v == lat.bottom:
        return True

    succs = {}
    start = (arena.initial, aut.initial)
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        vv, q = node
        out = []
        for joint in arena.legal_joints(vv):
            letter = arena.letter(vv, joint)
            q2, tv = aut.step(q, letter)
            if not lat.leq(v, tv):
                continue
            nxt = (arena.delta[(vv, joint)], q2)
            out.append(nxt)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
        succs[node] = tuple(out)

    # Tarjan strongly connected components, iterative
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]
    for root in succs:
        if root in index:
            continue
        work = [(root, iter(succs[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succs[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(comp)

    for comp in sccs:
        cset = set(comp)
        cyclic = len(comp) > 1 or any(w in cset for w in succs[comp[0]])
        if not cyclic:
            continue
        joined = lat.join_all(aut.accept[q] for (_, q) in comp)
        if lat.leq(v, joined):
            return True
    return False


def latticed_synthesize_bounded(arena: Arena, objectives, threshold,
                                memory_bound: int):
    """Bounded latticed rational synthesis for the Nash concept: a profile
    whose system payoff covers the threshold while players 1..n form a
    latticed Nash equilibrium.  Exhaustive within the memory bound; every
    candidate is re-checked before being returned.
    """
    from itertools import product as iproduct

    from .bruteforce import all_latent_controllers

    if len(objectives) != arena.n_players:
        raise LatticedError("need exactly one objective per player")
    lat = objectives[0].lattice
    if not _best_payoff_possible(arena, objectives[0], threshold):
        return None
    deviators = range(1, arena.n_players)

    # cheapest candidates first: plays repeating one joint action forever
    from .synthesis import _constant_joint_lassos, _fit_player
    for lasso in _constant_joint_lassos(arena):
        word = lasso.word(arena)
        if not lat.leq(threshold, ldbw_payoff(objectives[0], word)):
            continue
        strategies = [_fit_player(arena, k, lasso, memory_bound)
                      for k in range(arena.n_players)]
        if not all(s is not None for s in strategies):
            continue
        profile = Profile(tuple(strategies))
        played = outcome(arena, profile).word(arena)
        if lat.leq(threshold, ldbw_payoff(objectives[0], played)) and \
                check_latticed_nash(arena, objectives, profile,
                                    deviators).holds:
            return profile

    spaces = [list(all_latent_controllers(arena, k, memory_bound))
              for k in range(arena.n_players)]
    for combo in iproduct(*spaces):
        profile = Profile(tuple(combo))
        word = outcome(arena, profile).word(arena)
        if not lat.leq(threshold, ldbw_payoff(objectives[0], word)):
            continue
        verdict = check_latticed_nash(arena, objectives, profile, deviators)
        if verdict.holds:
            return profile
    return None
