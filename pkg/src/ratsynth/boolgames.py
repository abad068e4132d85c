"""Two-player boolean games on graphs: parity, Buchi, generalized Buchi.

Parity games use the min-even convention: a play is won by player 0 iff the
least priority occurring infinitely often is even.  The solver is Zielonka's
recursive algorithm (recursing on the minimal priority) with positional
strategy extraction.  A separate classical Buchi solver (recurrence fixpoint,
no recursion) doubles as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GameError(ValueError):
    pass


@dataclass
class ParityGame:
    """owner[v] in {0, 1}; player 0 resolves its vertices' successors."""

    nodes: tuple
    owner: dict
    edges: dict  # node -> tuple of successors
    priority: dict

    def validate(self):
        for v in self.nodes:
            if not self.edges.get(v):
                raise GameError(f"node {v!r} has no successor")


def attractor(nodes, owner, edges, player, targets):
    """Set from which ``player`` can force reaching ``targets``, plus a
    positional attractor strategy on the player's non-target vertices."""
    nodes = set(nodes)
    preds = {v: [] for v in nodes}
    out_deg = {}
    for v in nodes:
        succs = [w for w in edges[v] if w in nodes]
        out_deg[v] = len(succs)
        for w in succs:
            preds[w].append(v)
    attr = set(t for t in targets if t in nodes)
    strat = {}
    queue = list(attr)
    while queue:
        w = queue.pop()
        for v in preds[w]:
            if v in attr:
                continue
            if owner[v] == player:
                attr.add(v)
                strat[v] = w
                queue.append(v)
            else:
                out_deg[v] -= 1
                if out_deg[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


@dataclass
class ParitySolution:
    win: tuple[set, set]
    strategy: tuple[dict, dict]  # positional strategies on own winning nodes


def solve_parity(game: ParityGame) -> ParitySolution:
    game.validate()
    win0, win1, s0, s1 = _zielonka(set(game.nodes), game.owner, game.edges,
                                   game.priority)
    return ParitySolution((win0, win1), (s0, s1))


def _zielonka(nodes, owner, edges, priority):
    if not nodes:
        return set(), set(), {}, {}

    def sub_edges(ns):
        return {v: tuple(w for w in edges[v] if w in ns) for v in ns}

    d = min(priority[v] for v in nodes)
    sigma = d % 2
    p_nodes = {v for v in nodes if priority[v] == d}
    attr, attr_strat = attractor(nodes, owner, sub_edges(nodes), sigma, p_nodes)
    rest = nodes - attr
    w0, w1, s0, s1 = _zielonka(rest, owner, edges, priority)
    w_sig, w_opp = (w0, w1) if sigma == 0 else (w1, w0)
    s_sig, s_opp = (s0, s1) if sigma == 0 else (s1, s0)

    if not w_opp:
        # sigma wins everywhere: recursive strategy inside rest, attractor
        # strategy toward the minimal-priority nodes, anything legal on them
        strat = dict(s_sig)
        strat.update(attr_strat)
        se = sub_edges(nodes)
        for v in p_nodes:
            if owner[v] == sigma and v not in strat:
                strat[v] = se[v][0]
        for v in attr - p_nodes:
            if owner[v] == sigma and v not in strat:
                strat[v] = se[v][0]
        if sigma == 0:
            return set(nodes), set(), strat, {}
        return set(), set(nodes), {}, strat

    b_attr, b_strat = attractor(nodes, owner, sub_edges(nodes), 1 - sigma, w_opp)
    rest2 = nodes - b_attr
    w0b, w1b, s0b, s1b = _zielonka(rest2, owner, edges, priority)
    if sigma == 0:
        win1 = w1b | b_attr
        strat1 = dict(s1)       # winning strategy inside the recursive w_opp
        strat1.update(s1b)
        strat1.update(b_strat)  # attract toward w_opp
        return w0b, win1, s0b, strat1
    win0 = w0b | b_attr
    strat0 = dict(s0)
    strat0.update(s0b)
    strat0.update(b_strat)
    return win0, w1b, strat0, s1b


def solve_buchi_classic(nodes, owner, edges, targets):
    """Classical Buchi game solver via the recurrence fixpoint.

    Returns the winning set of player 0 (who wants to visit ``targets``
    infinitely often).  Independent of the parity machinery on purpose.
    """
    z = set(nodes)
    while True:
        def sub_edges(ns):
            return {v: tuple(w for w in edges[v] if w in ns) for v in ns}

        se = sub_edges(z)
        if any(not se[v] for v in z):
            # remove dead vertices: the stuck player loses there; for this
            # solver's callers games are total, so only subgames shrink
            dead = {v for v in z if not se[v]}
            bad, _ = attractor(z, owner, se, 1, dead)
            z -= bad
            if not z:
                return set()
            continue
        t = {v for v in z if v in targets}
        reach, _ = attractor(z, owner, se, 0, t)
        escape = z - reach
        if not escape:
            return z
        bad, _ = attractor(z, owner, se, 1, escape)
        z -= bad
        if not z:
            return set()


@dataclass
class GenBuchiGame:
    """Generalized Buchi game: player 0 wants every accept set infinitely."""

    nodes: tuple
    owner: dict
    edges: dict
    accept_family: tuple  # nonempty tuple of frozensets of nodes


@dataclass
class GenBuchiSolution:
    player0_wins: set
    # finite-memory strategy for player 0: memory = index into accept_family;
    # moves[(node, mem)] = (successor node, next memory) on player-0 nodes,
    # memory_next[(node, mem)] = next memory after any move from node
    moves: dict = field(default_factory=dict)
    memory_next: dict = field(default_factory=dict)

    def initial_memory(self):
        return 0


def solve_generalized_buchi(game: GenBuchiGame) -> GenBuchiSolution:
    """Counter degeneralization to a {0,1}-parity game, solved by Zielonka.

    The returned strategy's memory is the index of the awaited accept set.
    """
    if not game.accept_family:
        raise GameError("empty acceptance family")
    k = len(game.accept_family)
    in_set = {v: [v in f for f in game.accept_family] for v in game.nodes}

    nodes = tuple((v, j) for v in game.nodes for j in range(k))
    owner = {(v, j): game.owner[v] for v, j in nodes}
    priority = {}
    edges = {}
    for v, j in nodes:
        hit = in_set[v][j]
        nj = (j + 1) % k if hit else j
        edges[(v, j)] = tuple((w, nj) for w in game.edges[v])
        priority[(v, j)] = 0 if (hit and j == k - 1) else 1
    sol = solve_parity(ParityGame(nodes, owner, edges, priority))
    win0 = {v for v in game.nodes if (v, 0) in sol.win[0]}
    moves = dict(sol.strategy[0])
    memory_next = {(v, j): ((j + 1) % k if in_set[v][j] else j)
                   for v in game.nodes for j in range(k)}
    return GenBuchiSolution(player0_wins=win0, moves=moves,
                            memory_next=memory_next)
