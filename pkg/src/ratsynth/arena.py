"""Finite concurrent multiplayer game arenas.

All players pick actions simultaneously; a deterministic transition function
maps (vertex, joint action) to the next vertex.  Vertices carry atomic
propositions.  Arenas built from variable partitions (each agent assigns its
own output variables every step) have a single vertex and contribute the
chosen assignments to the word of a play instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .ltl import LassoWord


class ArenaError(ValueError):
    pass


def action_key(a):
    """Deterministic sort key for actions (strings or variable sets)."""
    if isinstance(a, frozenset):
        return (1, tuple(sorted(a)))
    return (0, str(a))


@dataclass(frozen=True)
class Arena:
    """Concurrent game graph.

    ``available[(i, v)]`` lists player i's legal actions at v (always
    nonempty); ``delta[(v, joint)]`` is total over legal joint actions.
    ``variable_based`` marks arenas produced by :func:`arena_from_variables`,
    whose strategies consume joint actions and whose play letters include the
    chosen variable assignments.
    """

    name: str
    vertices: tuple
    initial: str
    n_players: int
    actions: tuple  # per player: tuple of actions
    available: dict = field(hash=False)
    delta: dict = field(hash=False)
    labels: dict = field(hash=False)
    props: frozenset
    variable_based: bool = False

    @property
    def players(self):
        return tuple(range(self.n_players))

    def available_actions(self, player, vertex):
        try:
            return self.available[(player, vertex)]
        except KeyError:
            raise ArenaError(f"no availability for player {player} at {vertex}") from None

    def legal_joints(self, vertex):
        """All legal joint actions at a vertex, in deterministic order."""
        choices = [sorted(self.available_actions(i, vertex), key=action_key)
                   for i in self.players]
        return [tuple(t) for t in product(*choices)]

    def successor(self, vertex, joint):
        if vertex not in self.delta_domain_vertices():
            raise ArenaError(f"unknown vertex: {vertex!r}")
        for i, a in enumerate(joint):
            if a not in self.available_actions(i, vertex):
                raise ArenaError(
                    f"action {a!r} illegal for player {i} at {vertex!r}")
        return self.delta[(vertex, tuple(joint))]

    def delta_domain_vertices(self):
        return set(self.vertices)

    def letter(self, vertex, joint) -> frozenset:
        """Proposition valuation of a position."""
        letter = set(self.labels.get(vertex, frozenset()))
        if self.variable_based:
            for a in joint:
                letter |= a
        return frozenset(letter)

    @property
    def strategy_input_kind(self):
        return "actions" if self.variable_based else "vertices"


@dataclass(frozen=True)
class Position:
    vertex: str
    joint: tuple


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play: finite prefix plus nonempty cycle."""

    prefix: tuple[Position, ...]
    cycle: tuple[Position, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ArenaError("lasso cycle must be nonempty")

    def positions(self):
        return self.prefix + self.cycle

    def vertices(self):
        return tuple(p.vertex for p in self.positions())

    def word(self, arena: Arena) -> LassoWord:
        return LassoWord(
            tuple(arena.letter(p.vertex, p.joint) for p in self.prefix),
            tuple(arena.letter(p.vertex, p.joint) for p in self.cycle))

    def validate(self, arena: Arena):
        """Check delta-consistency of every seam, including the wrap."""
        ps = self.positions()
        for i, p in enumerate(ps):
            succ = arena.successor(p.vertex, p.joint)
            nxt = ps[i + 1] if i + 1 < len(ps) else self.cycle[0]
            # the final prefix position must flow into the cycle head, and
            # the final cycle position must wrap back to the cycle head
            if i + 1 == len(ps):
                nxt = self.cycle[0]
            if succ != nxt.vertex:
                raise ArenaError(
                    f"lasso inconsistent at step {i}: "
                    f"delta({p.vertex},{p.joint}) = {succ} != {nxt.vertex}")

    def unroll(self, steps: int):
        """First ``steps`` positions of the unfolded play."""
        out = []
        ps = self.positions()
        i = 0
        while len(out) < steps:
            out.append(ps[i])
            i = i + 1 if i + 1 < len(ps) else len(self.prefix)
        return out


@dataclass(frozen=True)
class History:
    """Nonempty delta-consistent vertex sequence from the initial vertex.

    ``joints`` optionally records the joint action realizing each step; when
    absent, any legal joint action inducing the step may realize it.
    """

    vertices: tuple
    joints: tuple | None = None

    def __len__(self):
        return len(self.vertices)

    @property
    def last(self):
        return self.vertices[-1]

    def validate(self, arena: Arena):
        if not self.vertices:
            raise ArenaError("history must be nonempty")
        if self.vertices[0] != arena.initial:
            raise ArenaError(
                f"history must start at {arena.initial!r}, got {self.vertices[0]!r}")
        if self.joints is not None:
            if len(self.joints) != len(self.vertices) - 1:
                raise ArenaError("history joints/vertices length mismatch")
        for i in range(len(self.vertices) - 1):
            v, w = self.vertices[i], self.vertices[i + 1]
            if self.joints is not None:
                if arena.successor(v, self.joints[i]) != w:
                    raise ArenaError(f"history step {i} not realized by its joint")
            else:
                if not any(arena.successor(v, t) == w for t in arena.legal_joints(v)):
                    raise ArenaError(f"history step {v!r} -> {w!r} not delta-consistent")

    def realize_joints(self, arena: Arena) -> tuple:
        """Joint actions realizing each step (lexicographically smallest)."""
        if self.joints is not None:
            return self.joints
        out = []
        for i in range(len(self.vertices) - 1):
            v, w = self.vertices[i], self.vertices[i + 1]
            for t in arena.legal_joints(v):
                if arena.successor(v, t) == w:
                    out.append(t)
                    break
            else:
                raise ArenaError(f"history step {v!r} -> {w!r} not delta-consistent")
        return tuple(out)


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def validate_arena(arena: Arena) -> list[ValidationIssue]:
    """Structural check; empty result iff the arena is well formed."""
    out = []
    vs = set(arena.vertices)
    if len(vs) != len(arena.vertices):
        out.append(ValidationIssue("duplicate-vertex", "vertex list has duplicates"))
    if arena.initial not in vs:
        out.append(ValidationIssue("bad-initial", f"{arena.initial!r} not a vertex"))
    if len(arena.actions) != arena.n_players:
        out.append(ValidationIssue("bad-actions", "per-player action list length mismatch"))
    for i in arena.players:
        for v in arena.vertices:
            av = arena.available.get((i, v))
            if not av:
                out.append(ValidationIssue(
                    "empty-availability", f"player {i} has no action at {v!r}"))
                continue
            extra = set(av) - set(arena.actions[i]) if i < len(arena.actions) else set()
            if extra:
                out.append(ValidationIssue(
                    "undeclared-action",
                    f"player {i} at {v!r}: {sorted(extra, key=action_key)}"))
    seen_keys = set()
    for v in arena.vertices:
        if any(not arena.available.get((i, v)) for i in arena.players):
            continue
        for t in arena.legal_joints(v):
            seen_keys.add((v, t))
            if (v, t) not in arena.delta:
                out.append(ValidationIssue(
                    "missing-transition", f"delta undefined at ({v!r}, {t!r})"))
            elif arena.delta[(v, t)] not in vs:
                out.append(ValidationIssue(
                    "bad-transition-target",
                    f"delta({v!r},{t!r}) = {arena.delta[(v, t)]!r} unknown"))
    for key in arena.delta:
        if key not in seen_keys:
            out.append(ValidationIssue(
                "illegal-transition", f"delta defined on illegal tuple {key!r}"))
    for v, ps in arena.labels.items():
        if v not in vs:
            out.append(ValidationIssue("bad-label-vertex", f"{v!r} unknown"))
        for p in ps:
            if p not in arena.props:
                out.append(ValidationIssue(
                    "undeclared-proposition", f"{p!r} at vertex {v!r}"))
    return out


def arena_from_variables(partition, name="variables") -> Arena:
    """One-vertex arena where player i's actions are assignments to X_i."""
    sets = [frozenset(x) for x in partition]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            overlap = sets[i] & sets[j]
            if overlap:
                raise ArenaError(
                    f"variable sets {i} and {j} overlap: {sorted(overlap)}")
    actions = []
    for xs in sets:
        names = sorted(xs)
        subsets = []
        for mask in range(2 ** len(names)):
            subsets.append(frozenset(n for k, n in enumerate(names) if mask >> k & 1))
        actions.append(tuple(sorted(subsets, key=action_key)))
    v0 = "v0"
    available = {(i, v0): actions[i] for i in range(len(sets))}
    delta = {}
    for t in product(*actions):
        delta[(v0, t)] = v0
    props = frozenset().union(*sets) if sets else frozenset()
    return Arena(name=name, vertices=(v0,), initial=v0, n_players=len(sets),
                 actions=tuple(actions), available=available, delta=delta,
                 labels={v0: frozenset()}, props=props, variable_based=True)


def reachable_vertices(arena: Arena) -> set:
    out = {arena.initial}
    stack = [arena.initial]
    while stack:
        v = stack.pop()
        for t in arena.legal_joints(v):
            w = arena.delta[(v, t)]
            if w not in out:
                out.add(w)
                stack.append(w)
    return out
