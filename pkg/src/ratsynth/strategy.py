"""Finite-memory (Mealy) strategies, profiles, and outcome computation.

A strategy updates its memory on inputs and outputs the owner's action from
memory.  Two input kinds exist: ``vertices`` (graph arenas — memory consumes
the vertices visited so far, and the action at the current vertex is
``output(update(m, v))``) and ``actions`` (variable arenas — memory consumes
the joint action of the previous step, and the action at the current step is
``output(m)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arena import Arena, ArenaError, History, Lasso, Position, action_key


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class Strategy:
    owner: int
    memory: tuple
    initial_memory: object
    update: dict = field(hash=False)  # (memory, input) -> memory
    output: dict = field(hash=False)  # memory -> action
    input_kind: str = "vertices"

    def __post_init__(self):
        if self.input_kind not in ("vertices", "actions"):
            raise StrategyError(f"unknown input kind: {self.input_kind!r}")

    def act(self, state, vertex):
        """Action chosen at ``vertex`` with pre-state ``state``."""
        if self.input_kind == "vertices":
            return self.output[self.update[(state, vertex)]]
        return self.output[state]

    def advance(self, state, vertex, joint):
        """Memory after the step from ``vertex`` under ``joint``."""
        if self.input_kind == "vertices":
            return self.update[(state, vertex)]
        return self.update[(state, tuple(joint))]


@dataclass(frozen=True)
class Profile:
    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        owners = [s.owner for s in self.strategies]
        if owners != list(range(len(owners))):
            raise StrategyError(
                f"profile strategies must be owned by players 0..n in order, got {owners}")

    def __getitem__(self, i) -> Strategy:
        return self.strategies[i]

    def __len__(self):
        return len(self.strategies)

    def replace(self, i, strat: Strategy) -> "Profile":
        out = list(self.strategies)
        out[i] = strat
        return Profile(tuple(out))


def positional_strategy(arena: Arena, owner: int, choice: dict) -> Strategy:
    """Memoryless vertex-input strategy given a per-vertex action choice.

    Vertices missing from ``choice`` get their first available action.
    """
    full = {}
    for v in arena.vertices:
        acts = sorted(arena.available_actions(owner, v), key=action_key)
        full[v] = choice.get(v, acts[0])
        if full[v] not in acts:
            raise StrategyError(
                f"choice {full[v]!r} unavailable for player {owner} at {v!r}")
    memory = ("init",) + tuple(arena.vertices)
    update = {(m, v): v for m in memory for v in arena.vertices}
    output = {v: full[v] for v in arena.vertices}
    output["init"] = full[arena.initial]
    return Strategy(owner=owner, memory=memory, initial_memory="init",
                    update=update, output=output, input_kind="vertices")


def latent_strategy(arena: Arena, owner: int, n_latent: int,
                    latent_update: dict, choice: dict) -> Strategy:
    """Compile a latent-state controller into a vertex-input Mealy strategy.

    The controller has ``n_latent`` abstract memory states; ``latent_update``
    maps (latent, vertex) to the next latent state and ``choice`` maps
    (latent, vertex) to the action taken at that vertex.  The compiled memory
    is latent x vertex so that the Mealy output map (memory -> action) can
    depend on the current vertex.
    """
    latents = tuple(range(n_latent))
    memory = ("init",) + tuple((l, v) for l in latents for v in arena.vertices)
    update = {}
    for v in arena.vertices:
        update[("init", v)] = (0, v)
        for l in latents:
            for u in arena.vertices:
                update[((l, u), v)] = (latent_update[(l, u)], v)
    output = {"init": None}
    for l in latents:
        for v in arena.vertices:
            output[(l, v)] = choice[(l, v)]
    output["init"] = choice[(0, arena.initial)]
    return Strategy(owner=owner, memory=memory, initial_memory="init",
                    update=update, output=output, input_kind="vertices")


def validate_strategy(arena: Arena, strat: Strategy) -> list[str]:
    """Eager availability check over all reachable (memory, vertex) pairs."""
    issues = []
    if strat.input_kind != arena.strategy_input_kind:
        issues.append(
            f"input kind {strat.input_kind!r} does not match arena kind "
            f"{arena.strategy_input_kind!r}")
        return issues
    seen = set()
    stack = [(strat.initial_memory, arena.initial)]
    while stack:
        m, v = stack.pop()
        if (m, v) in seen:
            continue
        seen.add((m, v))
        try:
            a = strat.act(m, v)
        except KeyError as exc:
            issues.append(f"missing table entry at (memory={m!r}, vertex={v!r}): {exc}")
            continue
        if a not in arena.available_actions(strat.owner, v):
            issues.append(
                f"output {a!r} unavailable for player {strat.owner} at {v!r}")
        for t in arena.legal_joints(v):
            if t[strat.owner] != a:
                continue
            w = arena.delta[(v, t)]
            try:
                m2 = strat.advance(m, v, t)
            except KeyError as exc:
                issues.append(f"missing update entry at (memory={m!r}): {exc}")
                continue
            if (m2, w) not in seen:
                stack.append((m2, w))
    return issues


def _joint_at(arena: Arena, profile: Profile, states, vertex):
    joint = []
    for i, strat in enumerate(profile.strategies):
        try:
            a = strat.act(states[i], vertex)
        except KeyError:
            raise StrategyError(
                f"player {i}: no action defined at vertex {vertex!r} "
                f"with memory {states[i]!r}") from None
        if a not in arena.available_actions(i, vertex):
            raise StrategyError(
                f"player {i}: action {a!r} unavailable at vertex {vertex!r}")
        joint.append(a)
    return tuple(joint)


def _simulate(arena: Arena, profile: Profile, vertex, states):
    """Run the profile from a configuration, folding into a lasso."""
    seen = {}
    trace = []
    while True:
        config = (vertex, tuple(states))
        if config in seen:
            k = seen[config]
            return tuple(trace[:k]), tuple(trace[k:])
        seen[config] = len(trace)
        joint = _joint_at(arena, profile, states, vertex)
        trace.append(Position(vertex, joint))
        states = [profile[i].advance(states[i], vertex, joint)
                  for i in range(len(profile))]
        vertex = arena.delta[(vertex, joint)]


def outcome(arena: Arena, profile: Profile) -> Lasso:
    """The unique play under the profile, folded at the first repeated
    (vertex, memory tuple) configuration."""
    if len(profile) != arena.n_players:
        raise StrategyError("profile size does not match player count")
    for strat in profile.strategies:
        if strat.input_kind != arena.strategy_input_kind:
            raise StrategyError(
                f"player {strat.owner}: strategy input kind {strat.input_kind!r} "
                f"does not match arena ({arena.strategy_input_kind!r})")
    states = [s.initial_memory for s in profile.strategies]
    prefix, cycle = _simulate(arena, profile, arena.initial, states)
    return Lasso(prefix, cycle)


def advance_through(arena: Arena, profile: Profile, history: History):
    """Memory states of all strategies after consuming a history."""
    joints = history.realize_joints(arena)
    states = [s.initial_memory for s in profile.strategies]
    for j, t in enumerate(joints):
        v = history.vertices[j]
        states = [profile[i].advance(states[i], v, t)
                  for i in range(len(profile))]
    return states


def shifted_outcome(arena: Arena, profile: Profile, history: History) -> Lasso:
    """Outcome of the game that found itself with the given history.

    The history's first positions become the lasso prefix; every strategy's
    memory is advanced through the history before the profile takes over at
    the history's last vertex.
    """
    history.validate(arena)
    joints = history.realize_joints(arena)
    states = advance_through(arena, profile, history)
    head = tuple(Position(history.vertices[j], joints[j])
                 for j in range(len(joints)))
    prefix, cycle = _simulate(arena, profile, history.last, states)
    return Lasso(head + prefix, cycle)
