"""Bounded-memory rational synthesis.

Searches for a profile whose outcome satisfies the system objective while
the agents' strategies form an equilibrium (player 0, the system, is never a
deviator).  Sound and complete within the per-player memory bound; the full
problem is doubly exponential, so the bound is part of the contract and is
echoed in the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .arena import Arena, Lasso, Position, action_key
from .bruteforce import all_latent_controllers
from .buchi import ltl_to_nbw
from .equilibria import check_dominant, check_nash, check_spe
from .ltl import And, LtlFormula, eval_lasso
from .strategy import Profile, Strategy, latent_strategy, outcome

CONCEPTS = {
    "nash": check_nash,
    "spe": check_spe,
    "ds": check_dominant,
}


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class SynthesisInstance:
    arena: Arena
    objectives: tuple[LtlFormula, ...]  # system objective first
    concept: str  # "ds" | "nash" | "spe"
    memory_bound: int

    def __post_init__(self):
        if self.concept not in CONCEPTS:
            raise SynthesisError(f"unknown solution concept: {self.concept!r}")
        if self.memory_bound < 1:
            raise SynthesisError("memory bound must be >= 1")
        if len(self.objectives) != self.arena.n_players:
            raise SynthesisError(
                "need exactly one objective per player (system first)")


@dataclass(frozen=True)
class SynthesisResult:
    profile: Profile
    concept: str
    memory_bound: int
    certified: bool
    note: str


def _arena_lasso_satisfying(arena: Arena, formula: LtlFormula):
    """Any lasso play of the arena whose word satisfies the formula."""
    nbw = ltl_to_nbw(formula)

    def succ_fn(node):
        v, q = node
        out = []
        for joint in arena.legal_joints(v):
            letter = arena.letter(v, joint)
            v2 = arena.delta[(v, joint)]
            for q2 in sorted(nbw.delta(q, letter), key=repr):
                out.append((Position(v, joint), (v2, q2)))
        return out

    from .equilibria import _search_lasso
    starts = [(arena.initial, q) for q in sorted(nbw.initial, key=repr)]
    hit = _search_lasso(starts, succ_fn, lambda nd: nd[1] in nbw.accepting)
    if hit is None:
        return None
    return Lasso(tuple(hit[0]), tuple(hit[1]))


def _constant_joint_lassos(arena: Arena):
    """Plays where every player repeats one fixed action forever."""
    per_player = [sorted(set(arena.actions[j]), key=action_key)
                  for j in range(arena.n_players)]
    for joint in iproduct(*per_player):
        v = arena.initial
        trace = []
        seen = {}
        ok = True
        while v not in seen:
            if any(joint[j] not in arena.available_actions(j, v)
                   for j in range(arena.n_players)):
                ok = False
                break
            seen[v] = len(trace)
            trace.append(Position(v, joint))
            v = arena.delta[(v, joint)]
        if not ok:
            continue
        k = seen[v]
        yield Lasso(tuple(trace[:k]), tuple(trace[k:]))


def _fit_player(arena: Arena, owner: int, lasso: Lasso,
                bound: int) -> Strategy | None:
    """Fit a Mealy strategy making the player follow the lasso's actions.

    Tries a positional (single-latent-state) fit first, then a position
    counter with prefix+cycle latent states if it fits the bound.
    """
    ps = lasso.positions()
    if not arena.variable_based:
        per_vertex = {}
        consistent = True
        for p in ps:
            a = p.joint[owner]
            if per_vertex.setdefault(p.vertex, a) != a:
                consistent = False
                break
        if consistent:
            choice = {(0, v): per_vertex.get(
                v, sorted(arena.available_actions(owner, v), key=action_key)[0])
                for v in arena.vertices}
            update = {(0, v): 0 for v in arena.vertices}
            return latent_strategy(arena, owner, 1, update, choice)
        if len(ps) > bound:
            return None
        m = len(ps)
        wrap = len(lasso.prefix)
        update = {(l, v): (l + 1 if l + 1 < m else wrap)
                  for l in range(m) for v in arena.vertices}
        choice = {}
        for l in range(m):
            for v in arena.vertices:
                if v == ps[l].vertex:
                    choice[(l, v)] = ps[l].joint[owner]
                else:
                    choice[(l, v)] = sorted(
                        arena.available_actions(owner, v), key=action_key)[0]
        return latent_strategy(arena, owner, m, update, choice)

    # variable arena: output depends on latent state only
    acts = [p.joint[owner] for p in ps]
    if len(set(acts)) == 1:
        joints = [tuple(t) for t in iproduct(
            *[sorted(a, key=action_key) for a in arena.actions])]
        return Strategy(owner=owner, memory=(0,), initial_memory=0,
                        update={(0, t): 0 for t in joints},
                        output={0: acts[0]}, input_kind="actions")
    if len(ps) > bound:
        return None
    m = len(ps)
    wrap = len(lasso.prefix)
    joints = [tuple(t) for t in iproduct(
        *[sorted(a, key=action_key) for a in arena.actions])]
    update = {(l, t): (l + 1 if l + 1 < m else wrap)
              for l in range(m) for t in joints}
    output = {l: acts[l] for l in range(m)}
    return Strategy(owner=owner, memory=tuple(range(m)), initial_memory=0,
                    update=update, output=output, input_kind="actions")


def synthesize_bounded(instance: SynthesisInstance) -> SynthesisResult | None:
    """Find a profile with per-player latent memory <= the bound such that
    the outcome satisfies the system objective and players 1..n form an
    equilibrium under the chosen concept.

    Strategy: (1) look for a single lasso satisfying everyone's objective and
    fit Mealy machines to it; (2) failing that, fall back to exhaustive
    enumeration of bounded profiles.  A quick unsatisfiability pre-check on
    the system objective keeps hopeless instances fast.
    """
    arena = instance.arena
    objectives = instance.objectives
    phi0 = objectives[0]
    check = CONCEPTS[instance.concept]
    deviators = range(1, arena.n_players)

    if _arena_lasso_satisfying(arena, phi0) is None:
        return None  # no play at all satisfies the system objective

    everything = phi0
    for phi in objectives[1:]:
        everything = And(everything, phi)

    # cheapest candidates first: plays repeating one joint action forever
    for lasso in _constant_joint_lassos(arena):
        if not eval_lasso(everything, lasso.word(arena)):
            continue
        strategies = [_fit_player(arena, j, lasso, instance.memory_bound)
                      for j in range(arena.n_players)]
        if not all(s is not None for s in strategies):
            continue
        profile = Profile(tuple(strategies))
        if eval_lasso(phi0, outcome(arena, profile).word(arena)) and \
                check(arena, objectives, profile, deviators).holds:
            return SynthesisResult(
                profile=profile, concept=instance.concept,
                memory_bound=instance.memory_bound, certified=True,
                note="constant-play candidate; exact check passed; search "
                     f"complete only within memory bound {instance.memory_bound}")

    lasso = _arena_lasso_satisfying(arena, everything)
    if lasso is not None:
        strategies = [_fit_player(arena, j, lasso, instance.memory_bound)
                      for j in range(arena.n_players)]
        if all(s is not None for s in strategies):
            profile = Profile(tuple(strategies))
            if eval_lasso(phi0, outcome(arena, profile).word(arena)) and \
                    check(arena, objectives, profile, deviators).holds:
                return SynthesisResult(
                    profile=profile, concept=instance.concept,
                    memory_bound=instance.memory_bound, certified=True,
                    note="lasso-fit candidate; exact check passed; search "
                         f"complete only within memory bound "
                         f"{instance.memory_bound}")

    # exhaustive bounded enumeration, smallest candidates first
    spaces = [list(all_latent_controllers(arena, j, instance.memory_bound))
              for j in range(arena.n_players)]
    for combo in iproduct(*spaces):
        profile = Profile(tuple(combo))
        if not eval_lasso(phi0, outcome(arena, profile).word(arena)):
            continue
        if check(arena, objectives, profile, deviators).holds:
            return SynthesisResult(
                profile=profile, concept=instance.concept,
                memory_bound=instance.memory_bound, certified=True,
                note="found by exhaustive bounded enumeration; search "
                     f"complete only within memory bound {instance.memory_bound}")
    return None
