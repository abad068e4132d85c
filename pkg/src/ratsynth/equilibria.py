"""Exact decision procedures for dominant / Nash / subgame-perfect profiles.

All three checks reduce unilateral-deviation questions to accepting-lasso
searches in finite products of the arena with the non-deviating strategies'
memories and with Buchi automata for the relevant objectives.  Because the
deviator faces a deterministic finite environment, existence of *any*
deviation strategy (including infinite-memory ones) coincides with existence
of an accepting lasso in the product, so the verdicts are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .arena import Arena, History, Lasso, Position, action_key
from .buchi import Nbw, ltl_to_nbw
from .ltl import LtlFormula, Not, eval_lasso
from .strategy import Profile, _simulate, advance_through, outcome


@dataclass(frozen=True)
class Configuration:
    """Finite quotient of a history: current vertex, the non-deviating
    strategies' memories, and objective-automaton state subsets tracking
    prefix satisfaction."""

    vertex: str
    memories: tuple
    pos_states: tuple  # one frozenset of Nbw states per tracked objective
    neg_states: tuple = ()


@dataclass(frozen=True)
class Witness:
    kind: str  # "nash" | "spe" | "ds"
    deviator: int
    history: History
    deviation: Lasso | None = None
    adherent: Lasso | None = None  # DS only: play where the deviator adheres
    divergence: tuple | None = None  # DS only: (opponent joint, deviating action)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("witness present iff the verdict fails")


def agent_payoff(arena: Arena, profile: Profile, objective: LtlFormula) -> bool:
    return eval_lasso(objective, outcome(arena, profile).word(arena),
                      universe=_universe(arena))


def _universe(arena: Arena) -> frozenset:
    props = set(arena.props)
    if arena.variable_based:
        return frozenset(props)
    return frozenset(props)


def _search_lasso(starts, succ_fn, accept_fn):
    """Deterministic accepting-lasso search in an implicit graph.

    ``succ_fn(node)`` yields (edge label, next node) pairs in a fixed order.
    Returns (prefix labels, cycle labels) for the first (in BFS discovery
    order) accepting node lying on a cycle, or None.
    """
    parent = {}
    order = []
    queue = list(starts)
    seen = set(queue)
    qi = 0
    while qi < len(queue):
        node = queue[qi]
        qi += 1
        order.append(node)
        for label, nxt in succ_fn(node):
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = (node, label)
                queue.append(nxt)

    def path_to(node):
        labels = []
        while node in parent:
            node, label = parent[node]
            labels.append(label)
        labels.reverse()
        return labels

    for cand in order:
        if not accept_fn(cand):
            continue
        # shortest cycle back to cand
        p2 = {}
        q2 = [cand]
        seen2 = set()
        qi2 = 0
        found = False
        while qi2 < len(q2) and not found:
            node = q2[qi2]
            qi2 += 1
            for label, nxt in succ_fn(node):
                if nxt == cand:
                    p2[("done",)] = (node, label)
                    found = True
                    break
                if nxt not in seen2:
                    seen2.add(nxt)
                    p2[nxt] = (node, label)
                    q2.append(nxt)
        if not found:
            continue
        cyc = []
        node, label = p2[("done",)]
        cyc.append(label)
        while node != cand:
            node, label = p2[node]
            cyc.append(label)
        cyc.reverse()
        return path_to(cand), cyc
    return None


def _opponent_joint(arena, profile, memories, vertex, deviator, action):
    """Joint action at ``vertex`` where everyone but the deviator follows the
    profile and the deviator plays ``action``."""
    joint = []
    for j in range(arena.n_players):
        if j == deviator:
            joint.append(action)
        else:
            joint.append(profile[j].act(memories[j], vertex))
    return tuple(joint)


def best_deviation(arena: Arena, profile: Profile, deviator: int, nbw: Nbw,
                   config: Configuration) -> Lasso | None:
    """A play from the configuration, consistent with all strategies except
    the deviator's, whose full word (prefix tracked in the configuration
    included) satisfies the objective — or None if no such play exists."""
    start_qs = config.pos_states[0]

    def succ_fn(node):
        v, mems, q = node
        out = []
        for a in sorted(arena.available_actions(deviator, v), key=action_key):
            joint = _opponent_joint(arena, profile, mems, v, deviator, a)
            letter = arena.letter(v, joint)
            v2 = arena.delta[(v, joint)]
            mems2 = tuple(
                profile[j].advance(mems[j], v, joint) if j != deviator else None
                for j in range(arena.n_players))
            for q2 in sorted(nbw.delta(q, letter), key=repr):
                out.append((Position(v, joint), (v2, mems2, q2)))
        return out

    mems0 = tuple(m if j != deviator else None
                  for j, m in enumerate(config.memories))
    starts = [(config.vertex, mems0, q) for q in sorted(start_qs, key=repr)]
    hit = _search_lasso(starts, succ_fn, lambda nd: nd[2] in nbw.accepting)
    if hit is None:
        return None
    prefix, cycle = hit
    return Lasso(tuple(prefix), tuple(cycle))


def _initial_configuration(arena, profile, nbws):
    return Configuration(
        vertex=arena.initial,
        memories=tuple(s.initial_memory for s in profile.strategies),
        pos_states=tuple(n.initial for n in nbws))


def check_nash(arena: Arena, objectives, profile: Profile,
               deviators=None) -> Verdict:
    """Nash equilibrium: no unsatisfied deviator can satisfy its objective by
    deviating unilaterally from the initial vertex."""
    if deviators is None:
        deviators = range(arena.n_players)
    out_word = outcome(arena, profile).word(arena)
    for i in sorted(deviators):
        if eval_lasso(objectives[i], out_word):
            continue
        nbw = ltl_to_nbw(objectives[i])
        config = _initial_configuration(arena, profile, [nbw])
        dev = best_deviation(arena, profile, i, nbw, config)
        if dev is not None:
            return Verdict(False, Witness(
                kind="nash", deviator=i,
                history=History((arena.initial,), ()), deviation=dev))
    return Verdict(True)


def check_spe(arena: Arena, objectives, profile: Profile,
              deviators=None) -> Verdict:
    """Subgame-perfect equilibrium: the Nash condition after every
    delta-consistent history, enumerated over the finite configuration
    quotient (vertex, memory tuple, per-deviator automaton subsets)."""
    if deviators is None:
        deviators = range(arena.n_players)
    deviators = sorted(deviators)
    nbws = {i: ltl_to_nbw(objectives[i]) for i in deviators}

    init = _initial_configuration(arena, profile, [nbws[i] for i in deviators])
    first_history = {init: History((arena.initial,), ())}
    queue = [init]
    qi = 0
    while qi < len(queue):
        config = queue[qi]
        qi += 1
        hist = first_history[config]
        # Nash condition at this configuration
        for idx, i in enumerate(deviators):
            cont_prefix, cont_cycle = _simulate(
                arena, profile, config.vertex, list(config.memories))
            cont = Lasso(cont_prefix, cont_cycle)
            if nbws[i].accepts_lasso(cont.word(arena),
                                     start=config.pos_states[idx]):
                continue
            dev_config = Configuration(config.vertex, config.memories,
                                       (config.pos_states[idx],))
            dev = best_deviation(arena, profile, i, nbws[i], dev_config)
            if dev is not None:
                return Verdict(False, Witness(
                    kind="spe", deviator=i, history=hist, deviation=dev))
        # expand successor configurations over all legal joint actions
        for joint in arena.legal_joints(config.vertex):
            letter = arena.letter(config.vertex, joint)
            v2 = arena.delta[(config.vertex, joint)]
            mems2 = tuple(profile[j].advance(config.memories[j],
                                             config.vertex, joint)
                          for j in range(arena.n_players))
            pos2 = tuple(nbws[i].step_set(config.pos_states[idx], letter)
                         for idx, i in enumerate(deviators))
            nxt = Configuration(v2, mems2, pos2)
            if nxt not in first_history:
                first_history[nxt] = History(hist.vertices + (v2,),
                                             hist.realize_joints(arena) + (joint,))
                queue.append(nxt)
    return Verdict(True)


def _free_accepting(arena, nbw, cache, vertex, qs):
    """Is there any continuation (all players free) from ``vertex`` whose
    word, appended to a prefix reaching ``qs``, is accepted?"""
    key = (vertex, qs)
    hit = cache.get(key)
    if hit is not None:
        return hit

    def succ_fn(node):
        v, q = node
        out = []
        for joint in arena.legal_joints(v):
            letter = arena.letter(v, joint)
            v2 = arena.delta[(v, joint)]
            for q2 in sorted(nbw.delta(q, letter), key=repr):
                out.append((Position(v, joint), (v2, q2)))
        return out

    starts = [(vertex, q) for q in sorted(qs, key=repr)]
    res = _search_lasso(starts, succ_fn, lambda nd: nd[1] in nbw.accepting)
    cache[key] = res
    return res


def _adherent_accepting(arena, profile, deviator, nbw, cache, vertex, mem, qs):
    """Continuation where the deviator follows its strategy (memory ``mem``)
    and the opponents are free, accepted by ``nbw`` from subset ``qs``."""
    key = (vertex, mem, qs)
    hit = cache.get(key)
    if hit is not None:
        return hit
    strat = profile[deviator]

    def succ_fn(node):
        v, m, q = node
        a = strat.act(m, v)
        out = []
        others = [sorted(arena.available_actions(j, v), key=action_key)
                  if j != deviator else [a] for j in range(arena.n_players)]
        for joint in iproduct(*others):
            letter = arena.letter(v, joint)
            v2 = arena.delta[(v, joint)]
            m2 = strat.advance(m, v, joint)
            for q2 in sorted(nbw.delta(q, letter), key=repr):
                out.append((Position(v, joint), (v2, m2, q2)))
        return out

    starts = [(vertex, mem, q) for q in sorted(qs, key=repr)]
    res = _search_lasso(starts, succ_fn, lambda nd: nd[2] in nbw.accepting)
    cache[key] = res
    return res


def check_dominant(arena: Arena, objectives, profile: Profile,
                   deviators=None) -> Verdict:
    """Dominant-strategy profile check by divergence decomposition.

    A strategy of player i fails to be dominant iff at some history where i
    adhered so far, switching to a different action (with a word-visible
    divergence) admits a free continuation satisfying the objective while the
    adherent play from the same history admits a continuation violating it.
    After such a divergence the two plays have distinct histories forever, so
    a single opponent strategy function can realize both continuations, which
    makes the two searches independent and the procedure exact.
    """
    if deviators is None:
        deviators = range(arena.n_players)
    for i in sorted(deviators):
        w = _dominance_violation(arena, objectives[i], profile, i)
        if w is not None:
            return Verdict(False, w)
    return Verdict(True)


def _dominance_violation(arena, objective, profile, i):
    nbw_pos = ltl_to_nbw(objective)
    nbw_neg = ltl_to_nbw(Not(objective))
    strat = profile[i]
    free_cache: dict = {}
    adh_cache: dict = {}

    start = (arena.initial, strat.initial_memory,
             nbw_pos.initial, nbw_neg.initial)
    first_history = {start: History((arena.initial,), ())}
    queue = [start]
    qi = 0
    while qi < len(queue):
        v, mem, s_pos, s_neg = queue[qi]
        qi += 1
        hist = first_history[(v, mem, s_pos, s_neg)]
        alpha = strat.act(mem, v)
        others = [sorted(arena.available_actions(j, v), key=action_key)
                  if j != i else [None] for j in range(arena.n_players)]
        my_actions = sorted(arena.available_actions(i, v), key=action_key)
        for combo in iproduct(*others):
            joint_b = tuple(a if j != i else alpha
                            for j, a in enumerate(combo))
            letter_b = arena.letter(v, joint_b)
            v_b = arena.delta[(v, joint_b)]
            mem_b = strat.advance(mem, v, joint_b)
            s_pos_b = nbw_pos.step_set(s_pos, letter_b)
            s_neg_b = nbw_neg.step_set(s_neg, letter_b)
            nxt = (v_b, mem_b, s_pos_b, s_neg_b)
            if nxt not in first_history:
                first_history[nxt] = History(
                    hist.vertices + (v_b,),
                    hist.realize_joints(arena) + (joint_b,))
                queue.append(nxt)
            for a in my_actions:
                if a == alpha:
                    continue
                joint_a = tuple(x if j != i else a
                                for j, x in enumerate(combo))
                v_a = arena.delta[(v, joint_a)]
                if not arena.variable_based and v_a == v_b:
                    continue  # no word-visible divergence
                letter_a = arena.letter(v, joint_a)
                s_pos_a = nbw_pos.step_set(s_pos, letter_a)
                good = _free_accepting(arena, nbw_pos, free_cache,
                                       v_a, s_pos_a)
                if good is None:
                    continue
                bad = _adherent_accepting(arena, profile, i, nbw_neg,
                                          adh_cache, v_b, mem_b, s_neg_b)
                if bad is None:
                    continue
                dev_pos = Position(v, joint_a)
                adh_pos = Position(v, joint_b)
                return Witness(
                    kind="ds", deviator=i, history=hist,
                    deviation=Lasso((dev_pos,) + tuple(good[0]),
                                    tuple(good[1])),
                    adherent=Lasso((adh_pos,) + tuple(bad[0]),
                                   tuple(bad[1])),
                    divergence=(joint_b, a))
    return None


# -- witness verification -----------------------------------------------------


def _check_others_consistent(arena, profile, deviator, history, lasso):
    """The lasso continues the history with all non-deviating strategies
    adhering; returns the word of history + lasso."""
    history.validate(arena)
    joints = history.realize_joints(arena)
    mems = [s.initial_memory for s in profile.strategies]
    for k, t in enumerate(joints):
        v = history.vertices[k]
        mems = [profile[j].advance(mems[j], v, t)
                for j in range(arena.n_players)]
    ps = lasso.positions()
    if ps[0].vertex != history.last:
        raise ValueError("deviation does not start at the history's end")
    lasso.validate(arena)
    cycle_start_mems = None
    for k, p in enumerate(ps):
        if k == len(lasso.prefix):
            cycle_start_mems = list(mems)
        for j in range(arena.n_players):
            if j == deviator:
                continue
            expect = profile[j].act(mems[j], p.vertex)
            if p.joint[j] != expect:
                raise ValueError(
                    f"player {j} departs from its strategy at step {k}")
        mems = [profile[j].advance(mems[j], p.vertex, p.joint)
                for j in range(arena.n_players)]
    if cycle_start_mems is None:
        cycle_start_mems = list(mems)
    for j in range(arena.n_players):
        if j != deviator and mems[j] != cycle_start_mems[j]:
            raise ValueError("memories do not close up around the cycle")
    letters = [arena.letter(history.vertices[k], joints[k])
               for k in range(len(joints))]
    word = lasso.word(arena)
    from .ltl import LassoWord
    return LassoWord(tuple(letters) + word.prefix, word.cycle)


def verify_witness(arena: Arena, objectives, profile: Profile,
                   verdict: Verdict) -> bool:
    """Replay a negative verdict's witness directly against the definitions.

    Raises ValueError when the witness does not certify the violation.
    """
    if verdict.holds:
        raise ValueError("positive verdicts carry no witness")
    w = verdict.witness
    obj = objectives[w.deviator]
    if w.kind in ("nash", "spe"):
        from .strategy import shifted_outcome
        adhere = shifted_outcome(arena, profile, w.history)
        if eval_lasso(obj, adhere.word(arena)):
            raise ValueError("deviator already satisfied after the history")
        word = _check_others_consistent(arena, profile, w.deviator,
                                        w.history, w.deviation)
        if not eval_lasso(obj, word):
            raise ValueError("deviation word does not satisfy the objective")
        return True
    if w.kind == "ds":
        # adherent play: deviator follows its strategy, word violates
        word_b = _check_adherence(arena, profile, w.deviator,
                                  w.history, w.adherent)
        if eval_lasso(obj, word_b):
            raise ValueError("adherent play satisfies the objective")
        # deviating play: arbitrary continuation after the divergence
        hist_letters = [arena.letter(w.history.vertices[k], t)
                        for k, t in enumerate(w.history.realize_joints(arena))]
        w.deviation.validate(arena)
        if w.deviation.positions()[0].vertex != w.history.last:
            raise ValueError("deviating play does not start at the history's end")
        dword = w.deviation.word(arena)
        from .ltl import LassoWord
        full = LassoWord(tuple(hist_letters) + dword.prefix, dword.cycle)
        if not eval_lasso(obj, full):
            raise ValueError("deviating play does not satisfy the objective")
        return True
    raise ValueError(f"unknown witness kind {w.kind!r}")


def _check_adherence(arena, profile, i, history, lasso):
    """The deviator follows its own strategy along history + lasso."""
    history.validate(arena)
    joints = history.realize_joints(arena)
    strat = profile[i]
    mem = strat.initial_memory
    for k, t in enumerate(joints):
        v = history.vertices[k]
        if strat.act(mem, v) != t[i]:
            raise ValueError(f"deviator departs from its strategy in the history")
        mem = strat.advance(mem, v, t)
    lasso.validate(arena)
    ps = lasso.positions()
    if ps[0].vertex != history.last:
        raise ValueError("adherent play does not start at the history's end")
    for k, p in enumerate(ps):
        if strat.act(mem, p.vertex) != p.joint[i]:
            raise ValueError(f"deviator departs from its strategy at step {k}")
        mem = strat.advance(mem, p.vertex, p.joint)
    hist_letters = [arena.letter(history.vertices[k], joints[k])
                    for k in range(len(joints))]
    word = lasso.word(arena)
    from .ltl import LassoWord
    return LassoWord(tuple(hist_letters) + word.prefix, word.cycle)
