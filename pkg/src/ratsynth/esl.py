"""Strategy logic with first-order history variables.

Formulas quantify over strategies (one variable sort per player) and over
histories; base formulas evaluate an LTL payload on the outcome of the
assigned profile, optionally shifted by an assigned history.  The evaluator
is explicitly bounded: strategy quantifiers range over Mealy machines with at
most ``k`` latent states and history quantifiers over histories of at most
``ell`` vertices, which makes it an approximate oracle (the bounds are part
of every result); base cases are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arena import Arena, History
from .bruteforce import all_histories, all_latent_controllers
from .ltl import LtlFormula, eval_lasso
from .strategy import Profile, Strategy, outcome, shifted_outcome


class EslError(ValueError):
    pass


@dataclass(frozen=True)
class EslFormula:
    pass


@dataclass(frozen=True)
class EBase(EslFormula):
    """psi(z) or psi(z; h): LTL payload over a named profile, optionally
    shifted by a history variable."""

    psi: LtlFormula
    profile: tuple[str, ...]  # strategy variable per player index
    history: str | None = None


@dataclass(frozen=True)
class EOr(EslFormula):
    left: EslFormula
    right: EslFormula


@dataclass(frozen=True)
class ENot(EslFormula):
    arg: EslFormula


@dataclass(frozen=True)
class EExistsStrat(EslFormula):
    var: str
    player: int
    body: EslFormula


@dataclass(frozen=True)
class EExistsHist(EslFormula):
    var: str
    body: EslFormula


def eand(a, b):
    return ENot(EOr(ENot(a), ENot(b)))


def eimplies(a, b):
    return EOr(ENot(a), b)


def eforall_strat(var, player, body):
    return ENot(EExistsStrat(var, player, ENot(body)))


def eforall_hist(var, body):
    return ENot(EExistsHist(var, ENot(body)))


def eand_all(parts):
    parts = list(parts)
    if not parts:
        raise EslError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = eand(out, p)
    return out


def free_variables(f: EslFormula) -> frozenset[str]:
    if isinstance(f, EBase):
        out = set(f.profile)
        if f.history is not None:
            out.add(f.history)
        return frozenset(out)
    if isinstance(f, EOr):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, ENot):
        return free_variables(f.arg)
    if isinstance(f, (EExistsStrat, EExistsHist)):
        return free_variables(f.body) - {f.var}
    raise EslError(f"unknown node: {f!r}")


def alternation_depth(f: EslFormula) -> int:
    """Maximal number of quantifier-kind switches along any syntax path,
    counting a quantifier's effective kind under negation polarity."""

    def go(node, pol):
        # returns a set of (switches-below, outermost-effective-kind) pairs
        if isinstance(node, EBase):
            return {(0, None)}
        if isinstance(node, ENot):
            return go(node.arg, not pol)
        if isinstance(node, EOr):
            return go(node.left, pol) | go(node.right, pol)
        if isinstance(node, (EExistsStrat, EExistsHist)):
            kind = "E" if pol else "A"
            out = set()
            for s, h in go(node.body, pol):
                out.add((s + (1 if h is not None and h != kind else 0), kind))
            return out
        raise EslError(f"unknown node: {node!r}")

    return max(s for s, _ in go(f, True))


# -- the solution-concept formulas ------------------------------------------


def build_solution_formula(gamma: str, objectives) -> tuple[EslFormula, EslFormula]:
    """The open formula Psi^gamma(y) stating that the named profile is a
    solution, and the closed formula Phi^gamma = exists y.(phi0(y) & Psi).

    ``objectives`` lists phi_0..phi_n (system first); agents are 1..n.
    """
    n = len(objectives) - 1
    if n < 1:
        raise EslError("need at least one non-system agent")
    ys = tuple(f"y{i}" for i in range(n + 1))
    agents = range(1, n + 1)

    def prof(subst: dict) -> tuple:
        return tuple(subst.get(i, ys[i]) for i in range(n + 1))

    if gamma == "ds":
        # for each agent i: whenever some profile with the system's strategy
        # satisfies phi_i, the same profile with agent i switched to y_i does
        parts = []
        for i in agents:
            zs = {j: f"z{j}" for j in agents}
            left = EBase(objectives[i], prof(zs))
            right = EBase(objectives[i], prof({**zs, i: ys[i]}))
            body = eimplies(left, right)
            for j in sorted(agents, reverse=True):
                body = eforall_strat(f"z{j}", j, body)
            parts.append(body)
        psi = eand_all(parts)
    elif gamma == "nash":
        parts = []
        for i in agents:
            left = EBase(objectives[i], prof({i: f"z{i}"}))
            right = EBase(objectives[i], prof({}))
            parts.append(eforall_strat(f"z{i}", i, eimplies(left, right)))
        psi = eand_all(parts)
    elif gamma == "spe":
        parts = []
        for i in agents:
            left = EBase(objectives[i], prof({i: f"z{i}"}), history="h")
            right = EBase(objectives[i], prof({}), history="h")
            parts.append(eforall_strat(f"z{i}", i, eimplies(left, right)))
        psi = eforall_hist("h", eand_all(parts))
    else:
        raise EslError(f"unknown solution concept: {gamma!r}")

    phi = eand(EBase(objectives[0], prof({})), psi)
    for i in sorted(range(n + 1), reverse=True):
        phi = EExistsStrat(ys[i], i, phi)
    return psi, phi


# -- pretty printing ----------------------------------------------------------


def pretty(f: EslFormula) -> str:
    if isinstance(f, EBase):
        args = ",".join(f.profile)
        if f.history is not None:
            return f"[{f.psi}]({args}; {f.history})"
        return f"[{f.psi}]({args})"
    if isinstance(f, ENot):
        # sugar-aware printing: forall, conjunction, implication
        g = f.arg
        if isinstance(g, EExistsStrat) and isinstance(g.body, ENot):
            return f"forall {g.var}:{g.player}. {pretty(g.body.arg)}"
        if isinstance(g, EExistsHist) and isinstance(g.body, ENot):
            return f"forall {g.var}. {pretty(g.body.arg)}"
        if isinstance(g, EOr) and isinstance(g.left, ENot) \
                and isinstance(g.right, ENot):
            return f"({pretty(g.left.arg)} & {pretty(g.right.arg)})"
        return f"!({pretty(g)})"
    if isinstance(f, EOr):
        if isinstance(f.left, ENot):
            return f"({pretty(f.left.arg)} -> {pretty(f.right)})"
        return f"({pretty(f.left)} | {pretty(f.right)})"
    if isinstance(f, EExistsStrat):
        return f"exists {f.var}:{f.player}. {pretty(f.body)}"
    if isinstance(f, EExistsHist):
        return f"exists {f.var}. {pretty(f.body)}"
    raise EslError(f"unknown node: {f!r}")


# -- bounded evaluation --------------------------------------------------------


def esl_eval_bounded(formula: EslFormula, arena: Arena, assignment: dict,
                     memory_bound: int, history_bound: int) -> bool:
    """Evaluate with strategy quantifiers bounded to ``memory_bound`` latent
    states and history quantifiers to ``history_bound`` vertices."""
    missing = free_variables(formula) - set(assignment)
    if missing:
        raise EslError(f"unbound free variables: {sorted(missing)}")

    def ev(node, asg):
        if isinstance(node, EBase):
            strategies = []
            for i, var in enumerate(node.profile):
                s = asg[var]
                if not isinstance(s, Strategy) or s.owner != i:
                    raise EslError(
                        f"variable {var!r} must hold a strategy of player {i}")
                strategies.append(s)
            profile = Profile(tuple(strategies))
            if node.history is None:
                play = outcome(arena, profile)
            else:
                h = asg[node.history]
                if not isinstance(h, History):
                    raise EslError(f"variable {node.history!r} must hold a history")
                play = shifted_outcome(arena, profile, h)
            return eval_lasso(node.psi, play.word(arena))
        if isinstance(node, EOr):
            return ev(node.left, asg) or ev(node.right, asg)
        if isinstance(node, ENot):
            return not ev(node.arg, asg)
        if isinstance(node, EExistsStrat):
            for s in all_latent_controllers(arena, node.player, memory_bound):
                if ev(node.body, {**asg, node.var: s}):
                    return True
            return False
        if isinstance(node, EExistsHist):
            for h in all_histories(arena, history_bound):
                if ev(node.body, {**asg, node.var: h}):
                    return True
            return False
        raise EslError(f"unknown node: {node!r}")

    return ev(formula, dict(assignment))
