"""Alternating parity tree automata over finitely-branching labeled trees.

Transitions are positive boolean formulas over (direction, state) pairs; a
run tree is accepting when the least priority occurring infinitely often
along every path is even.  Regular trees are given as finite deterministic
labeling machines, so membership reduces to a finite parity game and
emptiness (for Buchi-index automata) to a parity game over a breakpoint
dealternation.  The base construction accepts exactly the strategy-history
trees with a legally marked history such that some marked prefix, extended
with the advice-obedient continuation, satisfies a given LTL objective.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .boolgames import ParityGame, solve_parity
from .buchi import ltl_to_nbw
from .ltl import LtlFormula


class AptError(ValueError):
    pass


class AptCeilingError(AptError):
    """A construction would exceed the configured state ceiling."""


class AptUnsupportedError(AptError):
    """The operation needs machinery beyond this toolkit's scope."""


# -- positive boolean formulas -------------------------------------------------


@dataclass(frozen=True)
class PFormula:
    pass


@dataclass(frozen=True)
class PTrue(PFormula):
    pass


@dataclass(frozen=True)
class PFalse(PFormula):
    pass


@dataclass(frozen=True)
class PAtom(PFormula):
    atom: object


@dataclass(frozen=True)
class PAnd(PFormula):
    args: tuple


@dataclass(frozen=True)
class POr(PFormula):
    args: tuple


def pand(parts) -> PFormula:
    """Conjunction with flattening; empty conjunction is true."""
    flat = []
    for p in parts:
        if isinstance(p, PFalse):
            return PFalse()
        if isinstance(p, PTrue):
            continue
        if isinstance(p, PAnd):
            flat.extend(p.args)
        else:
            flat.append(p)
    if not flat:
        return PTrue()
    if len(flat) == 1:
        return flat[0]
    return PAnd(tuple(flat))


def por(parts) -> PFormula:
    """Disjunction with flattening; empty disjunction is false."""
    flat = []
    for p in parts:
        if isinstance(p, PTrue):
            return PTrue()
        if isinstance(p, PFalse):
            continue
        if isinstance(p, POr):
            flat.extend(p.args)
        else:
            flat.append(p)
    if not flat:
        return PFalse()
    if len(flat) == 1:
        return flat[0]
    return POr(tuple(flat))


def dual(f: PFormula) -> PFormula:
    """Swap conjunction with disjunction and true with false."""
    if isinstance(f, PTrue):
        return PFalse()
    if isinstance(f, PFalse):
        return PTrue()
    if isinstance(f, PAtom):
        return f
    if isinstance(f, PAnd):
        return por(dual(a) for a in f.args)
    if isinstance(f, POr):
        return pand(dual(a) for a in f.args)
    raise AptError(f"unknown formula node: {f!r}")


def atoms_of(f: PFormula) -> frozenset:
    if isinstance(f, (PTrue, PFalse)):
        return frozenset()
    if isinstance(f, PAtom):
        return frozenset([f.atom])
    if isinstance(f, (PAnd, POr)):
        out = frozenset()
        for a in f.args:
            out |= atoms_of(a)
        return out
    raise AptError(f"unknown formula node: {f!r}")


def map_atoms(f: PFormula, fn) -> PFormula:
    if isinstance(f, (PTrue, PFalse)):
        return f
    if isinstance(f, PAtom):
        return PAtom(fn(f.atom))
    if isinstance(f, PAnd):
        return PAnd(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, POr):
        return POr(tuple(map_atoms(a, fn) for a in f.args))
    raise AptError(f"unknown formula node: {f!r}")


def minimal_models(f: PFormula) -> list[frozenset]:
    """The inclusion-minimal sets of atoms satisfying the formula."""

    def prune(models):
        out = []
        for m in sorted(set(models), key=len):
            if not any(k <= m for k in out):
                out.append(m)
        return out

    if isinstance(f, PTrue):
        return [frozenset()]
    if isinstance(f, PFalse):
        return []
    if isinstance(f, PAtom):
        return [frozenset([f.atom])]
    if isinstance(f, POr):
        got = []
        for a in f.args:
            got.extend(minimal_models(a))
        return prune(got)
    if isinstance(f, PAnd):
        got = [frozenset()]
        for a in f.args:
            sub = minimal_models(a)
            got = [m | s for m in got for s in sub]
            got = prune(got)
        return got
    raise AptError(f"unknown formula node: {f!r}")


# -- automata and trees --------------------------------------------------------


@dataclass(frozen=True)
class Apt:
    """Alternating parity tree automaton.

    ``initial`` is a positive boolean formula over states; ``delta`` maps
    (state, letter) to a positive boolean formula over (direction, state)
    pairs.  Acceptance: on every path of a run tree, the least priority seen
    infinitely often is even.
    """

    alphabet: tuple
    directions: tuple
    states: tuple
    initial: PFormula
    delta: dict
    priority: dict

    def validate(self) -> None:
        states = set(self.states)
        dirs = set(self.directions)
        if not atoms_of(self.initial) <= states:
            raise AptError("initial condition mentions undeclared states")
        for q in self.states:
            if q not in self.priority:
                raise AptError(f"state {q!r} has no priority")
            for a in self.alphabet:
                f = self.delta.get((q, a))
                if f is None:
                    raise AptError(f"missing transition at ({q!r}, {a!r})")
                for (d, q2) in atoms_of(f):
                    if d not in dirs or q2 not in states:
                        raise AptError(
                            f"transition at ({q!r}, {a!r}) mentions "
                            f"undeclared direction or state")

    @property
    def max_priority(self) -> int:
        return max(self.priority.values(), default=0)


@dataclass(frozen=True)
class RegularTree:
    """A labeled tree with finitely many distinct subtrees, given as a
    deterministic labeling machine: each machine state carries the label of
    the nodes it represents and one successor state per direction."""

    states: tuple
    initial: object
    succ: dict  # (state, direction) -> state
    label: dict  # state -> letter

    def validate(self, directions) -> None:
        for s in self.states:
            if s not in self.label:
                raise AptError(f"tree state {s!r} has no label")
            for d in directions:
                if (s, d) not in self.succ:
                    raise AptError(f"tree state {s!r} lacks direction {d!r}")


def constant_tree(letter, directions) -> RegularTree:
    return RegularTree(states=(0,), initial=0,
                       succ={(0, d): 0 for d in directions},
                       label={0: letter})


# -- membership ----------------------------------------------------------------


def apt_run_regular_tree(apt: Apt, tree: RegularTree) -> bool:
    """Decide acceptance by solving the membership parity game: the
    automaton resolves disjunctions, a pathfinder resolves conjunctions."""
    tree.validate(apt.directions)
    alphabet = set(apt.alphabet)
    neutral = max(apt.max_priority, 1)
    top = ("sink", True)
    bot = ("sink", False)
    nodes = {top: (1, 0, (top,)), bot: (0, 1, (bot,))}

    def formula_node(tag, t, f):
        """Game node for a formula; ``tag`` separates the initial condition
        (atoms are states, read at the root) from transition formulas (atoms
        are (direction, state) pairs, read at the t-children)."""
        if isinstance(f, PTrue):
            return top
        if isinstance(f, PFalse):
            return bot
        key = ("f", tag, t, f)
        if key in nodes:
            return key
        nodes[key] = None  # reserve before recursing (formulas are finite)
        if isinstance(f, PAtom):
            if tag == "init":
                succ = state_node(t, f.atom)
            else:
                d, q = f.atom
                succ = state_node(tree.succ[(t, d)], q)
            nodes[key] = (0, neutral, (succ,))
        elif isinstance(f, POr):
            nodes[key] = (0, neutral,
                          tuple(formula_node(tag, t, a) for a in f.args))
        elif isinstance(f, PAnd):
            nodes[key] = (1, neutral,
                          tuple(formula_node(tag, t, a) for a in f.args))
        else:
            raise AptError(f"unknown formula node: {f!r}")
        return key

    def state_node(t, q):
        key = ("s", t, q)
        if key in nodes:
            return key
        nodes[key] = None
        letter = tree.label[t]
        if letter not in alphabet:
            raise AptError(f"tree label {letter!r} not in automaton alphabet")
        nodes[key] = (0, apt.priority[q],
                      (formula_node("step", t, apt.delta[(q, letter)]),))
        return key

    init = formula_node("init", tree.initial, apt.initial)
    if any(v is None for v in nodes.values()):
        raise AptError("incomplete game construction")
    game = ParityGame(nodes=tuple(nodes),
                      owner={k: v[0] for k, v in nodes.items()},
                      edges={k: v[2] for k, v in nodes.items()},
                      priority={k: v[1] for k, v in nodes.items()})
    sol = solve_parity(game)
    return init in sol.win[0]


# -- the base construction -----------------------------------------------------


def strategy_history_alphabet(sigma) -> tuple:
    """Labels of strategy-history trees over joint-action set sigma: the
    advice letter paired with the on-history mark."""
    return tuple((s, mark) for s in sigma for mark in (False, True))


def apt_base(psi: LtlFormula, sigma) -> Apt:
    """Automaton over strategy-history trees for the objective ``psi``.

    Directions are the joint actions; labels pair the profile's advice with
    an on-history mark.  The automaton conjoins a marking gadget (states
    q_his/q_fut/q_acc/q_rej) enforcing that the marks form one finite path
    from the root, with a product component that traces some marked prefix
    and then the advice-obedient continuation through a Buchi automaton for
    ``psi``.  It accepts a legally marked tree iff some marked prefix,
    extended obediently, yields a word satisfying ``psi``.
    """
    sigma = tuple(sigma)
    nbw = ltl_to_nbw(psi)
    alphabet = strategy_history_alphabet(sigma)

    states = ["q_his", "q_fut", "q_acc", "q_rej"]
    states += [("his", q) for q in nbw.states]
    states += [("fut", q) for q in nbw.states]

    priority = {"q_his": 1, "q_fut": 0, "q_acc": 0, "q_rej": 1}
    for q in nbw.states:
        priority[("his", q)] = 1
        priority[("fut", q)] = 0 if q in nbw.accepting else 1

    delta = {}
    for (adv, mark) in alphabet:
        letter = (adv, mark)
        delta[("q_acc", letter)] = pand(PAtom((d, "q_acc")) for d in sigma)
        delta[("q_rej", letter)] = pand(PAtom((d, "q_rej")) for d in sigma)
        if mark:
            # on the history: exactly one child continues it; every sibling's
            # subtree must stay unmarked along obedient continuations
            delta[("q_his", letter)] = por(
                pand([PAtom((d, "q_his"))]
                     + [PAtom((d2, "q_fut")) for d2 in sigma if d2 != d])
                for d in sigma)
            # a mark after the history ended: the marking is illegal
            delta[("q_fut", letter)] = pand(
                PAtom((d, "q_rej")) for d in sigma)
        else:
            # the history ended at the parent: nothing below may be marked
            # in a way that extends a root path
            delta[("q_his", letter)] = pand(
                PAtom((d, "q_fut")) for d in sigma)
            delta[("q_fut", letter)] = pand(
                [PAtom((adv, "q_fut"))]
                + [PAtom((d, "q_acc")) for d in sigma if d != adv])
        for q in nbw.states:
            if mark:
                # extend the traced prefix along any marked child, or end it
                # here and continue with the advice
                options = [PAtom((d, ("his", q2)))
                           for d in sigma for q2 in sorted(
                               nbw.delta(q, d), key=repr)]
                options += [PAtom((adv, ("fut", q2)))
                            for q2 in sorted(nbw.delta(q, adv), key=repr)]
                delta[(("his", q), letter)] = por(options)
            else:
                delta[(("his", q), letter)] = PFalse()
            delta[(("fut", q), letter)] = por(
                PAtom((adv, ("fut", q2)))
                for q2 in sorted(nbw.delta(q, adv), key=repr))

    initial = pand([por(PAtom(("his", q)) for q in sorted(nbw.initial,
                                                          key=repr)),
                    PAtom("q_his")])
    apt = Apt(alphabet=alphabet, directions=sigma, states=tuple(states),
              initial=initial, delta=delta, priority=priority)
    apt.validate()
    return apt


# -- boolean closure -----------------------------------------------------------


def _normalize_priorities(priority: dict) -> dict:
    out = dict(priority)
    while out and min(out.values()) >= 2:
        out = {q: p - 2 for q, p in out.items()}
    return out


def _tagged(apt: Apt, tag) -> tuple:
    def tag_state(q):
        return (tag, q)

    states = tuple(tag_state(q) for q in apt.states)
    initial = map_atoms(apt.initial, tag_state)
    delta = {(tag_state(q), a): map_atoms(f, lambda dq: (dq[0],
                                                         tag_state(dq[1])))
             for (q, a), f in apt.delta.items()}
    priority = {tag_state(q): p for q, p in apt.priority.items()}
    return states, initial, delta, priority


def apt_complement(apt: Apt) -> Apt:
    """Dualize every formula and shift priorities by one (then drop even
    offsets so complementation is an involution on priorities)."""
    return Apt(alphabet=apt.alphabet, directions=apt.directions,
               states=apt.states, initial=dual(apt.initial),
               delta={k: dual(f) for k, f in apt.delta.items()},
               priority=_normalize_priorities(
                   {q: p + 1 for q, p in apt.priority.items()}))


def _apt_pair(kind, a: Apt, b: Apt) -> Apt:
    if a.alphabet != b.alphabet or a.directions != b.directions:
        raise AptError("operands must share alphabet and directions")
    sa, ia, da, pa = _tagged(a, 0)
    sb, ib, db, pb = _tagged(b, 1)
    combine = por if kind == "union" else pand
    return Apt(alphabet=a.alphabet, directions=a.directions,
               states=sa + sb, initial=combine([ia, ib]),
               delta={**da, **db}, priority={**pa, **pb})


def dealternate(apt: Apt, state_ceiling: int = 20000) -> Apt:
    """Breakpoint dealternation of a Buchi-index automaton: the result is
    nondeterministic in shape (each transition a disjunction of full
    direction conjunctions) and language-equivalent.
    """
    if not set(apt.priority.values()) <= {0, 1}:
        raise AptUnsupportedError(
            "dealternation is implemented for priorities {0,1} only; "
            f"got {sorted(set(apt.priority.values()))}")
    fin = frozenset(q for q in apt.states if apt.priority[q] == 0)

    def successors(state, letter):
        s, o = state
        per_state = []
        for q in sorted(s, key=repr):
            models = minimal_models(apt.delta[(q, letter)])
            if not models:
                return []
            per_state.append((q, models))
        out = []
        for pick in iproduct(*[m for _, m in per_state]):
            chosen = dict(zip([q for q, _ in per_state], pick))
            sd = {d: set() for d in apt.directions}
            od = {d: set() for d in apt.directions}
            for q, model in chosen.items():
                for (d, q2) in model:
                    sd[d].add(q2)
                    if o and q in o:
                        od[d].add(q2)
            succ = {}
            for d in apt.directions:
                new_s = frozenset(sd[d])
                if o:
                    new_o = frozenset(od[d]) - fin
                else:
                    new_o = new_s - fin
                succ[d] = (new_s, new_o)
            out.append(succ)
        # drop duplicate choices
        uniq = {tuple(sorted(s.items(), key=repr)): s for s in out}
        return list(uniq.values())

    initials = [(m, frozenset()) for m in minimal_models(apt.initial)]
    seen = set(initials)
    frontier = list(initials)
    delta = {}
    while frontier:
        state = frontier.pop()
        for letter in apt.alphabet:
            choices = successors(state, letter)
            delta[(state, letter)] = por(
                pand(PAtom((d, succ[d])) for d in apt.directions)
                for succ in choices)
            for succ in choices:
                for d in apt.directions:
                    if succ[d] not in seen:
                        seen.add(succ[d])
                        if len(seen) > state_ceiling:
                            raise AptCeilingError(
                                f"dealternation exceeds {state_ceiling} "
                                "states")
                        frontier.append(succ[d])

    states = tuple(sorted(seen, key=repr))
    priority = {st: (0 if not st[1] else 1) for st in states}
    initial = por(PAtom(st) for st in initials)
    return Apt(alphabet=apt.alphabet, directions=apt.directions,
               states=states, initial=initial, delta=delta,
               priority=priority)


def apt_project(apt: Apt, component: int,
                state_ceiling: int = 20000) -> Apt:
    """Erase one tuple component of the labels, guessing it on the fly.

    Requires dealternation first, so only Buchi-index operands are
    supported; the result is nondeterministic in shape.
    """
    for a in apt.alphabet:
        if not isinstance(a, tuple) or not 0 <= component < len(a):
            raise AptError(
                "projection needs tuple labels with the given component")
    nd = dealternate(apt, state_ceiling)

    def erase(letter):
        return letter[:component] + letter[component + 1:]

    new_alphabet = tuple(dict.fromkeys(erase(a) for a in nd.alphabet))
    delta = {}
    for q in nd.states:
        for a2 in new_alphabet:
            delta[(q, a2)] = por(nd.delta[(q, a)] for a in nd.alphabet
                                 if erase(a) == a2)
    return Apt(alphabet=new_alphabet, directions=nd.directions,
               states=nd.states, initial=nd.initial, delta=delta,
               priority=dict(nd.priority))


def apt_compose(kind: str, operands, component: int | None = None,
                state_ceiling: int = 20000) -> Apt:
    """Closure operations: union, intersection, complement, project."""
    operands = list(operands)
    if kind == "complement":
        (a,) = operands
        return apt_complement(a)
    if kind in ("union", "intersection"):
        if len(operands) < 2:
            raise AptError(f"{kind} needs at least two operands")
        out = operands[0]
        for b in operands[1:]:
            out = _apt_pair(kind, out, b)
        return out
    if kind == "project":
        (a,) = operands
        if component is None:
            raise AptError("project needs the label component to erase")
        return apt_project(a, component, state_ceiling)
    raise AptError(f"unknown composition kind: {kind!r}")


# -- emptiness -----------------------------------------------------------------


def apt_emptiness(apt: Apt,
                  state_ceiling: int = 20000) -> RegularTree | None:
    """A regular tree accepted by the automaton, or None if it is empty.

    Implemented for Buchi-index automata: dealternate, then solve the
    emptiness parity game (the automaton picks a label and a transition
    choice, the pathfinder picks a direction).  The witness is re-checked
    with the membership game before being returned.
    """
    nd = dealternate(apt, state_ceiling)

    nodes = {}
    # state node: ("s", q); choice node: ("c", q, letter, succ-tuple)
    init_models = minimal_models(nd.initial)
    if not init_models:
        return None

    def add_state(q):
        key = ("s", q)
        if key in nodes:
            return key
        nodes[key] = None
        moves = []
        for letter in nd.alphabet:
            for model in minimal_models(nd.delta[(q, letter)]):
                succ = {}
                ok = True
                for d in nd.directions:
                    qs = [q2 for (d2, q2) in model if d2 == d]
                    if len(qs) > 1:
                        ok = False  # nondeterministic shape: one per branch
                        break
                    succ[d] = qs[0] if qs else None
                if not ok:
                    continue
                ckey = ("c", q, letter,
                        tuple(succ[d] for d in nd.directions))
                moves.append(ckey)
                if ckey not in nodes:
                    succs = []
                    for d, q2 in zip(nd.directions, ckey[3]):
                        succs.append(add_state(q2) if q2 is not None
                                     else ("s", "TRAP"))
                    nodes[ckey] = (1, 1, tuple(succs))
                if len(nodes) > 4 * state_ceiling:
                    raise AptCeilingError(
                        f"emptiness game exceeds {4 * state_ceiling} nodes")
        if not moves:
            nodes[key] = (0, 1, (("s", "DEAD"),))
        else:
            nodes[key] = (0, nd.priority[q], tuple(moves))
        return key

    nodes[("s", "TRAP")] = (1, 0, (("s", "TRAP"),))  # vacuous branch: accept
    nodes[("s", "DEAD")] = (0, 1, (("s", "DEAD"),))
    for m in init_models:
        # nondeterministic initial condition: one state per minimal model
        if len(m) != 1:
            raise AptError("dealternation produced a non-singleton initial")
        add_state(next(iter(m)))

    game = ParityGame(nodes=tuple(nodes),
                      owner={k: v[0] for k, v in nodes.items()},
                      edges={k: v[2] for k, v in nodes.items()},
                      priority={k: v[1] for k, v in nodes.items()})
    sol = solve_parity(game)
    start = None
    for m in init_models:
        q = next(iter(m))
        if ("s", q) in sol.win[0]:
            start = q
            break
    if start is None:
        return None

    strat = sol.strategy[0]
    # unfold the positional strategy into a regular tree
    label = {}
    succ = {}
    states = []
    frontier = [start]
    seen = {start}
    fallback = nd.alphabet[0]
    while frontier:
        q = frontier.pop()
        states.append(q)
        key = ("s", q)
        move = strat.get(key)
        if move is None or move[0] != "c":
            # vacuously winning state (trap for the pathfinder): any labeling
            # below it is fine, fill deterministically
            label[q] = fallback
            for d in nd.directions:
                succ[(q, d)] = q
            continue
        _, _, letter, succs = move
        label[q] = letter
        for d, q2 in zip(nd.directions, succs):
            tgt = q2 if q2 is not None else q
            if q2 is None:
                # unconstrained branch: loop on a self-labeled state
                tgt = ("free",)
                if tgt not in seen:
                    seen.add(tgt)
                    states.append(tgt)
                    label[tgt] = fallback
                    for d2 in nd.directions:
                        succ[(tgt, d2)] = tgt
            succ[(q, d)] = tgt
            if tgt not in seen:
                seen.add(tgt)
                frontier.append(tgt)

    tree = RegularTree(states=tuple(states), initial=start,
                       succ=succ, label=label)
    tree.validate(nd.directions)
    if not apt_run_regular_tree(apt, tree):
        raise AptError("internal error: emptiness witness failed membership")
    return tree
