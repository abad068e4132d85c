"""Translation of LTL to nondeterministic Buchi word automata.

The construction is a standard tableau expansion: states carry the literal
constraints asserted at the current position plus the obligations postponed
to the next position; generalized acceptance (one set per Until) is removed
with a counter.  Together with :func:`ratsynth.ltl.eval_lasso` this gives two
independent evaluation routes for objectives on ultimately periodic words.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ltl
from .ltl import (And, Atom, Ff, LassoWord, LtlFormula, Next, Not, Or,
                  Release, Tt, Until)


class BuchiError(ValueError):
    pass


def nnf(f: LtlFormula) -> LtlFormula:
    """Negation normal form (negations pushed onto atoms)."""
    if isinstance(f, (Tt, Ff, Atom)):
        return f
    if isinstance(f, And):
        return And(nnf(f.left), nnf(f.right))
    if isinstance(f, Or):
        return Or(nnf(f.left), nnf(f.right))
    if isinstance(f, Next):
        return Next(nnf(f.arg))
    if isinstance(f, Until):
        return Until(nnf(f.left), nnf(f.right))
    if isinstance(f, Release):
        return Release(nnf(f.left), nnf(f.right))
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Tt):
            return ltl.FF
        if isinstance(g, Ff):
            return ltl.TT
        if isinstance(g, Atom):
            return f
        if isinstance(g, Not):
            return nnf(g.arg)
        if isinstance(g, And):
            return Or(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Or):
            return And(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Next):
            return Next(nnf(Not(g.arg)))
        if isinstance(g, Until):
            return Release(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Release):
            return Until(nnf(Not(g.left)), nnf(Not(g.right)))
    raise BuchiError(f"unknown formula node: {f!r}")


# A tableau state: positive/negative literal guard on the current letter,
# the formulas that must hold from the next position on, and the Untils
# whose fulfilment this state postpones (deferred via their left branch).
# The last component drives acceptance only: an Until that merely reappears
# in the next-obligations (say, re-introduced through a Next under a
# Release) is not pending if it is fulfilled at the current position.
_State = tuple[frozenset, frozenset, frozenset, frozenset]


def _expand(obligations) -> set[_State]:
    """All saturated states satisfying the given set of NNF formulas."""
    out: set[_State] = set()

    def go(todo, pos, neg, nxt, pend, seen):
        while todo:
            f = todo.pop()
            if f in seen:
                continue
            seen = seen | {f}
            if isinstance(f, Tt):
                continue
            if isinstance(f, Ff):
                return
            if isinstance(f, Atom):
                if f.name in neg:
                    return
                pos = pos | {f.name}
            elif isinstance(f, Not):  # NNF: argument is an atom
                if f.arg.name in pos:
                    return
                neg = neg | {f.arg.name}
            elif isinstance(f, And):
                todo = todo + [f.left, f.right]
            elif isinstance(f, Next):
                nxt = nxt | {f.arg}
            elif isinstance(f, Or):
                go(todo + [f.left], pos, neg, nxt, pend, seen)
                go(todo + [f.right], pos, neg, nxt, pend, seen)
                return
            elif isinstance(f, Until):
                go(todo + [f.right], pos, neg, nxt, pend, seen)
                go(todo + [f.left], pos, neg, nxt | {f}, pend | {f}, seen)
                return
            elif isinstance(f, Release):
                go(todo + [f.right, f.left], pos, neg, nxt, pend, seen)
                go(todo + [f.right], pos, neg, nxt | {f}, pend, seen)
                return
            else:
                raise BuchiError(f"unknown formula node: {f!r}")
        out.add((frozenset(pos), frozenset(neg), frozenset(nxt),
                 frozenset(pend)))

    go(list(obligations), frozenset(), frozenset(), frozenset(), frozenset(),
       frozenset())
    return out


@dataclass(frozen=True)
class Nbw:
    """Nondeterministic Buchi word automaton over proposition-set letters.

    Each state constrains the letter read while leaving it: ``guard[q]`` is a
    (positive, negative) literal pair.  ``succ[q]`` is the set of successor
    states, independent of the letter once the guard matches.
    """

    states: tuple
    initial: frozenset
    accepting: frozenset
    guard: dict
    succ: dict

    def delta(self, q, letter) -> frozenset:
        pos, neg = self.guard[q]
        if pos <= letter and not (neg & letter):
            return self.succ[q]
        return frozenset()

    def step_set(self, qs, letter) -> frozenset:
        out = set()
        for q in qs:
            out |= self.delta(q, letter)
        return frozenset(out)

    def accepts_lasso(self, word: LassoWord, start=None) -> bool:
        return nbw_accepts_lasso(self, word, start)


def ltl_to_nbw(formula: LtlFormula) -> Nbw:
    """Tableau translation; language-equivalent to the LTL semantics."""
    f = nnf(formula)
    untils = sorted(_untils_of(f), key=str)
    k = len(untils)

    initial_cores = _expand([f])
    succ_cache: dict[frozenset, set] = {}

    def successors(core):
        nxt = core[2]
        hit = succ_cache.get(nxt)
        if hit is None:
            hit = _expand(nxt)
            succ_cache[nxt] = hit
        return hit

    # explore the tableau states reachable from the initial cores
    cores = set(initial_cores)
    frontier = list(initial_cores)
    core_succ = {}
    while frontier:
        c = frontier.pop()
        nexts = successors(c)
        core_succ[c] = nexts
        for d in nexts:
            if d not in cores:
                cores.add(d)
                frontier.append(d)

    def carried(core, u):
        return u in core[3]

    if k == 0:
        states = tuple(sorted(cores, key=repr))
        return Nbw(states=states,
                   initial=frozenset(initial_cores),
                   accepting=frozenset(states),
                   guard={c: (c[0], c[1]) for c in states},
                   succ={c: frozenset(core_succ[c]) for c in states})

    # counter-based degeneralization over the k Until obligations
    states = tuple(sorted(((c, j) for c in cores for j in range(k)), key=repr))
    guard = {s: (s[0][0], s[0][1]) for s in states}
    succ = {}
    accepting = set()
    for c in cores:
        for j in range(k):
            fulfilled = not carried(c, untils[j])
            nj = (j + 1) % k if fulfilled else j
            succ[(c, j)] = frozenset((d, nj) for d in core_succ[c])
            if fulfilled and j == k - 1:
                accepting.add((c, j))
    return Nbw(states=states,
               initial=frozenset((c, 0) for c in initial_cores),
               accepting=frozenset(accepting),
               guard=guard, succ=succ)


def _untils_of(f):
    if isinstance(f, (Tt, Ff, Atom)):
        return set()
    if isinstance(f, (Not, Next)):
        return _untils_of(f.arg)
    sub = _untils_of(f.left) | _untils_of(f.right)
    if isinstance(f, Until):
        sub.add(f)
    return sub


def nbw_accepts_lasso(nbw: Nbw, word: LassoWord, start=None) -> bool:
    """Membership of the ultimately periodic word, from ``start`` states.

    Product of the automaton with the word positions; acceptance holds iff a
    reachable accepting product node within the cycle region lies on a cycle.
    """
    starts = nbw.initial if start is None else frozenset(start)
    n = word.positions
    p = len(word.prefix)

    def succ_pos(i):
        return i + 1 if i + 1 < n else p

    edges = {}

    def node_succ(node):
        hit = edges.get(node)
        if hit is None:
            q, i = node
            hit = tuple((q2, succ_pos(i)) for q2 in nbw.delta(q, word.letter(i)))
            edges[node] = hit
        return hit

    reachable = set()
    stack = [(q, 0) for q in starts]
    while stack:
        node = stack.pop()
        if node in reachable:
            continue
        reachable.add(node)
        stack.extend(node_succ(node))

    candidates = [nd for nd in reachable
                  if nd[0] in nbw.accepting and nd[1] >= p]
    for cand in candidates:
        seen = set()
        stack = list(node_succ(cand))
        while stack:
            node = stack.pop()
            if node == cand:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(node_succ(node))
    return False


def empty_nbw() -> Nbw:
    """An automaton accepting no word at all."""
    return Nbw(states=("q",), initial=frozenset(["q"]), accepting=frozenset(),
               guard={"q": (frozenset(), frozenset())},
               succ={"q": frozenset(["q"])})
