"""Finite distributive De Morgan lattices.

A lattice is supplied extensionally: elements, an order relation, and a
negation table.  Join and meet tables are derived from the order (rejecting
inputs where least upper bounds or greatest lower bounds are not unique) and
all algebraic laws can be checked by brute force, which is fine at the
intended scale (at most a few dozen elements).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations


class LatticeError(ValueError):
    """Raised for malformed lattice descriptions."""


@dataclass(frozen=True)
class LawViolation:
    law: str
    witness: tuple

    def __str__(self):
        return f"{self.law}: witness {self.witness}"


@dataclass(frozen=True)
class Lattice:
    """Finite lattice with an explicit order and a unary negation.

    ``elements`` are opaque identifiers; ``leq`` is the full (reflexive,
    transitive) order relation as a set of pairs.  ``join_table`` and
    ``meet_table`` are total binary maps, ``neg_table`` a total unary map.
    """

    elements: tuple[str, ...]
    leq_pairs: frozenset[tuple[str, str]]
    join_table: dict[tuple[str, str], str] = field(hash=False)
    meet_table: dict[tuple[str, str], str] = field(hash=False)
    neg_table: dict[str, str] = field(hash=False)
    top: str
    bottom: str

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_order(elements, leq, neg):
        """Build a lattice from a partial-order description.

        ``leq`` is any set of pairs; its reflexive-transitive closure is
        taken.  Join/meet tables are computed as unique least upper bounds /
        greatest lower bounds; a missing or non-unique bound raises
        :class:`LatticeError`.
        """
        elements = tuple(elements)
        elems = set(elements)
        if len(elems) != len(elements):
            raise LatticeError("duplicate element identifiers")
        if not elements:
            raise LatticeError("empty lattice")
        for a, b in leq:
            if a not in elems or b not in elems:
                raise LatticeError(f"leq mentions unknown element in ({a},{b})")
        rel = {(a, b) for a, b in leq}
        rel |= {(a, a) for a in elements}
        # transitive closure (Warshall)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c in elements:
                    if (b, c) in rel and (a, c) not in rel:
                        rel.add((a, c))
                        changed = True
        for a, b in combinations(elements, 2):
            if (a, b) in rel and (b, a) in rel:
                raise LatticeError(f"order not antisymmetric: {a} and {b}")

        def uppers(a, b):
            return [c for c in elements if (a, c) in rel and (b, c) in rel]

        def lowers(a, b):
            return [c for c in elements if (c, a) in rel and (c, b) in rel]

        join_table, meet_table = {}, {}
        for a in elements:
            for b in elements:
                ups = uppers(a, b)
                lub = [u for u in ups if all((u, v) in rel for v in ups)]
                if len(lub) != 1:
                    raise LatticeError(f"no unique lub for ({a},{b})")
                join_table[(a, b)] = lub[0]
                lows = lowers(a, b)
                glb = [u for u in lows if all((v, u) in rel for v in lows)]
                if len(glb) != 1:
                    raise LatticeError(f"no unique glb for ({a},{b})")
                meet_table[(a, b)] = glb[0]

        tops = [a for a in elements if all((b, a) in rel for b in elements)]
        bots = [a for a in elements if all((a, b) in rel for b in elements)]
        if len(tops) != 1 or len(bots) != 1:
            raise LatticeError("no unique top/bottom")

        neg = dict(neg)
        missing = elems - set(neg)
        if missing:
            raise LatticeError(f"neg table missing entries for {sorted(missing)}")
        for a, b in neg.items():
            if a not in elems or b not in elems:
                raise LatticeError(f"neg mentions unknown element: {a} -> {b}")

        return Lattice(elements, frozenset(rel), join_table, meet_table, neg,
                       tops[0], bots[0])

    # -- algebra -----------------------------------------------------------

    def leq(self, a, b):
        if a not in self.elements or b not in self.elements:
            raise LatticeError(f"unknown element in leq({a!r},{b!r})")
        return (a, b) in self.leq_pairs

    def join(self, a, b):
        try:
            return self.join_table[(a, b)]
        except KeyError:
            raise LatticeError(f"unknown element in join({a!r},{b!r})") from None

    def meet(self, a, b):
        try:
            return self.meet_table[(a, b)]
        except KeyError:
            raise LatticeError(f"unknown element in meet({a!r},{b!r})") from None

    def neg(self, a):
        try:
            return self.neg_table[a]
        except KeyError:
            raise LatticeError(f"unknown element: {a!r}") from None

    def join_all(self, xs):
        out = self.bottom
        for x in xs:
            out = self.join(out, x)
        return out

    def meet_all(self, xs):
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out


def algebra(lattice: Lattice, kind: str, a: str, b: str | None = None) -> str:
    """Pointwise lattice operation by name (``join``/``meet``/``neg``)."""
    if kind == "neg":
        if b is not None:
            raise LatticeError("neg takes a single operand")
        return lattice.neg(a)
    if b is None:
        raise LatticeError(f"{kind} takes two operands")
    if kind == "join":
        return lattice.join(a, b)
    if kind == "meet":
        return lattice.meet(a, b)
    raise LatticeError(f"unknown operation kind: {kind!r}")


def validate_lattice(lat: Lattice) -> list[LawViolation]:
    """Brute-force check of all lattice laws.

    Returns a list of violations (empty iff the structure is a distributive
    De Morgan lattice); each violation carries the law name and a witness.
    """
    out = []
    es = lat.elements
    rel = lat.leq_pairs

    # table totality
    for a in es:
        if a not in lat.neg_table:
            out.append(LawViolation("malformed-neg-table", (a,)))
        for b in es:
            if (a, b) not in lat.join_table:
                out.append(LawViolation("malformed-join-table", (a, b)))
            if (a, b) not in lat.meet_table:
                out.append(LawViolation("malformed-meet-table", (a, b)))
    if out:
        return out

    for a in es:
        if (a, a) not in rel:
            out.append(LawViolation("order-reflexive", (a,)))
    for a in es:
        for b in es:
            if (a, b) in rel and (b, a) in rel and a != b:
                out.append(LawViolation("order-antisymmetric", (a, b)))
            for c in es:
                if (a, b) in rel and (b, c) in rel and (a, c) not in rel:
                    out.append(LawViolation("order-transitive", (a, b, c)))

    def is_lub(a, b, j):
        if (a, j) not in rel or (b, j) not in rel:
            return False
        return all(not ((a, u) in rel and (b, u) in rel) or (j, u) in rel
                   for u in es)

    def is_glb(a, b, m):
        if (m, a) not in rel or (m, b) not in rel:
            return False
        return all(not ((u, a) in rel and (u, b) in rel) or (u, m) in rel
                   for u in es)

    for a in es:
        for b in es:
            if not is_lub(a, b, lat.join(a, b)):
                out.append(LawViolation("join-is-lub", (a, b)))
            if not is_glb(a, b, lat.meet(a, b)):
                out.append(LawViolation("meet-is-glb", (a, b)))
    for a in es:
        if (a, lat.top) not in rel:
            out.append(LawViolation("top-is-max", (a,)))
        if (lat.bottom, a) not in rel:
            out.append(LawViolation("bottom-is-min", (a,)))

    for a in es:
        for b in es:
            for c in es:
                lhs = lat.meet(a, lat.join(b, c))
                rhs = lat.join(lat.meet(a, b), lat.meet(a, c))
                if lhs != rhs:
                    out.append(LawViolation("distributivity", (a, b, c)))

    for a in es:
        if lat.neg(lat.neg(a)) != a:
            out.append(LawViolation("neg-involution", (a,)))
        for b in es:
            if lat.neg(lat.join(a, b)) != lat.meet(lat.neg(a), lat.neg(b)):
                out.append(LawViolation("de-morgan", (a, b)))
            if (a, b) in rel and (lat.neg(b), lat.neg(a)) not in rel:
                out.append(LawViolation("neg-antitone", (a, b)))
    return out


def join_irreducibles(lat: Lattice) -> frozenset[str]:
    """Elements x != bottom with x <= y|z implying x <= y or x <= z."""
    out = []
    for x in lat.elements:
        if x == lat.bottom:
            continue
        ok = True
        for y in lat.elements:
            for z in lat.elements:
                if lat.leq(x, lat.join(y, z)) and not (lat.leq(x, y) or lat.leq(x, z)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(x)
    return frozenset(out)


def ji_below(lat: Lattice, l: str) -> frozenset[str]:
    """The set X_l of join-irreducibles below l; its join equals l."""
    if l not in lat.elements:
        raise LatticeError(f"unknown element: {l!r}")
    return frozenset(x for x in join_irreducibles(lat) if lat.leq(x, l))


# -- standard examples -----------------------------------------------------

def boolean2() -> Lattice:
    return Lattice.from_order(["bot", "top"], [("bot", "top")],
                              {"bot": "top", "top": "bot"})


def chain3() -> Lattice:
    return Lattice.from_order(["0", "half", "1"], [("0", "half"), ("half", "1")],
                              {"0": "1", "half": "half", "1": "0"})


def chain(n: int) -> Lattice:
    names = [str(i) for i in range(n)]
    leq = [(names[i], names[i + 1]) for i in range(n - 1)]
    neg = {names[i]: names[n - 1 - i] for i in range(n)}
    return Lattice.from_order(names, leq, neg)


def diamond() -> Lattice:
    return Lattice.from_order(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        {"bot": "top", "top": "bot", "a": "b", "b": "a"})


def powerset(names=("p", "q", "r")) -> Lattice:
    """Boolean lattice of subsets of ``names``; negation = complement."""
    names = tuple(names)
    subsets = []
    for mask in range(2 ** len(names)):
        subsets.append(frozenset(n for i, n in enumerate(names) if mask >> i & 1))

    def ident(s):
        return "{" + ",".join(sorted(s)) + "}"

    leq = [(ident(s), ident(t)) for s in subsets for t in subsets if s <= t]
    neg = {ident(s): ident(frozenset(names) - s) for s in subsets}
    return Lattice.from_order([ident(s) for s in subsets], leq, neg)
