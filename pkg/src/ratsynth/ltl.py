"""LTL syntax, a small surface parser, and exact evaluation on lasso words.

A lasso word is an ultimately periodic word ``prefix . cycle^omega`` whose
letters are sets of atomic propositions.  Evaluation computes one boolean per
(subformula, position) via fixpoint iteration over the finitely many
positions, which is exact for ultimately periodic words.
"""

from __future__ import annotations

from dataclasses import dataclass


class LtlError(ValueError):
    pass


# -- syntax ------------------------------------------------------------------

@dataclass(frozen=True)
class LtlFormula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Tt(LtlFormula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Ff(LtlFormula):
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Atom(LtlFormula):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(LtlFormula):
    arg: LtlFormula

    def __str__(self):
        return f"!{_wrap(self.arg)}"


@dataclass(frozen=True)
class And(LtlFormula):
    left: LtlFormula
    right: LtlFormula

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(LtlFormula):
    left: LtlFormula
    right: LtlFormula

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Next(LtlFormula):
    arg: LtlFormula

    def __str__(self):
        return f"X {_wrap(self.arg)}"


@dataclass(frozen=True)
class Until(LtlFormula):
    left: LtlFormula
    right: LtlFormula

    def __str__(self):
        return f"({self.left} U {self.right})"


@dataclass(frozen=True)
class Release(LtlFormula):
    left: LtlFormula
    right: LtlFormula

    def __str__(self):
        return f"({self.left} R {self.right})"


def _wrap(f):
    s = str(f)
    return s if s.startswith("(") or " " not in s else f"({s})"


TT = Tt()
FF = Ff()


def eventually(f: LtlFormula) -> LtlFormula:
    return Until(TT, f)


def always(f: LtlFormula) -> LtlFormula:
    return Release(FF, f)


def implies(a: LtlFormula, b: LtlFormula) -> LtlFormula:
    return Or(Not(a), b)


def atoms_of(f: LtlFormula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, (Tt, Ff)):
        return frozenset()
    if isinstance(f, (Not, Next)):
        return atoms_of(f.arg)
    return atoms_of(f.left) | atoms_of(f.right)


# -- parser ------------------------------------------------------------------

_UNARY = {"G", "F", "X", "!"}
_KEYWORDS = {"G", "F", "X", "U", "R", "true", "false"}


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()!&|":
            tokens.append(c)
            i += 1
        elif text.startswith("->", i):
            tokens.append("->")
            i += 2
        elif c.isalnum() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise LtlError(f"unexpected character {c!r} at offset {i}")
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise LtlError(f"expected {expected or 'a token'}, got {tok!r}")
        self.pos += 1
        return tok

    def parse_impl(self):
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            return implies(left, self.parse_impl())
        return left

    def parse_or(self):
        out = self.parse_and()
        while self.peek() == "|":
            self.take()
            out = Or(out, self.parse_and())
        return out

    def parse_and(self):
        out = self.parse_until()
        while self.peek() == "&":
            self.take()
            out = And(out, self.parse_until())
        return out

    def parse_until(self):
        left = self.parse_unary()
        tok = self.peek()
        if tok in ("U", "R"):
            self.take()
            right = self.parse_until()
            return Until(left, right) if tok == "U" else Release(left, right)
        return left

    def parse_unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.parse_unary())
        if tok == "G":
            self.take()
            return always(self.parse_unary())
        if tok == "F":
            self.take()
            return eventually(self.parse_unary())
        if tok == "X":
            self.take()
            return Next(self.parse_unary())
        if tok == "(":
            self.take()
            out = self.parse_impl()
            self.take(")")
            return out
        if tok == "true":
            self.take()
            return TT
        if tok == "false":
            self.take()
            return FF
        if tok is None or tok in {")", "&", "|", "->", "U", "R"}:
            raise LtlError(f"unexpected token {tok!r}")
        return Atom(self.take())


def parse(text: str) -> LtlFormula:
    """Parse the surface syntax: G F X U R & | ! -> true false identifiers."""
    p = _Parser(_tokenize(text))
    out = p.parse_impl()
    if p.peek() is not None:
        raise LtlError(f"trailing input at token {p.peek()!r}")
    return out


# -- lasso words ---------------------------------------------------------------

@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word prefix . cycle^omega over proposition sets."""

    prefix: tuple[frozenset[str], ...]
    cycle: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.cycle:
            raise LtlError("lasso cycle must be nonempty")

    @property
    def positions(self):
        return len(self.prefix) + len(self.cycle)

    def letter(self, i):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def unroll_once(self) -> "LassoWord":
        return LassoWord(self.prefix + self.cycle, self.cycle)


def eval_lasso(formula: LtlFormula, word: LassoWord,
               universe: frozenset[str] | None = None) -> bool:
    """Truth of ``formula`` at position 0 of the ultimately periodic word.

    Computed bottom-up: for each subformula, a boolean per position of the
    folded word; Until/Release are least/greatest fixpoints iterated over the
    cycle, which converges in at most ``positions`` sweeps.
    """
    if universe is not None:
        bad = atoms_of(formula) - universe
        if bad:
            raise LtlError(f"atoms outside proposition universe: {sorted(bad)}")
    n = word.positions
    p = len(word.prefix)

    def succ(i):
        return i + 1 if i + 1 < n else p

    cache: dict[LtlFormula, tuple[bool, ...]] = {}

    def table(f) -> tuple[bool, ...]:
        hit = cache.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Tt):
            out = (True,) * n
        elif isinstance(f, Ff):
            out = (False,) * n
        elif isinstance(f, Atom):
            out = tuple(f.name in word.letter(i) for i in range(n))
        elif isinstance(f, Not):
            out = tuple(not v for v in table(f.arg))
        elif isinstance(f, And):
            l, r = table(f.left), table(f.right)
            out = tuple(a and b for a, b in zip(l, r))
        elif isinstance(f, Or):
            l, r = table(f.left), table(f.right)
            out = tuple(a or b for a, b in zip(l, r))
        elif isinstance(f, Next):
            a = table(f.arg)
            out = tuple(a[succ(i)] for i in range(n))
        elif isinstance(f, Until):
            a, b = table(f.left), table(f.right)
            v = [False] * n
            for _ in range(n + 1):
                changed = False
                for i in range(n - 1, -1, -1):
                    nv = b[i] or (a[i] and v[succ(i)])
                    if nv != v[i]:
                        v[i] = nv
                        changed = True
                if not changed:
                    break
            out = tuple(v)
        elif isinstance(f, Release):
            a, b = table(f.left), table(f.right)
            v = [True] * n
            for _ in range(n + 1):
                changed = False
                for i in range(n - 1, -1, -1):
                    nv = b[i] and (a[i] or v[succ(i)])
                    if nv != v[i]:
                        v[i] = nv
                        changed = True
                if not changed:
                    break
            out = tuple(v)
        else:
            raise LtlError(f"unknown formula node: {f!r}")
        cache[f] = out
        return out

    return table(formula)[0]
