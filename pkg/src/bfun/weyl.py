"""Normal-ordered differential operators with polynomial coefficients.

A term is stored as ``(a, b) -> c`` meaning ``c * x^a * d^b`` with every
coordinate to the left of every derivative.  Over ``Qs``/``Qk`` the vector
``a`` carries one extra trailing slot for the parameter degree, exactly as in
:class:`~bfun.core.multipoly.MultiPoly`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Mapping

from bfun.core.multipoly import ArityError, MultiPoly, RINGS

INHOMOGENEOUS = "inhomogeneous"


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _falling(a: int, s: int) -> int:
    out = 1
    for j in range(s):
        out *= a - j
    return out


class WeylOp:
    __slots__ = ("arity", "ring", "terms")

    def __init__(self, arity: int, terms: Mapping | None = None, ring: str = "Q"):
        if ring not in RINGS:
            raise ValueError(f"ring must be one of {RINGS}")
        self.arity = arity
        self.ring = ring
        width = arity + (ring != "Q")
        clean = {}
        for (a, b), c in (terms or {}).items():
            if len(a) != width or len(b) != arity:
                raise ArityError(f"term ({a}, {b}) does not fit arity {arity} ring {ring}")
            if c:
                clean[(tuple(a), tuple(b))] = _norm(c)
        self.terms = clean

    @classmethod
    def _raw(cls, arity: int, ring: str, terms: dict) -> "WeylOp":
        op = object.__new__(cls)
        op.arity, op.ring, op.terms = arity, ring, terms
        return op

    # building blocks -----------------------------------------------------
    @classmethod
    def identity(cls, arity: int, ring: str = "Q") -> "WeylOp":
        width = arity + (ring != "Q")
        return cls._raw(arity, ring, {((0,) * width, (0,) * arity): 1})

    @classmethod
    def x(cls, arity: int, i: int, ring: str = "Q") -> "WeylOp":
        width = arity + (ring != "Q")
        a = [0] * width
        a[i] = 1
        return cls._raw(arity, ring, {(tuple(a), (0,) * arity): 1})

    @classmethod
    def d(cls, arity: int, i: int, ring: str = "Q") -> "WeylOp":
        width = arity + (ring != "Q")
        b = [0] * arity
        b[i] = 1
        return cls._raw(arity, ring, {((0,) * width, tuple(b)): 1})

    @classmethod
    def multiplication(cls, p: MultiPoly) -> "WeylOp":
        return cls._raw(p.arity, p.ring, {(e, (0,) * p.arity): c for e, c in p.terms.items()})

    @classmethod
    def from_symbol(cls, p: MultiPoly) -> "WeylOp":
        """Constant-coefficient operator p(d): every x_i replaced by d_i."""
        if p.ring != "Q":
            raise ValueError("symbol substitution needs a Q polynomial")
        zero = (0,) * p.arity
        return cls._raw(p.arity, "Q", {(zero, e): c for e, c in p.terms.items()})

    # structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.arity == other.arity and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, self.ring, frozenset(self.terms.items())))

    def _check(self, other: "WeylOp") -> None:
        if self.arity != other.arity or self.ring != other.ring:
            raise ArityError("operators act on different spaces")

    def __add__(self, other: "WeylOp") -> "WeylOp":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return WeylOp._raw(self.arity, self.ring, out)

    def __neg__(self) -> "WeylOp":
        return WeylOp._raw(self.arity, self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "WeylOp") -> "WeylOp":
        return self + (-other)

    def scale(self, c) -> "WeylOp":
        if not c:
            return WeylOp._raw(self.arity, self.ring, {})
        return WeylOp._raw(self.arity, self.ring, {k: _norm(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __call__(self, p: MultiPoly) -> MultiPoly:
        return weyl_apply(self, p)

    def __repr__(self) -> str:
        return f"WeylOp(arity={self.arity}, ring={self.ring!r}, terms={len(self.terms)})"

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: (sum(kv[0][1]), kv[0][1], sum(kv[0][0]), kv[0][0]), reverse=True
        )

    # serialization -------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"WEYL arity={self.arity} ring={self.ring}"]
        for (a, b), c in self.sorted_terms():
            c = Fraction(c)
            lines.append(f"{c.numerator}/{c.denominator} {' '.join(map(str, a))} | {' '.join(map(str, b))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "WeylOp":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "WEYL":
            raise ValueError(f"bad header: {lines[0]!r}")
        fields = dict(tok.split("=", 1) for tok in head[1:])
        arity = int(fields["arity"])
        ring = fields.get("ring", "Q")
        terms = {}
        for ln in lines[1:]:
            left, right = ln.split("|")
            toks = left.split()
            a = tuple(int(t) for t in toks[1:])
            b = tuple(int(t) for t in right.split())
            if (a, b) in terms:
                raise ValueError(f"duplicate term {(a, b)}")
            terms[(a, b)] = Fraction(toks[0])
        return cls(arity, terms, ring)


def weyl_mul(A: WeylOp, B: WeylOp) -> WeylOp:
    """Normal-ordered product A*B.

    (x^a d^b)(x^c d^e) = sum_s prod_i C(b_i,s_i) c_i!/(c_i-s_i)! x^{a+c-s} d^{b-s+e}
    """
    A._check(B)
    n = A.arity
    out: dict = {}
    get = out.get
    for (a, b), ca in A.terms.items():
        for (c, e), cb in B.terms.items():
            ranges = [range(min(b[i], c[i]) + 1) for i in range(n)]
            for s in product(*ranges):
                w = ca * cb
                for i in range(n):
                    si = s[i]
                    if si:
                        w *= comb(b[i], si) * _falling(c[i], si)
                xa = list(a[j] + c[j] for j in range(len(a)))
                for i in range(n):
                    xa[i] -= s[i]
                key = (tuple(xa), tuple(b[i] - s[i] + e[i] for i in range(n)))
                out[key] = get(key, 0) + w
    return WeylOp(n, {k: v for k, v in out.items() if v}, A.ring)


def weyl_apply(A: WeylOp, p: MultiPoly) -> MultiPoly:
    """Apply A to the polynomial p."""
    if A.arity != p.arity:
        raise ArityError("operator and polynomial have different arity")
    if p.ring != A.ring:
        if A.ring == "Q":
            A = WeylOp._raw(A.arity, p.ring, {(a + (0,), b): c for (a, b), c in A.terms.items()})
        elif p.ring == "Q":
            p = p.with_ring(A.ring)
        else:
            raise ArityError("incompatible parameter rings")
    by_b: dict[tuple, list] = {}
    for (a, b), c in A.terms.items():
        by_b.setdefault(b, []).append((a, c))
    out: dict = {}
    for b, xs in by_b.items():
        dp = p.diff_multi(b) if any(b) else p
        for e, c in dp.terms.items():
            for a, ca in xs:
                key = tuple(x + y for x, y in zip(e, a))
                out[key] = out.get(key, 0) + c * ca
    return MultiPoly(p.arity, {k: v for k, v in out.items() if v}, p.ring)


def op_order(A: WeylOp) -> int:
    """Top total derivative count (-1 for the zero operator)."""
    return max((sum(b) for (_, b) in A.terms), default=-1)


def op_grade(A: WeylOp):
    """|a| - |b| when uniform across terms, else ``"inhomogeneous"``."""
    if A.is_zero():
        raise ValueError("the zero operator has no grade")
    n = A.arity
    grades = {sum(a[:n]) - sum(b) for (a, b) in A.terms}
    if len(grades) == 1:
        return grades.pop()
    return INHOMOGENEOUS
