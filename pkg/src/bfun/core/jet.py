"""Truncated multivariate Taylor expansions (jets) at a rational base point.

A jet of order m stores the coefficients of p(x0 + h) for every exponent
of total degree <= m.  Jets may optionally be confined to a *downset* of
exponents (closed under taking smaller exponents); that truncation is also
compatible with multiplication and is what makes large contractions
affordable.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Iterable, Sequence

from bfun.core.multipoly import MultiPoly


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def downset(exponents: Iterable[Sequence[int]]) -> frozenset[tuple[int, ...]]:
    """Every exponent bounded componentwise by one of the given exponents."""
    out: set[tuple[int, ...]] = set()
    for e in exponents:
        e = tuple(e)
        if e in out:
            continue
        nz = [i for i, a in enumerate(e) if a]
        for choice in product(*(range(e[i] + 1) for i in nz)):
            sub = [0] * len(e)
            for i, a in zip(nz, choice):
                sub[i] = a
            out.add(tuple(sub))
    return frozenset(out)


def simplex_size(nvars: int, order: int) -> int:
    """Number of exponents of total degree <= order."""
    return comb(nvars + order, order)


class Jet:
    __slots__ = ("base", "order", "coeffs", "support")

    def __init__(self, base: Sequence, order: int, coeffs: dict, support: frozenset | None = None):
        self.base = tuple(Fraction(x) for x in base)
        self.order = order
        self.support = support
        self.coeffs = {
            e: _norm(c)
            for e, c in coeffs.items()
            if c and sum(e) <= order and (support is None or e in support)
        }

    @property
    def nvars(self) -> int:
        return len(self.base)

    def _like(self, coeffs: dict) -> "Jet":
        j = object.__new__(Jet)
        j.base, j.order, j.support, j.coeffs = self.base, self.order, self.support, coeffs
        return j

    def _check(self, other: "Jet") -> None:
        if self.base != other.base or self.order != other.order or self.support != other.support:
            raise ValueError("jets at different base points, orders or supports")

    def __getitem__(self, e: Sequence[int]):
        return self.coeffs.get(tuple(e), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.base == other.base
            and self.order == other.order
            and self.support == other.support
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return self._like(out)

    def __neg__(self) -> "Jet":
        return self._like({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def scale(self, c) -> "Jet":
        if not c:
            return self._like({})
        return self._like({e: _norm(v * c) for e, v in self.coeffs.items()})

    def __mul__(self, other: "Jet") -> "Jet":
        self._check(other)
        if self.support is not None:
            return self._mul_downset(other)
        m = self.order
        by_deg: dict[int, list] = {}
        for e, c in other.coeffs.items():
            by_deg.setdefault(sum(e), []).append((e, c))
        out: dict = {}
        get = out.get
        for ea, ca in self.coeffs.items():
            room = m - sum(ea)
            for d in range(room + 1):
                for eb, cb in by_deg.get(d, ()):
                    e = tuple([x + y for x, y in zip(ea, eb)])
                    out[e] = get(e, 0) + ca * cb
        return self._like({e: _norm(c) for e, c in out.items() if c})

    def _mul_downset(self, other: "Jet") -> "Jet":
        a, b = self.coeffs, other.coeffs
        out = {}
        for c in self.support:
            nz = [i for i, x in enumerate(c) if x]
            acc = 0
            for choice in product(*(range(c[i] + 1) for i in nz)):
                lo = [0] * len(c)
                for i, x in zip(nz, choice):
                    lo[i] = x
                lo = tuple(lo)
                ca = a.get(lo)
                if ca:
                    hi = tuple([x - y for x, y in zip(c, lo)])
                    cb = b.get(hi)
                    if cb:
                        acc += ca * cb
            if acc:
                out[c] = _norm(acc)
        return self._like(out)

    def product_at(self, other: "Jet", exponents: Iterable[Sequence[int]]) -> dict:
        """Coefficients of self*other at the given exponents only."""
        a, b = self.coeffs, other.coeffs
        out = {}
        for c in exponents:
            c = tuple(c)
            nz = [i for i, x in enumerate(c) if x]
            acc = 0
            for choice in product(*(range(c[i] + 1) for i in nz)):
                lo = [0] * len(c)
                for i, x in zip(nz, choice):
                    lo[i] = x
                lo = tuple(lo)
                ca = a.get(lo)
                if ca:
                    cb = b.get(tuple([x - y for x, y in zip(c, lo)]))
                    if cb:
                        acc += ca * cb
            out[c] = _norm(acc)
        return out

    def __pow__(self, k: int) -> "Jet":
        if k < 0:
            raise ValueError("negative power")
        out = self.one()
        for _ in range(k):
            out = out * self
        return out

    def one(self) -> "Jet":
        return self._like({(0,) * self.nvars: 1})

    def restrict(self, support: frozenset) -> "Jet":
        return Jet(self.base, self.order, self.coeffs, support)

    def value(self):
        """p(x0), the order-zero coefficient."""
        return self.coeffs.get((0,) * self.nvars, 0)

    def derivative_at_base(self, e: Sequence[int]):
        """(d^e p)(x0) recovered as e! times the Taylor coefficient."""
        f = 1
        for a in e:
            f *= factorial(a)
        return self[e] * f

    def __repr__(self) -> str:
        return f"Jet(nvars={self.nvars}, order={self.order}, terms={len(self.coeffs)})"


def jet_of_poly(
    p: MultiPoly, base: Sequence, order: int, support: frozenset | None = None
) -> Jet:
    """Truncated Taylor expansion of p about base, exact."""
    if p.ring != "Q":
        raise ValueError("jets need numeric (Q) coefficients")
    n = p.arity
    if len(base) != n:
        raise ValueError(f"base point of length {len(base)} for arity {n}")
    x0 = [Fraction(x) for x in base]
    # per-variable binomial expansions (x0 + h)^a = sum_j C(a,j) x0^{a-j} h^j
    cache: dict[tuple[int, int], list] = {}

    def expansion(i: int, a: int) -> list:
        key = (i, a)
        if key not in cache:
            cache[key] = [
                (j, _norm(comb(a, j) * x0[i] ** (a - j)))
                for j in range(min(a, order) + 1)
                if x0[i] != 0 or j == a
            ]
        return cache[key]

    out: dict = {}
    for e, c in p.terms.items():
        partial = [((0,) * n, c, 0)]
        for i in range(n):
            a = e[i]
            if not a:
                continue
            nxt = []
            for ex, cv, deg in partial:
                for j, w in expansion(i, a):
                    if deg + j > order or not w:
                        continue
                    ne = list(ex)
                    ne[i] = j
                    nxt.append((tuple(ne), cv * w, deg + j))
            partial = nxt
            if not partial:
                break
        for ex, cv, _ in partial:
            if support is not None and ex not in support:
                continue
            out[ex] = out.get(ex, 0) + cv
    return Jet(x0, order, out, support)
