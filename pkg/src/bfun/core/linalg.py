"""Exact dense linear algebra over Q and over Q(k)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Sequence

from bfun.core.unipoly import RationalFunction, UniPoly, poly_gcd

Matrix = list[list[Fraction]]

# modulus for the specialization used only to pick independent rows
_PRIME = (1 << 61) - 1


def as_fraction_matrix(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def rref_q(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    a = as_fraction_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_q(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref_q(m)[1])


def det_q(m: Sequence[Sequence]) -> Fraction:
    a = as_fraction_matrix(m)
    n = len(a)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * d


def inv_q(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref_q(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul_q(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec_q(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def nullspace_q(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : m x = 0} over Q."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, piv = rref_q(m)
    n = len(red[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------- Q(k) side


def _mod_eval(u: UniPoly, k0: int) -> int:
    acc = 0
    for c in reversed(u.coeffs):
        acc = (acc * k0 + c.numerator * pow(c.denominator, -1, _PRIME)) % _PRIME
    return acc


def independent_rows(rows: Sequence[dict[int, UniPoly]], ncols: int, seed: int = 20140416) -> list[int]:
    """Indices of a maximal independent row subset, found at a random k mod p.

    Generic specialization preserves rank with overwhelming probability;
    callers must confirm any solution against the full system.
    """
    rng = random.Random(seed)
    k0 = rng.randrange(2, _PRIME - 1)
    basis: dict[int, list[int]] = {}  # pivot column -> normalized row
    chosen = []
    for idx, row in enumerate(rows):
        v = [0] * ncols
        for c, u in row.items():
            v[c] = _mod_eval(u, k0)
        for pc, prow in basis.items():
            f = v[pc]
            if f:
                v = [(x - f * y) % _PRIME for x, y in zip(v, prow)]
        lead = next((c for c in range(ncols) if v[c]), None)
        if lead is None:
            continue
        inv = pow(v[lead], -1, _PRIME)
        v = [(x * inv) % _PRIME for x in v]
        for pc in list(basis):
            f = basis[pc][lead]
            if f:
                basis[pc] = [(x - f * y) % _PRIME for x, y in zip(basis[pc], v)]
        basis[lead] = v
        chosen.append(idx)
        if len(chosen) == ncols:
            break
    return chosen


def nullspace_qk(rows: Sequence[dict[int, UniPoly]], ncols: int, var: str = "k") -> list[list[UniPoly]]:
    """Nullspace over Q(k) of a sparse polynomial matrix, as primitive Q[k] vectors.

    Rows are dicts column -> UniPoly.  A maximal independent subset is chosen
    by modular specialization, then eliminated exactly over Q(k).
    """
    sel = independent_rows(rows, ncols)
    zero = RationalFunction(UniPoly((), var))
    a = [[RationalFunction(rows[i].get(c, UniPoly((), var))) for c in range(ncols)] for i in sel]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if not a[i][c].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = RationalFunction(UniPoly.const(1, var)) / a[r][c]
        a[r] = [x * inv if not x.is_zero() else zero for x in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [zero] * ncols
        v[f] = RationalFunction(UniPoly.const(1, var))
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        out.append(clear_denominators(v))
    return out


def clear_denominators(v: Sequence[RationalFunction]) -> list[UniPoly]:
    """Scale a Q(k) vector to a primitive Q[k] vector (monic gcd of entries = 1)."""
    var = v[0].var
    lcm = UniPoly.const(1, var)
    for x in v:
        if not x.is_zero():
            g = poly_gcd(lcm, x.den)
            lcm = (lcm * x.den).exact_div(g)
    polys = [(x.num * lcm).exact_div(x.den) if not x.is_zero() else UniPoly((), var) for x in v]
    g = UniPoly((), var)
    for p in polys:
        if not p.is_zero():
            g = poly_gcd(g, p) if not g.is_zero() else p.monic()
    if g.degree > 0:
        polys = [p.exact_div(g) for p in polys]
    # rational content and sign: make the first nonzero entry have positive leading coefficient
    content = None
    for p in polys:
        if not p.is_zero():
            c = p.content()
            content = c if content is None else _frac_gcd(content, c)
    first = next(p for p in polys if not p.is_zero())
    if first.lead < 0:
        content = -content
    return [p.scale(1 / content) for p in polys]


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    num = gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    return Fraction(num, den)
