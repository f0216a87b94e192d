"""Krylov matrices, the cyclic-pair polynomial f, the operator S, and the
diagonalizing local chart.

Variable layout on X = M_n x C^n (arity n^2 + n): the matrix entries
m^i_j in row-major order (m^1_1, m^1_2, ..., m^n_n) followed by v_1..v_n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from bfun.core.linalg import det_q, inv_q, matmul_q, matvec_q, rank_q
from bfun.core.multipoly import MultiPoly, det
from bfun.core.unipoly import UniPoly
from bfun.weyl import WeylOp

DEFAULT_MAX_N = 4
DEFAULT_MAX_CHART_N = 3


class ResourceGuardError(RuntimeError):
    """A requested size exceeds the configured guard."""


def _guard(n: int, max_n: int, what: str) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_n:
        raise ResourceGuardError(f"{what} for n={n} exceeds the guard n <= {max_n}")


def arity(n: int) -> int:
    return n * n + n


def m_index(n: int, i: int, j: int) -> int:
    """Slot of m^i_j (0-based row i, column j)."""
    return i * n + j


def v_index(n: int, i: int) -> int:
    return n * n + i


def variable_names(n: int) -> list[str]:
    return [f"m{i + 1}{j + 1}" for i in range(n) for j in range(n)] + [f"v{i + 1}" for i in range(n)]


def point(M: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Flatten (M, v) into the variable layout."""
    return [Fraction(x) for row in M for x in row] + [Fraction(x) for x in v]


def krylov_matrix(n: int) -> list[list[MultiPoly]]:
    """Symbolic [v Mv ... M^{n-1} v]; entry (i, j) has degree j + 1."""
    N = arity(n)
    M = [[MultiPoly.var(N, m_index(n, i, j)) for j in range(n)] for i in range(n)]
    col = [MultiPoly.var(N, v_index(n, i)) for i in range(n)]
    cols = [col]
    for _ in range(1, n):
        col = [
            sum((M[i][j] * col[j] for j in range(n)), MultiPoly.zero(N))
            for i in range(n)
        ]
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def _cyclic_det(n: int) -> MultiPoly:
    return det(krylov_matrix(n))


def cyclic_det(n: int, max_n: int = DEFAULT_MAX_N) -> MultiPoly:
    """f(M, v) = det C(M, v), homogeneous of degree n(n+1)/2."""
    _guard(n, max_n, "cyclic_det")
    return _cyclic_det(n)


def build_S(n: int, max_n: int = DEFAULT_MAX_N) -> WeylOp:
    """f with every coordinate replaced by its partial derivative."""
    return WeylOp.from_symbol(cyclic_det(n, max_n))


def lower_shift(n: int) -> list[list[int]]:
    return [[int(i == j + 1) for j in range(n)] for i in range(n)]


def unit_vector(n: int, i: int = 0) -> list[int]:
    return [int(j == i) for j in range(n)]


def default_base_point(n: int) -> list[Fraction]:
    """(lower shift, e_1): the Krylov matrix there is the identity, so f = 1."""
    return point(lower_shift(n), unit_vector(n))


def _check_pair(M, v) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("M must be square")
    if len(v) != n:
        raise ValueError(f"v has length {len(v)}, expected {n}")
    return n


def numeric_krylov(M: Sequence[Sequence], v: Sequence) -> list[list[Fraction]]:
    n = _check_pair(M, v)
    cols = [[Fraction(x) for x in v]]
    for _ in range(1, n):
        cols.append(matvec_q(M, cols[-1]))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def f_value(M: Sequence[Sequence], v: Sequence) -> Fraction:
    """f(M, v) by evaluating the symbolic polynomial."""
    n = _check_pair(M, v)
    return cyclic_det(n).evaluate(point(M, v))


def is_cyclic(M: Sequence[Sequence], v: Sequence) -> bool:
    """Whether v, Mv, ..., M^{n-1}v span Q^n (exact rank)."""
    n = _check_pair(M, v)
    return rank_q(numeric_krylov(M, v)) == n


def semiinvariance_check(n: int, T, M, v) -> bool:
    """f(T M T^-1, T v) == det(T) f(M, v), exactly."""
    if _check_pair(M, v) != n or len(T) != n:
        raise ValueError("dimension mismatch")
    d = det_q(T)
    if d == 0:
        raise ValueError("T is singular")
    Ti = inv_q(T)
    M2 = matmul_q(matmul_q(T, M), Ti)
    v2 = matvec_q(T, v)
    return f_value(M2, v2) == d * f_value(M, v)


def random_rational_matrix(rng: random.Random, n: int, lo: int = -5, hi: int = 5, den: int = 3):
    return [[Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(n)] for _ in range(n)]


def random_invertible(rng: random.Random, n: int):
    while True:
        T = random_rational_matrix(rng, n)
        if det_q(T) != 0:
            return T


# ------------------------------------------------------------------ local chart


@dataclass(frozen=True)
class LocalChart:
    """Chart (t, a, v) -> (T A T^-1, T v) with T unit-diagonal and A diagonal.

    Variable layout: off-diagonal t^i_j in row-major order, then a_1..a_n,
    then v_1..v_n.
    """

    n: int

    @property
    def arity(self) -> int:
        return self.n * self.n + self.n

    def t_index(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("diagonal of T is fixed to 1")
        return i * (self.n - 1) + (j if j < i else j - 1)

    def a_index(self, i: int) -> int:
        return self.n * (self.n - 1) + i

    def v_index(self, i: int) -> int:
        return self.n * self.n + i

    def names(self) -> list[str]:
        n = self.n
        return (
            [f"t{i + 1}{j + 1}" for i in range(n) for j in range(n) if i != j]
            + [f"a{i + 1}" for i in range(n)]
            + [f"v{i + 1}" for i in range(n)]
        )

    def T(self) -> list[list[MultiPoly]]:
        N, n = self.arity, self.n
        return [
            [MultiPoly.const(N, 1) if i == j else MultiPoly.var(N, self.t_index(i, j)) for j in range(n)]
            for i in range(n)
        ]

    def A(self) -> list[list[MultiPoly]]:
        N, n = self.arity, self.n
        return [
            [MultiPoly.var(N, self.a_index(i)) if i == j else MultiPoly.zero(N) for j in range(n)]
            for i in range(n)
        ]

    def v(self) -> list[MultiPoly]:
        return [MultiPoly.var(self.arity, self.v_index(i)) for i in range(self.n)]

    def base_point(self, v=None) -> list[Fraction]:
        """t = 0, a_i = i, v as given (default 0)."""
        n = self.n
        v = v if v is not None else [0] * n
        return [Fraction(0)] * (n * (n - 1)) + [Fraction(i + 1) for i in range(n)] + [Fraction(x) for x in v]


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    zero = MultiPoly.zero(a[0][0].arity, a[0][0].ring)
    return [[sum((a[i][k] * b[k][j] for k in range(m)), zero) for j in range(p)] for i in range(n)]


def _adjugate(T):
    n = len(T)
    if n == 1:
        return [[MultiPoly.const(T[0][0].arity, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[T[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            d = det(minor)
            adj[j][i] = -d if (i + j) % 2 else d
    return adj


def vandermonde(polys: Sequence[MultiPoly]) -> MultiPoly:
    """prod_{i<j} (a_j - a_i)."""
    out = MultiPoly.const(polys[0].arity, 1, polys[0].ring)
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            out = out * (polys[j] - polys[i])
    return out


@dataclass
class ChartIdentity:
    n: int
    holds: bool
    det_power: int
    lhs_terms: int
    rhs_terms: int


def local_chart_identity(n: int, max_n: int = DEFAULT_MAX_CHART_N) -> ChartIdentity:
    """f(T A adj(T), T v) == det(T)^{n(n-1)/2 + 1} * v_1...v_n * prod_{i<j}(a_j - a_i).

    adj(T) = det(T) T^-1, so column j of the Krylov matrix picks up det(T)^j;
    this is the cleared form of f o phi = det(T) det C(A, v).
    """
    _guard(n, max_n, "local_chart_identity")
    ch = LocalChart(n)
    T, A, v = ch.T(), ch.A(), ch.v()
    dT = det(T)
    M = _matmul(_matmul(T, A), _adjugate(T))
    w = [sum((T[i][j] * v[j] for j in range(n)), MultiPoly.zero(ch.arity)) for i in range(n)]
    cols = [w]
    for _ in range(1, n):
        cols.append([sum((M[i][j] * cols[-1][j] for j in range(n)), MultiPoly.zero(ch.arity)) for i in range(n)])
    lhs = det([[cols[j][i] for j in range(n)] for i in range(n)])
    power = n * (n - 1) // 2 + 1
    prod_v = MultiPoly.const(ch.arity, 1)
    for vi in v:
        prod_v = prod_v * vi
    rhs = dT**power * prod_v * vandermonde([A[i][i] for i in range(n)])
    return ChartIdentity(n, lhs == rhs, power, len(lhs), len(rhs))


def chart_pullback(n: int) -> MultiPoly:
    """f composed with the cleared chart map, by substitution into f."""
    ch = LocalChart(n)
    T, A, v = ch.T(), ch.A(), ch.v()
    M = _matmul(_matmul(T, A), _adjugate(T))
    w = [sum((T[i][j] * v[j] for j in range(n)), MultiPoly.zero(ch.arity)) for i in range(n)]
    subs = [M[i][j] for i in range(n) for j in range(n)] + w
    return cyclic_det(n).compose(subs)


@dataclass
class LocalB1:
    n: int
    k: int
    factor: UniPoly  # monic local factor (s+1)^n
    observed_constant: Fraction  # scalar in front of (s+1)^n actually produced
    quoted_constant: int  # n!, as the closed form writes it


def local_b1_check(n: int, k: int, max_n: int = DEFAULT_MAX_CHART_N) -> LocalB1:
    """Apply d_{v_1}...d_{v_n} to (v_1...v_n)^{k+1} and read off the scalar.

    The result must be (k+1)^n (v_1...v_n)^k; the monic factor (s+1)^n is
    returned together with the observed leading constant.
    """
    _guard(n, max_n, "local_b1_check")
    if k < 0:
        raise ValueError("k must be nonnegative")
    N = n
    prod_v = MultiPoly.const(N, 1)
    for i in range(n):
        prod_v = prod_v * MultiPoly.var(N, i)
    op = WeylOp.identity(N)
    for i in range(n):
        op = op * WeylOp.d(N, i)
    got = op(prod_v ** (k + 1))
    expect_shape = prod_v**k
    e, c = expect_shape.leading()
    scalar = Fraction(got.terms.get(e, 0)) / c
    if got != expect_shape.scale(scalar):
        raise ArithmeticError("d_v1...d_vn (v1...vn)^{k+1} is not a multiple of (v1...vn)^k")
    if scalar != (k + 1) ** n:
        raise ArithmeticError(f"scalar {scalar} != (k+1)^n = {(k + 1) ** n}")
    factor = UniPoly([1, 1], "s") ** n
    return LocalB1(n, k, factor, Fraction(1), factorial(n))
