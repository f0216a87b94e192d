"""b-hat(k) from S f^{k+1} = b-hat(k) f^k: evaluation, interpolation, and the closed form."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Sequence

from bfun.core.interp import interpolate
from bfun.core.jet import Jet, downset, jet_of_poly, simplex_size
from bfun.core.multipoly import MultiPoly, NotDivisibleError, poly_exact_div
from bfun.core.unipoly import UniPoly, rational_roots
from bfun.cyclic import ResourceGuardError, build_S, cyclic_det, default_base_point
from bfun.weyl import weyl_apply

log = logging.getLogger(__name__)

METHODS = ("symbolic", "jet")
DEFAULT_MAX_N = 3
STRETCH_MAX_N = 4


class TheoremViolation(ArithmeticError):
    """An identity that must hold exactly did not."""


class BadBasePoint(ValueError):
    """f vanishes at the requested jet base point."""


def degree_bound(n: int) -> int:
    return n * (n + 1) // 2


# ---------------------------------------------------------------- closed form


def alpha(n: int) -> int:
    return prod(d**d for d in range(1, n + 1))


def btilde_roots(n: int) -> list[tuple[Fraction, int]]:
    """Roots -1 - c/d over 0 <= c < d <= n, with multiplicity, descending."""
    mult: dict[Fraction, int] = {}
    for d in range(1, n + 1):
        for c in range(d):
            r = -1 - Fraction(c, d)
            mult[r] = mult.get(r, 0) + 1
    return sorted(mult.items(), key=lambda kv: -kv[0])


def btilde(n: int, var: str = "s") -> UniPoly:
    out = UniPoly.const(1, var)
    for r, m in btilde_roots(n):
        out = out * UniPoly([-r, 1], var) ** m
    return out


def b1(n: int, var: str = "s") -> UniPoly:
    return UniPoly([1, 1], var) ** n * factorial(n)


def b2(n: int, var: str = "s") -> UniPoly:
    out = UniPoly.const(1, var)
    for d in range(2, n + 1):
        for c in range(1, d):
            out = out * UniPoly([d + c, d], var)
    return out


@dataclass
class BFunctionResult:
    n: int
    bhat: UniPoly
    btilde_roots: list[tuple[Fraction, int]]
    alpha: Fraction
    b1: UniPoly
    b2: UniPoly
    method: str
    samples: list[tuple[int, Fraction]] = field(default_factory=list)

    @property
    def monic(self) -> UniPoly:
        return self.bhat.monic()

    def matches_theorem(self) -> bool:
        return self.monic == btilde(self.n, self.bhat.var)

    @property
    def constant_ratio(self) -> Fraction:
        """Leading constant of b-hat over alpha_n (1 when the constants agree)."""
        return Fraction(self.alpha) / alpha(self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "method": self.method,
            "samples": [[k, _num(v)] for k, v in self.samples],
            "bhat_coeffs": [_num(c) for c in self.bhat.coeffs],
            "btilde_roots": [[r.numerator, r.denominator, m] for r, m in self.btilde_roots],
            "alpha": _num(self.alpha),
            "matches_theorem": self.matches_theorem(),
            "constant_ratio": _num(self.constant_ratio),
        }


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def theorem_poly(n: int, var: str = "k") -> BFunctionResult:
    """Closed-form alpha_n * b-tilde, with its b1 * b2 factorization."""
    if n < 1:
        raise ValueError("n must be at least 1")
    bt = btilde(n, var)
    a = alpha(n)
    f1, f2 = b1(n, var), b2(n, var)
    if f1 * f2 != bt.scale(a):
        raise TheoremViolation("b1 * b2 != alpha_n * b-tilde")
    return BFunctionResult(n, bt.scale(a), btilde_roots(n), Fraction(a), f1, f2, "closed-form")


# ---------------------------------------------------------------- evaluation


class _JetEvaluator:
    """Streams jets of f^{k+1} at a base point and contracts them with S."""

    def __init__(self, n: int, base: Sequence | None = None, full_simplex: bool = False, max_n: int = STRETCH_MAX_N):
        self.n = n
        self.f = cyclic_det(n, max_n)
        self.S = build_S(n, max_n)
        self.order = degree_bound(n)
        self.base = list(base) if base is not None else default_base_point(n)
        # S is homogeneous of order m; only exponents below its support matter
        sym = [b for (_, b) in self.S.terms]
        self.support = None if full_simplex else downset(sym)
        self.jf = jet_of_poly(self.f, self.base, self.order, self.support)
        self.f0 = self.jf.value()
        if self.f0 == 0:
            raise BadBasePoint(f"f vanishes at base point {self.base}")
        self._powers: list[Jet] = [self.jf.one(), self.jf]
        self._weights = [(b, c * prod(factorial(x) for x in b)) for (_, b), c in self.S.terms.items()]

    def power(self, e: int) -> Jet:
        while len(self._powers) <= e:
            self._powers.append(self._powers[-1] * self.jf)
        return self._powers[e]

    def value(self, k: int) -> Fraction:
        # the last factor is only needed at the exponents S contracts against
        top = self.power(k).product_at(self.jf, (b for b, _ in self._weights))
        total = sum((w * top[b] for b, w in self._weights), 0)
        return Fraction(total) / Fraction(self.f0) ** k


def bhat_eval_symbolic(n: int, k: int, max_n: int = STRETCH_MAX_N) -> Fraction:
    f = cyclic_det(n, max_n)
    S = build_S(n, max_n)
    top = weyl_apply(S, f ** (k + 1))
    try:
        q = poly_exact_div(top, f**k)
    except NotDivisibleError as exc:
        raise TheoremViolation(f"S f^{k + 1} is not divisible by f^{k} (n={n})") from exc
    if not q.is_constant():
        raise TheoremViolation(f"S f^{k + 1} / f^{k} is not a constant (n={n}, k={k})")
    return q.constant_coeff()


def bhat_eval(n: int, k: int, method: str = "jet", base: Sequence | None = None, max_n: int = STRETCH_MAX_N) -> Fraction:
    """b-hat(k) = S f^{k+1} / f^k for a nonnegative integer k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if method == "symbolic":
        return bhat_eval_symbolic(n, k, max_n)
    if method == "jet":
        return _JetEvaluator(n, base, max_n=max_n).value(k)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def bhat_samples(n: int, ks: Iterable[int], method: str = "jet", base=None, max_n: int = STRETCH_MAX_N):
    ks = list(ks)
    if method == "jet":
        ev = _JetEvaluator(n, base, max_n=max_n)
        return [(k, ev.value(k)) for k in ks]
    return [(k, bhat_eval(n, k, method, base, max_n)) for k in ks]


def jet_memory_estimate(n: int) -> dict:
    """Slot counts for the full truncated simplex versus the S-support downset."""
    m = degree_bound(n)
    nvars = n * n + n
    S = build_S(n, STRETCH_MAX_N)
    return {
        "n": n,
        "variables": nvars,
        "order": m,
        "simplex_slots": simplex_size(nvars, m),
        "downset_slots": len(downset(b for (_, b) in S.terms)),
    }


def bhat_poly(n: int, method: str = "jet", max_n: int = DEFAULT_MAX_N, base=None) -> BFunctionResult:
    """Interpolate b-hat from k = 0..m+1 (m = n(n+1)/2) and factor it."""
    if n > max_n:
        raise ResourceGuardError(f"bhat_poly for n={n} exceeds the guard n <= {max_n}")
    m = degree_bound(n)
    samples = bhat_samples(n, range(m + 2), method, base)
    for k, v in samples:
        if v <= 0:
            raise TheoremViolation(f"b-hat({k}) = {v} is not positive")
    poly = interpolate(samples, m, var="k")
    roots = rational_roots(poly)
    return BFunctionResult(n, poly, roots, poly.lead, b1(n, "k"), b2(n, "k"), method, samples)


def verify_bernstein_identity(n: int, k: int, max_n: int = 2, max_k: int = 3) -> bool:
    """S f^{k+1} - alpha_n b-tilde(k) f^k == 0, term by term."""
    if n > max_n or k > max_k:
        raise ResourceGuardError(f"full symbolic identity limited to n <= {max_n}, k <= {max_k}")
    f = cyclic_det(n)
    S = build_S(n)
    target = theorem_poly(n).bhat(k)
    residual = weyl_apply(S, f ** (k + 1)) - (f**k).scale(target)
    if not residual.is_zero():
        e, c = residual.leading()
        raise TheoremViolation(f"nonzero residual at exponent {e}: {c} (n={n}, k={k})")
    return True
