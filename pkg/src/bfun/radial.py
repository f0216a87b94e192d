"""Operators on the regular part of the Cartan of gl_n (type A_{n-1}).

Coefficients are rational functions whose denominators are products of
positive roots ``alpha = t_i - t_j`` (i < j).  They are stored in lowest
terms: a numerator in Q[k][t] over a vector of root exponents, reduced
until no denominator root divides the numerator.  Roots are pairwise
coprime irreducibles, so this is a true normal form and equality of
operators is structural equality.

The directional derivative along a root is ``sum_i alpha_i d_i``; with the
Euclidean form every root has (alpha, alpha) = 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from bfun.core.multipoly import MultiPoly
from bfun.core.unipoly import UniPoly

RING = "Qk"


class IdentityViolation(ArithmeticError):
    """An operator identity left a nonzero residual."""


class UnexpectedPole(ArithmeticError):
    """Applying an operator produced a genuine pole along a root."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------- root data


@dataclass(frozen=True)
class RootSystemA:
    """Positive roots e_i - e_j (i < j) of A_{n-1} realized in n coordinates."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")

    @property
    def positive_roots(self) -> list[tuple[int, int]]:
        return _roots(self.n)

    @property
    def size(self) -> int:
        return self.n * (self.n - 1) // 2

    def vector(self, idx: int) -> tuple[int, ...]:
        i, j = _roots(self.n)[idx]
        v = [0] * self.n
        v[i], v[j] = 1, -1
        return tuple(v)

    def vectors(self) -> list[tuple[int, ...]]:
        return [self.vector(a) for a in range(self.size)]

    def inner(self, a: int, b: int) -> int:
        return sum(x * y for x, y in zip(self.vector(a), self.vector(b)))

    def weyl_group(self) -> list[tuple[int, ...]]:
        return list(permutations(range(self.n)))

    def root_poly(self, idx: int) -> MultiPoly:
        return _alpha_pow(self.n, idx, 1)

    def name(self, idx: int) -> str:
        i, j = _roots(self.n)[idx]
        return f"t{i + 1}-t{j + 1}"


@lru_cache(maxsize=None)
def _roots(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@lru_cache(maxsize=None)
def _root_index(n: int) -> dict[tuple[int, int], int]:
    return {r: a for a, r in enumerate(_roots(n))}


@lru_cache(maxsize=None)
def _alpha_pow(n: int, idx: int, p: int) -> MultiPoly:
    i, j = _roots(n)[idx]
    ei = [0] * (n + 1)
    ej = [0] * (n + 1)
    ei[i] = ej[j] = 1
    base = MultiPoly._raw(n, RING, {tuple(ei): 1, tuple(ej): -1})
    return base**p


def _one(n: int) -> MultiPoly:
    return MultiPoly._raw(n, RING, {(0,) * (n + 1): 1})


def _div_root(num: MultiPoly, i: int, j: int) -> MultiPoly | None:
    """num / (t_i - t_j) by synthetic division in t_i, or None if it does not divide."""
    by_deg: dict[int, dict] = {}
    top = 0
    for e, c in num.terms.items():
        d = e[i]
        rest = e[:i] + (0,) + e[i + 1 :]
        by_deg.setdefault(d, {})[rest] = c
        if d > top:
            top = d
    if top == 0:
        return None
    quo: dict = {}
    carry: dict = {}
    for d in range(top, 0, -1):
        # q_{d-1} = c_d + t_j * q_d
        cur = dict(by_deg.get(d, {}))
        for e, c in carry.items():
            e2 = e[:j] + (e[j] + 1,) + e[j + 1 :]
            v = cur.get(e2, 0) + c
            if v:
                cur[e2] = v
            else:
                cur.pop(e2, None)
        for e, c in cur.items():
            quo[e[:i] + (d - 1,) + e[i + 1 :]] = c
        carry = cur
    rem = dict(by_deg.get(0, {}))
    for e, c in carry.items():
        e2 = e[:j] + (e[j] + 1,) + e[j + 1 :]
        v = rem.get(e2, 0) + c
        if v:
            rem[e2] = v
        else:
            rem.pop(e2, None)
    if rem:
        return None
    return MultiPoly._raw(num.arity, num.ring, {e: _norm(c) for e, c in quo.items()})


# ---------------------------------------------------------------- coefficients


class LaurentCoeff:
    """num / prod alpha^den in lowest terms; num lives in Q[k][t_1..t_n]."""

    __slots__ = ("n", "num", "den", "_hash")

    def __init__(self, n: int, num: MultiPoly, den: Sequence[int] | None = None, reduced: bool = False):
        if num.ring != RING:
            num = num.with_ring(RING)
        if num.arity != n:
            raise ValueError(f"numerator arity {num.arity} does not match n={n}")
        size = n * (n - 1) // 2
        den = tuple(den) if den is not None else (0,) * size
        if len(den) != size or any(d < 0 for d in den):
            raise ValueError(f"bad denominator exponents {den}")
        self.n, self.num, self.den, self._hash = n, num, den, None
        if not reduced:
            self._reduce()

    @classmethod
    def _raw(cls, n, num, den) -> "LaurentCoeff":
        c = object.__new__(cls)
        c.n, c.num, c.den, c._hash = n, num, den, None
        return c

    @classmethod
    def const(cls, n: int, c) -> "LaurentCoeff":
        return cls._raw(n, MultiPoly._raw(n, RING, {(0,) * (n + 1): _norm(Fraction(c))} if c else {}), (0,) * (n * (n - 1) // 2))

    @classmethod
    def zero(cls, n: int) -> "LaurentCoeff":
        return cls.const(n, 0)

    @classmethod
    def of_k(cls, n: int, u: UniPoly) -> "LaurentCoeff":
        """A polynomial in k alone."""
        return cls._raw(n, MultiPoly.from_unipoly(n, u.with_var("k"), RING), (0,) * (n * (n - 1) // 2))

    @classmethod
    def root_power(cls, n: int, idx: int, p: int) -> "LaurentCoeff":
        """alpha^p for any integer p."""
        size = n * (n - 1) // 2
        if p >= 0:
            return cls._raw(n, _alpha_pow(n, idx, p), (0,) * size)
        den = [0] * size
        den[idx] = -p
        return cls._raw(n, _one(n), tuple(den))

    @classmethod
    def monomial(cls, n: int, j: Sequence[int]) -> "LaurentCoeff":
        """prod alpha^{j_alpha} for a signed root multi-index."""
        num = _one(n)
        for a, x in enumerate(j):
            if x > 0:
                num = num * _alpha_pow(n, a, x)
        return cls._raw(n, num, tuple(max(-x, 0) for x in j))

    def _reduce(self) -> None:
        if not self.num.terms:
            self.den = (0,) * len(self.den)
            return
        den = list(self.den)
        num = self.num
        for a, d in enumerate(den):
            if not d:
                continue
            i, j = _roots(self.n)[a]
            while den[a]:
                q = _div_root(num, i, j)
                if q is None:
                    break
                num = q
                den[a] -= 1
        self.num, self.den = num, tuple(den)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return not any(self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentCoeff):
            return NotImplemented
        return self.n == other.n and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.den, self.num))
        return self._hash

    def __neg__(self) -> "LaurentCoeff":
        return LaurentCoeff._raw(self.n, -self.num, self.den)

    def __add__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        return lc_sum([self, other], self.n)

    def __sub__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        return lc_sum([self, -other], self.n)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return LaurentCoeff.zero(self.n)
        den = tuple(x + y for x, y in zip(self.den, other.den))
        return LaurentCoeff(self.n, self.num * other.num, den)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentCoeff":
        if not c:
            return LaurentCoeff.zero(self.n)
        return LaurentCoeff._raw(self.n, self.num.scale(c), self.den)

    def diff(self, i: int) -> "LaurentCoeff":
        """d/dt_i, written over den + 1 on the roots involving t_i, then reduced."""
        n = self.n
        roots = _roots(n)
        touched = [a for a, d in enumerate(self.den) if d and i in roots[a]]
        dnum = self.num.diff(i)
        if not touched:
            return LaurentCoeff._raw(n, dnum, self.den) if dnum.terms else LaurentCoeff.zero(n)
        prod_all = _one(n)
        for a in touched:
            prod_all = prod_all * _alpha_pow(n, a, 1)
        acc = dnum * prod_all
        for a in touched:
            rest = _one(n)
            for b in touched:
                if b != a:
                    rest = rest * _alpha_pow(n, b, 1)
            sign = 1 if roots[a][0] == i else -1
            acc = acc - (self.num * rest).scale(self.den[a] * sign)
        den = list(self.den)
        for a in touched:
            den[a] += 1
        return LaurentCoeff(n, acc, den)

    def diff_multi(self, b: Sequence[int]) -> "LaurentCoeff":
        out = self
        for i, m in enumerate(b):
            for _ in range(m):
                out = out.diff(i)
                if out.is_zero():
                    return out
        return out

    def permute(self, sigma: Sequence[int]) -> "LaurentCoeff":
        """Pull back along t_i -> t_{sigma(i)} relabeling."""
        n = self.n
        idx = _root_index(n)
        num = self.num.permute(sigma)
        den = [0] * len(self.den)
        flips = 0
        for a, d in enumerate(self.den):
            if not d:
                continue
            i, j = _roots(n)[a]
            si, sj = sigma[i], sigma[j]
            if si < sj:
                den[idx[(si, sj)]] = d
            else:
                den[idx[(sj, si)]] = d
                flips += d
        if flips % 2:
            num = -num
        return LaurentCoeff._raw(n, num, tuple(den))

    def subs_k(self, value) -> "LaurentCoeff":
        """Specialize the parameter k to a number or a polynomial in k."""
        u = value if isinstance(value, UniPoly) else UniPoly.const(value, "k")
        return LaurentCoeff(self.n, self.num.subs_param(u), self.den)

    def k_poly(self) -> UniPoly:
        """The value as a polynomial in k, when it has no t-dependence."""
        if any(self.den) or any(any(e[:-1]) for e in self.num.terms):
            raise ValueError("coefficient depends on t")
        return self.num.param_poly()

    def evaluate(self, t: Sequence, k=None):
        n = self.n
        dv = Fraction(1)
        for a, d in enumerate(self.den):
            if d:
                i, j = _roots(n)[a]
                x = Fraction(t[i]) - Fraction(t[j])
                if x == 0:
                    raise ZeroDivisionError(f"point lies on the wall t{i + 1} = t{j + 1}")
                dv *= x**d
        val = self.num.evaluate(list(t))
        if isinstance(val, UniPoly):
            if k is None:
                return val.scale(1 / dv)
            val = val(k)
        return val / dv

    def __repr__(self) -> str:
        return f"LaurentCoeff(n={self.n}, num_terms={len(self.num)}, den={self.den})"

    def __str__(self) -> str:
        names = [f"t{i + 1}" for i in range(self.n)] + ["k"]
        num = self.num.to_str(names)
        if not any(self.den):
            return num
        den = "*".join(
            f"({RootSystemA(self.n).name(a)})" + (f"^{d}" if d > 1 else "") for a, d in enumerate(self.den) if d
        )
        return f"({num})/({den})"


def lc_sum(items: Iterable[LaurentCoeff], n: int) -> LaurentCoeff:
    """Sum over the least common root denominator, reduced once."""
    items = [c for c in items if not c.is_zero()]
    if not items:
        return LaurentCoeff.zero(n)
    if len(items) == 1:
        return items[0]
    top = tuple(max(c.den[a] for c in items) for a in range(len(items[0].den)))
    out: dict = {}
    for c in items:
        num = c.num
        for a, (d, m) in enumerate(zip(c.den, top)):
            if m > d:
                num = num * _alpha_pow(n, a, m - d)
        for e, v in num.terms.items():
            out[e] = out.get(e, 0) + v
    num = MultiPoly(n, {e: v for e, v in out.items() if v}, RING)
    return LaurentCoeff(n, num, top)


# ---------------------------------------------------------------- operators


class LaurentWeylOp:
    """sum_b c_b(t, k) d^b with c_b in lowest root-denominator form."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], LaurentCoeff] | None = None):
        self.n = n
        self.terms = {tuple(b): c for b, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def identity(cls, n: int) -> "LaurentWeylOp":
        return cls(n, {(0,) * n: LaurentCoeff.const(n, 1)})

    @classmethod
    def d(cls, n: int, i: int) -> "LaurentWeylOp":
        b = [0] * n
        b[i] = 1
        return cls(n, {tuple(b): LaurentCoeff.const(n, 1)})

    @classmethod
    def multiplication(cls, c: LaurentCoeff | MultiPoly) -> "LaurentWeylOp":
        if isinstance(c, MultiPoly):
            c = LaurentCoeff(c.arity, c)
        return cls(c.n, {(0,) * c.n: c})

    @classmethod
    def constant_coefficient(cls, n: int, p: MultiPoly) -> "LaurentWeylOp":
        """p(d): a polynomial in lambda_1..lambda_n (ring Q or Qk) read as derivatives."""
        out: dict = {}
        for e, c in p.terms.items():
            b = tuple(e[:n])
            kdeg = e[n] if len(e) > n else 0
            mono = {(0,) * n + (kdeg,): c}
            out.setdefault(b, []).append(LaurentCoeff._raw(n, MultiPoly._raw(n, RING, mono), (0,) * (n * (n - 1) // 2)))
        return cls(n, {b: lc_sum(cs, n) for b, cs in out.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentWeylOp):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "LaurentWeylOp") -> "LaurentWeylOp":
        return op_sum([self, other])

    def __neg__(self) -> "LaurentWeylOp":
        return LaurentWeylOp(self.n, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "LaurentWeylOp") -> "LaurentWeylOp":
        return op_sum([self, -other])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, LaurentCoeff):
            return self.left_scale(other)
        return laurent_weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, LaurentCoeff):
            return self.left_scale(other)
        return NotImplemented

    def scale(self, c) -> "LaurentWeylOp":
        return LaurentWeylOp(self.n, {b: v.scale(c) for b, v in self.terms.items()})

    def left_scale(self, c: LaurentCoeff) -> "LaurentWeylOp":
        """c * A (multiplication on the left, no derivatives of c)."""
        return LaurentWeylOp(self.n, {b: c * v for b, v in self.terms.items()})

    def __call__(self, g: MultiPoly) -> LaurentCoeff:
        return laurent_apply(self, g, clear_poles=False)

    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=-1)

    def permute(self, sigma: Sequence[int]) -> "LaurentWeylOp":
        """Conjugate by the coordinate permutation t_i -> t_{sigma(i)}."""
        out = {}
        for b, c in self.terms.items():
            nb = [0] * self.n
            for i, x in enumerate(b):
                nb[sigma[i]] = x
            out[tuple(nb)] = c.permute(sigma)
        return LaurentWeylOp(self.n, out)

    def subs_k(self, value) -> "LaurentWeylOp":
        return LaurentWeylOp(self.n, {b: c.subs_k(value) for b, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def __repr__(self) -> str:
        return f"LaurentWeylOp(n={self.n}, terms={len(self.terms)})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.sorted_terms():
            d = "*".join(f"d{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(b) if x)
            parts.append(f"[{c}]" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    # serialization -------------------------------------------------------
    def to_text(self) -> str:
        """One line per numerator monomial: c | j | d-exps | t-exps | k-degree."""
        n = self.n
        lines = [f"LWEYL n={n}"]
        for b, c in self.sorted_terms():
            j = " ".join(str(-d) for d in c.den)
            for e, v in c.num.sorted_terms():
                v = Fraction(v)
                lines.append(
                    f"{v.numerator}/{v.denominator} | {j} | {' '.join(map(str, b))} | "
                    f"{' '.join(map(str, e[:n]))} | {e[n]}"
                )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LaurentWeylOp":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "LWEYL":
            raise ValueError(f"bad header: {lines[0]!r}")
        n = int(dict(tok.split("=", 1) for tok in head[1:])["n"])
        size = n * (n - 1) // 2
        groups: dict = {}
        for ln in lines[1:]:
            fields = [f.split() for f in ln.split("|")]
            if len(fields) != 5:
                raise ValueError(f"malformed term line {ln!r}")
            c = Fraction(fields[0][0])
            j = tuple(int(x) for x in fields[1])
            b = tuple(int(x) for x in fields[2])
            e = tuple(int(x) for x in fields[3])
            kd = int(fields[4][0])
            if len(j) != size or len(b) != n or len(e) != n:
                raise ValueError(f"term line does not fit n={n}: {ln!r}")
            groups.setdefault((b, j), {})[e + (kd,)] = c
        terms: dict = {}
        for (b, j), mono in groups.items():
            coeff = LaurentCoeff.monomial(n, j) * LaurentCoeff(n, MultiPoly(n, mono, RING), None)
            terms.setdefault(b, []).append(coeff)
        return cls(n, {b: lc_sum(cs, n) for b, cs in terms.items()})


def op_sum(ops: Iterable[LaurentWeylOp]) -> LaurentWeylOp:
    ops = list(ops)
    n = ops[0].n
    groups: dict = {}
    for A in ops:
        if A.n != n:
            raise ValueError("operators on different Cartans")
        for b, c in A.terms.items():
            groups.setdefault(b, []).append(c)
    return LaurentWeylOp(n, {b: lc_sum(cs, n) for b, cs in groups.items()})


def laurent_weyl_mul(A: LaurentWeylOp, B: LaurentWeylOp) -> LaurentWeylOp:
    """Normal-ordered product: (c d^b)(c' d^b') = sum_s C(b,s) c (d^s c') d^{b-s+b'}."""
    if A.n != B.n:
        raise ValueError("operators on different Cartans")
    n = A.n
    groups: dict = {}
    derivs: dict = {}
    for b, ca in A.terms.items():
        for bb, cb in B.terms.items():
            for s in product(*(range(x + 1) for x in b)):
                key = (bb, s)
                if key not in derivs:
                    derivs[key] = cb.diff_multi(s)
                dc = derivs[key]
                if dc.is_zero():
                    continue
                w = 1
                for x, y in zip(b, s):
                    w *= comb(x, y)
                out_b = tuple(x - y + z for x, y, z in zip(b, s, bb))
                groups.setdefault(out_b, []).append((ca * dc).scale(w))
    return LaurentWeylOp(n, {b: lc_sum(cs, n) for b, cs in groups.items()})


def laurent_apply(A: LaurentWeylOp, g: MultiPoly | LaurentCoeff, clear_poles: bool = False):
    """A applied to g; with clear_poles the result must be a polynomial."""
    n = A.n
    if isinstance(g, MultiPoly):
        g = LaurentCoeff(n, g)
    parts = []
    for b, c in A.terms.items():
        dg = g.diff_multi(b)
        if not dg.is_zero():
            parts.append(c * dg)
    out = lc_sum(parts, n)
    if clear_poles:
        if not out.is_polynomial():
            bad = [RootSystemA(n).name(a) for a, d in enumerate(out.den) if d]
            raise UnexpectedPole(f"result has a pole along {', '.join(bad)}")
        return out.num
    return out


# ---------------------------------------------------------------- the operators


def laplacian(n: int) -> LaurentWeylOp:
    terms = {}
    for i in range(n):
        b = [0] * n
        b[i] = 2
        terms[tuple(b)] = LaurentCoeff.const(n, 1)
    return LaurentWeylOp(n, terms)


def root_derivative(n: int, idx: int) -> LaurentWeylOp:
    """sum_i alpha_i d_i."""
    i, j = _roots(n)[idx]
    return LaurentWeylOp.d(n, i) - LaurentWeylOp.d(n, j)


def p_plus(n: int) -> LaurentWeylOp:
    """sum over positive roots of alpha^{-1} times the derivative along alpha."""
    parts = []
    for a in range(n * (n - 1) // 2):
        parts.append(root_derivative(n, a).left_scale(LaurentCoeff.root_power(n, a, -1)))
    return op_sum(parts) if parts else LaurentWeylOp(n)


def inverse_square_sum(n: int) -> LaurentCoeff:
    """sum over positive roots of (alpha, alpha) / alpha^2."""
    R = RootSystemA(n)
    return lc_sum([LaurentCoeff.root_power(n, a, -2).scale(R.inner(a, a)) for a in range(R.size)], n)


def _kpoly(n: int, c) -> LaurentCoeff:
    if isinstance(c, LaurentCoeff):
        return c
    if isinstance(c, UniPoly):
        return LaurentCoeff.of_k(n, c)
    return LaurentCoeff.const(n, c)


def k_shift(r: int = 0) -> UniPoly:
    return UniPoly([r, 1], "k")


def rational_operator(n: int, c=None) -> LaurentWeylOp:
    """Delta + 2c P+; c defaults to the parameter k."""
    c = _kpoly(n, k_shift(0) if c is None else c)
    return laplacian(n) + p_plus(n).left_scale(c.scale(2))


def cm_operator(n: int, c=None) -> LaurentWeylOp:
    """Delta - c(c+1) sum (alpha,alpha)/alpha^2; c defaults to k."""
    u = k_shift(0) if c is None else c
    if not isinstance(u, UniPoly):
        u = UniPoly.const(u, "k")
    pot = inverse_square_sum(n) * LaurentCoeff.of_k(n, u * (u + 1))
    return laplacian(n) - LaurentWeylOp.multiplication(pot)


def vandermonde(n: int) -> MultiPoly:
    """prod_{i<j} (t_j - t_i)."""
    out = _one(n)
    for a in range(n * (n - 1) // 2):
        out = out * _alpha_pow(n, a, 1)
    return -out if (n * (n - 1) // 2) % 2 else out


@dataclass
class CMOperators:
    n: int
    L_rational: LaurentWeylOp
    L_CM: LaurentWeylOp
    delta: MultiPoly
    Pplus: LaurentWeylOp


def cm_operators(n: int) -> CMOperators:
    return CMOperators(n, rational_operator(n), cm_operator(n), vandermonde(n), p_plus(n))


def log_derivative(n: int, i: int) -> LaurentCoeff:
    """(d_i delta) / delta = sum over roots of alpha_i / alpha."""
    parts = []
    for a, (p, q) in enumerate(_roots(n)):
        if i == p:
            parts.append(LaurentCoeff.root_power(n, a, -1))
        elif i == q:
            parts.append(-LaurentCoeff.root_power(n, a, -1))
    return lc_sum(parts, n)


def conjugate_by_delta_power(A: LaurentWeylOp, e) -> LaurentWeylOp:
    """delta^{-e} A delta^{e}.

    An int e goes through the explicit polynomial delta^e.  A UniPoly e
    (in k) uses d_i -> d_i + e (d_i delta)/delta, which commute pairwise.
    """
    n = A.n
    if isinstance(e, int):
        if e == 0:
            return A
        size = n * (n - 1) // 2
        sign = -1 if (size * e) % 2 else 1
        if e > 0:
            right = LaurentWeylOp.multiplication(LaurentCoeff(n, vandermonde(n) ** e))
            left = LaurentCoeff._raw(n, _one(n).scale(sign), (e,) * size)
        else:
            right = LaurentWeylOp.multiplication(LaurentCoeff._raw(n, _one(n).scale(sign), (-e,) * size))
            left = LaurentCoeff(n, vandermonde(n) ** (-e))
        return laurent_weyl_mul(A, right).left_scale(left)
    ec = _kpoly(n, e)
    shifted = [LaurentWeylOp.d(n, i) + LaurentWeylOp.multiplication(ec * log_derivative(n, i)) for i in range(n)]
    cache: dict = {}

    def power(i: int, m: int) -> LaurentWeylOp:
        if (i, m) not in cache:
            cache[(i, m)] = LaurentWeylOp.identity(n) if m == 0 else laurent_weyl_mul(power(i, m - 1), shifted[i])
        return cache[(i, m)]

    parts = []
    for b, c in A.terms.items():
        op = LaurentWeylOp.multiplication(c)
        for i, m in enumerate(b):
            if m:
                op = laurent_weyl_mul(op, power(i, m))
        parts.append(op)
    return op_sum(parts) if parts else LaurentWeylOp(n)


def is_w_invariant(A: LaurentWeylOp) -> bool:
    return all(A.permute(s) == A for s in RootSystemA(A.n).weyl_group())


# ---------------------------------------------------------------- verification


@dataclass
class RadialCheck:
    name: str
    holds: bool
    residual: LaurentWeylOp

    def first_residual(self) -> str:
        if self.holds:
            return ""
        b, c = self.residual.sorted_terms()[0]
        return f"d^{b}: {c}"


@dataclass
class RadialReport:
    n: int
    checks: list[RadialCheck]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "checks": [{"name": c.name, "holds": c.holds, "first_residual": c.first_residual()} for c in self.checks],
        }


def _check(name: str, lhs: LaurentWeylOp, rhs: LaurentWeylOp) -> RadialCheck:
    res = lhs - rhs
    return RadialCheck(name, res.is_zero(), res)


def laplacian_conjugation(n: int) -> RadialCheck:
    """delta^{-1} Delta delta = Delta + 2 P+."""
    return _check("laplacian", conjugate_by_delta_power(laplacian(n), 1), laplacian(n) + p_plus(n).scale(2))


def pplus_conjugation(n: int, factor: int = 2) -> RadialCheck:
    """delta^{-1} P+ delta = P+ + factor * sum (alpha,alpha)/alpha^2.

    factor=2 is the form as usually quoted; direct expansion gives factor=1.
    """
    rhs = p_plus(n) + LaurentWeylOp.multiplication(inverse_square_sum(n).scale(factor))
    return _check(f"pplus(factor={factor})", conjugate_by_delta_power(p_plus(n), 1), rhs)


def cm_conjugation(n: int) -> RadialCheck:
    """delta^{-(k+1)} L_k delta^{k+1} = Delta + 2(k+1) P+, symbolically in k."""
    lhs = conjugate_by_delta_power(cm_operator(n), k_shift(1))
    return _check("cm", lhs, rational_operator(n, k_shift(1)))


def cm_specialization(n: int, k: int) -> RadialCheck:
    """The symbolic conjugation at a fixed k against the explicit power delta^{k+1}."""
    symbolic = conjugate_by_delta_power(cm_operator(n), k_shift(1)).subs_k(k)
    explicit = conjugate_by_delta_power(cm_operator(n, UniPoly.const(k, "k")), k + 1)
    return _check(f"cm@k={k}", symbolic, explicit)


def verify_radial_identity(n: int, ks: Sequence[int] = (2,), strict: bool = True) -> RadialReport:
    if not 2 <= n <= 4:
        raise ValueError("radial identities are checked for 2 <= n <= 4")
    checks = [laplacian_conjugation(n), pplus_conjugation(n), cm_conjugation(n)]
    checks += [cm_specialization(n, k) for k in ks]
    report = RadialReport(n, checks)
    if strict and not checks[2].holds:
        raise IdentityViolation(f"cm identity fails for n={n}: {checks[2].first_residual()}")
    return report
