"""Sparse multivariate polynomials with exact rational coefficients.

A ``MultiPoly`` of arity ``n`` over ``Q`` stores exponent tuples of length
``n``.  Over ``Q[s]`` or ``Q[k]`` the parameter is carried as one extra
trailing exponent slot: it multiplies like a variable but is never
differentiated or substituted by the geometric operations.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, Sequence

from bfun.core.unipoly import UniPoly

RINGS = ("Q", "Qs", "Qk")


class ArityError(ValueError):
    """Operands live in polynomial rings of different shape."""


class NotDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder."""


def _grlex(e: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (sum(e), e)


def _norm(c):
    # ints stay ints; Fractions with unit denominator collapse to int
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class MultiPoly:
    __slots__ = ("arity", "ring", "terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[tuple[int, ...], object] | None = None, ring: str = "Q"):
        if ring not in RINGS:
            raise ValueError(f"ring must be one of {RINGS}")
        self.arity = arity
        self.ring = ring
        width = arity + (ring != "Q")
        clean: dict[tuple[int, ...], object] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != width:
                    raise ArityError(f"exponent {e} does not match arity {arity} ring {ring}")
                if c:
                    clean[tuple(e)] = _norm(c)
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @property
    def width(self) -> int:
        return self.arity + (self.ring != "Q")

    @classmethod
    def _raw(cls, arity: int, ring: str, terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.arity, p.ring, p.terms, p._hash = arity, ring, terms, None
        return p

    @classmethod
    def zero(cls, arity: int, ring: str = "Q") -> "MultiPoly":
        return cls._raw(arity, ring, {})

    @classmethod
    def const(cls, arity: int, c, ring: str = "Q") -> "MultiPoly":
        width = arity + (ring != "Q")
        return cls(arity, {(0,) * width: c}, ring)

    @classmethod
    def var(cls, arity: int, i: int, ring: str = "Q") -> "MultiPoly":
        width = arity + (ring != "Q")
        e = [0] * width
        e[i] = 1
        return cls._raw(arity, ring, {tuple(e): 1})

    @classmethod
    def param(cls, arity: int, ring: str = "Qk", power: int = 1) -> "MultiPoly":
        if ring == "Q":
            raise ValueError("ring Q has no parameter")
        return cls._raw(arity, ring, {(0,) * arity + (power,): 1})

    @classmethod
    def from_unipoly(cls, arity: int, u: UniPoly, ring: str | None = None) -> "MultiPoly":
        ring = ring or ("Qs" if u.var == "s" else "Qk")
        return cls(arity, {(0,) * arity + (i,): c for i, c in enumerate(u.coeffs)}, ring)

    def with_ring(self, ring: str) -> "MultiPoly":
        """Embed a Q polynomial into a parametric ring (or relabel the parameter)."""
        if ring == self.ring:
            return self
        if self.ring == "Q":
            return MultiPoly._raw(self.arity, ring, {e + (0,): c for e, c in self.terms.items()})
        if ring == "Q":
            if any(e[-1] for e in self.terms):
                raise ArityError("polynomial depends on its parameter")
            return MultiPoly._raw(self.arity, ring, {e[:-1]: c for e, c in self.terms.items()})
        return MultiPoly._raw(self.arity, ring, dict(self.terms))

    # properties ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(self.arity, other, self.ring).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in descending graded-lex order (the canonical order)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex(kv[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        return iter(self.sorted_terms())

    def leading(self) -> tuple[tuple[int, ...], object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def degree(self) -> int:
        """Total degree in the geometric variables (parameter excluded)."""
        if not self.terms:
            return -1
        n = self.arity
        return max(sum(e[:n]) for e in self.terms)

    def param_degree(self) -> int:
        if self.ring == "Q" or not self.terms:
            return 0
        return max(e[-1] for e in self.terms)

    def is_homogeneous(self) -> bool:
        n = self.arity
        return len({sum(e[:n]) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        n = self.arity
        return all(not any(e[:n]) for e in self.terms)

    def constant_coeff(self):
        """Coefficient of the geometric monomial 1 (a UniPoly in parametric rings)."""
        if self.ring == "Q":
            return Fraction(self.terms.get((0,) * self.arity, 0))
        return self.param_poly(lambda e: not any(e[: self.arity]))

    def param_poly(self, select=None) -> UniPoly:
        var = "s" if self.ring == "Qs" else "k"
        cs: dict[int, object] = {}
        for e, c in self.terms.items():
            if select is None or select(e):
                cs[e[-1]] = cs.get(e[-1], 0) + c
        top = max(cs, default=-1)
        return UniPoly([cs.get(i, 0) for i in range(top + 1)], var)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.arity != other.arity or self.ring != other.ring:
            raise ArityError(
                f"arity/ring mismatch: ({self.arity},{self.ring}) vs ({other.arity},{other.ring})"
            )

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.arity, other, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.arity, self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.arity, self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.arity, self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        if not c:
            return MultiPoly.zero(self.arity, self.ring)
        return MultiPoly._raw(self.arity, self.ring, {e: _norm(v * c) for e, v in self.terms.items()})

    def mul_monomial(self, e: Sequence[int], c=1) -> "MultiPoly":
        return MultiPoly._raw(
            self.arity,
            self.ring,
            {tuple(a + b for a, b in zip(k, e)): _norm(v * c) for k, v in self.terms.items()},
        )

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.arity, 1, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def diff(self, i: int, times: int = 1) -> "MultiPoly":
        """Partial derivative in geometric variable i."""
        if not 0 <= i < self.arity:
            raise IndexError(f"variable {i} out of range for arity {self.arity}")
        out = {}
        for e, c in self.terms.items():
            a = e[i]
            if a < times:
                continue
            f = 1
            for j in range(times):
                f *= a - j
            ne = list(e)
            ne[i] = a - times
            out[tuple(ne)] = _norm(c * f)
        return MultiPoly._raw(self.arity, self.ring, out)

    def diff_multi(self, b: Sequence[int]) -> "MultiPoly":
        """Apply d^b = prod_i d_i^{b_i}."""
        out = {}
        n = len(b)
        for e, c in self.terms.items():
            f = 1
            ne = list(e)
            for i in range(n):
                bi = b[i]
                if bi:
                    a = e[i]
                    if a < bi:
                        f = 0
                        break
                    for j in range(bi):
                        f *= a - j
                    ne[i] = a - bi
            if f:
                key = tuple(ne)
                v = out.get(key, 0) + c * f
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return MultiPoly(self.arity, out, self.ring)

    # evaluation and substitution ------------------------------------------
    def evaluate(self, point: Sequence):
        """Substitute rational values for every geometric variable.

        Over Q returns a rational; over a parametric ring returns a UniPoly.
        """
        n = self.arity
        if len(point) != n:
            raise ArityError(f"point of length {len(point)} for arity {n}")
        pt = [Fraction(x) if not isinstance(x, (int, Fraction)) else x for x in point]
        pows: list[dict[int, object]] = [{0: 1} for _ in range(n)]

        def pw(i, a):
            d = pows[i]
            if a not in d:
                d[a] = pt[i] ** a
            return d[a]

        if self.ring == "Q":
            # clear denominators once: sum over total degree d of (integer sum) / D^d
            D = lcm(*(x.denominator if isinstance(x, Fraction) else 1 for x in pt)) if pt else 1
            ipt = [int(x * D) for x in pt]
            ipows: list[dict[int, int]] = [{0: 1} for _ in range(n)]
            by_deg: dict[int, object] = {}
            for e, c in self.terms.items():
                v = 1
                for i in range(n):
                    a = e[i]
                    if a:
                        d = ipows[i]
                        if a not in d:
                            d[a] = ipt[i] ** a
                        v *= d[a]
                        if not v:
                            break
                if v:
                    deg = sum(e)
                    by_deg[deg] = by_deg.get(deg, 0) + c * v
            return sum((Fraction(a) / D**d for d, a in by_deg.items()), Fraction(0))
        cs: dict[int, object] = {}
        for e, c in self.terms.items():
            v = c
            for i in range(n):
                if e[i]:
                    v = v * pw(i, e[i])
            cs[e[-1]] = cs.get(e[-1], 0) + v
        var = "s" if self.ring == "Qs" else "k"
        return UniPoly([cs.get(i, 0) for i in range(max(cs, default=-1) + 1)], var)

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials (all of one common arity/ring) for the variables."""
        if len(subs) != self.arity:
            raise ArityError("need one substitute per variable")
        target = subs[0]
        cache: list[dict[int, MultiPoly]] = [{1: s} for s in subs]

        def pw(i, a):
            d = cache[i]
            if a not in d:
                d[a] = pw(i, a // 2) * pw(i, a - a // 2)
            return d[a]

        acc = MultiPoly.zero(target.arity, target.ring)
        for e, c in self.terms.items():
            term = MultiPoly.const(target.arity, c, target.ring)
            if self.ring != "Q" and e[-1]:
                term = term * MultiPoly.param(target.arity, target.ring, e[-1])
            for i in range(self.arity):
                if e[i]:
                    term = term * pw(i, e[i])
            acc = acc + term
        return acc

    def subs_param(self, u: UniPoly) -> "MultiPoly":
        """Replace the parameter p by the polynomial u(p)."""
        if self.ring == "Q":
            return self
        out = MultiPoly.zero(self.arity, self.ring)
        upow: dict[int, MultiPoly] = {}
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[-1], {})[e[:-1] + (0,)] = c
        base = MultiPoly.from_unipoly(self.arity, u.with_var("s" if self.ring == "Qs" else "k"), self.ring)
        for d, terms in groups.items():
            if d not in upow:
                upow[d] = base ** d
            out = out + MultiPoly._raw(self.arity, self.ring, terms) * upow[d]
        return out

    def permute(self, sigma: Sequence[int]) -> "MultiPoly":
        """Relabel variable i as sigma[i]."""
        n = self.arity
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(e)
            for i in range(n):
                ne[sigma[i]] = e[i]
            if len(e) > n:
                ne[n] = e[n]
            out[tuple(ne)] = c
        return MultiPoly._raw(self.arity, self.ring, out)

    # rendering and serialization -----------------------------------------
    def __repr__(self) -> str:
        return f"MultiPoly(arity={self.arity}, ring={self.ring!r}, terms={len(self.terms)})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        n = self.arity
        names = list(names) if names else [f"x{i + 1}" for i in range(n)]
        if self.ring != "Q":
            names = names + ["s" if self.ring == "Qs" else "k"]
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            c = Fraction(c)
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_str()

    def to_text(self) -> str:
        lines = [f"MPOLY arity={self.arity} ring={self.ring}"]
        for e, c in self.sorted_terms():
            c = Fraction(c)
            lines.append(f"{c.numerator}/{c.denominator} " + " ".join(map(str, e)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MultiPoly":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty MPOLY text")
        head = lines[0].split()
        if head[0] != "MPOLY":
            raise ValueError(f"bad header: {lines[0]!r}")
        fields = dict(tok.split("=", 1) for tok in head[1:])
        arity = int(fields["arity"])
        ring = fields.get("ring", "Q")
        width = arity + (ring != "Q")
        terms = {}
        for ln in lines[1:]:
            toks = ln.split()
            if len(toks) != width + 1:
                raise ValueError(f"term line has {len(toks) - 1} exponents, expected {width}: {ln!r}")
            e = tuple(int(t) for t in toks[1:])
            if e in terms:
                raise ValueError(f"duplicate exponent {e}")
            terms[e] = Fraction(toks[0])
        return cls(arity, terms, ring)


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact product in canonical (sparse) form."""
    a._check(b)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    out: dict[tuple[int, ...], object] = {}
    get = out.get
    bitems = list(b.terms.items())
    for ea, ca in a.terms.items():
        for eb, cb in bitems:
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = get(e, 0) + ca * cb
    return MultiPoly(a.arity, {e: c for e, c in out.items() if c}, a.ring)


def poly_exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Quotient q with a = q*b; raises NotDivisibleError otherwise."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lb, cb = b.leading()
    rem = dict(a.terms)
    heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
    heapq.heapify(heap)
    quo: dict[tuple[int, ...], object] = {}
    bterms = list(b.terms.items())
    while heap:
        _, neg = heapq.heappop(heap)
        e = tuple(-x for x in neg)
        c = rem.get(e)
        if not c:
            continue
        if any(x < y for x, y in zip(e, lb)):
            raise NotDivisibleError("nonzero remainder: leading term not divisible by divisor's leading term")
        qe = tuple(x - y for x, y in zip(e, lb))
        qc = Fraction(c) / cb
        quo[qe] = qc
        for eb, c2 in bterms:
            t = tuple(x + y for x, y in zip(qe, eb))
            v = rem.get(t, 0) - qc * c2
            if v:
                if t not in rem:
                    heapq.heappush(heap, (-sum(t), tuple(-x for x in t)))
                rem[t] = v
            else:
                rem.pop(t, None)
    return MultiPoly(a.arity, quo, a.ring)


def monomials(nvars: int, degree: int) -> Iterator[tuple[int, ...]]:
    """All exponent tuples of exactly the given total degree."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            yield (first,) + rest


def monomials_upto(nvars: int, degree: int) -> Iterator[tuple[int, ...]]:
    for d in range(degree + 1):
        yield from monomials(nvars, d)


def det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by cofactor expansion along the first row with memoized minors."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    proto = matrix[0][0]
    memo: dict[tuple[int, frozenset], MultiPoly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> MultiPoly:
        if row == n:
            return MultiPoly.const(proto.arity, 1, proto.ring)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = MultiPoly.zero(proto.arity, proto.ring)
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def sum_polys(polys: Iterable[MultiPoly], arity: int, ring: str = "Q") -> MultiPoly:
    out: dict = {}
    for p in polys:
        for e, c in p.terms.items():
            out[e] = out.get(e, 0) + c
    return MultiPoly(arity, out, ring)
