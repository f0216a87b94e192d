"""Shift operators for the rational operator L(k) = Delta + 2k P+ in type A.

An operator is searched for in the form ``sum_j abar^j d(p_j)``: a root
monomial ``abar^j = prod alpha^{j_alpha}`` times a constant-coefficient
operator ``p_j(d)``.  Two independent routes are used:

* the true defect ``D L(k) - L(k+r) D`` computed in canonical
  Laurent-Weyl form, solved as a nullspace over Q(k);
* the coefficient recursion obtained by applying the defect to
  ``exp(t . lambda)`` and treating each root as a formal symbol y_alpha
  with ``d_i y_alpha = alpha_i``.

For n >= 3 the roots are linearly dependent (t1-t3 = (t1-t2) + (t2-t3)),
so many formal forms name the same operator.  The defect route measures
that redundancy directly; the recursion route then picks the canonical
lift.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, prod
from typing import Mapping, Sequence

from bfun.core.linalg import nullspace_q, nullspace_qk, rref_q
from bfun.core.multipoly import MultiPoly, monomials
from bfun.core.unipoly import RationalFunction, UniPoly
from bfun.radial import (
    RING,
    LaurentCoeff,
    LaurentWeylOp,
    RootSystemA,
    _alpha_pow,
    _div_root,
    _roots,
    k_shift,
    laurent_weyl_mul,
    op_sum,
    rational_operator,
)

log = logging.getLogger(__name__)


class BoundsTooSmall(RuntimeError):
    """The ansatz contains no nonzero shift operator."""


class AmbiguousGenerator(RuntimeError):
    """The minimal stratum has more than one independent solution."""


class FactorizationViolation(ArithmeticError):
    pass


# ---------------------------------------------------------------- formal form


def _kzero(n: int) -> MultiPoly:
    return MultiPoly.zero(n, RING)


@dataclass
class RootExpansion:
    """sum_j abar^j p_j(d); p_j is a polynomial in lambda_1..lambda_n over Q[k]."""

    n: int
    parts: dict[tuple[int, ...], MultiPoly] = field(default_factory=dict)

    def __post_init__(self):
        self.parts = {tuple(j): p for j, p in self.parts.items() if not p.is_zero()}

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other: "RootExpansion") -> "RootExpansion":
        out = dict(self.parts)
        for j, p in other.parts.items():
            out[j] = out[j] + p if j in out else p
        return RootExpansion(self.n, out)

    def scale(self, c) -> "RootExpansion":
        if isinstance(c, UniPoly):
            c = MultiPoly.from_unipoly(self.n, c.with_var("k"), RING)
            return RootExpansion(self.n, {j: p * c for j, p in self.parts.items()})
        return RootExpansion(self.n, {j: p.scale(c) for j, p in self.parts.items()})

    def subs_k(self, u: UniPoly) -> "RootExpansion":
        return RootExpansion(self.n, {j: p.subs_param(u) for j, p in self.parts.items()})

    def permute(self, sigma: Sequence[int]) -> "RootExpansion":
        """Action of a coordinate permutation; flipped roots contribute a sign."""
        n = self.n
        roots = _roots(n)
        index = {r: a for a, r in enumerate(roots)}
        out = {}
        for j, p in self.parts.items():
            nj = [0] * len(j)
            flips = 0
            for a, x in enumerate(j):
                i1, i2 = sigma[roots[a][0]], sigma[roots[a][1]]
                if i1 < i2:
                    nj[index[(i1, i2)]] = x
                else:
                    nj[index[(i2, i1)]] = x
                    flips += x
            q = p.permute(sigma)
            out[tuple(nj)] = -q if flips % 2 else q
        return RootExpansion(n, out)

    def to_operator(self) -> LaurentWeylOp:
        parts = [
            LaurentWeylOp.constant_coefficient(self.n, p).left_scale(LaurentCoeff.monomial(self.n, j))
            for j, p in self.parts.items()
        ]
        return op_sum(parts) if parts else LaurentWeylOp(self.n)

    def top_indices(self) -> list[tuple[int, ...]]:
        """Indices that are maximal for the componentwise order."""
        js = list(self.parts)
        return sorted(
            j for j in js if not any(o != j and all(x >= y for x, y in zip(o, j)) for o in js)
        )


def rational_operator_form(n: int, c: UniPoly | None = None) -> RootExpansion:
    """Delta + 2c P+ written as sum_j abar^j p_j(d)."""
    c = k_shift(0) if c is None else c
    size = n * (n - 1) // 2
    lap = MultiPoly(n, {tuple(2 * int(i == m) for i in range(n)) + (0,): 1 for m in range(n)}, RING)
    parts = {(0,) * size: lap}
    cm = MultiPoly.from_unipoly(n, c.with_var("k"), RING).scale(2)
    for a, (i, j) in enumerate(_roots(n)):
        idx = tuple(-int(b == a) for b in range(size))
        parts[idx] = spectral_root(n, a) * cm
    return RootExpansion(n, parts)


def spectral_root(n: int, a: int) -> MultiPoly:
    """t_alpha = sum_i alpha_i lambda_i, as a polynomial in lambda."""
    return _alpha_pow(n, a, 1)


# ---------------------------------------------------------------- recursion


def av_coefficient(r: Sequence[int]) -> Fraction:
    """(sum r)! / prod r_i! * (-1)^{sum r}."""
    s = sum(r)
    return Fraction(factorial(s) * (-1) ** s, prod(factorial(x) for x in r))


def _add(j: Sequence[int], a: int, m: int) -> tuple[int, ...]:
    out = list(j)
    out[a] += m
    return tuple(out)


def recursion_residual(form: RootExpansion, M: Sequence[int], r: int = -1) -> MultiPoly:
    """Coefficient of abar^M in exp(-t.lambda) (D L(k) - L(k+r) D) exp(t.lambda), formally.

    Sums over alpha != beta run over ordered pairs.
    """
    n = form.n
    R = RootSystemA(n)
    size = R.size
    vec = R.vectors()
    M = tuple(M)
    get = form.parts.get
    k = MultiPoly.param(n, RING)
    kappa = k + r
    acc = _kzero(n)
    for a in range(size):
        ta = spectral_root(n, a)
        # 2k sum_r AV(r) prod alpha_i^{r_i} t_alpha p^{(r)}_{M + (1+|r|) e_alpha}
        for j, p in form.parts.items():
            rest = j[a] - M[a] - 1
            if rest < 0 or any(j[b] != M[b] for b in range(size) if b != a):
                continue
            nz = [i for i in range(n) if vec[a][i]]
            for rr in product(range(rest + 1), repeat=len(nz)):
                if sum(rr) != rest:
                    continue
                rvec = [0] * n
                for i, x in zip(nz, rr):
                    rvec[i] = x
                w = av_coefficient(rvec) * prod(vec[a][i] ** rvec[i] for i in range(n))
                dp = p.diff_multi(rvec)
                if dp.terms:
                    acc = acc + (dp * ta * k).scale(2 * w)
        aa = R.inner(a, a)
        p2 = get(_add(M, a, 2))
        if p2 is not None:
            m2 = M[a] + 2
            acc = acc - p2.scale(m2 * (M[a] + 1) * aa)
            acc = acc - (p2 * kappa).scale(2 * m2 * aa)
        p1 = get(_add(M, a, 1))
        if p1 is not None:
            acc = acc - (p1 * ta).scale(2 * (M[a] + 1))
            acc = acc - (p1 * ta * kappa).scale(2)
        for b in range(size):
            if b == a:
                continue
            ab = R.inner(a, b)
            if not ab:
                continue
            pab = get(_add(_add(M, a, 1), b, 1))
            if pab is None:
                continue
            acc = acc - pab.scale((M[a] + 1) * (M[b] + 1) * ab)
            acc = acc - (pab * kappa).scale(2 * (M[a] + 1) * ab)
    return acc


def recursion_indices(form: RootExpansion) -> list[tuple[int, ...]]:
    """Every M at which some p_j of the form can appear in the recursion."""
    size = RootSystemA(form.n).size
    out = set()
    for j, p in form.parts.items():
        for a in range(size):
            for m in range(1, p.degree() + 2):
                out.add(_add(j, a, -m))
            out.add(_add(j, a, -2))
            for b in range(size):
                if b != a:
                    out.add(_add(_add(j, a, -1), b, -1))
    return sorted(out)


def recursion_residuals(form: RootExpansion, r: int = -1) -> dict[tuple[int, ...], MultiPoly]:
    return {M: recursion_residual(form, M, r) for M in recursion_indices(form)}


def _formal_d(X: dict, i: int, n: int) -> dict:
    """d_i on sum_j y^j q_j(lambda) exp(t.lambda), with d_i y_alpha = alpha_i."""
    lam = MultiPoly.var(n, i, RING)
    out: dict = {}
    for j, q in X.items():
        out[j] = out[j] + q * lam if j in out else q * lam
        for a, (p1, p2) in enumerate(_roots(n)):
            if not j[a] or i not in (p1, p2):
                continue
            sign = 1 if i == p1 else -1
            jj = _add(j, a, -1)
            term = q.scale(j[a] * sign)
            out[jj] = out[jj] + term if jj in out else term
    return {j: q for j, q in out.items() if not q.is_zero()}


def _formal_apply(F: RootExpansion, X: dict) -> dict:
    n = F.n
    out: dict = {}
    for j, p in F.parts.items():
        for e, c in p.terms.items():
            Y = X
            for i in range(n):
                for _ in range(e[i]):
                    Y = _formal_d(Y, i, n)
            kc = MultiPoly(n, {(0,) * n + (e[n],): c}, RING)
            for jj, q in Y.items():
                key = tuple(x + y for x, y in zip(jj, j))
                out[key] = out[key] + q * kc if key in out else q * kc
    return {j: q for j, q in out.items() if not q.is_zero()}


def formal_defect(form: RootExpansion, r: int = -1) -> dict[tuple[int, ...], MultiPoly]:
    """D L(k) - L(k+r) D applied to exp(t.lambda), composed formally in the y_alpha.

    Independent of the closed-form recursion; the two must agree index by index.
    """
    n = form.n
    E = {(0,) * RootSystemA(n).size: MultiPoly.const(n, 1, RING)}
    L0, L1 = rational_operator_form(n), rational_operator_form(n, k_shift(r))
    a = _formal_apply(form, _formal_apply(L0, E))
    b = _formal_apply(L1, _formal_apply(form, E))
    out = dict(a)
    for j, q in b.items():
        out[j] = out[j] - q if j in out else -q
    return {j: q for j, q in out.items() if not q.is_zero()}


# ---------------------------------------------------------------- true defect


def shift_defect(D: LaurentWeylOp, r: int) -> LaurentWeylOp:
    """D L(k) - L(k+r) D in canonical form."""
    n = D.n
    return laurent_weyl_mul(D, rational_operator(n)) - laurent_weyl_mul(rational_operator(n, k_shift(r)), D)


# ---------------------------------------------------------------- the ansatz


@dataclass
class ShiftAnsatz:
    """W-invariant forms with indices j <= N and deg p_j = sum(j) - grade."""

    n: int
    r: int = -1
    grade: int = 0
    top: tuple[int, ...] | None = None

    def __post_init__(self):
        size = RootSystemA(self.n).size
        if self.top is None:
            self.top = (-self.r,) * size
        self.top = tuple(self.top)

    def indices(self) -> list[tuple[int, ...]]:
        # sum(j) >= grade and every other entry at most its top bound
        lo = self.grade - sum(self.top)
        ranges = [range(lo + t, t + 1) for t in self.top]
        return [j for j in product(*ranges) if sum(j) >= self.grade]

    def raw_basis(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        out = []
        for j in self.indices():
            for m in monomials(self.n, sum(j) - self.grade):
                out.append((j, m))
        return out

    def basis(self) -> list[RootExpansion]:
        """Orbit sums of (j, monomial) under W, dropping those that cancel."""
        n = self.n
        seen = set()
        group = RootSystemA(n).weyl_group()
        out = []
        for j, m in self.raw_basis():
            if (j, m) in seen:
                continue
            seed = RootExpansion(n, {j: MultiPoly(n, {m + (0,): 1}, RING)})
            total = RootExpansion(n)
            for s in group:
                img = seed.permute(s)
                total = total + img
                for jj, p in img.parts.items():
                    for e in p.terms:
                        seen.add((jj, e[:n]))
            if not total.is_zero():
                out.append(total)
        return out


def _flatten(ops: Sequence[LaurentWeylOp], n: int) -> list[dict[int, MultiPoly]]:
    """Rows (one per d-key and t-monomial) of the linear map x -> sum x_c ops[c]."""
    keys = set()
    for A in ops:
        keys.update(A.terms)
    rows = []
    for b in sorted(keys):
        coeffs = [(c, A.terms.get(b)) for c, A in enumerate(ops)]
        coeffs = [(c, lc) for c, lc in coeffs if lc is not None]
        top = tuple(max(lc.den[a] for _, lc in coeffs) for a in range(len(coeffs[0][1].den)))
        by_mono: dict = {}
        for c, lc in coeffs:
            num = lc.num
            for a, (d, m) in enumerate(zip(lc.den, top)):
                if m > d:
                    num = num * _alpha_pow(n, a, m - d)
            for e, v in num.terms.items():
                by_mono.setdefault(e[:n], {}).setdefault(c, {})[e[n]] = v
        for mono in sorted(by_mono):
            rows.append(by_mono[mono])
    return rows


def _rows_qk(raw: list[dict], var: str = "k") -> list[dict[int, UniPoly]]:
    out = []
    for row in raw:
        urow = {}
        for c, kd in row.items():
            deg = max(kd)
            u = UniPoly([kd.get(i, 0) for i in range(deg + 1)], var)
            if not u.is_zero():
                urow[c] = u
        if urow:
            out.append(urow)
    return out


def _rows_q(raw: list[dict], ncols: int) -> list[list[Fraction]]:
    out = []
    for row in raw:
        for kd in sorted({d for v in row.values() for d in v}):
            r = [Fraction(0)] * ncols
            for c, v in row.items():
                r[c] = Fraction(v.get(kd, 0))
            if any(r):
                out.append(r)
    return out


def _combine(basis: Sequence[RootExpansion], vec: Sequence[UniPoly], n: int) -> RootExpansion:
    out = RootExpansion(n)
    for b, v in zip(basis, vec):
        if not v.is_zero():
            out = out + b.scale(v)
    return out


def _recursion_rows(basis: Sequence[RootExpansion], r: int, n: int) -> list[dict[int, UniPoly]]:
    raw: dict = {}
    for c, b in enumerate(basis):
        for M, res in recursion_residuals(b, r).items():
            for e, v in res.terms.items():
                raw.setdefault((M, e[:n]), {}).setdefault(c, {})[e[n]] = v
    return _rows_qk([raw[key] for key in sorted(raw)])


@dataclass
class ShiftSolution:
    n: int
    r: int
    grade: int
    basis_size: int
    nullspace_dim: int  # true solution space, representation redundancy removed
    raw_nullspace_dim: int
    representation_kernel_dim: int
    formal_dim: int
    generator: RootExpansion | None  # the formal lift when one exists, else the defect-route form
    operator: LaurentWeylOp | None
    formal_lift: RootExpansion | None = None
    scanned: dict[int, int] = field(default_factory=dict)

    @property
    def N(self) -> tuple[int, ...]:
        tops = self.generator.top_indices()
        if len(tops) != 1:
            raise AmbiguousGenerator(f"no unique top index: {tops}")
        return tops[0]

    @property
    def pN(self) -> MultiPoly:
        return self.generator.parts[self.N]

    def order(self) -> int:
        return max(p.degree() for p in self.generator.parts.values())


@dataclass
class _System:
    basis: list[RootExpansion]
    kernel: list[list[Fraction]]
    defect_rows: list[dict[int, UniPoly]]


def _system(n: int, r: int, grade: int, top=None) -> _System:
    basis = ShiftAnsatz(n, r, grade, top).basis()
    nb = len(basis)
    ops = [b.to_operator() for b in basis]
    # linear relations among the basis operators themselves (k-free, over Q)
    kernel = nullspace_q(_rows_q(_flatten(ops, n), nb), nb) if nb else []
    L0, L1 = rational_operator(n), rational_operator(n, k_shift(r))
    defects = [laurent_weyl_mul(A, L0) - laurent_weyl_mul(L1, A) for A in ops]
    return _System(basis, kernel, _rows_qk(_flatten(defects, n)))


def _identity_vectors(nb: int) -> list[list[UniPoly]]:
    return [[UniPoly.const(int(i == c), "k") for i in range(nb)] for c in range(nb)]


def _project_out(vec: list[UniPoly], kernel: list[list[Fraction]]) -> list[UniPoly]:
    """Subtract kernel vectors so the kernel's pivot coordinates vanish."""
    if not kernel:
        return vec
    red, piv = rref_q(kernel)
    out = list(vec)
    for row, pc in zip(red, piv):
        c = out[pc]
        if not c.is_zero():
            out = [x - c.scale(y) if y else x for x, y in zip(out, row)]
    return out


def solve_stratum(n: int, r: int = -1, grade: int = 0, top=None) -> ShiftSolution:
    """Solve the defect equation on one homogeneous stratum of the ansatz."""
    sysm = _system(n, r, grade, top)
    basis, kernel = sysm.basis, sysm.kernel
    nb = len(basis)
    if nb == 0:
        return ShiftSolution(n, r, grade, 0, 0, 0, 0, 0, None, None)
    null = nullspace_qk(sysm.defect_rows, nb) if sysm.defect_rows else _identity_vectors(nb)
    dim = len(null) - len(kernel)
    formal = nullspace_qk(_recursion_rows(basis, r, n), nb)
    gen = None
    for v in null:
        w = _project_out(v, kernel)
        if any(not x.is_zero() for x in w):
            gen = _combine(basis, w, n)
            break
    lift = _combine(basis, formal[0], n) if formal else None
    log.info("n=%d grade=%d basis=%d null=%d kernel=%d formal=%d", n, grade, nb, len(null), len(kernel), len(formal))
    op = gen.to_operator() if gen is not None else None
    return ShiftSolution(n, r, grade, nb, dim, len(null), len(kernel), len(formal), gen, op, lift)


def pn_determines(n: int, r: int = -1, grade: int = 0) -> bool:
    """Solutions whose top part p_N vanishes are all zero operators."""
    sysm = _system(n, r, grade)
    nb = len(sysm.basis)
    N = (-r,) * RootSystemA(n).size
    pinned = [c for c, b in enumerate(sysm.basis) if N in b.parts]
    extra = [{c: UniPoly.const(1, "k")} for c in pinned]
    null = nullspace_qk(sysm.defect_rows + extra, nb)
    for v in null:
        if not _combine(sysm.basis, v, n).to_operator().is_zero():
            return False
    return True


def normalize(form: RootExpansion) -> RootExpansion:
    """Scale so that p_N is exactly the product of the spectral positive roots."""
    n = form.n
    tops = form.top_indices()
    if len(tops) != 1:
        raise AmbiguousGenerator(f"no unique top index: {tops}")
    pN = form.parts[tops[0]]
    q = pN
    for a, (i, j) in enumerate(_roots(n)):
        q = _div_root(q, i, j)
        if q is None:
            raise FactorizationViolation(f"p_N is not divisible by t{i + 1}-t{j + 1}")
    if any(any(e[:n]) for e in q.terms):
        raise AmbiguousGenerator("p_N has a symmetric factor beyond the root product")
    c = q.param_poly()
    if c.degree > 0:
        # divide through by a polynomial in k: only allowed when every part carries it
        out = {}
        for j, p in form.parts.items():
            out[j] = _div_param(p, c)
        return RootExpansion(n, out)
    return form.scale(1 / c.lead)


def _div_param(p: MultiPoly, c: UniPoly) -> MultiPoly:
    n = p.arity
    groups: dict = {}
    for e, v in p.terms.items():
        groups.setdefault(e[:n], {})[e[n]] = v
    out = {}
    for mono, kd in groups.items():
        u = UniPoly([kd.get(i, 0) for i in range(max(kd) + 1)], "k")
        q, rem = u.divmod(c)
        if not rem.is_zero():
            raise AmbiguousGenerator("normalizing p_N would leave k in a denominator")
        for i, x in enumerate(q.coeffs):
            if x:
                out[mono + (i,)] = x
    return MultiPoly(n, out, RING)


def solve_shift_generator(n: int, r: int = -1, max_grade: int | None = None) -> ShiftSolution:
    """Lowest-order nonzero shift operator with top index (-r, ..., -r).

    Strata are scanned from the highest grade (lowest order) down to grade 0.
    The generator is the formal lift when one exists and agrees with the
    defect route; otherwise the defect-route form with the representation
    kernel projected out.
    """
    if r != -1:
        raise ValueError("only r = -1 is supported")
    size = RootSystemA(n).size
    top_grade = size if max_grade is None else max_grade
    scanned = {}
    for g in range(top_grade, -1, -1):
        sol = solve_stratum(n, r, g)
        scanned[g] = sol.nullspace_dim
        if sol.nullspace_dim == 0:
            continue
        if sol.nullspace_dim > 1:
            raise AmbiguousGenerator(f"{sol.nullspace_dim} independent solutions at grade {g}")
        gen = normalize(sol.generator)
        op = gen.to_operator()
        if sol.formal_lift is not None:
            lift = normalize(sol.formal_lift)
            if lift.to_operator() != op:
                raise AmbiguousGenerator("formal lift and defect-route solution name different operators")
            sol.formal_lift = gen = lift
        sol.generator, sol.operator, sol.scanned = gen, op, scanned
        return sol
    raise BoundsTooSmall(f"no shift operator with top index {(-r,) * size} for n={n}")


# ---------------------------------------------------------------- constant terms


def constant_term(D: LaurentWeylOp) -> UniPoly:
    """The zero-order coefficient, which must be free of t."""
    c = D.terms.get((0,) * D.n)
    if c is None:
        return UniPoly((), "k")
    return c.k_poly()


def ct_formula(n: int) -> UniPoly:
    """n! prod_{d=2}^n prod_{j=1}^{d-1} (d(k+1) + j)."""
    out = UniPoly.const(factorial(n), "k")
    for d in range(2, n + 1):
        for j in range(1, d):
            out = out * UniPoly([d + j, d], "k")
    return out


def root_factors(n: int, p: MultiPoly) -> tuple[list[str], UniPoly]:
    """Split p into positive-root factors and a leftover polynomial in k."""
    names = []
    q = p
    for a, (i, j) in enumerate(_roots(n)):
        while True:
            nq = _div_root(q, i, j)
            if nq is None:
                break
            q = nq
            names.append(f"t{i + 1}-t{j + 1}")
    if any(any(e[:n]) for e in q.terms):
        raise FactorizationViolation("leftover factor depends on t")
    return names, q.param_poly()


@dataclass
class FactorizationReport:
    n: int
    ct: UniPoly
    ct_shifted_monic: UniPoly
    formula_monic: UniPoly
    matches_ct_formula: bool
    quotient_constant: Fraction | None
    expected_constant: int

    @property
    def holds(self) -> bool:
        return self.matches_ct_formula and self.quotient_constant is not None


def verify_factorization(n: int, bhat: UniPoly | None = None, strict: bool = True) -> FactorizationReport:
    """CT of the k -> k+2 generator against the product formula, and b-hat / ((k+1)^n CT)."""
    from bfun.bernstein import bhat_poly

    if n > 3:
        raise ValueError("factorization is checked for n <= 3")
    if n == 1:
        ct = UniPoly.const(1, "k")
    else:
        ct = constant_term(solve_shift_generator(n).operator)
    shifted = ct.shift(2)
    mon = shifted.monic()
    fm = ct_formula(n).monic()
    if bhat is None:
        bhat = bhat_poly(n).bhat
    q, rem = bhat.divmod(UniPoly([1, 1], "k") ** n * mon)
    const = q.coeffs[0] if rem.is_zero() and q.degree == 0 else None
    from bfun.bernstein import alpha

    rep = FactorizationReport(n, ct, mon, fm, mon == fm, const, alpha(n))
    if strict and not rep.holds:
        raise FactorizationViolation(f"n={n}: monic CT {mon} vs formula {fm}, quotient {q} rem {rem}")
    return rep


def summary_json(sol: ShiftSolution) -> dict:
    n = sol.n
    names, scalar = root_factors(n, sol.pN)
    ct = constant_term(sol.operator)
    mon = ct.shift(2).monic()
    return {
        "n": n,
        "r": sol.r,
        "nullspace_dim": sol.nullspace_dim,
        "N": list(sol.N),
        "pN_factors": names + ([str(scalar)] if scalar != UniPoly.const(1, "k") else []),
        "CT_monic_coeffs": [_num(c) for c in mon.coeffs],
        "matches_ct_formula": mon == ct_formula(n).monic(),
    }


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def module_closure(sol: ShiftSolution) -> bool:
    """g L(k) and L(k+r) g are again shift operators."""
    n, r = sol.n, sol.r
    g = sol.operator
    left = laurent_weyl_mul(g, rational_operator(n))
    right = laurent_weyl_mul(rational_operator(n, k_shift(r)), g)
    return shift_defect(left, r).is_zero() and shift_defect(right, r).is_zero()
