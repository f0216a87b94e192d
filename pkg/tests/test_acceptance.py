"""Acceptance criteria, each at its stated tolerance and time budget.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.  Checks that fail as stated are
kept faithful and marked ``xfail(strict=True)``: they run every time,
print FAIL, and turn the suite red if they ever start passing.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from bfun.bernstein import alpha, b1, b2, bhat_eval, bhat_poly, btilde, verify_bernstein_identity
from bfun.core.unipoly import UniPoly
from bfun.cyclic import local_chart_identity, random_invertible, random_rational_matrix, semiinvariance_check
from bfun.radial import cm_conjugation, laplacian_conjugation, pplus_conjugation
from bfun.shift import (
    constant_term,
    ct_formula,
    recursion_residuals,
    root_factors,
    shift_defect,
    solve_shift_generator,
    verify_factorization,
)

k = UniPoly.x("k")
s = UniPoly.x("s")
criterion = pytest.mark.criterion


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@criterion(1, "n=1 b-hat = s+1 exactly, < 0.1 s")
def test_c1_n1(record_property):
    res, dt = timed(bhat_poly, 1)
    record_property("detail", f"{res.bhat} in {dt:.3f}s")
    assert res.bhat.with_var("s") == s + 1
    assert dt < 0.1


@criterion(2, "n=2 b-hat = 4k^3+14k^2+16k+6, monic = b-tilde, constant 4, < 5 s")
def test_c2_n2(record_property):
    res, dt = timed(bhat_poly, 2)
    record_property("detail", f"{res.bhat}; constant {res.alpha} vs alpha_2 = {alpha(2)}; {dt:.2f}s")
    assert res.bhat == UniPoly([6, 16, 14, 4], "k")
    assert res.bhat == (k + 1) ** 2 * (k * 2 + 3) * 2
    assert res.monic.with_var("s") == (s + 1) ** 2 * (s + Fraction(3, 2)) == btilde(2)
    assert res.alpha == alpha(2) == 4
    assert dt < 5


@criterion(3, "n=3 (jets) b-hat = 6(k+1)^3(2k+3)(3k+4)(3k+5), < 10 min")
def test_c3_n3(record_property):
    res, dt = timed(bhat_poly, 3, "jet")
    record_property("detail", f"{res.bhat}; {dt:.2f}s")
    assert res.bhat == (k + 1) ** 3 * (k * 2 + 3) * (k * 3 + 4) * (k * 3 + 5) * 6
    expected_roots = {Fraction(-1): 3, Fraction(-3, 2): 1, Fraction(-4, 3): 1, Fraction(-5, 3): 1}
    assert dict(res.btilde_roots) == expected_roots
    assert res.method == "jet"
    assert dt < 600


@criterion(4, "S f^{k+1} - b-hat(k) f^k = 0 term by term, n=2, k=0..3, < 1 min")
def test_c4_full_identity(record_property):
    t0 = time.perf_counter()
    ok = [verify_bernstein_identity(2, kk) for kk in range(4)]
    dt = time.perf_counter() - t0
    record_property("detail", f"k=0..3 in {dt:.2f}s")
    assert all(ok)
    assert dt < 60


@criterion(5, "f(TMT^-1, Tv) = det(T) f(M,v) on 100 random triples per n=2,3,4, < 1 min")
def test_c5_semiinvariance(record_property):
    t0 = time.perf_counter()
    bad = 0
    for n in (2, 3, 4):
        rng = random.Random(20260 + n)
        for _ in range(100):
            T = random_invertible(rng, n)
            M = random_rational_matrix(rng, n)
            v = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
            bad += not semiinvariance_check(n, T, M, v)
    dt = time.perf_counter() - t0
    record_property("detail", f"{300 - bad}/300 exact in {dt:.2f}s")
    assert bad == 0
    assert dt < 60


@criterion(6, "chart identity holds symbolically, n=2,3")
@pytest.mark.parametrize("n", [2, 3])
def test_c6_chart(n, record_property):
    ci = local_chart_identity(n)
    record_property("detail", f"n={n}: det(T) power {ci.det_power}, {ci.lhs_terms} terms")
    assert ci.holds


@criterion(7, "radial conjugation identities over Q[k], n=2,3,4, < 2 min")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_c7_laplacian(n):
    chk, dt = timed(laplacian_conjugation, n)
    assert chk.holds, chk.first_residual()
    assert dt < 120


@criterion(7, "radial conjugation identities over Q[k], n=2,3,4, < 2 min")
@pytest.mark.xfail(
    strict=True,
    reason="direct expansion gives coefficient 1 on sum (alpha,alpha)/alpha^2, not 2",
)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_c7_pplus_as_stated(n, record_property):
    chk, dt = timed(pplus_conjugation, n, 2)
    record_property("detail", f"n={n}: residual {chk.first_residual()}")
    assert chk.holds
    assert dt < 120


@criterion(7, "radial conjugation identities over Q[k], n=2,3,4, < 2 min")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_c7_cm(n):
    chk, dt = timed(cm_conjugation, n)
    assert chk.holds, chk.first_residual()
    assert dt < 120


@pytest.fixture(scope="module")
def generators():
    out = {}
    for n in (2, 3):
        sol, dt = timed(solve_shift_generator, n)
        out[n] = (sol, dt)
    return out


@criterion(8, "shift generator n=2,3: N=(1..1), unique, prod alpha | p_N, recursion zero, < 5 min")
@pytest.mark.parametrize("n", [2, 3])
def test_c8_solution(n, generators, record_property):
    sol, dt = generators[n]
    record_property("detail", f"n={n}: N={sol.N}, dim {sol.nullspace_dim}, {dt:.2f}s")
    assert sol.operator is not None and not sol.operator.is_zero()
    assert shift_defect(sol.operator, -1).is_zero()
    assert sol.N == (1,) * (n * (n - 1) // 2)
    assert sol.nullspace_dim == 1
    assert dt < 300


@criterion(8, "shift generator n=2,3: N=(1..1), unique, prod alpha | p_N, recursion zero, < 5 min")
@pytest.mark.parametrize("n", [2, 3])
def test_c8_divisibility(n, generators):
    sol, _ = generators[n]
    names, _ = root_factors(n, sol.pN)
    assert len(names) >= n * (n - 1) // 2
    assert len(set(names)) == n * (n - 1) // 2


def _c8_recursion(n, generators, record_property):
    sol, _ = generators[n]
    res = recursion_residuals(sol.generator, -1)
    bad = [M for M, p in res.items() if not p.is_zero()]
    record_property("detail", f"n={n}: {len(res) - len(bad)}/{len(res)} residuals vanish")
    assert not bad


@criterion(8, "shift generator n=2,3: N=(1..1), unique, prod alpha | p_N, recursion zero, < 5 min")
def test_c8_recursion_n2(generators, record_property):
    _c8_recursion(2, generators, record_property)


@criterion(8, "shift generator n=2,3: N=(1..1), unique, prod alpha | p_N, recursion zero, < 5 min")
@pytest.mark.xfail(
    strict=True,
    reason="three dependent roots: no representative of the operator satisfies the formal recursion",
)
def test_c8_recursion_n3(generators, record_property):
    _c8_recursion(3, generators, record_property)


@criterion(9, "monic CT(g(k+2)) = monic product formula; b-hat/((k+1)^n CT) constant, n=2,3")
@pytest.mark.parametrize("n", [2, 3])
def test_c9_factorization(n, record_property):
    rep = verify_factorization(n, strict=False)
    record_property("detail", f"n={n}: observed constant {rep.quotient_constant}, alpha_n = {rep.expected_constant}")
    assert rep.ct_shifted_monic == ct_formula(n).monic()
    assert rep.quotient_constant is not None
    assert rep.quotient_constant == alpha(n)


@criterion(10, "n=4 spot checks b-hat(0) = 302400, b-hat(1) = b1(1) b2(1)")
@pytest.mark.stretch
@pytest.mark.slow
@pytest.mark.parametrize("kk", [0, 1])
def test_c10_n4(kk, record_property):
    expected = (b1(4, "k") * b2(4, "k"))(kk)
    got, dt = timed(bhat_eval, 4, kk)
    record_property("detail", f"b-hat({kk}) = {got} vs {expected}; {dt:.1f}s")
    assert got == expected
    if kk == 0:
        assert got == 302400


PROPERTY_SUITES = [
    "tests/test_weyl.py::test_representation_soundness",
    "tests/test_weyl.py::test_apply_against_sympy",
    "tests/test_radial.py::test_composition_is_sequential_application",
    "tests/test_radial.py::test_associativity",
    "tests/test_jet_interp.py::test_jet_is_a_ring_homomorphism",
    "tests/test_jet_interp.py::test_downset_truncation_is_multiplicative",
    "tests/test_jet_interp.py::test_interpolation_exact",
    "tests/test_multipoly.py::test_text_round_trip",
    "tests/test_multipoly.py::test_text_round_trip_param_ring",
    "tests/test_weyl.py::test_text_round_trip",
    "tests/test_radial.py::test_serialization_round_trip",
    "tests/test_radial.py::test_serialization_round_trip_random",
]


@criterion(11, "property suites standing alone: soundness, jets, interpolation, round trips")
def test_c11_property_suites(record_property):
    root = Path(__file__).resolve().parent.parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_SUITES],
        cwd=root,
        capture_output=True,
        text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    record_property("detail", tail)
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert " passed" in tail and "failed" not in tail


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
