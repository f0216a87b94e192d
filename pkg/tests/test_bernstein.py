from fractions import Fraction

import pytest
import sympy

from bfun.bernstein import (
    BadBasePoint,
    TheoremViolation,
    alpha,
    b1,
    b2,
    bhat_eval,
    bhat_poly,
    btilde,
    btilde_roots,
    degree_bound,
    jet_memory_estimate,
    theorem_poly,
    verify_bernstein_identity,
)
from bfun.core.unipoly import UniPoly
from bfun.cyclic import ResourceGuardError, arity, build_S, cyclic_det, lower_shift, point, unit_vector

from oracles import symbols, to_sympy

k = UniPoly.x("k")


def sympy_bhat(n, kk):
    """S f^{k+1} / f^k by sympy differentiation."""
    xs = symbols(arity(n))
    f = to_sympy(cyclic_det(n), xs)
    g = sympy.expand(f ** (kk + 1))
    out = 0
    for (_, b), c in build_S(n).terms.items():
        h = g
        for x, m in zip(xs, b):
            if m:
                h = sympy.diff(h, x, m)
        out += c * h
    q = sympy.cancel(out / f**kk)
    assert q.is_number
    return Fraction(int(q.p), int(q.q))


# values frozen from the sympy oracle above
FROZEN_N2 = {0: 6, 1: 40, 2: 126, 3: 288}


@pytest.mark.parametrize("kk", [0, 1, 2])
def test_sympy_oracle_n2(kk):
    assert sympy_bhat(2, kk) == FROZEN_N2[kk]


@pytest.mark.parametrize("kk, value", sorted(FROZEN_N2.items()))
@pytest.mark.parametrize("method", ["symbolic", "jet"])
def test_bhat_eval_n2(method, kk, value):
    assert bhat_eval(2, kk, method) == value


def test_sympy_oracle_n3_k0():
    assert sympy_bhat(3, 0) == 360


@pytest.mark.parametrize("kk", [0, 1, 5])
def test_bhat_eval_n1(kk):
    assert bhat_eval(1, kk) == kk + 1


@pytest.mark.parametrize("n, kk", [(2, 0), (2, 3), (3, 0), (3, 1)])
def test_paths_agree(n, kk):
    assert bhat_eval(n, kk, "symbolic") == bhat_eval(n, kk, "jet")


BASES_N2 = [
    point([[0, 0], [1, 0]], [1, 0]),
    point([[1, 0], [0, 2]], [1, 1]),
    point([[Fraction(1, 2), 3], [-1, 2]], [2, Fraction(-1, 3)]),
]


@pytest.mark.parametrize("base", BASES_N2)
def test_base_point_independence_n2(base):
    assert [bhat_eval(2, kk, base=base) for kk in range(4)] == [FROZEN_N2[kk] for kk in range(4)]


@pytest.mark.parametrize(
    "base",
    [
        point(lower_shift(3), unit_vector(3)),
        point([[1, 2, 0], [0, 1, 3], [1, 0, 1]], [1, 1, 2]),
        point([[1, 0, 0], [0, 2, 0], [0, 0, 3]], [1, 1, 1]),
    ],
)
def test_base_point_independence_n3(base):
    assert bhat_eval(3, 2, base=base) == 6 * 27 * 7 * 10 * 11


def test_bad_base_point():
    with pytest.raises(BadBasePoint):
        bhat_eval(2, 0, base=point([[1, 0], [0, 1]], [1, 1]))


def test_negative_k_rejected():
    with pytest.raises(ValueError):
        bhat_eval(2, -1)


def test_unknown_method():
    with pytest.raises(ValueError):
        bhat_eval(2, 0, method="numeric")


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, k + 1),
        (2, UniPoly([6, 16, 14, 4], "k")),
        (3, (k + 1) ** 3 * (k * 2 + 3) * (k * 3 + 4) * (k * 3 + 5) * 6),
    ],
)
def test_bhat_poly(n, expected):
    res = bhat_poly(n)
    assert res.bhat == expected
    assert res.bhat.degree == degree_bound(n)
    assert res.matches_theorem()
    assert res.alpha == alpha(n)
    assert res.constant_ratio == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_roots_have_kashiwara_form(n):
    allowed = {Fraction(-1) - Fraction(c, d) for d in range(1, n + 1) for c in range(d)}
    roots = bhat_poly(n).btilde_roots
    assert all(r in allowed for r, _ in roots)
    assert sum(m for _, m in roots) == degree_bound(n)


def test_bhat_poly_n2_symbolic_route():
    assert bhat_poly(2, method="symbolic").bhat == bhat_poly(2).bhat


def test_bhat_poly_guard():
    with pytest.raises(ResourceGuardError):
        bhat_poly(4)


@pytest.mark.parametrize("n, a", [(1, 1), (2, 4), (3, 108), (4, 27648)])
def test_alpha(n, a):
    assert alpha(n) == a


def test_btilde_closed_forms():
    s = UniPoly.x("s")
    assert btilde(1) == s + 1
    assert btilde(2) == (s + 1) ** 2 * (s + Fraction(3, 2))
    assert sorted(btilde_roots(3)) == [
        (Fraction(-5, 3), 1),
        (Fraction(-3, 2), 1),
        (Fraction(-4, 3), 1),
        (Fraction(-1), 3),
    ]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_b1_b2_factorization(n):
    res = theorem_poly(n)
    assert res.b1 * res.b2 == res.bhat
    assert res.bhat.monic() == btilde(n, "k")


def test_n4_at_zero_two_ways():
    bt0 = btilde(4, "k")(0)
    assert bt0 == Fraction(175, 16)
    assert alpha(4) * bt0 == 302400
    assert (b1(4, "k") * b2(4, "k"))(0) == 302400


@pytest.mark.parametrize("n, kk", [(1, 0), (2, 0), (2, 1), (2, 2), (2, 3)])
def test_full_identity(n, kk):
    assert verify_bernstein_identity(n, kk)


def test_full_identity_guard():
    with pytest.raises(ResourceGuardError):
        verify_bernstein_identity(3, 0)


def test_memory_estimate_n4():
    est = jet_memory_estimate(4)
    assert est["simplex_slots"] == 30045015
    assert est["downset_slots"] < est["simplex_slots"]


def test_report_json():
    js = bhat_poly(2).to_json()
    assert js["bhat_coeffs"] == [6, 16, 14, 4]
    assert sorted(js["btilde_roots"]) == [[-3, 2, 1], [-1, 1, 2]]
    assert js["alpha"] == 4 and js["matches_theorem"] and js["constant_ratio"] == 1
