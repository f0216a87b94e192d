from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bfun.core.interp import DegreeBoundError, interpolate
from bfun.core.jet import Jet, downset, jet_of_poly, simplex_size
from bfun.core.multipoly import MultiPoly
from bfun.core.unipoly import UniPoly

from conftest import multipolys, small_fracs

BASE = [Fraction(1, 2), Fraction(-1), Fraction(2)]


@given(multipolys(3), multipolys(3))
def test_jet_is_a_ring_homomorphism(a, b):
    order = 3
    ja, jb = jet_of_poly(a, BASE, order), jet_of_poly(b, BASE, order)
    assert ja * jb == jet_of_poly(a * b, BASE, order)
    assert ja + jb == jet_of_poly(a + b, BASE, order)


@given(multipolys(3), multipolys(3))
def test_downset_truncation_is_multiplicative(a, b):
    support = downset([(2, 1, 0), (0, 1, 2)])
    ja = jet_of_poly(a, BASE, 3, support)
    jb = jet_of_poly(b, BASE, 3, support)
    assert ja * jb == jet_of_poly(a * b, BASE, 3, support)


@given(multipolys(3))
def test_jet_reproduces_derivatives(p):
    j = jet_of_poly(p, BASE, 4)
    assert j.value() == p.evaluate(BASE)
    assert j.derivative_at_base((1, 0, 2)) == p.diff(0).diff(2, 2).evaluate(BASE)


def test_product_at_agrees_with_full_product():
    x = MultiPoly.var(2, 0)
    y = MultiPoly.var(2, 1)
    p = x * x * y + 3 * x + 1
    j = jet_of_poly(p, [1, 2], 4)
    full = j * j
    exps = [(2, 1), (1, 0), (0, 0), (3, 1)]
    assert j.product_at(j, exps) == {e: full[e] for e in exps}


def test_downset_and_simplex_size():
    assert downset([(1, 1)]) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    assert simplex_size(20, 10) == 30045015


def test_jet_rejects_param_ring():
    with pytest.raises(ValueError):
        jet_of_poly(MultiPoly.param(1, "Qk"), [0], 2)


@given(st.lists(small_fracs, min_size=1, max_size=6))
def test_interpolation_exact(coeffs):
    p = UniPoly(coeffs, "k")
    d = len(coeffs) - 1
    pts = [(x, p(x)) for x in range(d + 3)]
    assert interpolate(pts, d) == p


def test_interpolation_detects_degree_violation():
    pts = [(x, x**3) for x in range(5)]
    with pytest.raises(DegreeBoundError):
        interpolate(pts, 2)


def test_interpolation_needs_enough_points():
    with pytest.raises(ValueError):
        interpolate([(0, 1)], 2)
