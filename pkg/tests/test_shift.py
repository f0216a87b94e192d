from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bfun.core.multipoly import MultiPoly
from bfun.core.unipoly import UniPoly
from bfun.radial import LaurentWeylOp, RING, k_shift, rational_operator
from bfun.shift import (
    RootExpansion,
    ShiftAnsatz,
    av_coefficient,
    constant_term,
    ct_formula,
    formal_defect,
    module_closure,
    pn_determines,
    rational_operator_form,
    recursion_indices,
    recursion_residual,
    recursion_residuals,
    root_factors,
    shift_defect,
    solve_shift_generator,
    summary_json,
    verify_factorization,
)

k = UniPoly.x("k")


@pytest.fixture(scope="module")
def gen2():
    return solve_shift_generator(2)


@pytest.fixture(scope="module")
def gen3():
    return solve_shift_generator(3)


@pytest.mark.parametrize("r, value", [((0, 0), 1), ((1, 0), -1), ((1, 1), 2), ((2, 1), -3), ((2, 2), 6)])
def test_av_coefficient(r, value):
    assert av_coefficient(r) == value


def test_rational_form_is_the_operator():
    for n in (2, 3):
        assert rational_operator_form(n).to_operator() == rational_operator(n)
        assert rational_operator_form(n, k_shift(1)).to_operator() == rational_operator(n, k_shift(1))


def test_defect_examples():
    n = 2
    L = rational_operator(n)
    assert shift_defect(L, 0).is_zero()
    assert shift_defect(LaurentWeylOp.identity(n), 0).is_zero()
    assert not shift_defect(LaurentWeylOp.d(n, 0), -1).is_zero()
    assert not shift_defect(LaurentWeylOp.identity(n), -1).is_zero()


def _recursion_map(form, r):
    return {M: v for M, v in recursion_residuals(form, r).items() if not v.is_zero()}


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("grade", [0, 1])
def test_recursion_matches_formal_composition(n, grade):
    # every basis element: the closed-form recursion against formal composition
    for b in ShiftAnsatz(n, -1, grade).basis():
        fd = formal_defect(b, -1)
        rec = _recursion_map(b, -1)
        assert set(rec) <= set(fd)
        for M, v in rec.items():
            assert v == fd[M]
        for M, v in fd.items():
            assert recursion_residual(b, M, -1) == v


def test_recursion_of_rational_operator_at_shift_zero():
    form = rational_operator_form(2)
    assert all(v.is_zero() for v in recursion_residuals(form, 0).values())
    assert not formal_defect(form, 0)


def test_ansatz_indices_bounded_by_top():
    ans = ShiftAnsatz(3, -1, 1)
    assert all(all(x <= 1 for x in j) and sum(j) >= 1 for j in ans.indices())
    for b in ans.basis():
        for s in ((1, 0, 2), (2, 1, 0)):
            assert b.permute(s).parts == b.parts


def test_generator_n2(gen2):
    assert gen2.N == (1,)
    assert gen2.nullspace_dim == 1
    t = [MultiPoly.var(2, i, RING) for i in range(2)]
    assert gen2.pN == t[0] - t[1]
    assert shift_defect(gen2.operator, -1).is_zero()
    assert all(v.is_zero() for v in recursion_residuals(gen2.generator).values())
    assert gen2.order() == 1


def test_generator_n2_ct(gen2):
    ct = constant_term(gen2.operator)
    assert ct == (k * 2 - 1).scale(2)
    assert ct.shift(2).monic() == k + Fraction(3, 2)


def test_perturbed_generator_detected(gen2):
    parts = dict(gen2.generator.parts)
    j = next(iter(parts))
    parts[j] = parts[j] + MultiPoly.const(2, 1, RING)
    bad = RootExpansion(2, parts)
    assert not shift_defect(bad.to_operator(), -1).is_zero()
    assert any(not v.is_zero() for v in recursion_residuals(bad).values())


def test_generator_n3(gen3):
    assert gen3.N == (1, 1, 1)
    assert gen3.nullspace_dim == 1
    names, scalar = root_factors(3, gen3.pN)
    assert names == ["t1-t2", "t1-t3", "t2-t3"]
    assert scalar == UniPoly.const(1, "k")
    assert shift_defect(gen3.operator, -1).is_zero()
    # lowest grade reached after the empty higher strata
    assert gen3.scanned == {3: 0, 2: 0, 1: 0, 0: 1}
    assert gen3.order() == 3


def test_n3_no_formal_lift(gen3):
    # the recursion treats every root as an independent symbol; with three
    # linearly dependent roots the operator has no representative satisfying it
    assert gen3.formal_dim == 0
    res = recursion_residuals(gen3.generator)
    assert sum(1 for v in res.values() if not v.is_zero()) == 22
    assert len(res) == 40


@pytest.mark.parametrize("n", [2, 3])
def test_pn_determines_operator(n):
    assert pn_determines(n)


@pytest.mark.parametrize("fixture", ["gen2", "gen3"])
def test_module_closure(fixture, request):
    assert module_closure(request.getfixturevalue(fixture))


@pytest.mark.parametrize(
    "n, expected",
    [(1, UniPoly.const(1, "k")), (2, k * 4 + 6), (3, (k * 2 + 3) * (k * 3 + 4) * (k * 3 + 5) * 6)],
)
def test_ct_formula(n, expected):
    assert ct_formula(n) == expected


def test_constant_term_basic():
    assert constant_term(rational_operator(3)).is_zero()
    five = LaurentWeylOp.identity(2).scale(5)
    assert constant_term(five) == UniPoly.const(5, "k")


@pytest.mark.parametrize("n, const", [(1, 1), (2, 4), (3, 108)])
def test_factorization(n, const):
    rep = verify_factorization(n)
    assert rep.matches_ct_formula
    assert rep.quotient_constant == const == rep.expected_constant


def test_summary_json(gen2):
    js = summary_json(gen2)
    assert js == {
        "n": 2,
        "r": -1,
        "nullspace_dim": 1,
        "N": [1],
        "pN_factors": ["t1-t2"],
        "CT_monic_coeffs": ["3/2", 1],
        "matches_ct_formula": True,
    }


def test_only_r_minus_one():
    with pytest.raises(ValueError):
        solve_shift_generator(2, r=-2)


@given(st.permutations([0, 1, 2]))
def test_form_permutation_matches_operator(sigma):
    form = rational_operator_form(3)
    assert form.permute(sigma).to_operator() == form.to_operator().permute(sigma)
