"""Independent reference computations built on sympy."""

from fractions import Fraction

import sympy

from bfun.core.multipoly import MultiPoly


def symbols(arity: int):
    return sympy.symbols(f"x0:{arity}")


def to_sympy(p: MultiPoly, xs=None, k=None):
    xs = xs or symbols(p.arity)
    k = k if k is not None else sympy.Symbol("k")
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        c = Fraction(c)
        term = sympy.Rational(c.numerator, c.denominator)
        for x, a in zip(xs, e[: p.arity]):
            term *= x**a
        if len(e) > p.arity:
            term *= k ** e[-1]
        out += term
    return out


def from_sympy(expr, arity: int, xs=None) -> MultiPoly:
    xs = xs or symbols(arity)
    poly = sympy.Poly(sympy.expand(expr), *xs)
    return MultiPoly(arity, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def apply_weyl_sympy(op, p: MultiPoly):
    """Apply a normal-ordered operator over Q via sympy differentiation."""
    xs = symbols(op.arity)
    g = to_sympy(p, xs)
    out = sympy.Integer(0)
    for (a, b), c in op.terms.items():
        h = g
        for x, m in zip(xs, b):
            if m:
                h = sympy.diff(h, x, m)
        c = Fraction(c)
        mono = sympy.Rational(c.numerator, c.denominator)
        for x, m in zip(xs, a):
            mono *= x**m
        out += mono * h
    return from_sympy(out, op.arity, xs)


def laurent_to_sympy(c, ts, k):
    """A LaurentCoeff as a sympy rational function in t and k."""
    from bfun.radial import RootSystemA

    num = to_sympy(c.num, ts, k)
    den = sympy.Integer(1)
    for a, d in enumerate(c.den):
        i, j = RootSystemA(c.n).positive_roots[a]
        den *= (ts[i] - ts[j]) ** d
    return num / den


def apply_laurent_sympy(op, expr, ts, k):
    """Apply a LaurentWeylOp to a sympy expression by direct differentiation."""
    out = sympy.Integer(0)
    for b, c in op.terms.items():
        h = expr
        for t, m in zip(ts, b):
            if m:
                h = sympy.diff(h, t, m)
        out += laurent_to_sympy(c, ts, k) * h
    return out


def sympy_equal(a, b) -> bool:
    return sympy.cancel(sympy.together(a - b)) == 0


SAMPLE_POINTS = [
    (3, -1, sympy.Rational(1, 2), 7),
    (sympy.Rational(-2, 3), 5, 2, -4),
    (11, 4, -3, sympy.Rational(5, 7)),
]
SAMPLE_KS = [sympy.Rational(5, 2), -3, sympy.Rational(-1, 3)]


def agree_at_samples(a, b, ts, k) -> bool:
    """Exact comparison at rational points away from every wall t_i = t_j."""
    for pt, kv in zip(SAMPLE_POINTS, SAMPLE_KS):
        sub = {t: x for t, x in zip(ts, pt)}
        sub[k] = kv
        if sympy.nsimplify(a.subs(sub) - b.subs(sub)) != 0:
            return False
    return True
