"""Exact univariate interpolation with a redundancy check."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from bfun.core.unipoly import UniPoly


class DegreeBoundError(ArithmeticError):
    """A surplus sample disagrees with the interpolant of bounded degree."""


def interpolate(points: Sequence[tuple], degree_bound: int, var: str = "k") -> UniPoly:
    """Polynomial of degree <= degree_bound through the first degree_bound+1 points.

    Any further points are checked against the interpolant.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    need = degree_bound + 1
    if len(pts) < need:
        raise ValueError(f"need {need} points for degree bound {degree_bound}, got {len(pts)}")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("abscissae must be distinct")
    base = pts[:need]
    # Newton divided differences
    coef = [y for _, y in base]
    for j in range(1, need):
        for i in range(need - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (base[i][0] - base[i - j][0])
    poly = UniPoly.const(coef[-1], var)
    for i in range(need - 2, -1, -1):
        poly = poly * UniPoly([-base[i][0], 1], var) + coef[i]
    for x, y in pts[need:]:
        got = poly(x)
        if got != y:
            raise DegreeBoundError(
                f"degree bound {degree_bound} violated: interpolant gives {got} at {x}, sample is {y}"
            )
    return poly
