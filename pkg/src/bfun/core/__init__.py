"""Exact scalar, univariate, multivariate and jet arithmetic."""

from bfun.core.unipoly import UniPoly, RationalFunction
from bfun.core.multipoly import MultiPoly
from bfun.core.jet import Jet, jet_of_poly
from bfun.core.interp import interpolate, DegreeBoundError

__all__ = [
    "UniPoly",
    "RationalFunction",
    "MultiPoly",
    "Jet",
    "jet_of_poly",
    "interpolate",
    "DegreeBoundError",
]
