"""Exact b-function engine for the cyclic-pair polynomial det[v Mv ... M^{n-1}v]."""

__version__ = "0.1.0"
