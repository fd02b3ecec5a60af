"""Exact and numerical verification of isoparametric hypersurfaces in product space forms."""

__version__ = "0.1.0"
