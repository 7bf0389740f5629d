"""Verification toolkit for the (7,8) FKM isoparametric hypersurfaces."""

__version__ = "0.1.0"
