"""Numerical verification of the structure of isoparametric hypersurfaces in spheres
through their Lagrangian lifts into the complex quadric."""

__version__ = "0.1.0"
