# GeoSpec - closed-geodesic laboratory for twisted Laplacians
"""
GeoSpec: length-spectrum computations on compact hyperbolic surfaces.

Enumerates closed geodesics of explicit Fuchsian groups, pairs them with
harmonic 1-forms and evaluates the orbit sums behind pressure, stable norm,
trace-formula, Gaussian correlation, twisted zeta and spectral-gap estimates.
"""

__version__ = "1.0.0"
__author__ = "GeoSpec Team"
__description__ = "Closed-geodesic and twisted length-spectrum laboratory"
