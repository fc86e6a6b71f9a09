"""Numerical tools for axisymmetric, asymptotically flat initial data near zero mass.

Metric families in cylindrical gauge, mass and geometry functionals,
geometric condition checks, planar potential-theory verifiers and sweep
drivers that follow the deviation from flat space as the mass goes to zero.
"""

from .fields import DomainError, Grid2D, PreconditionError, ScalarField2D
from .metric import AsymptoticData, AxiMetric, brill_scalar_curvature, rho_equation_residual
from .families import (Bump, GeometrostaticParams, KerrNewmanParams, flat_metric, geometrostatic_metric,
                       kerr_newman_metric, make_family, perturb)
from .functionals import adm_flux_mass, area, brill_mass, segment_length, sobolev_norm, volume
from .harness import SweepSpec, fit_rate, run_sweep

__all__ = [
    "DomainError", "Grid2D", "PreconditionError", "ScalarField2D",
    "AsymptoticData", "AxiMetric", "brill_scalar_curvature", "rho_equation_residual",
    "Bump", "GeometrostaticParams", "KerrNewmanParams", "flat_metric", "geometrostatic_metric",
    "kerr_newman_metric", "make_family", "perturb",
    "adm_flux_mass", "area", "brill_mass", "segment_length", "sobolev_norm", "volume",
    "SweepSpec", "fit_rate", "run_sweep",
]

__version__ = "0.1.0"
