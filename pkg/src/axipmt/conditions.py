"""Geometric hypotheses on axisymmetric metrics as executable checks.

Each scan samples a grid of the orbit space and reports the smallest slack
of the defining inequality together with the point where it occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .fields import Grid2D, PreconditionError
from .functionals import GeneratingCurve, area
from .metric import AxiMetric, grad_log_rho_norm, mean_curvature_rho_level
from .quadrature import gauss_legendre

__all__ = [
    "ConditionVerdict",
    "default_grid",
    "standard_grid",
    "radial_monotonicity",
    "area_enlarging",
    "sub_imcf_check",
    "rm_implies_ae_check",
    "MinimalSphere",
    "minimal_coordinate_sphere",
    "penrose_location_check",
    "CONDITIONS",
]

TOL = 1e-8


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    holds: bool
    margin: float
    witness: tuple
    samples: int = 0
    tolerance: float = 0.0

    @property
    def strict(self):
        return self.margin > 0

    def to_dict(self):
        return {"condition": self.condition, "holds": bool(self.holds), "margin": float(self.margin),
                "witness": {"rho": float(self.witness[0]), "z": float(self.witness[1])}}


def default_grid(metric: AxiMetric, n_rho=200, n_z=400):
    """Log-spaced in rho from just above the floor to ``10 R0``, linear in z."""
    R0 = metric.asym.R0
    return Grid2D(2 * metric.rho_floor, 10 * R0, -10 * R0, 10 * R0, n_rho, n_z, "log")


def standard_grid(n_rho=200, n_z=400):
    """The fixed scan ``rho in [0.9, 10], |z| <= 10`` used for the unit-mass families."""
    return Grid2D(0.9, 10.0, -10.0, 10.0, n_rho, n_z)


def _samples(metric: AxiMetric, grid, rho0=None):
    """Flattened sample points of ``grid`` that lie in the metric's domain."""
    if grid is None:
        grid = default_grid(metric)
    if rho0 is not None:
        z = grid.z
        rho = np.full_like(z, float(rho0))
    else:
        rho, z = grid.mesh()
        rho, z = rho.ravel(), z.ravel()
    keep = rho > metric.rho_floor
    if metric.excluded is not None:
        keep &= ~metric.excluded(rho, z)
    if not np.any(keep):
        raise PreconditionError("no grid point lies in the metric domain")
    return rho[keep], z[keep]


def _verdict(name, slack, rho, z, scale=None):
    i = int(np.argmin(slack))
    if scale is None:
        scale = float(np.max(np.abs(slack)))
    tol = TOL * (1 + scale)
    margin = float(slack[i]) + 0.0  # no negative zero in reports
    return ConditionVerdict(name, bool(margin >= -tol), margin, (float(rho[i]), float(z[i])),
                            int(slack.size), tol)


def _drho_excess(metric, rho, z, mode=None):
    uj, aj = metric.jets(rho, z, mode)
    return aj["rho"] - 2 * uj["rho"], uj, aj


def radial_monotonicity(metric: AxiMetric, grid=None, rho0=None, mode=None):
    """Slack ``-d_rho(alpha - 2u)``; restricted to the line ``rho = rho0`` if given."""
    rho, z = _samples(metric, grid, rho0)
    d, _, _ = _drho_excess(metric, rho, z, mode)
    return _verdict("radial-monotone", -d, rho, z)


def area_enlarging(metric: AxiMetric, grid=None, rho0=None):
    """Slack ``alpha - 2u``."""
    rho, z = _samples(metric, grid, rho0)
    return _verdict("area-enlarging", metric.area_excess(rho, z), rho, z)


def sub_imcf_check(metric: AxiMetric, grid=None, rho0=None, mode=None):
    """Slack ``|grad log rho|_g - H`` of the rho level sets."""
    rho, z = _samples(metric, grid, rho0)
    slack = grad_log_rho_norm(metric, rho, z) - mean_curvature_rho_level(metric, rho, z, mode)
    # the two terms are each of size 1/rho; judge the slack against the derivative scale
    d, uj, aj = _drho_excess(metric, rho, z, mode)
    scale = float(np.max(np.abs(np.exp(uj["f"] - aj["f"]) * d)))
    return _verdict("sub-imcf", slack, rho, z, scale)


def _far_integral(metric, rho0, z, R_far, panels_per_decade=8, order=10, n_tail=24):
    """``int_{rho0}^{inf} -d_rho(alpha - 2u) drho`` for each ``(rho0, z)``.

    Gauss-Legendre panels in ``log rho`` up to ``R_far``, then the
    substitution ``rho = R_far / s`` on ``s in (0, 1)`` for the tail.
    """
    rho0 = np.asarray(rho0, dtype=float)
    z = np.asarray(z, dtype=float)
    total = np.zeros_like(rho0)
    near = np.zeros_like(rho0)
    for i, (r0, zz) in enumerate(zip(rho0, z)):
        decades = max(math.log10(R_far / r0), 0.25)
        n_pan = max(2, int(math.ceil(decades * panels_per_decade)))
        edges = np.linspace(math.log(r0), math.log(R_far), n_pan + 1)
        ts, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            t, w = gauss_legendre(a, b, order)
            ts.append(t)
            ws.append(w)
        t = np.concatenate(ts)
        w = np.concatenate(ws)
        rho = np.exp(t)
        d, _, _ = _drho_excess(metric, rho, np.full_like(rho, zz))
        near[i] = -np.sum(w * d * rho)
        s, ws_ = gauss_legendre(0.0, 1.0, n_tail)
        rho_t = R_far / s
        d_t, _, _ = _drho_excess(metric, rho_t, np.full_like(rho_t, zz))
        total[i] = near[i] - np.sum(ws_ * d_t * R_far / s**2)
    return total, near


def rm_implies_ae_check(metric: AxiMetric, grid=None, R_far=1e3, stride=(10, 10)):
    """Rebuild ``alpha - 2u`` at grid points by integrating its rho-derivative outward.

    Radial monotonicity on the grid is required first.  The report holds the
    largest reconstruction error, the AE margin of the reconstructed values
    and, separately, ``max |alpha - 2u|`` at ``rho = R_far``: the error a
    plain cut-off at ``R_far`` would add.
    """
    rm = radial_monotonicity(metric, grid)
    if not rm.holds:
        raise PreconditionError(
            f"radial monotonicity fails on the grid (margin {rm.margin:.3g} at {rm.witness})")
    if grid is None:
        grid = default_grid(metric)
    rho, z = grid.mesh()
    rho = rho[:: stride[1], :: stride[0]].ravel()
    z = z[:: stride[1], :: stride[0]].ravel()
    keep = rho > metric.rho_floor
    if metric.excluded is not None:
        keep &= ~metric.excluded(rho, z)
    rho, z = rho[keep], z[keep]
    if np.any(rho >= R_far):
        raise PreconditionError("R_far must exceed every sampled rho")
    direct = metric.area_excess(rho, z)
    recon, near = _far_integral(metric, rho, z, R_far)
    err = np.abs(recon - direct)
    far = np.abs(metric.area_excess(np.full_like(z, R_far), z))
    i = int(np.argmin(recon))
    return {
        "condition": "rm-implies-ae",
        "rm_margin": rm.margin,
        "reconstruction_error": float(np.max(err)),
        "cutoff_error": float(np.max(np.abs(near - direct))),
        "far_residual": float(np.max(far)),
        "ae_margin": float(recon[i]),
        "holds": bool(recon[i] >= -TOL * (1 + float(np.max(np.abs(recon))))),
        "witness": {"rho": float(rho[i]), "z": float(z[i])},
        "samples": int(rho.size),
        "R_far": float(R_far),
    }


@dataclass(frozen=True)
class MinimalSphere:
    radius: float
    area: float
    interior: bool
    evaluations: int = 0

    def to_dict(self):
        return {"r_star": self.radius, "area": self.area, "interior": self.interior,
                "evaluations": self.evaluations}


def minimal_coordinate_sphere(metric: AxiMetric, r_range=(0.05, 5.0), xatol=1e-7):
    """Minimise the g-area of coordinate spheres ``S_r`` over ``r`` (bounded Brent).

    ``interior`` is False when the minimiser sits at an end of the range,
    which means the area is monotone there and no minimal sphere was found.
    """
    lo, hi = map(float, r_range)
    if not 0 < lo < hi:
        raise ValueError("radius range must satisfy 0 < r_lo < r_hi")

    def f(r):
        return area(metric, GeneratingCurve.semicircle(r))

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    r = float(res.x)
    edge = 10 * xatol + 1e-6 * (hi - lo)
    interior = bool(r - lo > edge and hi - r > edge and f(r) < min(f(lo), f(hi)))
    return MinimalSphere(r, float(res.fun), interior, int(res.nfev))


def penrose_location_check(metric: AxiMetric, surface: GeneratingCurve, mass, allow_open=False,
                           rtol=1e-6):
    """Where a surface may sit given the mass, and the Penrose area bound.

    Reports ``rho_max < 2 sqrt(2) m`` and ``m >= sqrt(Area_g / 16 pi)``.
    """
    if not surface.closed and not allow_open:
        raise PreconditionError("surface must meet the axis at both ends (or pass allow_open)")
    rho_max = surface.rho_max
    A = area(metric, surface)
    bound = 2 * math.sqrt(2) * mass
    penrose = math.sqrt(A / (16 * math.pi))
    return {
        "rho_max": rho_max,
        "location_bound": bound,
        "location_ok": bool(rho_max < bound),
        "area": A,
        "penrose_mass": penrose,
        "penrose_ratio": penrose / mass if mass > 0 else math.inf,
        "penrose_ok": bool(mass >= penrose * (1 - rtol)),
        "no_horizon_case": bool(mass <= 0),
    }


CONDITIONS = {
    "radial-monotone": radial_monotonicity,
    "area-enlarging": area_enlarging,
    "sub-imcf": sub_imcf_check,
}
