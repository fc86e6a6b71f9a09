"""Axisymmetric 3-metrics in cylindrical gauge.

The metric is

    g = e^{2 alpha - 2u} (d rho^2 + dz^2) + rho^2 e^{-2u} (d phi + B d rho + A dz)^2

with u, alpha, A, B functions of (rho, z).  The Killing field d/dphi has
norm ``rho e^{-u}`` and ``|grad rho| = e^{u - alpha}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .fields import DomainError, ScalarField2D

__all__ = [
    "AsymptoticData",
    "AxiMetric",
    "assemble",
    "orbit_block",
    "brill_scalar_curvature",
    "rho_equation_residual",
    "mean_curvature_rho_level",
    "grad_log_rho_norm",
    "FLOOR_FACTOR",
]

#: Operations needing second derivatives refuse points with rho below
#: ``FLOOR_FACTOR * R0``.
FLOOR_FACTOR = 1e-6


@dataclass(frozen=True)
class AsymptoticData:
    """Falloff constants: ``|d^I f| <= C / r^{1+|I|}`` for ``r >= R0``.

    ``tau`` is set when ``alpha`` additionally satisfies ``|alpha| <= C / r^{1+tau}``.
    """

    C: float
    R0: float
    tau: Optional[float] = None

    def __post_init__(self):
        if not (self.C >= 0 and self.R0 > 0):
            raise ValueError("asymptotic data needs C >= 0 and R0 > 0")
        if self.tau is not None and self.tau < 0:
            raise ValueError("tau must be nonnegative")


@dataclass(frozen=True)
class AxiMetric:
    u: ScalarField2D
    alpha: ScalarField2D
    A: ScalarField2D = field(default_factory=ScalarField2D.constant)
    B: ScalarField2D = field(default_factory=ScalarField2D.constant)
    asym: AsymptoticData = AsymptoticData(0.0, 1.0, 1.0)
    family: str = "custom"
    params: dict = field(default_factory=dict)
    # mask of points outside the metric's domain (horizon rod, punctures)
    excluded: Optional[Callable] = None
    # joint closed-form evaluator returning (u_jet, alpha_jet); optional speed-up
    joint_jet: Optional[Callable] = None
    # radius of a coordinate sphere enclosing the excluded set (0 if none)
    core_radius: float = 0.0

    @property
    def rho_floor(self):
        return FLOOR_FACTOR * self.asym.R0

    @property
    def rotating(self):
        return not (self.A.is_zero and self.B.is_zero)

    def with_params(self, **changes):
        return replace(self, **changes)

    def check_point(self, rho, z, floor=0.0):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(~np.isfinite(rho)) or np.any(~np.isfinite(z)):
            raise DomainError("non-finite coordinates")
        if np.any(rho <= floor):
            if floor > 0:
                raise DomainError(f"rho must exceed the floor {floor:g}")
            raise DomainError("rho must be positive")
        if self.excluded is not None and np.any(self.excluded(rho, z)):
            raise DomainError(f"point outside the domain of the {self.family} metric")
        return rho, z

    # -- values ----------------------------------------------------------------
    def values(self, rho, z):
        """``(u, alpha)`` at the given points (no derivatives)."""
        rho, z = self.check_point(rho, z)
        return self.u(rho, z), self.alpha(rho, z)

    def jets(self, rho, z, mode=None):
        """Closed-form (or FD) jets of u and alpha."""
        if mode != "fd" and self.joint_jet is not None:
            if self.u.closed_form or mode == "closed":
                uj, aj = self.joint_jet(rho, z)
                return uj, aj
        return self.u.jet(rho, z, mode), self.alpha.jet(rho, z, mode)

    def eta_norm(self, rho, z):
        rho, z = self.check_point(rho, z)
        return rho * np.exp(-self.u(rho, z))

    def grad_rho_norm(self, rho, z):
        u, a = self.values(rho, z)
        return np.exp(u - a)

    def orbit_factor(self, rho, z):
        """Conformal factor ``e^{2 alpha - 2u}`` of the orbit metric."""
        u, a = self.values(rho, z)
        return np.exp(2 * a - 2 * u)

    def area_excess(self, rho, z):
        """``alpha - 2u``; nonnegative exactly where the metric is area enlarging."""
        u, a = self.values(rho, z)
        return a - 2 * u

    def finite_difference(self, step=None):
        """A copy whose derivatives all come from finite differences."""
        return replace(self, u=self.u.finite_difference(step), alpha=self.alpha.finite_difference(step),
                       A=self.A.finite_difference(step) if not self.A.is_zero else self.A,
                       B=self.B.finite_difference(step) if not self.B.is_zero else self.B,
                       joint_jet=None)

    def describe(self):
        return {"family": self.family, "params": dict(self.params)}


def assemble(metric: AxiMetric, rho, z):
    """Metric components in the coordinate basis ``(rho, z, phi)``.

    Returns an array of shape ``(..., 3, 3)``.
    """
    rho, z = metric.check_point(rho, z)
    u, a = metric.u(rho, z), metric.alpha(rho, z)
    A = metric.A(rho, z)
    B = metric.B(rho, z)
    P = np.exp(2 * a - 2 * u)
    Q = rho**2 * np.exp(-2 * u)
    shape = np.broadcast(rho, z).shape
    g = np.empty(shape + (3, 3))
    g[..., 0, 0] = P + Q * B**2
    g[..., 1, 1] = P + Q * A**2
    g[..., 2, 2] = Q
    g[..., 0, 1] = g[..., 1, 0] = Q * A * B
    g[..., 0, 2] = g[..., 2, 0] = Q * B
    g[..., 1, 2] = g[..., 2, 1] = Q * A
    return g


def orbit_block(g):
    """The (rho, z) block with the fibre direction projected out."""
    g = np.asarray(g)
    v = g[..., :2, 2]
    return g[..., :2, :2] - v[..., :, None] * v[..., None, :] / g[..., 2, 2][..., None, None]


def _lap3(j, rho):
    return j["rhorho"] + j["zz"] + j["rho"] / rho


def brill_scalar_curvature(metric: AxiMetric, rho, z, mode=None):
    """Scalar curvature from the Brill formula.

    ``R = 4 e^{2(u-alpha)} [L(u - alpha/2) - |grad u|^2/2 + alpha_rho/(2 rho)
    - rho^2 e^{-2 alpha} (B_z - A_rho)^2 / 8]`` with ``L`` the flat Laplacian
    of an axisymmetric function.
    """
    rho, z = metric.check_point(rho, z, metric.rho_floor)
    uj, aj = metric.jets(rho, z, mode)
    bracket = (_lap3(uj, rho) - 0.5 * _lap3(aj, rho)
               - 0.5 * (uj["rho"] ** 2 + uj["z"] ** 2) + aj["rho"] / (2 * rho))
    if metric.rotating:
        twist = metric.B.partial("z", rho, z, mode) - metric.A.partial("rho", rho, z, mode)
        bracket = bracket - rho**2 * np.exp(-2 * aj["f"]) * twist**2 / 8
    return 4 * np.exp(2 * (uj["f"] - aj["f"])) * bracket


def rho_equation_residual(metric: AxiMetric, rho, z, mode=None, fd_step=None):
    """``Lap_g rho - <grad rho, grad |eta|^2>_g / (2 |eta|^2)``.

    The residual vanishes identically, so the returned value measures the
    differentiation error.  With ``mode="fd"`` both terms use central
    differences of the metric functions with step ``fd_step``; otherwise
    the closed-form derivatives of ``u`` and ``alpha`` are used with the
    volume density and inverse metric differentiated by the product rule.
    """
    if metric.rotating:
        raise ValueError("rho equation residual needs A = B = 0")
    rho, z = metric.check_point(rho, z, metric.rho_floor)

    def weight(r):
        # sqrt(det g) * g^{rho rho} and |eta|^2 as functions of rho
        u, a = metric.u(r, z), metric.alpha(r, z)
        return r * np.exp(2 * a - 3 * u) * np.exp(2 * u - 2 * a), r**2 * np.exp(-2 * u)

    u, a = metric.u(rho, z), metric.alpha(rho, z)
    vol = rho * np.exp(2 * a - 3 * u)
    ginv = np.exp(2 * u - 2 * a)
    eta2 = rho**2 * np.exp(-2 * u)
    if mode == "fd":
        h = fd_step if fd_step is not None else 1e-4 * np.maximum(rho, 0.1)
        wp, ep = weight(rho + h)
        wm, em = weight(rho - h)
        dW = (wp - wm) / (2 * h)
        deta2 = (ep - em) / (2 * h)
    else:
        uj, aj = metric.jets(rho, z, mode)
        ur, ar = uj["rho"], aj["rho"]
        dvol = vol * (1 / rho + 2 * ar - 3 * ur)
        dginv = ginv * (2 * ur - 2 * ar)
        dW = dvol * ginv + vol * dginv
        deta2 = eta2 * (2 / rho - 2 * ur)
    lap = dW / vol
    return lap - ginv * deta2 / (2 * eta2)


def mean_curvature_rho_level(metric: AxiMetric, rho, z, mode=None):
    """Mean curvature of the level sets of rho, signed so flat cylinders give ``+1/rho``.

    Uses ``H = q(grad rho, grad log(|eta|/|grad rho|)) / |grad rho|``, which
    for this gauge equals ``e^{u-alpha} (1/rho + d_rho(alpha - 2u))``.
    """
    if metric.rotating:
        raise ValueError("level-set mean curvature needs A = B = 0")
    rho, z = metric.check_point(rho, z, metric.rho_floor)
    uj, aj = metric.jets(rho, z, mode)
    grad_rho = np.exp(uj["f"] - aj["f"])
    if np.any(grad_rho <= 0) or not np.all(np.isfinite(grad_rho)):
        raise FloatingPointError("degenerate |grad rho|")
    # q(grad rho, grad f) = g^{rho rho} f_rho = |grad rho|^2 f_rho
    dlog = 1 / rho + aj["rho"] - 2 * uj["rho"]
    return grad_rho * dlog


def grad_log_rho_norm(metric: AxiMetric, rho, z):
    """``|grad log rho|_g = e^{u - alpha} / rho``."""
    rho, z = metric.check_point(rho, z, metric.rho_floor)
    return metric.grad_rho_norm(rho, z) / rho
