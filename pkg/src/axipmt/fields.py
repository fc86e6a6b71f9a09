"""Scalar fields on the (rho, z) half-plane and sampling grids.

A :class:`ScalarField2D` wraps a vectorised evaluator ``f(rho, z)`` together
with an optional closed-form "jet" giving the value and the five first and
second partial derivatives.  Without a jet the field falls back to finite
differences.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple

import numpy as np

__all__ = [
    "PARTIALS",
    "PreconditionError",
    "DomainError",
    "HalfPlanePoint",
    "ScalarField2D",
    "Grid2D",
    "default_fd_step",
]

#: Names of the partial derivatives a field exposes.
PARTIALS = ("rho", "z", "rhorho", "zz", "rhoz")

JET_KEYS = ("f",) + PARTIALS


class PreconditionError(ValueError):
    """Raised when an operation's inputs violate its stated preconditions."""


class DomainError(PreconditionError):
    """Raised when a point lies outside the domain of a field or metric."""


class HalfPlanePoint(NamedTuple):
    rho: float
    z: float


def default_fd_step(rho, order=1):
    """Finite-difference step used when the caller does not fix one.

    First derivatives use ``max(1e-5, 1e-4 * rho)``.  Second derivatives
    use a step ten times larger, which keeps the rounding error of the
    three-point second difference near 1e-8 instead of 1e-6.
    """
    rho = np.abs(np.asarray(rho, dtype=float))
    h = np.maximum(1e-5, 1e-4 * rho)
    return h if order == 1 else 10.0 * h


JetFn = Callable[[np.ndarray, np.ndarray], Mapping[str, np.ndarray]]


class ScalarField2D:
    """A scalar function of ``(rho, z)`` with derivative access.

    Parameters
    ----------
    func:
        Vectorised evaluator ``func(rho, z) -> ndarray``.
    jet:
        Optional closed-form evaluator returning a mapping with keys
        ``"f", "rho", "z", "rhorho", "zz", "rhoz"``.
    rho_min:
        Lower edge of the domain in ``rho``.  Finite-difference stencils
        switch to one-sided formulas rather than cross it.
    fd_step:
        Fixed finite-difference step.  ``None`` selects
        :func:`default_fd_step`.
    name:
        Label used in reports.
    """

    def __init__(self, func, jet: JetFn | None = None, *, rho_min=0.0,
                 fd_step=None, name="", zero=False):
        self._func = func
        self._jet = jet
        self.rho_min = float(rho_min)
        self.fd_step = fd_step
        self.name = name
        self.is_zero = bool(zero)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def constant(cls, c=0.0, name=""):
        c = float(c)

        def func(rho, z):
            return np.full(np.broadcast(rho, z).shape, c)

        def jet(rho, z):
            shape = np.broadcast(rho, z).shape
            out = {key: np.zeros(shape) for key in PARTIALS}
            out["f"] = np.full(shape, c)
            return out

        return cls(func, jet, name=name or repr(c), zero=(c == 0.0))

    @classmethod
    def from_jet(cls, jet: JetFn, **kwargs):
        """Field whose values come from the ``"f"`` entry of ``jet``."""
        return cls(lambda rho, z: jet(rho, z)["f"], jet, **kwargs)

    @property
    def closed_form(self):
        return self._jet is not None

    def finite_difference(self, step=None):
        """The same field with its closed-form derivatives switched off."""
        return ScalarField2D(self._func, None, rho_min=self.rho_min,
                             fd_step=step, name=self.name, zero=self.is_zero)

    # -- evaluation ----------------------------------------------------------
    def _check(self, rho, z):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        if np.any(rho < self.rho_min) or not (np.all(np.isfinite(rho)) and np.all(np.isfinite(z))):
            raise DomainError(
                f"field {self.name!r}: point outside domain rho >= {self.rho_min}")
        return rho, z

    def __call__(self, rho, z):
        rho, z = self._check(rho, z)
        return np.asarray(self._func(rho, z), dtype=float)

    def jet(self, rho, z, mode=None):
        """Value and all partials as a dict keyed by :data:`JET_KEYS`.

        ``mode`` is ``"closed"``, ``"fd"`` or ``None`` (closed form when
        available).
        """
        rho, z = self._check(rho, z)
        if mode not in (None, "closed", "fd"):
            raise ValueError(f"unknown derivative mode {mode!r}")
        if mode == "closed" and self._jet is None:
            raise ValueError(f"field {self.name!r} has no closed-form derivatives")
        if self._jet is not None and mode != "fd":
            out = self._jet(rho, z)
            shape = np.broadcast(rho, z).shape
            return {key: np.broadcast_to(np.asarray(out[key], dtype=float), shape)
                    for key in JET_KEYS}
        return self._fd_jet(rho, z)

    def partial(self, which, rho, z, mode=None):
        if which not in PARTIALS:
            raise ValueError(f"unknown partial {which!r}; expected one of {PARTIALS}")
        return self.jet(rho, z, mode)[which]

    def _steps(self, rho):
        if self.fd_step is not None:
            h = np.full(np.shape(rho), float(self.fd_step))
            return h, h
        return default_fd_step(rho, 1), default_fd_step(rho, 2)

    def _fd_jet(self, rho, z):
        rho, z = np.broadcast_arrays(rho, z)
        f = self._func
        h1, h2 = self._steps(rho)
        f0 = f(rho, z)
        out = {"f": np.asarray(f0, dtype=float)}

        out["z"] = (f(rho, z + h1) - f(rho, z - h1)) / (2 * h1)
        out["zz"] = (f(rho, z + h2) - 2 * f0 + f(rho, z - h2)) / h2**2

        # one-sided second-order stencils where the central one leaves the domain
        central1 = rho - h1 >= self.rho_min
        central2 = rho - 2 * h2 >= self.rho_min
        r_c1 = np.where(central1, rho - h1, rho)
        d_central = (f(rho + h1, z) - f(r_c1, z)) / (2 * h1)
        d_forward = (-3 * f0 + 4 * f(rho + h1, z) - f(rho + 2 * h1, z)) / (2 * h1)
        out["rho"] = np.where(central1, d_central, d_forward)

        r_c2 = np.where(central2, rho - h2, rho)
        dd_central = (f(rho + h2, z) - 2 * f0 + f(r_c2, z)) / h2**2
        dd_forward = (2 * f0 - 5 * f(rho + h2, z) + 4 * f(rho + 2 * h2, z)
                      - f(rho + 3 * h2, z)) / h2**2
        out["rhorho"] = np.where(central2, dd_central, dd_forward)

        r_p = rho + h2
        mixed_c = (f(r_p, z + h2) - f(r_p, z - h2) - f(r_c2, z + h2) + f(r_c2, z - h2)) / (4 * h2**2)
        # forward in rho: d/drho of d/dz with the three-point one-sided rule
        dz = [(f(rho + j * h2, z + h2) - f(rho + j * h2, z - h2)) / (2 * h2) for j in range(3)]
        mixed_f = (-3 * dz[0] + 4 * dz[1] - dz[2]) / (2 * h2)
        out["rhoz"] = np.where(central2, mixed_c, mixed_f)
        return out

    # -- arithmetic ------------------------------------------------------------
    def _combine(self, other, a, b, name):
        if not isinstance(other, ScalarField2D):
            other = ScalarField2D.constant(other)
        f1, f2 = self._func, other._func

        def func(rho, z):
            return a * f1(rho, z) + b * f2(rho, z)

        jet = None
        if self._jet is not None and other._jet is not None:
            j1, j2 = self._jet, other._jet

            def jet(rho, z):
                x, y = j1(rho, z), j2(rho, z)
                return {key: a * np.asarray(x[key]) + b * np.asarray(y[key]) for key in JET_KEYS}

        step = self.fd_step if self.fd_step is not None else other.fd_step
        return ScalarField2D(func, jet, rho_min=max(self.rho_min, other.rho_min),
                             fd_step=step, name=name,
                             zero=(self.is_zero or a == 0) and (other.is_zero or b == 0))

    def __add__(self, other):
        return self._combine(other, 1.0, 1.0, f"({self.name}+{getattr(other, 'name', other)})")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0, f"({self.name}-{getattr(other, 'name', other)})")

    def __mul__(self, c):
        if isinstance(c, ScalarField2D):
            return NotImplemented
        return self._combine(0.0, float(c), 0.0, f"{c}*{self.name}")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        mode = "closed" if self.closed_form else "fd"
        return f"ScalarField2D({self.name!r}, {mode})"


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid on the half-plane.  ``rho_spacing`` is ``"linear"`` or ``"log"``."""

    rho_min: float
    rho_max: float
    z_min: float
    z_max: float
    n_rho: int
    n_z: int
    rho_spacing: str = "linear"

    def __post_init__(self):
        if self.n_rho < 2 or self.n_z < 2:
            raise ValueError("grid needs at least two points per axis")
        if not (self.rho_max > self.rho_min and self.z_max > self.z_min):
            raise ValueError("grid bounds must be increasing")
        if self.rho_min < 0:
            raise ValueError("rho_min must be nonnegative")
        if self.rho_spacing not in ("linear", "log"):
            raise ValueError(f"unknown spacing {self.rho_spacing!r}")
        if self.rho_spacing == "log" and self.rho_min <= 0:
            raise ValueError("log spacing needs rho_min > 0")

    @property
    def rho(self):
        if self.rho_spacing == "log":
            return np.geomspace(self.rho_min, self.rho_max, self.n_rho)
        return np.linspace(self.rho_min, self.rho_max, self.n_rho)

    @property
    def z(self):
        return np.linspace(self.z_min, self.z_max, self.n_z)

    def mesh(self):
        """``(RHO, Z)`` arrays of shape ``(n_z, n_rho)``."""
        rho, z = np.meshgrid(self.rho, self.z, indexing="xy")
        return rho, z

    def sample(self, field):
        rho, z = self.mesh()
        return field(rho, z)

    def dump_csv(self, values, path):
        """Write ``rho,z,value`` rows, z outer and rho inner."""
        rho, z = self.mesh()
        values = np.broadcast_to(np.asarray(values, dtype=float), rho.shape)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["rho", "z", "value"])
            for r, zz, v in zip(rho.ravel(), z.ravel(), values.ravel()):
                writer.writerow([repr(float(r)), repr(float(zz)), repr(float(v))])
