"""Regions of the (rho, z) half-plane and of the 3-manifold they generate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Rectangle",
    "Cylinder",
    "Disk",
    "Ball",
    "Annulus",
    "orbit_rectangle",
    "orbit_cylinder",
]


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle ``[rho_lo, rho_hi] x [z_lo, z_hi]``."""

    rho_lo: float
    rho_hi: float
    z_lo: float
    z_hi: float
    # reflection line for the image kernels; defaults to the inner side
    rho0: float | None = None

    def __post_init__(self):
        if not (self.rho_hi > self.rho_lo and self.z_hi > self.z_lo):
            raise ValueError(f"degenerate rectangle {self}")
        if self.rho_lo < 0:
            raise ValueError("rectangle must lie in rho >= 0")

    kind = "rectangle"

    @property
    def reflection_line(self):
        return self.rho_lo if self.rho0 is None else self.rho0

    @property
    def width(self):
        return self.rho_hi - self.rho_lo

    @property
    def height(self):
        return self.z_hi - self.z_lo

    @property
    def area(self):
        return self.width * self.height

    @property
    def diameter(self):
        return math.hypot(self.width, self.height)

    @property
    def center(self):
        return 0.5 * (self.rho_lo + self.rho_hi), 0.5 * (self.z_lo + self.z_hi)

    def contains(self, rho, z, margin=0.0):
        rho = np.asarray(rho)
        z = np.asarray(z)
        return ((rho >= self.rho_lo + margin) & (rho <= self.rho_hi - margin)
                & (z >= self.z_lo + margin) & (z <= self.z_hi - margin))

    def distance_to_boundary(self, rho, z):
        return np.minimum.reduce([np.asarray(rho) - self.rho_lo, self.rho_hi - np.asarray(rho),
                                  np.asarray(z) - self.z_lo, self.z_hi - np.asarray(z)])

    def shrink(self, sigma):
        """Points at distance at least ``sigma`` from the boundary."""
        if sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if 2 * sigma >= min(self.width, self.height):
            raise ValueError(f"shrinking by {sigma} empties the rectangle")
        return Rectangle(self.rho_lo + sigma, self.rho_hi - sigma,
                         self.z_lo + sigma, self.z_hi - sigma, self.rho0)

    def split_rho(self, rho_mid):
        return (Rectangle(self.rho_lo, rho_mid, self.z_lo, self.z_hi, self.rho0),
                Rectangle(rho_mid, self.rho_hi, self.z_lo, self.z_hi, self.rho0))

    def to_dict(self):
        return {"kind": "rectangle", "rho": [self.rho_lo, self.rho_hi], "z": [self.z_lo, self.z_hi]}


def orbit_rectangle(rho0, rho1, sigma=0.0, half_height=None):
    """The standard rectangle ``rho0 + sigma <= rho <= rho1, |z| <= rho1/2``.

    ``half_height`` overrides the default height ``rho1/2``.  The image
    kernels reflect across ``rho = rho0``.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if not rho1 > rho0 + sigma:
        raise ValueError("need rho1 > rho0 + sigma")
    h = 0.5 * rho1 if half_height is None else float(half_height)
    return Rectangle(rho0 + sigma, rho1, -h, h, rho0=rho0)


@dataclass(frozen=True)
class Cylinder:
    """Solid of revolution of a rectangle about the z-axis."""

    base: Rectangle
    kind = "cylinder"

    @property
    def volume(self):
        b = self.base
        return math.pi * (b.rho_hi**2 - b.rho_lo**2) * b.height

    def to_dict(self):
        d = self.base.to_dict()
        d["kind"] = "cylinder"
        return d


def orbit_cylinder(rho0, rho1, sigma=0.0, half_height=None):
    return Cylinder(orbit_rectangle(rho0, rho1, sigma, half_height))


@dataclass(frozen=True)
class Disk:
    """Planar disk, used by the potential-theory checks."""

    center: tuple
    radius: float
    kind = "disk"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def area(self):
        return math.pi * self.radius**2

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains(self, x, y):
        return np.hypot(np.asarray(x) - self.center[0], np.asarray(y) - self.center[1]) <= self.radius

    def to_dict(self):
        return {"kind": "disk", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Ball:
    """Coordinate ball ``|x - c| <= radius`` with centre ``c = (0, 0, z_center)`` on the axis."""

    radius: float
    z_center: float = 0.0
    kind = "ball"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def to_dict(self):
        return {"kind": "ball", "radius": self.radius, "z_center": self.z_center}


@dataclass(frozen=True)
class Annulus:
    """Spherical shell ``r_in <= |x| <= r_out`` about the origin."""

    r_in: float
    r_out: float
    kind = "annulus"

    def __post_init__(self):
        if not (0 <= self.r_in < self.r_out):
            raise ValueError("annulus needs 0 <= r_in < r_out")

    def to_dict(self):
        return {"kind": "annulus", "r_in": self.r_in, "r_out": self.r_out}
