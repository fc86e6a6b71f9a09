"""Quadrature rules on rectangles, boundaries, curves and singular points.

Regular integrands use composite Simpson.  Integrands with an integrable
point singularity (log or power) are integrated in polar coordinates
centred at the singular point: the region is cut into angular sectors on
which the distance to the boundary is smooth, and the radial direction
uses Gauss-Legendre panels graded geometrically towards the centre.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .regions import Disk, Rectangle

__all__ = [
    "simpson_weights",
    "simpson_nodes",
    "gauss_legendre",
    "integrate_2d",
    "boundary_nodes",
    "integrate_boundary",
    "graded_radial_rule",
    "polar_rule_rectangle",
    "polar_rule_disk",
    "polar_integrate",
]

SIDES = ("all", "inner", "outer")


def _even(n):
    n = int(n)
    if n < 2:
        raise ValueError("Simpson needs at least two intervals")
    return n + (n % 2)


def simpson_nodes(a, b, n):
    """Nodes and weights of composite Simpson with ``n`` (even) intervals."""
    n = _even(n)
    x = np.linspace(a, b, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return x, w * (b - a) / (3.0 * n)


def simpson_weights(n, a=0.0, b=1.0):
    return simpson_nodes(a, b, n)[1]


@lru_cache(maxsize=64)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(a, b, n):
    t, w = _leggauss(int(n))
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), w * half


def _finite(values, what):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError(f"non-finite {what} sample")
    return values


def integrate_2d(integrand, region: Rectangle, resolution=64):
    """Composite Simpson over a rectangle.

    ``resolution`` is the number of intervals per axis, or a pair
    ``(n_rho, n_z)``.  ``integrand`` is any vectorised ``f(rho, z)``.
    """
    if np.isscalar(resolution):
        n_rho = n_z = int(resolution)
    else:
        n_rho, n_z = map(int, resolution)
    r, wr = simpson_nodes(region.rho_lo, region.rho_hi, n_rho)
    z, wz = simpson_nodes(region.z_lo, region.z_hi, n_z)
    R, Z = np.meshgrid(r, z, indexing="ij")
    vals = _finite(integrand(R, Z), "integrand")
    return float(wr @ vals @ wz)


def boundary_nodes(region: Rectangle, sides="all", resolution=64, rule="simpson"):
    """Nodes, weights and outward unit normals along selected rectangle sides.

    ``sides`` is ``"all"``, ``"inner"`` (the side ``rho = rho_lo``) or
    ``"outer"`` (the remaining three sides).  Corners shared by two sides
    appear once per side, which is what a line integral requires.
    """
    if sides not in SIDES:
        raise ValueError(f"side selector must be one of {SIDES}")
    n = int(resolution)

    def rule1d(a, b, length):
        m = max(2, int(round(n * length / max(region.width, region.height))))
        if rule == "simpson":
            return simpson_nodes(a, b, m)
        return gauss_legendre(a, b, m)

    parts = []
    b = region
    if sides in ("all", "inner"):
        z, w = rule1d(b.z_lo, b.z_hi, b.height)
        parts.append((np.full_like(z, b.rho_lo), z, w, -1.0, 0.0))
    if sides in ("all", "outer"):
        z, w = rule1d(b.z_lo, b.z_hi, b.height)
        parts.append((np.full_like(z, b.rho_hi), z, w, 1.0, 0.0))
        r, w = rule1d(b.rho_lo, b.rho_hi, b.width)
        parts.append((r, np.full_like(r, b.z_lo), w, 0.0, -1.0))
        r, w = rule1d(b.rho_lo, b.rho_hi, b.width)
        parts.append((r, np.full_like(r, b.z_hi), w, 0.0, 1.0))
    rho = np.concatenate([p[0] for p in parts])
    z = np.concatenate([p[1] for p in parts])
    w = np.concatenate([p[2] for p in parts])
    nr = np.concatenate([np.full(len(p[0]), p[3]) for p in parts])
    nz = np.concatenate([np.full(len(p[0]), p[4]) for p in parts])
    return rho, z, w, nr, nz


def integrate_boundary(integrand, region: Rectangle, sides="all", resolution=64):
    """Line integral of ``integrand(rho, z, n_rho, n_z)`` over selected sides.

    Two-argument integrands ``f(rho, z)`` are accepted as well.
    """
    rho, z, w, nr, nz = boundary_nodes(region, sides, resolution)
    try:
        vals = integrand(rho, z, nr, nz)
    except TypeError:
        vals = integrand(rho, z)
    return float(w @ _finite(np.broadcast_to(vals, w.shape), "boundary integrand"))


@lru_cache(maxsize=32)
def graded_radial_rule(n_panels=20, order=12, ratio=0.25):
    """Gauss-Legendre panels on ``[0, 1]`` refined geometrically towards 0.

    Panel edges are ``0, ratio**(n_panels-1), ..., ratio, 1``.  Integrands
    like ``r log(r)**k`` or ``r**(2 mu - 1)`` are integrated to near machine
    precision with the default parameters.
    """
    edges = np.concatenate([[0.0], ratio ** np.arange(n_panels - 1, -1, -1)])
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(a, b, order)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def _sector_rule(theta_a, theta_b, dist, normal_angle, n_theta):
    """Angles, weights and boundary radii for a sector cut by one straight side."""
    th, w = gauss_legendre(theta_a, theta_b, n_theta)
    return th, w, dist / np.cos(th - normal_angle)


def polar_rule_rectangle(region: Rectangle, center, n_theta=24, radial=None):
    """Polar rule on a rectangle about a point ``center`` in its closure.

    Returns ``(rho, z, w)`` flattened arrays.  The weights include the
    Jacobian ``r``, so ``sum(w * f(rho, z))`` approximates the integral.
    Each side is seen from ``center`` under an angular sector; that sector
    is split at the foot of the perpendicular so the radius function
    ``d / cos(theta - theta_n)`` is monotone on every piece.
    """
    cr, cz = map(float, center)
    b = region
    if not (b.rho_lo - 1e-14 <= cr <= b.rho_hi + 1e-14 and b.z_lo - 1e-14 <= cz <= b.z_hi + 1e-14):
        raise ValueError("polar centre must lie in the closed rectangle")
    t, tw = radial if radial is not None else graded_radial_rule()
    corners = [(b.rho_hi, b.z_lo), (b.rho_hi, b.z_hi), (b.rho_lo, b.z_hi), (b.rho_lo, b.z_lo)]
    # sides listed counter-clockwise with (distance, outward normal angle)
    sides = [
        (b.rho_hi - cr, 0.0),
        (b.z_hi - cz, 0.5 * np.pi),
        (cr - b.rho_lo, np.pi),
        (cz - b.z_lo, 1.5 * np.pi),
    ]
    ang = [np.arctan2(q[1] - cz, q[0] - cr) for q in corners]
    out_r, out_z, out_w = [], [], []
    for i, (dist, normal) in enumerate(sides):
        if dist <= 1e-14:
            continue
        a0 = ang[i]
        a1 = ang[(i + 1) % 4]
        # unwrap so that normal - pi/2 < a0 < a1 < normal + pi/2
        a0 = normal + np.angle(np.exp(1j * (a0 - normal)))
        a1 = normal + np.angle(np.exp(1j * (a1 - normal)))
        pieces = [(a0, normal), (normal, a1)] if a0 < normal < a1 else [(a0, a1)]
        for lo, hi in pieces:
            if hi - lo <= 1e-15:
                continue
            th, wth, rmax = _sector_rule(lo, hi, dist, normal, n_theta)
            r = np.outer(rmax, t)
            w = np.outer(wth * rmax, tw) * r
            out_r.append((cr + r * np.cos(th)[:, None]).ravel())
            out_z.append((cz + r * np.sin(th)[:, None]).ravel())
            out_w.append(w.ravel())
    return np.concatenate(out_r), np.concatenate(out_z), np.concatenate(out_w)


def polar_rule_disk(disk: Disk, center=None, n_theta=64, radial=None):
    """Polar rule on a disk about an interior point (default the disk centre)."""
    ox, oy = map(float, disk.center)
    cx, cy = (ox, oy) if center is None else map(float, center)
    dx, dy = cx - ox, cy - oy
    if np.hypot(dx, dy) >= disk.radius:
        raise ValueError("polar centre must lie inside the disk")
    t, tw = radial if radial is not None else graded_radial_rule()
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    wth = np.full(n_theta, 2 * np.pi / n_theta)
    proj = dx * np.cos(th) + dy * np.sin(th)
    rmax = -proj + np.sqrt(proj**2 - (dx * dx + dy * dy) + disk.radius**2)
    r = np.outer(rmax, t)
    w = np.outer(wth * rmax, tw) * r
    return ((cx + r * np.cos(th)[:, None]).ravel(), (cy + r * np.sin(th)[:, None]).ravel(), w.ravel())


def polar_integrate(integrand, region, center, n_theta=None, radial=None):
    """Integral of a function with a point singularity at ``center``."""
    if isinstance(region, Disk):
        x, y, w = polar_rule_disk(region, center, n_theta or 64, radial)
    elif isinstance(region, Rectangle):
        x, y, w = polar_rule_rectangle(region, center, n_theta or 24, radial)
    else:
        raise TypeError(f"unsupported region {type(region).__name__}")
    return float(w @ _finite(integrand(x, y), "integrand"))
