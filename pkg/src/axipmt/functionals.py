"""Mass, volume, area, length and norm functionals of axisymmetric metrics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fields import DomainError
from .metric import AxiMetric, assemble, brill_scalar_curvature
from .quadrature import gauss_legendre, integrate_2d, simpson_nodes
from .regions import Annulus, Ball, Cylinder, Rectangle

__all__ = [
    "MassResult",
    "adm_flux_mass",
    "brill_mass",
    "volume",
    "GeneratingCurve",
    "area",
    "euclidean_area",
    "segment_length",
    "euclidean_distance",
    "SOBOLEV_TARGETS",
    "sobolev_norm",
    "HOLDER_TARGETS",
    "holder_norm_estimate",
    "FalloffReport",
    "falloff_check",
    "result_record",
]


@dataclass(frozen=True)
class MassResult:
    value: float
    method: str
    truncation_radius: float
    tail_error: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise FloatingPointError("mass evaluation produced a non-finite value")
        if self.tail_error < 0:
            raise ValueError("tail error must be nonnegative")

    def to_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# ADM mass from the flux integral


def _cartesian_metric(metric: AxiMetric, X, Y, Z):
    """Cartesian components ``g_ij`` at Cartesian points (shape ``(..., 3, 3)``)."""
    rho = np.hypot(X, Y)
    gc = assemble(metric, rho, Z)
    c, s = X / rho, Y / rho
    # rows: d(rho, z, phi) / d(x, y, z)
    J = np.zeros(rho.shape + (3, 3))
    J[..., 0, 0] = c
    J[..., 0, 1] = s
    J[..., 1, 2] = 1.0
    J[..., 2, 0] = -s / rho
    J[..., 2, 1] = c / rho
    return np.einsum("...ai,...ab,...bj->...ij", J, gc, J)


def _flux_at_radius(metric: AxiMetric, R, n_theta=64, h_rel=1e-3):
    """``(1/16 pi) int_{S_R} (g_ij,j - g_jj,i) nu^i dA`` on one coordinate sphere."""
    th, w = gauss_legendre(0.0, math.pi, n_theta)
    pts = np.stack([R * np.sin(th), np.zeros_like(th), R * np.cos(th)])
    h = h_rel * R
    dg = []
    for j in range(3):
        def shifted(d):
            p = pts.copy()
            p[j] = p[j] + d
            return _cartesian_metric(metric, p[0], p[1], p[2])
        dg.append((-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h))
    dg = np.stack(dg)  # dg[k, n, i, j] = d_k g_ij at node n
    nu = np.stack([np.sin(th), np.zeros_like(th), np.cos(th)])
    div = np.einsum("jnij->ni", dg)          # g_ij,j
    trace_grad = np.einsum("injj->ni", dg)   # g_jj,i
    integrand = np.einsum("ni,in->n", div - trace_grad, nu)
    return float(np.sum(integrand * 2 * math.pi * R**2 * np.sin(th) * w) / (16 * math.pi))


def adm_flux_mass(metric: AxiMetric, radii: Sequence[float] = (50.0, 100.0, 200.0),
                  n_theta=64, h_rel=1e-3) -> MassResult:
    """ADM mass from coordinate-sphere fluxes, extrapolated in ``1/R``.

    The flux on each sphere is fitted by a polynomial in ``1/R`` of degree
    ``len(radii) - 1``; its constant term is the returned value.  The tail
    error is the distance between that value and the flux at the largest
    radius.
    """
    radii = np.sort(np.asarray(radii, dtype=float))
    if radii.size == 0:
        raise ValueError("need at least one radius")
    if np.any(radii <= metric.asym.R0):
        raise ValueError(f"flux radii must exceed R0 = {metric.asym.R0:g}")
    fluxes = np.array([_flux_at_radius(metric, R, n_theta, h_rel) for R in radii])
    if radii.size == 1:
        value = fluxes[0]
    else:
        V = np.vander(1.0 / radii, radii.size)
        value = float(np.linalg.solve(V, fluxes)[-1])
        steps = np.diff(fluxes[::-1])
        scale = 1e-9 * max(1.0, float(np.max(np.abs(fluxes))))
        big = steps[np.abs(steps) > scale]
        if big.size > 1 and not (np.all(big > 0) or np.all(big < 0)):
            raise ValueError("flux values are not monotone in R; extrapolation unreliable")
    tail = float(abs(value - fluxes[-1]))
    return MassResult(float(value), "flux", float(radii[-1]), tail,
                      {"radii": radii.tolist(), "fluxes": fluxes.tolist()})


# ---------------------------------------------------------------------------
# Brill mass


def _divergence_field(uj, aj, rho):
    """``V`` with ``rho * bracket = div V`` when A = B = 0."""
    vr = 4 * rho * uj["rho"] - 2 * (rho * aj["rho"] - aj["f"])
    vz = 4 * rho * uj["z"] - 2 * rho * aj["z"]
    return vr, vz


def brill_mass(metric: AxiMetric, truncation=None, n_r=400, n_theta=96,
               curvature_tol=1e-6) -> MassResult:
    """Mass from the bulk integral of ``e^{2(alpha-u)} R + 2|grad u|^2`` (plus twist).

    ``truncation`` is a :class:`Ball` about the origin or an
    :class:`Annulus`.  For a ball the inner radius defaults to the metric's
    ``core_radius`` (or a tiny fraction of the outer radius).  The bulk
    integrand is a divergence, so the flux of that vector field through the
    inner sphere is added; this accounts for the excised horizon or puncture
    region.  The tail beyond the outer radius is estimated as ``C^2 / (2R)``
    from the falloff constant and reported, not added.
    """
    if truncation is None:
        truncation = Ball(200.0)
    if isinstance(truncation, Ball):
        if truncation.z_center != 0:
            raise ValueError("Brill truncation ball must be centred at the origin")
        r_out = truncation.radius
        r_in = metric.core_radius if metric.core_radius > 0 else 1e-8 * r_out
    elif isinstance(truncation, Annulus):
        r_in, r_out = truncation.r_in, truncation.r_out
        if r_in <= 0:
            r_in = metric.core_radius if metric.core_radius > 0 else 1e-8 * r_out
    else:
        raise TypeError("Brill truncation must be a Ball or an Annulus")
    th, wt = gauss_legendre(0.0, math.pi, n_theta)
    # keep the nodes nearest the axis above the curvature floor
    r_in = max(r_in, 2 * metric.rho_floor / math.sin(th[0]))
    if not r_out > r_in:
        raise ValueError("truncation radius must exceed the core radius")

    s, ws = simpson_nodes(math.log(r_in), math.log(r_out), n_r)
    S, TH = np.meshgrid(s, th, indexing="ij")
    r = np.exp(S)
    rho, z = r * np.sin(TH), r * np.cos(TH)
    uj, aj = metric.jets(*metric.check_point(rho, z, metric.rho_floor))
    Rg = brill_scalar_curvature(metric, rho, z)
    scale = max(1.0, float(np.max(np.abs(Rg))))
    if np.min(Rg) < -curvature_tol * scale:
        i = np.unravel_index(np.argmin(Rg), Rg.shape)
        raise ValueError(f"scalar curvature {Rg[i]:.3g} < 0 at rho={rho[i]:.4g}, z={z[i]:.4g}")
    grad_u2 = uj["rho"] ** 2 + uj["z"] ** 2
    integrand = np.exp(2 * (aj["f"] - uj["f"])) * Rg + 2 * grad_u2
    if metric.rotating:
        twist = metric.B.partial("z", rho, z) - metric.A.partial("rho", rho, z)
        integrand = integrand + rho**2 * np.exp(-2 * aj["f"]) * twist**2 / 2
    # rho drho dz = r^3 sin(theta) ds dtheta in log-polar coordinates
    bulk = float(ws @ (integrand * r**3 * np.sin(TH)) @ wt) / 8

    rho_i, z_i = r_in * np.sin(th), r_in * np.cos(th)
    uj_i, aj_i = metric.jets(*metric.check_point(rho_i, z_i, metric.rho_floor))
    vr, vz = _divergence_field(uj_i, aj_i, rho_i)
    inner = float(np.sum((vr * np.sin(th) + vz * np.cos(th)) * r_in * wt)) / 8

    tail = metric.asym.C**2 / (2 * r_out)
    return MassResult(bulk + inner, "brill", float(r_out), float(tail),
                      {"bulk": bulk, "inner_flux": inner, "r_in": float(r_in),
                       "min_curvature": float(np.min(Rg))})


# ---------------------------------------------------------------------------
# volume, area, length


def volume(metric: AxiMetric, region: Cylinder, resolution=64):
    """``2 pi int rho e^{2 alpha - 3u} drho dz`` over the base rectangle."""
    base = region.base if isinstance(region, Cylinder) else region

    def f(rho, z):
        u, a = metric.values(rho, z)
        return rho * np.exp(2 * a - 3 * u)

    return 2 * math.pi * integrate_2d(f, base, resolution)


class GeneratingCurve:
    """Piecewise C^1 curve ``t -> (rho(t), z(t))`` on ``[0, 1]``.

    ``breaks`` lists interior parameter values where the derivative may
    jump; quadrature never straddles them.
    """

    def __init__(self, func: Callable, deriv: Callable, breaks=(), closed=False, name="curve"):
        self.func = func
        self.deriv = deriv
        self.breaks = tuple(sorted(float(b) for b in breaks if 0 < b < 1))
        self.closed = bool(closed)
        self.name = name

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    def nodes(self, n_per_piece=32, panels=4):
        edges = (0.0,) + self.breaks + (1.0,)
        ts, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            for lo, hi in zip(np.linspace(a, b, panels + 1)[:-1], np.linspace(a, b, panels + 1)[1:]):
                t, w = gauss_legendre(lo, hi, n_per_piece)
                ts.append(t)
                ws.append(w)
        return np.concatenate(ts), np.concatenate(ws)

    @property
    def rho_max(self):
        t = np.linspace(0, 1, 4001)
        return float(np.max(self(t)[0]))

    @classmethod
    def segment(cls, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        d = q - p
        if np.any(np.array([p[0], q[0]]) < 0):
            raise ValueError("curve must lie in rho >= 0")
        return cls(lambda t: (p[0] + t * d[0], p[1] + t * d[1]),
                   lambda t: (np.full_like(t, d[0]), np.full_like(t, d[1])), name="segment")

    @classmethod
    def semicircle(cls, radius, z_center=0.0):
        """Generating curve of the coordinate sphere of ``radius`` about ``(0, 0, z_center)``."""
        if not radius > 0:
            raise ValueError("radius must be positive")
        return cls(lambda t: (radius * np.sin(np.pi * t), z_center + radius * np.cos(np.pi * t)),
                   lambda t: (np.pi * radius * np.cos(np.pi * t), -np.pi * radius * np.sin(np.pi * t)),
                   closed=True, name=f"sphere(r={radius:g})")

    @classmethod
    def polyline(cls, points, closed=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("polyline needs an (n, 2) array with n >= 2")
        if np.any(pts[:, 0] < 0):
            raise ValueError("curve must lie in rho >= 0")
        n = len(pts) - 1
        knots = np.linspace(0, 1, n + 1)

        def piece(t):
            i = np.clip((t * n).astype(int), 0, n - 1)
            return i, t * n - i

        def func(t):
            i, s = piece(t)
            p = pts[i] + s[..., None] * (pts[i + 1] - pts[i])
            return p[..., 0], p[..., 1]

        def deriv(t):
            i, _ = piece(t)
            d = (pts[i + 1] - pts[i]) * n
            return d[..., 0], d[..., 1]

        if closed is None:
            closed = bool(pts[0, 0] == 0 and pts[-1, 0] == 0)
        return cls(func, deriv, breaks=knots[1:-1], closed=closed, name="polyline")


def _curve_integral(curve: GeneratingCurve, weight, n_per_piece=32, panels=4):
    t, w = curve.nodes(n_per_piece, panels)
    rho, z = curve(t)
    dr, dz = curve.deriv(t)
    speed = np.hypot(dr, dz)
    if not np.all(np.isfinite(speed)):
        raise FloatingPointError("non-finite curve speed")
    return 2 * math.pi * float(np.sum(w * rho * speed * weight(rho, z)))


def area(metric: AxiMetric, curve: GeneratingCurve, n_per_piece=32, panels=4):
    """Area of the surface of revolution: ``2 pi int rho e^{alpha - 2u} |s'| dt``."""
    return _curve_integral(curve, lambda r, z: np.exp(metric.area_excess(r, z)), n_per_piece, panels)


def euclidean_area(curve: GeneratingCurve, n_per_piece=32, panels=4):
    return _curve_integral(curve, lambda r, z: np.ones_like(r), n_per_piece, panels)


def _to_cartesian(p):
    rho, z, phi = map(float, p)
    return np.array([rho * math.cos(phi), rho * math.sin(phi), z])


def euclidean_distance(p, q):
    return float(np.linalg.norm(_to_cartesian(q) - _to_cartesian(p)))


def segment_length(metric: AxiMetric, p, q, n=32, panels=4):
    """g-length of the straight Euclidean segment between ``(rho, z, phi)`` points."""
    if metric.rotating:
        raise ValueError("segment length needs A = B = 0")
    P, Q = _to_cartesian(p), _to_cartesian(q)
    d = Q - P
    t, w = GeneratingCurve(lambda t: t, lambda t: t).nodes(n, panels)
    X = P[:, None] + d[:, None] * t
    rho = np.hypot(X[0], X[1])
    if np.any(rho <= 0):
        raise DomainError("segment crosses the axis")
    z = X[2]
    drho = (X[0] * d[0] + X[1] * d[1]) / rho
    dphi = (X[0] * d[1] - X[1] * d[0]) / rho**2
    u, a = metric.values(rho, z)
    integrand = np.sqrt(np.exp(2 * (a - u)) * (drho**2 + d[2] ** 2) + rho**2 * np.exp(-2 * u) * dphi**2)
    return float(np.sum(w * integrand))


# ---------------------------------------------------------------------------
# Sobolev and Hoelder norms

SOBOLEV_TARGETS = ("g-delta", "q-delta", "u", "alpha-2u", "exp-u", "exp-alpha-2u")


def _target_components(metric, target, rho, z, frame="orthonormal"):
    """List of ``(f, f_rho, f_z)`` component triples of a deviation target."""
    uj, aj = metric.jets(rho, z)
    u, ur, uz = uj["f"], uj["rho"], uj["z"]
    a, ar, az = aj["f"], aj["rho"], aj["z"]
    if target == "u":
        return [(u, ur, uz)]
    if target == "alpha-2u":
        return [(a - 2 * u, ar - 2 * ur, az - 2 * uz)]
    if target in ("exp-u", "exp-alpha-2u"):
        f, fr, fz = (u, ur, uz) if target == "exp-u" else (a - 2 * u, ar - 2 * ur, az - 2 * uz)
        e = np.exp(np.abs(f))
        sg = np.sign(f)
        return [(e - 1, sg * e * fr, sg * e * fz)]
    P = np.exp(2 * a - 2 * u)
    p_comp = (P - 1, P * (2 * ar - 2 * ur), P * (2 * az - 2 * uz))
    if target == "q-delta":
        return [p_comp, p_comp]
    if target == "g-delta":
        if metric.rotating:
            raise ValueError("g-delta target needs A = B = 0")
        Q = np.exp(-2 * u)
        if frame == "orthonormal":
            q_comp = (Q - 1, -2 * ur * Q, -2 * uz * Q)
        elif frame == "coordinate":
            q_comp = (rho**2 * (Q - 1), 2 * rho * (Q - 1) - 2 * rho**2 * ur * Q, -2 * rho**2 * uz * Q)
        else:
            raise ValueError(f"unknown frame {frame!r}")
        return [p_comp, p_comp, q_comp]
    raise ValueError(f"unknown target {target!r}; expected one of {SOBOLEV_TARGETS}")


def sobolev_norm(metric: AxiMetric, region, p=1.0, target="g-delta", frame="orthonormal",
                 resolution=64):
    """``W^{1,p}`` norm of a deviation from flat space.

    ``g-delta`` is a three-dimensional target integrated over a
    :class:`Cylinder` with ``rho drho dz dphi``; the other targets live on a
    :class:`Rectangle` of the orbit space with ``drho dz``.
    """
    if not (1 <= p < 2):
        raise ValueError("Sobolev exponent must satisfy 1 <= p < 2")
    three_d = target == "g-delta"
    if three_d:
        if not isinstance(region, Cylinder):
            raise ValueError("g-delta norms are taken over a cylinder")
        base = region.base
    else:
        base = region.base if isinstance(region, Cylinder) else region
        if not isinstance(base, Rectangle):
            raise ValueError("orbit-space norms are taken over a rectangle")

    def integrand(rho, z):
        rho, z = metric.check_point(rho, z, metric.rho_floor)
        total = 0.0
        for f, fr, fz in _target_components(metric, target, rho, z, frame):
            total = total + np.abs(f) ** p + np.abs(fr) ** p + np.abs(fz) ** p
        return total * (rho if three_d else 1.0)

    value = integrate_2d(integrand, base, resolution)
    if three_d:
        value *= 2 * math.pi
    return float(max(value, 0.0) ** (1.0 / p))


HOLDER_TARGETS = ("u", "alpha-2u", "g-delta")


def _holder_values(metric, target, rho, z):
    u, a = metric.values(rho, z)
    if target == "u":
        return [u]
    if target == "alpha-2u":
        return [a - 2 * u]
    if target == "g-delta":
        return [np.exp(2 * a - 2 * u) - 1, np.exp(-2 * u) - 1]
    raise ValueError(f"unknown target {target!r}; expected one of {HOLDER_TARGETS}")


def _holder_samples(annulus: Annulus, level, n_r=9, n_theta=16):
    """Points of the meridian cross-section ``{phi = 0} U {phi = pi}`` of the shell.

    Levels are nested: the radial grid doubles and the angular grid
    triples, with angles offset by half a step so no sample sits on the axis.
    """
    nr = (n_r - 1) * 2**level + 1
    nt = n_theta * 3**level
    r = np.linspace(annulus.r_in, annulus.r_out, nr)
    th = (np.arange(nt) + 0.5) * 2 * math.pi / nt
    R, TH = np.meshgrid(r, th, indexing="ij")
    return (R * np.sin(TH)).ravel(), (R * np.cos(TH)).ravel()


def holder_norm_estimate(metric: AxiMetric, annulus: Annulus, beta=0.5, target="u", levels=2,
                         n_r=9, n_theta=16):
    """Sampled lower bound for ``sup|f| + sup |f(x)-f(y)|/|x-y|^beta`` on a shell.

    Samples sit in a meridian cross-section; points with ``x < 0`` are the
    ``phi = pi`` half.  For several components the largest norm is returned.
    """
    if not (0 < beta < 1):
        raise ValueError("Hoelder exponent must lie in (0, 1)")
    if annulus.r_in <= 0:
        raise ValueError("Hoelder annulus must avoid the origin")
    best = 0.0
    for level in range(levels):
        x, z = _holder_samples(annulus, level, n_r, n_theta)
        comps = _holder_values(metric, target, np.abs(x), z)
        for f in comps:
            sup = float(np.max(np.abs(f)))
            semi = 0.0
            chunk = 2048
            for i0 in range(0, x.size, chunk):
                xi, zi, fi = x[i0:i0 + chunk, None], z[i0:i0 + chunk, None], f[i0:i0 + chunk, None]
                d = np.hypot(xi - x[None, :], zi - z[None, :])
                np.fill_diagonal(d[:, i0:i0 + chunk], np.inf)
                d = np.where(d > 0, d, np.inf)
                semi = max(semi, float(np.max(np.abs(fi - f[None, :]) / d**beta)))
            best = max(best, sup + semi)
    return best


# ---------------------------------------------------------------------------
# falloff


@dataclass(frozen=True)
class FalloffReport:
    C_estimate: float
    passed: bool
    C_declared: float
    strong_estimate: float | None = None
    strong_passed: bool | None = None

    def to_dict(self):
        return asdict(self)


def falloff_check(metric: AxiMetric, radii=None, n_theta=64, strong=False):
    """Largest ``|d^I f| r^{1+|I|}`` over sampled spheres, ``|I| <= 1``, f in (u, alpha, A, B)."""
    R0 = metric.asym.R0
    radii = np.asarray(radii if radii is not None else R0 * np.array([1.5, 3.0, 6.0, 12.0, 24.0]), dtype=float)
    if np.any(radii <= R0):
        raise ValueError(f"falloff samples must lie beyond R0 = {R0:g}")
    th, _ = gauss_legendre(0.0, math.pi, n_theta)
    R, TH = np.meshgrid(radii, th, indexing="ij")
    rho, z = R * np.sin(TH), R * np.cos(TH)
    rho, z = metric.check_point(rho, z)
    uj, aj = metric.jets(rho, z)
    est = 0.0
    jets = [uj, aj]
    for F in (metric.A, metric.B):
        if not F.is_zero:
            jets.append(F.jet(rho, z))
    for j in jets:
        est = max(est, float(np.max(np.abs(j["f"]) * R)),
                  float(np.max(np.abs(j["rho"]) * R**2)), float(np.max(np.abs(j["z"]) * R**2)))
    C = metric.asym.C
    tol = 1e-9 * max(1.0, C)
    report = {"C_estimate": est, "passed": bool(est <= C + tol), "C_declared": C}
    if strong:
        tau = metric.asym.tau
        if tau is None:
            report.update(strong_estimate=math.inf, strong_passed=False)
        else:
            s = float(np.max(np.abs(aj["f"]) * R ** (1 + tau)))
            report.update(strong_estimate=s, strong_passed=bool(s <= C + tol))
    return FalloffReport(**report)


def result_record(functional, metric: AxiMetric, region, value, error_estimate=0.0, resolution=None):
    """JSON-ready record of a functional evaluation."""
    reg = region.to_dict() if hasattr(region, "to_dict") else region
    return {"functional": functional, "family": metric.family, "params": dict(metric.params),
            "region": reg, "value": float(value), "error_estimate": float(error_estimate),
            "resolution": resolution}
