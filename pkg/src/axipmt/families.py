"""Closed-form metric families: Kerr-Newman slices, geometrostatic data, flat space, bumps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .fields import JET_KEYS, DomainError, ScalarField2D
from .metric import AsymptoticData, AxiMetric

__all__ = [
    "KerrNewmanParams",
    "ProlateSpheroidal",
    "to_prolate",
    "from_prolate",
    "kerr_newman_metric",
    "Puncture",
    "GeometrostaticParams",
    "geometrostatic_metric",
    "flat_metric",
    "Bump",
    "perturb",
    "make_family",
    "FAMILIES",
]

# Kerr-Newman points need x >= 1 + X_MARGIN
X_MARGIN = 1e-8


@dataclass(frozen=True)
class KerrNewmanParams:
    m: float
    a: float = 0.0
    e: float = 0.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("Kerr-Newman mass must be positive")
        if not self.m**2 > self.a**2 + self.e**2:
            raise ValueError("Kerr-Newman needs m^2 > a^2 + e^2")

    @property
    def k(self):
        return math.sqrt(self.m**2 - self.a**2 - self.e**2)

    def scaled(self, m):
        """Same ratios ``a/m`` and ``e/m`` at a new mass."""
        s = m / self.m
        return KerrNewmanParams(m, self.a * s, self.e * s)


class ProlateSpheroidal(NamedTuple):
    x: float
    y: float


def _prolate_arrays(rho, z, k):
    """x, y, x^2 - 1 and the focal distances, computed without cancellation."""
    d1 = np.sqrt(rho**2 + (z + k) ** 2)
    d2 = np.sqrt(rho**2 + (z - k) ** 2)
    s = d1 + d2
    x = s / (2 * k)
    y = 2 * z / s
    # x - 1 = (rho^2 + z^2 - k^2 + d1 d2) / (k (s + 2k)); when |z| < k the
    # numerator loses digits, so rewrite z^2 - k^2 + d1 d2 by rationalising
    inside = z**2 < k**2
    t_in = rho**2 * (rho**2 + 2 * z**2 + 2 * k**2) / (d1 * d2 + np.abs(k**2 - z**2))
    t_out = z**2 - k**2 + d1 * d2
    xm1 = (rho**2 + np.where(inside, t_in, t_out)) / (k * (s + 2 * k))
    X1 = xm1 * (x + 1)
    return x, y, X1, xm1, d1, d2


def to_prolate(params: KerrNewmanParams, rho, z):
    """Prolate spheroidal coordinates of a half-plane point."""
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    k = params.k
    if np.any(rho < 0):
        raise DomainError("rho must be nonnegative")
    if np.any((rho == 0) & (np.abs(z) <= k)):
        raise DomainError("point on the horizon segment rho = 0, |z| <= k")
    x, y, *_ = _prolate_arrays(rho, z, k)
    if x.ndim == 0:
        return ProlateSpheroidal(float(x), float(y))
    return ProlateSpheroidal(x, y)


def from_prolate(params: KerrNewmanParams, x, y):
    """Inverse map: ``rho = k sqrt((x^2-1)(1-y^2))``, ``z = k x y``."""
    k = params.k
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 1) or np.any(np.abs(y) > 1):
        raise DomainError("need x >= 1 and |y| <= 1")
    return k * np.sqrt((x**2 - 1) * (1 - y**2)), k * x * y


@lru_cache(maxsize=1)
def _kn_symbolic():
    """Lambdified u, alpha and their (x, y) derivatives.

    ``X1 = x^2 - 1`` is a separate symbol so the evaluator never forms
    ``1 - y^2`` over ``rho^2``; derivatives in x use ``D_x = d_x + 2x d_X1``.
    """
    import sympy as sp

    x, y, X1, m, a, k = sp.symbols("x y X1 m a k", real=True)
    R = k * x + m
    P = (R**2 + a**2) ** 2 - a**2 * k**2 * (1 - y**2) * X1
    S = R**2 + a**2 * y**2
    u = -sp.log(P) / 2 + sp.log(k**2 * X1) / 2 + sp.log(S) / 2
    alpha = sp.log(S / (k**2 * (X1 + 1 - y**2))) / 2 + u

    def Dx(f):
        return sp.diff(f, x) + 2 * x * sp.diff(f, X1)

    def Dy(f):
        return sp.diff(f, y)

    exprs = []
    for f in (u, alpha):
        fx, fy = Dx(f), Dy(f)
        exprs += [f, fx, fy, Dx(fx), Dy(fy), Dy(fx)]
    args = (x, y, X1, m, a, k)
    jet = sp.lambdify(args, exprs, "numpy", cse=True)
    vals = sp.lambdify(args, [u, alpha], "numpy", cse=True)
    return jet, vals


def _kn_chain(rho, z, k, d1, d2, fvals):
    """Chain rule from (x, y) derivatives to (rho, z) jets."""
    f, fx, fy, fxx, fyy, fxy = fvals
    c = 1.0 / (2 * k)
    xr = rho * (1 / d1 + 1 / d2) * c
    yr = rho * (1 / d1 - 1 / d2) * c
    xz = ((z + k) / d1 + (z - k) / d2) * c
    yz = ((z + k) / d1 - (z - k) / d2) * c
    i1, i2 = d1**-3, d2**-3
    a1, a2 = (z + k) ** 2 * i1, (z - k) ** 2 * i2
    b1, b2 = rho**2 * i1, rho**2 * i2
    c1, c2 = -rho * (z + k) * i1, -rho * (z - k) * i2
    xrr, yrr = (a1 + a2) * c, (a1 - a2) * c
    xzz, yzz = (b1 + b2) * c, (b1 - b2) * c
    xrz, yrz = (c1 + c2) * c, (c1 - c2) * c
    return {
        "f": f,
        "rho": fx * xr + fy * yr,
        "z": fx * xz + fy * yz,
        "rhorho": fxx * xr**2 + 2 * fxy * xr * yr + fyy * yr**2 + fx * xrr + fy * yrr,
        "zz": fxx * xz**2 + 2 * fxy * xz * yz + fyy * yz**2 + fx * xzz + fy * yzz,
        "rhoz": fxx * xr * xz + fxy * (xr * yz + yr * xz) + fyy * yr * yz + fx * xrz + fy * yrz,
    }


def kerr_newman_metric(params: KerrNewmanParams) -> AxiMetric:
    """Time-symmetric-gauge data of the Kerr-Newman slice in cylindrical coordinates."""
    m, a, k = params.m, params.a, params.k
    jet_fn, val_fn = _kn_symbolic()

    def prolate(rho, z):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        x, y, X1, xm1, d1, d2 = _prolate_arrays(rho, z, k)
        if np.any(xm1 < X_MARGIN):
            raise DomainError("Kerr-Newman point too close to the horizon segment")
        return x, y, X1, d1, d2

    def u_val(rho, z):
        x, y, X1, _, _ = prolate(rho, z)
        return np.broadcast_to(val_fn(x, y, X1, m, a, k)[0], np.shape(x)) * 1.0

    def a_val(rho, z):
        x, y, X1, _, _ = prolate(rho, z)
        return np.broadcast_to(val_fn(x, y, X1, m, a, k)[1], np.shape(x)) * 1.0

    def joint(rho, z):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        x, y, X1, d1, d2 = prolate(rho, z)
        v = [np.broadcast_to(q, x.shape) for q in jet_fn(x, y, X1, m, a, k)]
        return _kn_chain(rho, z, k, d1, d2, v[:6]), _kn_chain(rho, z, k, d1, d2, v[6:])

    u = ScalarField2D(u_val, lambda r, z: joint(r, z)[0], name="u")
    alpha = ScalarField2D(a_val, lambda r, z: joint(r, z)[1], name="alpha")

    def excluded(rho, z):
        return _prolate_arrays(np.asarray(rho, float), np.asarray(z, float), k)[3] < X_MARGIN

    # |u| r, |du| r^2 and |alpha| r^2 stay below m resp. m^2/2 outside r = 4m
    return AxiMetric(u, alpha, asym=AsymptoticData(C=4.0 * max(m, m * m), R0=4.0 * m, tau=1.0),
                     family="kerr-newman", params={"m": m, "a": a, "e": params.e},
                     excluded=excluded, joint_jet=joint, core_radius=2.0 * k)


# ---------------------------------------------------------------------------
# geometrostatic data


@dataclass(frozen=True)
class Puncture:
    z: float
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("puncture weights must be positive")


@dataclass(frozen=True)
class GeometrostaticParams:
    punctures: tuple

    def __post_init__(self):
        if len(self.punctures) == 0:
            raise ValueError("geometrostatic data needs at least one puncture")
        object.__setattr__(self, "punctures", tuple(
            p if isinstance(p, Puncture) else Puncture(*p) for p in self.punctures))

    @classmethod
    def single(cls, a, b=None, z=0.0):
        return cls((Puncture(z, a, a if b is None else b),))

    @property
    def total(self):
        """ADM mass of the data, the sum of all weights."""
        return sum(p.a + p.b for p in self.punctures)

    def scaled(self, s):
        return GeometrostaticParams(tuple(Puncture(p.z * s, p.a * s, p.b * s) for p in self.punctures))


def _potential_jet(rho, z, centers, weights):
    """Jet of ``1 + sum w_i / r_i``."""
    out = {key: np.zeros(np.broadcast(rho, z).shape) for key in JET_KEYS}
    out["f"] = out["f"] + 1.0
    for zc, w in zip(centers, weights):
        dz = z - zc
        r2 = rho**2 + dz**2
        r = np.sqrt(r2)
        i3 = w / (r2 * r)
        i5 = 3 * i3 / r2
        out["f"] = out["f"] + w / r
        out["rho"] = out["rho"] - rho * i3
        out["z"] = out["z"] - dz * i3
        out["rhorho"] = out["rhorho"] - i3 + rho**2 * i5
        out["zz"] = out["zz"] - i3 + dz**2 * i5
        out["rhoz"] = out["rhoz"] + rho * dz * i5
    return out


def _log_jet(j):
    f = j["f"]
    return {
        "f": np.log(f),
        "rho": j["rho"] / f,
        "z": j["z"] / f,
        "rhorho": j["rhorho"] / f - (j["rho"] / f) ** 2,
        "zz": j["zz"] / f - (j["z"] / f) ** 2,
        "rhoz": j["rhoz"] / f - j["rho"] * j["z"] / f**2,
    }


def geometrostatic_metric(params: GeometrostaticParams, tau=1.0) -> AxiMetric:
    """Conformally flat data ``(chi psi)^2 delta`` with ``u = -log(chi psi)``."""
    zs = [p.z for p in params.punctures]
    wa = [p.a for p in params.punctures]
    wb = [p.b for p in params.punctures]

    def u_jet(rho, z):
        lc = _log_jet(_potential_jet(rho, z, zs, wa))
        lp = _log_jet(_potential_jet(rho, z, zs, wb))
        return {key: -(lc[key] + lp[key]) for key in JET_KEYS}

    def u_val(rho, z):
        chi = 1.0 + sum(w / np.sqrt(rho**2 + (z - c) ** 2) for c, w in zip(zs, wa))
        psi = 1.0 + sum(w / np.sqrt(rho**2 + (z - c) ** 2) for c, w in zip(zs, wb))
        return -np.log(chi * psi)

    def excluded(rho, z):
        near = np.zeros(np.broadcast(rho, z).shape, dtype=bool)
        for c in zs:
            near |= np.hypot(rho, z - c) < 1e-12
        return near

    total = params.total
    reach = max(abs(c) for c in zs)
    # for r >= R0 >= 2 max|z_i| each r_i >= r/2, giving |u| <= 2M/r and |du| <= 4M/r^2
    R0 = max(2.0 * reach, total, 1e-12)
    C = 4.0 * total
    punct = [[p.z, p.a, p.b] for p in params.punctures]
    return AxiMetric(ScalarField2D(u_val, u_jet, name="u"), ScalarField2D.constant(0.0, "alpha"),
                     asym=AsymptoticData(C=C, R0=R0, tau=tau), family="geometrostatic",
                     params={"punctures": punct}, excluded=excluded, core_radius=2.0 * reach)


def flat_metric() -> AxiMetric:
    zero = ScalarField2D.constant(0.0, "0")
    return AxiMetric(zero, zero, asym=AsymptoticData(0.0, 1.0, 1.0), family="flat")


# ---------------------------------------------------------------------------
# compactly supported perturbations


@dataclass(frozen=True)
class Bump:
    """``amplitude * exp(1 - 1/(1 - s^2))`` for ``s = |x - c| / width < 1``, zero outside.

    Normalised so the peak value equals ``amplitude``.
    """

    rho_c: float
    z_c: float
    width: float
    amplitude: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("bump width must be positive")
        if not all(math.isfinite(v) for v in (self.rho_c, self.z_c, self.width, self.amplitude)):
            raise ValueError("bump support must be bounded")
        if self.rho_c - self.width <= 0:
            raise ValueError("bump support reaches the axis")

    @property
    def outer_radius(self):
        return math.hypot(self.rho_c, self.z_c) + self.width

    def jet(self, rho, z):
        rho = np.asarray(rho, dtype=float)
        z = np.asarray(z, dtype=float)
        w2 = self.width**2
        dr, dz = rho - self.rho_c, z - self.z_c
        q = (dr**2 + dz**2) / w2
        inside = q < 1
        qi = np.where(inside, q, 0.0)
        g1 = -1.0 / (1 - qi) ** 2
        g2 = -2.0 / (1 - qi) ** 3
        f = np.where(inside, self.amplitude * np.exp(1 - 1 / (1 - qi)), 0.0)
        fq = f * g1
        fqq = f * (g1**2 + g2)
        qr, qz = 2 * dr / w2, 2 * dz / w2
        return {
            "f": f,
            "rho": fq * qr,
            "z": fq * qz,
            "rhorho": fqq * qr**2 + fq * 2 / w2,
            "zz": fqq * qz**2 + fq * 2 / w2,
            "rhoz": fqq * qr * qz,
        }

    def field(self):
        return ScalarField2D.from_jet(self.jet, name="bump", zero=(self.amplitude == 0))


def perturb(base: AxiMetric, u_bump: Bump | None = None, alpha_bump: Bump | None = None) -> AxiMetric:
    """``base`` with compactly supported bumps added to ``u`` and/or ``alpha``."""
    u, alpha = base.u, base.alpha
    reach = 0.0
    for bump in (u_bump, alpha_bump):
        if bump is not None and not isinstance(bump, Bump):
            raise TypeError("perturbations must be Bump instances")
    if u_bump is not None and u_bump.amplitude != 0:
        u = u + u_bump.field()
        reach = max(reach, u_bump.outer_radius)
    if alpha_bump is not None and alpha_bump.amplitude != 0:
        alpha = alpha + alpha_bump.field()
        reach = max(reach, alpha_bump.outer_radius)
    if u is base.u and alpha is base.alpha:
        return base
    asym = base.asym
    if reach > asym.R0:
        asym = AsymptoticData(asym.C, reach, asym.tau)
    joint = None
    if base.joint_jet is not None:
        bj = base.joint_jet
        uf = u_bump.jet if (u_bump is not None and u_bump.amplitude != 0) else None
        af = alpha_bump.jet if (alpha_bump is not None and alpha_bump.amplitude != 0) else None

        def joint(rho, z):
            uj, aj = bj(rho, z)
            if uf is not None:
                b = uf(rho, z)
                uj = {key: uj[key] + b[key] for key in JET_KEYS}
            if af is not None:
                b = af(rho, z)
                aj = {key: aj[key] + b[key] for key in JET_KEYS}
            return uj, aj

    params = dict(base.params)
    params["perturbed"] = True
    return base.with_params(u=u, alpha=alpha, asym=asym, joint_jet=joint,
                            family=base.family, params=params)


# ---------------------------------------------------------------------------


def make_family(name: str, **params) -> AxiMetric:
    """Build a metric from a family name and keyword parameters."""
    name = name.replace("_", "-").lower()
    if name == "flat":
        if params:
            raise ValueError(f"flat metric takes no parameters, got {sorted(params)}")
        return flat_metric()
    if name in ("kerr-newman", "kn", "schwarzschild"):
        allowed = {"m", "a", "e"}
        extra = set(params) - allowed
        if extra:
            raise ValueError(f"unknown Kerr-Newman parameters {sorted(extra)}")
        return kerr_newman_metric(KerrNewmanParams(float(params.get("m", 1.0)),
                                                   float(params.get("a", 0.0)),
                                                   float(params.get("e", 0.0))))
    if name == "geometrostatic":
        extra = set(params) - {"punctures", "tau"}
        if extra:
            raise ValueError(f"unknown geometrostatic parameters {sorted(extra)}")
        punct = params.get("punctures")
        if not punct:
            raise ValueError("geometrostatic family needs punctures = [[z, a, b], ...]")
        return geometrostatic_metric(GeometrostaticParams(tuple(tuple(map(float, p)) for p in punct)),
                                     tau=float(params.get("tau", 1.0)))
    raise ValueError(f"unknown family {name!r}")


FAMILIES = ("flat", "kerr-newman", "geometrostatic")
