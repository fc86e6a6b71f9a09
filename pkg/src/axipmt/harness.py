"""Mass-to-zero sweeps over metric families.

A sweep evaluates every deviation functional on each member of a parameter
schedule and fits log-log rates against the computed ADM mass.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .conditions import area_enlarging, radial_monotonicity, standard_grid
from .fields import Grid2D, PreconditionError
from .families import flat_metric, make_family
from .functionals import (GeneratingCurve, adm_flux_mass, area, brill_mass, euclidean_area,
                          falloff_check, holder_norm_estimate, segment_length,
                          sobolev_norm, volume)
from .regions import Annulus, Cylinder, orbit_rectangle

__all__ = [
    "COLUMNS",
    "SweepSpec",
    "SweepReport",
    "run_sweep",
    "fit_rate",
    "kerr_newman_schedule",
    "geometrostatic_schedule",
    "flat_schedule",
    "default_threads",
]

COLUMNS = ("mass", "w1p_g", "w1p_q", "vol_dev", "area_dev", "len_dev", "rm_margin", "ae_margin",
           "holder_beta", "flux_mass", "brill_mass")

# columns expected to shrink with the mass
DEVIATION_COLUMNS = ("w1p_g", "w1p_q", "vol_dev", "area_dev", "len_dev", "holder_beta")


_FLAT = flat_metric()


def default_threads():
    env = os.environ.get("AXIPMT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"AXIPMT_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ValueError("AXIPMT_THREADS must be positive")
        return n
    return 1


@dataclass
class SweepSpec:
    """A family, a parameter schedule ordered by decreasing mass, and what to measure.

    ``region`` is ``(rho0, rho1, sigma)`` for the orbit rectangle
    ``rho0 + sigma <= rho <= rho1, |z| <= rho1 / 2``.  ``curve`` is the
    generating curve of the surface whose area is compared, ``points`` a
    pair of ``(rho, z, phi)`` endpoints.
    """

    family: str
    schedule: list
    condition: str = "radial-monotone"
    region: tuple = (1.0, 2.0, 0.1)
    p: float = 1.0
    holder_shell: tuple = (2.0, 4.0)
    beta: float = 0.5
    curve: tuple = ((2.0, 0.0), (2.0, 1.0))
    points: tuple = ((1.5, -0.5, 0.0), (3.0, 0.5, math.pi / 2))
    resolution: int = 64
    grid: Grid2D | None = None
    mass_rtol: float | None = None
    brill: bool = True
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if not self.schedule:
            raise ValueError("empty schedule")
        if self.condition not in ("radial-monotone", "area-enlarging", "none"):
            raise ValueError(f"unknown sweep condition {self.condition!r}")
        rho0, rho1, sigma = self.region
        if not sigma > 0:
            raise ValueError("sweep regions must stay a positive distance sigma from the axis side")
        if not rho0 > 0:
            raise ValueError("sweep regions must avoid the axis")

    @property
    def rectangle(self):
        rho0, rho1, sigma = self.region
        return orbit_rectangle(rho0, rho1, sigma)

    @property
    def surface(self):
        return GeneratingCurve.polyline([tuple(map(float, q)) for q in self.curve], closed=False)

    def to_dict(self):
        return {"family": self.family, "schedule": [dict(s) for s in self.schedule],
                "condition": self.condition, "region": list(self.region), "p": self.p,
                "holder_shell": list(self.holder_shell), "beta": self.beta,
                "curve": [list(c) for c in self.curve], "points": [list(c) for c in self.points],
                "resolution": self.resolution, "seed": self.seed}


@dataclass
class SweepReport:
    spec: SweepSpec
    rows: list
    slopes: dict = field(default_factory=dict)
    monotone: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([row[name] for row in self.rows], dtype=float)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(COLUMNS)
            for row in self.rows:
                writer.writerow([repr(float(row[c])) for c in COLUMNS])

    def summary(self):
        return {"family": self.spec.family, "name": self.spec.name, "rows": len(self.rows),
                "slopes": {k: v for k, v in sorted(self.slopes.items())},
                "monotone_decreasing": {k: v for k, v in sorted(self.monotone.items())},
                "spec": self.spec.to_dict()}

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(_jsonable(self.summary()), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _row(spec: SweepSpec, index, params):
    metric = make_family(spec.family, **params)
    label = f"member {index} ({spec.family} {params})"
    fo = falloff_check(metric)
    if not fo.passed:
        raise PreconditionError(f"{label}: falloff estimate {fo.C_estimate:.4g} exceeds C = {fo.C_declared:.4g}")
    grid = spec.grid or standard_grid()
    rm = radial_monotonicity(metric, grid)
    ae = area_enlarging(metric, grid)
    declared = {"radial-monotone": rm, "area-enlarging": ae}.get(spec.condition)
    if declared is not None and not declared.holds:
        raise PreconditionError(f"{label}: {spec.condition} fails, margin {declared.margin:.4g} "
                                f"at {declared.witness}")

    flux = adm_flux_mass(metric).value
    brill = brill_mass(metric).value if spec.brill else math.nan

    rect = spec.rectangle
    cyl = Cylinder(rect)
    w1p_g = sobolev_norm(metric, cyl, spec.p, "g-delta", resolution=spec.resolution)
    w1p_q = sobolev_norm(metric, rect, spec.p, "q-delta", resolution=spec.resolution)
    # baselines use the same quadrature, so the flat metric gives exact zeros
    vol_dev = abs(volume(metric, cyl, spec.resolution) - volume(_FLAT, cyl, spec.resolution))
    surf = spec.surface
    area_dev = abs(area(metric, surf) - euclidean_area(surf))
    P, Q = spec.points
    len_dev = abs(segment_length(metric, P, Q) - segment_length(_FLAT, P, Q))
    holder = holder_norm_estimate(metric, Annulus(*spec.holder_shell), spec.beta, "g-delta")
    return {"mass": flux, "w1p_g": w1p_g, "w1p_q": w1p_q, "vol_dev": vol_dev, "area_dev": area_dev,
            "len_dev": len_dev, "rm_margin": rm.margin + 0.0, "ae_margin": ae.margin + 0.0, "holder_beta": holder,
            "flux_mass": flux, "brill_mass": brill, "params": dict(params)}


def fit_rate(report, column):
    """Least-squares slope of ``log(value)`` against ``log(mass)``."""
    if isinstance(report, SweepReport):
        mass, vals = report.column("mass"), report.column(column)
    else:
        mass, vals = (np.asarray(v, dtype=float) for v in report)
    if mass.size < 3:
        raise ValueError("rate fits need at least three rows")
    if np.any(vals <= 0) or np.any(mass <= 0):
        raise ValueError(f"column {column!r} has nonpositive entries")
    slope, _ = np.polyfit(np.log(mass), np.log(vals), 1)
    return float(slope)


def run_sweep(spec: SweepSpec, threads=None):
    """Evaluate every schedule member; rows keep schedule order whatever the thread count."""
    threads = threads or default_threads()
    members = list(enumerate(spec.schedule))
    if threads > 1 and len(members) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda m: _row(spec, *m), members))
    else:
        rows = [_row(spec, *m) for m in members]

    mass = np.array([r["mass"] for r in rows])
    if np.any(np.diff(mass) >= 0):
        raise PreconditionError(f"computed masses are not strictly decreasing: {mass.tolist()}")
    if spec.mass_rtol is not None:
        for r in rows:
            nominal = _nominal_mass(spec.family, r["params"])
            if abs(r["mass"] - nominal) > spec.mass_rtol * nominal:
                raise PreconditionError(f"flux mass {r['mass']:.6g} differs from the parameter {nominal:.6g}")
    for r in rows:
        bad = [c for c in COLUMNS if c != "brill_mass" and not math.isfinite(r[c])]
        if bad:
            raise FloatingPointError(f"non-finite entries {bad} in sweep row {r['params']}")

    report = SweepReport(spec, rows)
    for c in DEVIATION_COLUMNS:
        col = report.column(c)
        report.monotone[c] = bool(len(col) > 1 and np.all(np.diff(col) < 0))
        if len(rows) >= 3 and np.all(col > 0):
            report.slopes[c] = fit_rate(report, c)
    return report


def _nominal_mass(family, params):
    if family == "kerr-newman":
        return float(params.get("m", 1.0))
    if family == "geometrostatic":
        return float(sum(p[1] + p[2] for p in params["punctures"]))
    return 0.0


# ---------------------------------------------------------------------------
# standard schedules


def kerr_newman_schedule(masses=(1.0, 0.5, 0.25, 0.125), a_ratio=0.5, e_ratio=0.3, **kwargs):
    """Kerr-Newman with fixed ``a/m`` and ``e/m``."""
    sched = [{"m": m, "a": a_ratio * m, "e": e_ratio * m} for m in masses]
    kwargs.setdefault("mass_rtol", 0.01)
    return SweepSpec("kerr-newman", sched, "radial-monotone", name="kerr-newman", **kwargs)


def geometrostatic_schedule(strengths=(0.2, 0.1, 0.05), **kwargs):
    """Single puncture with ``a = b`` under the area-enlarging branch."""
    sched = [{"punctures": [[0.0, s, s]]} for s in strengths]
    return SweepSpec("geometrostatic", sched, "area-enlarging", name="geometrostatic", **kwargs)


def flat_schedule(**kwargs):
    return SweepSpec("flat", [{}], "radial-monotone", name="flat", brill=True, **kwargs)
