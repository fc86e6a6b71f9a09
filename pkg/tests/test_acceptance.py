"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest.py) and when this file is executed directly.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from axipmt.conditions import (area_enlarging, default_grid, minimal_coordinate_sphere, penrose_location_check,
                               radial_monotonicity, rm_implies_ae_check, standard_grid, sub_imcf_check)
from axipmt.families import Bump, flat_metric, make_family, perturb
from axipmt.functionals import (GeneratingCurve, adm_flux_mass, area, brill_mass, euclidean_distance,
                                holder_norm_estimate, segment_length, sobolev_norm, volume)
from axipmt.harness import geometrostatic_schedule, kerr_newman_schedule, run_sweep
from axipmt.metric import brill_scalar_curvature, rho_equation_residual
from axipmt.potential import run_batteries
from axipmt.regions import Annulus, Cylinder, orbit_cylinder, orbit_rectangle

RESULTS = []


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def families():
    return {
        "flat": flat_metric(),
        "schwarzschild": make_family("kerr-newman", m=1.0),
        "kerr-newman": make_family("kerr-newman", m=1.0, a=0.5, e=0.3),
        "kerr-newman-small": make_family("kerr-newman", m=0.125, a=0.0625, e=0.0375),
        "geometrostatic": make_family("geometrostatic", punctures=[[0.0, 0.5, 0.5]]),
        "geometrostatic-pair": make_family("geometrostatic", punctures=[[1.0, 0.3, 0.2], [-1.0, 0.2, 0.3]]),
    }


def test_criterion_1_mass_consistency():
    kn = make_family("kerr-newman", m=1.0, a=0.5, e=0.3)
    t0 = time.perf_counter()
    flux = adm_flux_mass(kn, radii=(50.0, 100.0, 200.0)).value
    brill = brill_mass(kn).value
    elapsed = time.perf_counter() - t0
    ok = abs(flux - 1.0) <= 0.01 and abs(brill - flux) <= 0.02 * abs(flux) and elapsed <= 30
    record(1, "mass consistency", ok,
           f"flux={flux:.8f} brill={brill:.6f} rel.diff={abs(brill - flux) / flux:.2e} time={elapsed:.2f}s")


def test_criterion_2_vacuum_curvature():
    rng = np.random.default_rng(2)
    schw = make_family("kerr-newman", m=1.0)
    # random exterior points: Weyl radius beyond the horizon rod
    r = rng.uniform(1.5, 50.0, 100)
    th = rng.uniform(0.01, math.pi - 0.01, 100)
    R = brill_scalar_curvature(schw, r * np.sin(th), r * np.cos(th), mode="closed")
    worst = float(np.max(np.abs(R)))
    kn = make_family("kerr-newman", m=1.0, a=0.5, e=0.3)
    rho, z = standard_grid(200, 400).mesh()
    Rmin = float(np.min(brill_scalar_curvature(kn, rho, z)))
    record(2, "vacuum-slice curvature", worst <= 1e-6 and Rmin >= -1e-8,
           f"max|R_schw|={worst:.2e} min R_KN={Rmin:.3e} on 200x400")


def test_criterion_3_identity_residual():
    rng = np.random.default_rng(3)
    rho = rng.uniform(0.9, 10.0, 100)
    z = rng.uniform(-10.0, 10.0, 100)
    closed, orders = {}, {}
    for name, m in families().items():
        closed[name] = float(np.max(np.abs(rho_equation_residual(m, rho, z, "closed"))))
        if name == "flat":
            continue  # the flat residual vanishes for every step
        e = [np.max(np.abs(rho_equation_residual(m, rho, z, "fd", h))) for h in (1e-2, 5e-3)]
        orders[name] = math.log2(e[0] / e[1])
    ok = max(closed.values()) <= 1e-8 and min(orders.values()) >= 1.9
    record(3, "rho-equation residual", ok,
           f"max closed={max(closed.values()):.1e} min FD order={min(orders.values()):.3f}")


def test_criterion_4_conditions():
    g = standard_grid()
    kn = make_family("kerr-newman", m=1.0, a=0.5, e=0.3)
    rm = radial_monotonicity(kn, g)
    geo = make_family("geometrostatic", punctures=[[0.0, 0.5, 0.5]])
    geo2 = make_family("geometrostatic", punctures=[[1.0, 0.3, 0.2], [-1.0, 0.2, 0.3]])
    ae_margin = min(area_enlarging(m, grid).margin for m in (geo, geo2) for grid in (g, default_grid(m)))
    rep = rm_implies_ae_check(kn, g)
    tested = dict(families())
    tested["flat-dip"] = perturb(flat_metric(), alpha_bump=Bump(3.0, 0.0, 1.0, -1e-2))
    tested["kerr-newman-dip"] = perturb(kn, alpha_bump=Bump(3.0, 0.0, 1.0, -0.1))
    tested["kerr-newman-bump"] = perturb(kn, u_bump=Bump(3.0, 0.0, 1.0, 1e-2))
    verdicts = {n: (radial_monotonicity(m, g).holds, sub_imcf_check(m, g).holds) for n, m in tested.items()}
    agree = all(a == b for a, b in verdicts.values())
    n_false = sum(not a for a, _ in verdicts.values())
    ok = rm.margin > 0 and ae_margin >= 0 and rep["reconstruction_error"] <= 1e-3 and agree
    record(4, "appendix conditions", ok,
           f"KN RM margin={rm.margin:.3e} geo AE min={ae_margin:.3e} rm=>ae err={rep['reconstruction_error']:.1e} "
           f"sub-IMCF==RM on {len(verdicts)} families ({n_false} failing RM)")


def test_criterion_5_flat_baselines():
    flat = flat_metric()
    vol = volume(flat, orbit_cylinder(1.0, 2.0))
    band = area(flat, GeneratingCurve.segment((2.0, 0.0), (2.0, 1.0)))
    rng = np.random.default_rng(5)
    seg_err = 0.0
    for _ in range(20):
        p = (rng.uniform(0.5, 3), rng.uniform(-2, 2), rng.uniform(0, 1.2))
        q = (rng.uniform(0.5, 3), rng.uniform(-2, 2), rng.uniform(0, 1.2))
        seg_err = max(seg_err, abs(segment_length(flat, p, q) - euclidean_distance(p, q)))
    rect = orbit_rectangle(1.0, 2.0, 0.1)
    norms = [sobolev_norm(flat, Cylinder(rect), 1.0, "g-delta")]
    norms += [sobolev_norm(flat, rect, p, t) for p in (1.0, 1.5)
              for t in ("q-delta", "u", "alpha-2u", "exp-u", "exp-alpha-2u")]
    norms += [holder_norm_estimate(flat, Annulus(2.0, 4.0), 0.5, t) for t in ("u", "alpha-2u", "g-delta")]
    ok = (abs(vol - 6 * math.pi) <= 1e-8 and abs(band - 4 * math.pi) <= 1e-8 and seg_err <= 1e-8
          and all(n == 0.0 for n in norms))
    record(5, "flat baselines", ok,
           f"vol-6pi={vol - 6 * math.pi:.1e} area-4pi={band - 4 * math.pi:.1e} seg.err={seg_err:.1e} "
           f"max deviation norm={max(norms)}")


def test_criterion_6_analysis_batteries():
    rows = run_batteries(seed=0)
    by = {}
    for check, _, case, lhs, rhs, holds in rows:
        by.setdefault(check, []).append((case, lhs, rhs, holds))
    counts = {k: (sum(h for *_, h in v), len(v)) for k, v in by.items()}
    ok = (all(p == n for p, n in counts.values()) and counts["riesz"][1] == 20 and counts["mt-like"][1] == 50
          and counts["log-moment-unit-disk"][1] == 5)
    summary = " ".join(f"{k}={p}/{n}" for k, (p, n) in sorted(counts.items()))
    order = by["green-order"][0][1]
    record(6, "analysis batteries", ok, f"{summary} green order={order:.2f}")


def test_criterion_7_stability_sweeps():
    t0 = time.perf_counter()
    kn = run_sweep(kerr_newman_schedule())
    geo = run_sweep(geometrostatic_schedule())
    elapsed = time.perf_counter() - t0
    cols = ("w1p_g", "vol_dev", "area_dev", "len_dev", "holder_beta")
    kn_ok = all(kn.monotone[c] for c in cols) and all(kn.slopes[c] > 0 for c in cols)
    geo_ok = all(geo.monotone[c] for c in cols) and all(geo.slopes[c] > 0 for c in cols)
    slopes = " ".join(f"{c}={kn.slopes[c]:.2f}" for c in cols)
    record(7, "stability sweeps", kn_ok and geo_ok and elapsed <= 300,
           f"KN slopes {slopes}; geometrostatic monotone={geo_ok}; time={elapsed:.1f}s")


def test_criterion_8_horizon_geometry():
    geo = make_family("geometrostatic", punctures=[[0.0, 0.5, 0.5]])
    s = minimal_coordinate_sphere(geo)
    mass = adm_flux_mass(geo).value
    pen = penrose_location_check(geo, GeneratingCurve.semicircle(s.radius), mass)
    ok = (s.interior and abs(s.radius - 0.5) <= 1e-3 and abs(s.area - 16 * math.pi) <= 0.1
          and pen["location_ok"] and pen["rho_max"] == pytest.approx(0.5, abs=1e-3)
          and pen["location_bound"] == pytest.approx(2 * math.sqrt(2), rel=1e-6))
    record(8, "horizon geometry", ok,
           f"r*={s.radius:.7f} area={s.area:.5f} (16pi={16 * math.pi:.5f}) rho_max={pen['rho_max']:.4f} "
           f"< {pen['location_bound']:.4f}")


def test_criterion_9_determinism(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("seed = 11\nthreads = 2\n[sweep]\nschedule = 'kerr-newman'\n")
    outputs = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        d.mkdir()
        runs = [["sweep", "--config", str(cfg), "--csv", "sweep.csv", "--json", "sweep.json"],
                ["verify-analysis", "--config", str(cfg), "--csv", "batteries.csv"],
                ["check", "--family", "kerr-newman", "--m", "1", "--a", "0.5", "--e", "0.3",
                 "--condition", "rm-implies-ae", "--json", "rm.json"]]
        stdout = []
        for argv in runs:
            proc = subprocess.run([sys.executable, "-m", "axipmt", *argv], cwd=d, capture_output=True)
            assert proc.returncode == 0, proc.stderr.decode()
            stdout.append(proc.stdout)
        files = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
        outputs.append((stdout, files))
    same = outputs[0] == outputs[1]
    record(9, "determinism", same,
           f"{len(outputs[0][1])} files and {len(outputs[0][0])} stdout streams byte-identical={same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
