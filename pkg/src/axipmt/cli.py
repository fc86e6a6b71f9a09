"""Command-line interface: ``axipmt <command> [options]``.

Every command prints a JSON document on stdout (keys sorted, so output is
byte-stable) and optionally writes CSV/JSON files.  Exit status is 0 on
success, 1 when an operation's preconditions fail, 2 for configuration or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import conditions, families, functionals, harness, metric as metric_mod, potential
from .config import ConfigError, load_config
from .fields import Grid2D, PreconditionError
from .regions import Annulus, Ball, Cylinder, orbit_rectangle

EXIT_OK, EXIT_PRECONDITION, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# helpers


def _emit(doc, args):
    text = json.dumps(harness._jsonable(doc), indent=2, sort_keys=True)
    print(text)
    path = getattr(args, "json", None)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _setting(args, cfg, section, key, flag=None, default=None):
    """Flag value if given, else config value, else default."""
    v = getattr(args, flag or key, None)
    if v is not None:
        return v
    return cfg.get(section, {}).get(key, default) if section else cfg.get(key, default)


def _threads(args, cfg):
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        return args.threads
    if "threads" in cfg:
        return cfg["threads"]
    try:
        return harness.default_threads()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _resolution(args, cfg, default=64):
    return _setting(args, cfg, None, "resolution", default=default)


def _build_metric(args, cfg):
    fam = dict(cfg.get("family", {}))
    name = fam.pop("name", "flat")
    if args.family and args.family != name:
        name, fam = args.family, {}
    for key in ("m", "a", "e", "tau"):
        if getattr(args, key, None) is not None:
            fam[key] = getattr(args, key)
    if getattr(args, "puncture", None):
        fam["punctures"] = [list(p) for p in args.puncture]
    name = name.replace("_", "-").lower()
    keep = {"kerr-newman": ("m", "a", "e"), "kn": ("m", "a", "e"), "schwarzschild": ("m",),
            "geometrostatic": ("punctures", "tau")}.get(name, ())
    fam = {k: v for k, v in fam.items() if k in keep}
    if name == "geometrostatic":
        fam.setdefault("punctures", [[0.0, 0.5, 0.5]])
    return families.make_family(name, **fam)


def _rect(spec):
    rho0, rho1, sigma = spec
    return orbit_rectangle(rho0, rho1, sigma)


def _grid(args, cfg, metric):
    kind = _setting(args, cfg, "check", "grid", default="standard")
    n_rho = _setting(args, cfg, "check", "n_rho", default=200)
    n_z = _setting(args, cfg, "check", "n_z", default=400)
    if kind == "standard":
        return conditions.standard_grid(n_rho, n_z)
    if kind == "default":
        return conditions.default_grid(metric, n_rho, n_z)
    raise ConfigError(f"unknown grid {kind!r}; expected 'standard' or 'default'")


# ---------------------------------------------------------------------------
# commands


def cmd_mass(args, cfg):
    metric = _build_metric(args, cfg)
    method = _setting(args, cfg, "mass", "method", default="flux")
    if method not in ("flux", "brill", "both"):
        raise ConfigError(f"unknown mass method {method!r}")
    radii = _setting(args, cfg, "mass", "radii", default=[50.0, 100.0, 200.0])
    out = {"family": metric.family, "params": metric.params, "results": []}
    if method in ("flux", "both"):
        res = functionals.adm_flux_mass(metric, radii)
        out["results"].append(res.to_dict())
        out["mass"] = res.value
    if method in ("brill", "both"):
        trunc = _setting(args, cfg, "mass", "truncation", default=200.0)
        res = functionals.brill_mass(metric, Ball(trunc),
                                     n_r=_setting(args, cfg, "mass", "n_r", default=400),
                                     n_theta=_setting(args, cfg, "mass", "n_theta", default=96))
        out["results"].append(res.to_dict())
        out.setdefault("mass", res.value)
    _emit(out, args)
    return EXIT_OK


def cmd_curvature(args, cfg):
    metric = _build_metric(args, cfg)
    pts = args.point or cfg.get("curvature", {}).get("points")
    out = {"family": metric.family, "params": metric.params}
    if pts:
        pts = np.asarray(pts, dtype=float)
        R = metric_mod.brill_scalar_curvature(metric, pts[:, 0], pts[:, 1])
        out["points"] = [{"rho": float(r), "z": float(z), "R": float(v)} for (r, z), v in zip(pts, R)]
    else:
        grid = Grid2D(0.9, 10.0, -10.0, 10.0, _setting(args, cfg, "curvature", "n_rho", default=200),
                      _setting(args, cfg, "curvature", "n_z", default=400))
        rho, z = grid.mesh()
        keep = np.ones(rho.shape, dtype=bool)
        if metric.excluded is not None:
            keep = ~metric.excluded(rho, z)
        R = np.full(rho.shape, math.nan)
        R[keep] = metric_mod.brill_scalar_curvature(metric, rho[keep], z[keep])
        out["grid"] = {"min": float(np.nanmin(R)), "max": float(np.nanmax(R)),
                       "samples": int(keep.sum())}
        csv_path = _setting(args, cfg, "output", "csv")
        if csv_path:
            grid.dump_csv(R, csv_path)
    _emit(out, args)
    return EXIT_OK


CHECKS = ("radial-monotone", "area-enlarging", "sub-imcf", "rm-implies-ae", "minimal-sphere", "penrose")


def cmd_check(args, cfg):
    metric = _build_metric(args, cfg)
    cond = _setting(args, cfg, "check", "condition", default="radial-monotone")
    if cond not in CHECKS:
        raise ConfigError(f"unknown condition {cond!r}; expected one of {CHECKS}")
    rho0 = _setting(args, cfg, "check", "rho0")
    if cond in conditions.CONDITIONS:
        grid = _grid(args, cfg, metric)
        out = conditions.CONDITIONS[cond](metric, grid, rho0).to_dict()
    elif cond == "rm-implies-ae":
        out = conditions.rm_implies_ae_check(metric, _grid(args, cfg, metric))
    else:
        r_range = _setting(args, cfg, "check", "r_range", default=[0.05, 5.0])
        sphere = conditions.minimal_coordinate_sphere(metric, r_range)
        out = {"condition": cond, **sphere.to_dict()}
        if cond == "penrose":
            r = _setting(args, cfg, "check", "surface_radius", default=sphere.radius)
            mass = functionals.adm_flux_mass(metric).value
            out.update(conditions.penrose_location_check(
                metric, functionals.GeneratingCurve.semicircle(r), mass))
            out["mass"] = mass
            out["surface_radius"] = r
    out["family"] = metric.family
    out["params"] = metric.params
    _emit(out, args)
    return EXIT_OK


def cmd_geometry(args, cfg):
    metric = _build_metric(args, cfg)
    g = cfg.get("geometry", {})
    region = args.region or g.get("region", [1.0, 2.0, 0.0])
    curve = g.get("curve", [[2.0, 0.0], [2.0, 1.0]])
    points = g.get("points", [[1.0, 0.0, 0.0], [2.0, 1.0, 0.0]])
    res = _resolution(args, cfg)
    cyl = Cylinder(_rect(region))
    vol = functionals.volume(metric, cyl, res)
    vol0 = functionals.volume(families.flat_metric(), cyl, res)
    surf = functionals.GeneratingCurve.polyline([tuple(c) for c in curve], closed=False)
    A = functionals.area(metric, surf)
    A0 = functionals.euclidean_area(surf)
    L = functionals.segment_length(metric, points[0], points[1])
    L0 = functionals.segment_length(families.flat_metric(), points[0], points[1])
    out = {
        "family": metric.family, "params": metric.params, "resolution": res,
        "volume": functionals.result_record("volume", metric, cyl, vol, resolution=res),
        "volume_flat": vol0, "volume_deviation": abs(vol - vol0),
        "area": A, "area_flat": A0, "area_deviation": abs(A - A0),
        "length": L, "length_flat": L0, "length_deviation": abs(L - L0),
    }
    _emit(out, args)
    return EXIT_OK


def cmd_norms(args, cfg):
    metric = _build_metric(args, cfg)
    n = cfg.get("norms", {})
    region = args.region or n.get("region", [1.0, 2.0, 0.1])
    p = _setting(args, cfg, "norms", "p", default=1.0)
    target = _setting(args, cfg, "norms", "target", default="g-delta")
    frame = n.get("frame", "orthonormal")
    beta = _setting(args, cfg, "norms", "beta", default=0.5)
    shell = n.get("shell", [2.0, 4.0])
    res = _resolution(args, cfg)
    rect = _rect(region)
    dom = Cylinder(rect) if target == "g-delta" else rect
    w = functionals.sobolev_norm(metric, dom, p, target, frame, res)
    h_target = n.get("holder_target", "g-delta")
    h = functionals.holder_norm_estimate(metric, Annulus(*shell), beta, h_target)
    out = {"family": metric.family, "params": metric.params,
           "sobolev": functionals.result_record(f"W1,{p:g}:{target}", metric, dom, w, resolution=res),
           "holder": functionals.result_record(f"C0,{beta:g}:{h_target}", metric, Annulus(*shell), h)}
    _emit(out, args)
    return EXIT_OK


def cmd_verify_analysis(args, cfg):
    suite = _setting(args, cfg, "analysis", "suite", default="all")
    seed = _setting(args, cfg, None, "seed", default=0)
    try:
        rows = potential.run_batteries(seed, suite)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    csv_path = _setting(args, cfg, "output", "csv")
    if csv_path:
        potential.write_battery_csv(rows, csv_path)
    by_check = {}
    for check, _, _, _, _, holds in rows:
        total, ok = by_check.get(check, (0, 0))
        by_check[check] = (total + 1, ok + int(bool(holds)))
    failed = [f"{r[0]}:{r[2]}" for r in rows if not r[5]]
    out = {"seed": seed, "suite": suite, "cases": len(rows),
           "checks": {k: {"cases": t, "passed": o} for k, (t, o) in sorted(by_check.items())},
           "failed": failed, "all_passed": not failed}
    _emit(out, args)
    return EXIT_OK if not failed else EXIT_PRECONDITION


def cmd_sweep(args, cfg):
    s = cfg.get("sweep", {})
    schedule = args.schedule or s.get("schedule", "kerr-newman")
    common = {}
    for key in ("region", "holder_shell"):
        if key in s:
            common[key] = tuple(s[key])
    for key in ("p", "beta", "brill"):
        if key in s:
            common[key] = s[key]
    common["resolution"] = _resolution(args, cfg)
    common["seed"] = _setting(args, cfg, None, "seed", default=0)
    if schedule == "kerr-newman":
        kw = {k: s[k] for k in ("a_ratio", "e_ratio") if k in s}
        if "masses" in s:
            kw["masses"] = tuple(s["masses"])
        spec = harness.kerr_newman_schedule(**kw, **common)
    elif schedule == "geometrostatic":
        kw = {"strengths": tuple(s["strengths"])} if "strengths" in s else {}
        spec = harness.geometrostatic_schedule(**kw, **common)
    elif schedule == "flat":
        spec = harness.flat_schedule(**common)
    else:
        raise ConfigError(f"unknown schedule {schedule!r}")
    report = harness.run_sweep(spec, _threads(args, cfg))
    csv_path = _setting(args, cfg, "output", "csv")
    if csv_path:
        report.write_csv(csv_path)
    out = report.summary()
    out["table"] = [{c: row[c] for c in harness.COLUMNS} for row in report.rows]
    _emit(out, args)
    return EXIT_OK


def cmd_families(args, cfg):
    out = {
        "flat": {"parameters": []},
        "kerr-newman": {"parameters": ["m", "a", "e"], "requires": "m > 0, m^2 > a^2 + e^2",
                        "defaults": {"m": 1.0, "a": 0.0, "e": 0.0}},
        "geometrostatic": {"parameters": ["punctures", "tau"],
                           "requires": "punctures [[z, a, b], ...] with a, b > 0 on the axis",
                           "defaults": {"punctures": [[0.0, 0.5, 0.5]], "tau": 1.0}},
    }
    _emit(out, args)
    return EXIT_OK


COMMANDS = {
    "mass": cmd_mass,
    "curvature": cmd_curvature,
    "check": cmd_check,
    "geometry": cmd_geometry,
    "norms": cmd_norms,
    "verify-analysis": cmd_verify_analysis,
    "sweep": cmd_sweep,
    "families": cmd_families,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--threads", type=int, help="worker cap (fallback: AXIPMT_THREADS)")
    common.add_argument("--resolution", type=int, help="quadrature intervals per axis")
    common.add_argument("--seed", type=int, help="seed for randomized batteries")
    common.add_argument("--csv", help="write tabular output here")
    common.add_argument("--json", help="write the JSON document here as well")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=["flat", "kerr-newman", "schwarzschild", "geometrostatic"])
    fam.add_argument("--m", type=float, help="Kerr-Newman mass")
    fam.add_argument("--a", type=float, help="Kerr-Newman angular momentum per mass")
    fam.add_argument("--e", type=float, help="Kerr-Newman charge")
    fam.add_argument("--puncture", nargs=3, type=float, action="append", metavar=("Z", "A", "B"),
                     help="geometrostatic puncture on the axis (repeatable)")
    fam.add_argument("--tau", type=float, help="declared alpha decay exponent (geometrostatic)")

    parser = _Parser(prog="axipmt", description="Numerical stability checks for axisymmetric "
                     "initial data near zero mass.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mass", parents=[common, fam], help="ADM mass by flux and/or Brill integral")
    p.add_argument("--method", choices=["flux", "brill", "both"])

    p = sub.add_parser("curvature", parents=[common, fam], help="Brill scalar curvature")
    p.add_argument("--point", nargs=2, type=float, action="append", metavar=("RHO", "Z"))

    p = sub.add_parser("check", parents=[common, fam], help="geometric conditions")
    p.add_argument("--condition", choices=CHECKS)
    p.add_argument("--grid", choices=["standard", "default"])
    p.add_argument("--rho0", type=float, help="restrict the scan to the line rho = rho0")

    p = sub.add_parser("geometry", parents=[common, fam], help="volume, area and length vs flat")
    p.add_argument("--region", nargs=3, type=float, metavar=("RHO0", "RHO1", "SIGMA"))

    p = sub.add_parser("norms", parents=[common, fam], help="Sobolev and Hoelder deviations")
    p.add_argument("--region", nargs=3, type=float, metavar=("RHO0", "RHO1", "SIGMA"))
    p.add_argument("--p", type=float)
    p.add_argument("--target", choices=list(functionals.SOBOLEV_TARGETS))
    p.add_argument("--beta", type=float)

    p = sub.add_parser("verify-analysis", parents=[common], help="seeded inequality batteries")
    p.add_argument("--suite", choices=("all",) + potential.BATTERY_SUITES)

    p = sub.add_parser("sweep", parents=[common], help="mass-to-zero sweep")
    p.add_argument("--schedule", choices=["kerr-newman", "geometrostatic", "flat"])

    sub.add_parser("families", parents=[common], help="list metric families")
    return parser


def dispatch(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        for key in ("csv", "json"):
            if getattr(args, key) is None and key in cfg.get("output", {}):
                setattr(args, key, cfg["output"][key])
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, ValueError, FloatingPointError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main(argv=None):
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
