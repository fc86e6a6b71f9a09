import math

import numpy as np
import pytest
from scipy.integrate import quad

from axipmt.families import Bump, make_family, perturb
from axipmt.functionals import (GeneratingCurve, adm_flux_mass, area, brill_mass, euclidean_area,
                                euclidean_distance, falloff_check, holder_norm_estimate, result_record,
                                segment_length, sobolev_norm, volume)
from axipmt.regions import Annulus, Cylinder, orbit_cylinder, orbit_rectangle


def test_flux_mass_families(kn, schwarzschild, geo, flat):
    assert adm_flux_mass(kn).value == pytest.approx(1.0, abs=1e-5)
    assert adm_flux_mass(schwarzschild).value == pytest.approx(1.0, abs=1e-5)
    assert adm_flux_mass(geo).value == pytest.approx(1.0, abs=1e-5)
    assert abs(adm_flux_mass(flat).value) < 1e-9
    with pytest.raises(ValueError):
        adm_flux_mass(kn, radii=(2.0, 100.0))


def test_brill_mass(kn, geo2, flat):
    res = brill_mass(kn)
    assert res.value == pytest.approx(1.0, rel=0.005)
    # the reported tail estimate covers the truncation gap
    assert abs(res.value - 1.0) <= res.tail_error + 1e-3
    assert brill_mass(geo2).value == pytest.approx(adm_flux_mass(geo2).value, rel=0.005)
    assert brill_mass(flat).value == 0.0


def test_brill_mass_scales_linearly():
    a = brill_mass(make_family("kerr-newman", m=1.0, a=0.5, e=0.3)).value
    b = brill_mass(make_family("kerr-newman", m=0.5, a=0.25, e=0.15)).value
    assert b / a == pytest.approx(0.5, rel=0.005)


def test_flat_geometry(flat):
    cyl = orbit_cylinder(1.0, 2.0)
    assert volume(flat, cyl) == pytest.approx(6 * math.pi, abs=1e-10)
    band = GeneratingCurve.segment((2.0, 0.0), (2.0, 1.0))
    assert area(flat, band) == pytest.approx(4 * math.pi, abs=1e-10)
    assert euclidean_area(GeneratingCurve.semicircle(1.0)) == pytest.approx(4 * math.pi, abs=1e-10)
    p, q = (1.0, 0.0, 0.0), (1.0, 1.0, math.pi / 2)
    assert segment_length(flat, p, q) == pytest.approx(euclidean_distance(p, q), abs=1e-12)
    assert euclidean_distance(p, q) == pytest.approx(math.sqrt(3))


def bl_sphere(m, a, e, r):
    """Generating curve of the Boyer-Lindquist sphere of radius ``r``: a prolate ellipse."""
    k = math.sqrt(m * m - a * a - e * e)
    x = (r - m) / k
    A, B = k * math.sqrt(x * x - 1), k * x
    return GeneratingCurve(lambda t: (A * np.sin(np.pi * t), B * np.cos(np.pi * t)),
                           lambda t: (np.pi * A * np.cos(np.pi * t), -np.pi * B * np.sin(np.pi * t)),
                           closed=True)


def test_boyer_lindquist_sphere_areas(schwarzschild, kn):
    assert area(schwarzschild, bl_sphere(1.0, 0, 0, 3.0)) == pytest.approx(36 * math.pi, rel=1e-10)
    # Kerr-Newman: 2 pi int sin(theta) sqrt((r^2 + a^2)^2 - Delta a^2 sin^2 theta) dtheta
    r, a = 3.0, 0.5
    delta = r * r - 2 * r + a * a + 0.09
    exact = 2 * math.pi * quad(lambda th: math.sin(th) * math.sqrt((r * r + a * a) ** 2
                                                                    - delta * a * a * math.sin(th) ** 2),
                               0, math.pi, epsabs=1e-13)[0]
    assert area(kn, bl_sphere(1.0, 0.5, 0.3, r)) == pytest.approx(exact, rel=1e-10)


def test_sobolev_norms(flat, kn):
    rect = orbit_rectangle(1.0, 2.0, 0.1)
    for target in ("q-delta", "u", "alpha-2u", "exp-u", "exp-alpha-2u"):
        assert sobolev_norm(flat, rect, 1.0, target) == 0.0
    assert sobolev_norm(flat, Cylinder(rect), 1.5, "g-delta") == 0.0
    w = sobolev_norm(kn, Cylinder(rect), 1.0, "g-delta")
    assert w == pytest.approx(169.08, rel=1e-3)
    with pytest.raises(ValueError):
        sobolev_norm(kn, rect, 2.0, "u")
    with pytest.raises(ValueError):
        sobolev_norm(kn, rect, 1.0, "g-delta")


def test_sobolev_u_against_direct_quadrature(geo):
    # u = -2 log(1 + 0.5/r): independent tensor Gauss-Legendre quadrature of |u| + |u_rho| + |u_z|
    rect = orbit_rectangle(1.0, 2.0, 0.1)
    # |u_z| has a kink at z = 0, so the z rule is split there
    x, wx = np.polynomial.legendre.leggauss(40)
    r = 0.5 * (rect.rho_hi + rect.rho_lo) + 0.5 * rect.width * x
    z = np.concatenate([0.25 * rect.height * (x - 1), 0.25 * rect.height * (x + 1)])
    wz = np.concatenate([wx, wx]) * 0.25 * rect.height
    R, Z = np.meshgrid(r, z, indexing="ij")
    s = np.hypot(R, Z)
    du = 2 * 0.5 / (s * s * (1 + 0.5 / s))
    val = np.abs(-2 * np.log(1 + 0.5 / s)) + du * (R / s) + du * np.abs(Z / s)
    direct = 0.5 * rect.width * wx @ val @ wz
    assert sobolev_norm(geo, rect, 1.0, "u", resolution=128) == pytest.approx(direct, rel=1e-6)


def test_holder_estimates(flat, kn):
    shell = Annulus(2.0, 4.0)
    assert holder_norm_estimate(flat, shell, 0.5, "g-delta") == 0.0
    h1 = holder_norm_estimate(kn, shell, 0.5, "u")
    assert h1 > 0
    with pytest.raises(ValueError):
        holder_norm_estimate(kn, shell, 1.0)


def test_falloff_detects_violation():
    base = make_family("geometrostatic", punctures=[[0.0, 0.5, 0.5]])
    bad = base.with_params(asym=type(base.asym)(0.1, base.asym.R0, 1.0))
    assert not falloff_check(bad).passed
    assert falloff_check(base).passed


def test_result_record(kn):
    rec = result_record("volume", kn, orbit_cylinder(1, 2), 3.0, 1e-9, 64)
    assert set(rec) == {"functional", "family", "params", "region", "value", "error_estimate", "resolution"}
    assert rec["region"]["kind"] == "cylinder"


def test_perturbation_changes_volume(flat):
    m = perturb(flat, alpha_bump=Bump(1.5, 0.0, 0.4, 0.05))
    assert volume(m, orbit_cylinder(1.0, 2.0)) > 6 * math.pi
