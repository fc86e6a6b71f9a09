import math

import numpy as np
import pytest

from axipmt.fields import DomainError
from axipmt.metric import (assemble, brill_scalar_curvature, grad_log_rho_norm, mean_curvature_rho_level,
                           orbit_block, rho_equation_residual)


def boyer_lindquist(m, a, e, r, theta):
    """Weyl-chart point and the metric functions from the Boyer-Lindquist form."""
    k = math.sqrt(m * m - a * a - e * e)
    delta = r * r - 2 * m * r + a * a + e * e
    sigma = r * r + a * a * math.cos(theta) ** 2
    x, y = (r - m) / k, math.cos(theta)
    rho = math.sqrt(delta) * math.sin(theta)
    z = (r - m) * math.cos(theta)
    g_phiphi = math.sin(theta) ** 2 * ((r * r + a * a) ** 2 - delta * a * a * math.sin(theta) ** 2) / sigma
    orbit = sigma / (k * k * (x * x - y * y))
    return rho, z, g_phiphi, orbit


def test_schwarzschild_components_at_sqrt3(schwarzschild):
    g = assemble(schwarzschild, math.sqrt(3), 0.0)
    assert np.allclose(g, np.diag([2.25, 2.25, 9.0]), atol=1e-12)
    assert float(schwarzschild.area_excess(math.sqrt(3), 0.0)) == pytest.approx(0.5 * math.log(27 / 4), abs=1e-12)
    assert float(schwarzschild.area_excess(math.sqrt(3), 0.0)) == pytest.approx(0.9547712524, abs=1e-9)


@pytest.mark.parametrize("r,theta", [(3.0, 1.0), (2.2, 0.3), (10.0, 2.5)])
def test_kerr_newman_matches_boyer_lindquist(kn, r, theta):
    rho, z, g_pp, orbit = boyer_lindquist(1.0, 0.5, 0.3, r, theta)
    g = assemble(kn, rho, z)
    assert g[2, 2] == pytest.approx(g_pp, rel=1e-12)
    assert g[0, 0] == pytest.approx(orbit, rel=1e-12)
    assert g[1, 1] == pytest.approx(orbit, rel=1e-12)


def test_volume_form_and_norms(kn):
    rho, z = 1.7, -0.6
    g = assemble(kn, rho, z)
    u, a = kn.values(rho, z)
    assert math.sqrt(np.linalg.det(g)) == pytest.approx(rho * math.exp(2 * a - 3 * u), rel=1e-12)
    assert float(kn.eta_norm(rho, z)) == pytest.approx(math.sqrt(g[2, 2]))
    assert float(kn.grad_rho_norm(rho, z)) == pytest.approx(1 / math.sqrt(g[0, 0]))
    assert np.allclose(orbit_block(g), g[:2, :2])


def test_schwarzschild_scalar_curvature_vanishes(schwarzschild, rng):
    rho = rng.uniform(0.5, 20, 50)
    z = rng.uniform(-20, 20, 50)
    assert np.max(np.abs(brill_scalar_curvature(schwarzschild, rho, z))) < 1e-10


def test_kerr_newman_curvature_fd_agrees(kn):
    rho, z = np.array([1.5, 3.0, 6.0]), np.array([0.2, -1.0, 4.0])
    closed = brill_scalar_curvature(kn, rho, z)
    fd = brill_scalar_curvature(kn.finite_difference(), rho, z)
    assert np.all(closed > 0)
    assert np.allclose(fd, closed, rtol=1e-4, atol=1e-7)


def test_rho_residual_modes(kn, geo):
    rho, z = np.array([1.0, 2.5]), np.array([0.3, -2.0])
    for m in (kn, geo):
        assert np.max(np.abs(rho_equation_residual(m, rho, z, "closed"))) < 1e-12
    e1 = np.max(np.abs(rho_equation_residual(kn, rho, z, "fd", 1e-2)))
    e2 = np.max(np.abs(rho_equation_residual(kn, rho, z, "fd", 5e-3)))
    assert math.log2(e1 / e2) > 1.9


def test_mean_curvature_conventions(flat, schwarzschild):
    rho = np.array([0.5, 2.0])
    z = np.zeros(2)
    assert np.allclose(mean_curvature_rho_level(flat, rho, z), 1 / rho)
    assert np.allclose(grad_log_rho_norm(flat, rho, z), 1 / rho)
    H = mean_curvature_rho_level(schwarzschild, 2.0, 0.0)
    assert H <= grad_log_rho_norm(schwarzschild, 2.0, 0.0)


def test_domain_errors(kn, flat):
    with pytest.raises(DomainError):
        kn.check_point(0.0, 0.0)
    with pytest.raises(DomainError):
        brill_scalar_curvature(flat, 1e-9, 0.0)
    with pytest.raises(DomainError):
        kn.values(1e-12, 0.1)  # on the horizon rod
