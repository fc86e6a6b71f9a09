import math

import numpy as np
import pytest

from axipmt.quadrature import (boundary_nodes, gauss_legendre, graded_radial_rule, integrate_2d,
                               integrate_boundary, polar_integrate, simpson_nodes)
from axipmt.regions import Disk, Rectangle


def test_simpson_exact_for_cubics():
    x, w = simpson_nodes(0.0, 2.0, 3)  # rounded up to an even count
    assert len(x) == 5
    assert w @ x**3 == pytest.approx(4.0)


def test_gauss_legendre_interval():
    x, w = gauss_legendre(1.0, 3.0, 6)
    assert w.sum() == pytest.approx(2.0)
    assert w @ x**11 == pytest.approx((3**12 - 1) / 12)


def test_integrate_2d_and_nonfinite():
    rect = Rectangle(1.0, 2.0, -1.0, 1.0)
    assert integrate_2d(lambda r, z: r * z**2, rect) == pytest.approx(1.0)
    with pytest.raises(FloatingPointError), np.errstate(all="ignore"):
        integrate_2d(lambda r, z: np.log(z), rect)


def test_boundary_normals_give_divergence_theorem():
    rect = Rectangle(1.0, 2.0, -1.0, 1.0)
    # field (rho^2, z): divergence 2 rho + 1, integral 3*2 + 2 = 8
    flux = integrate_boundary(lambda r, z, nr, nz: r**2 * nr + z * nz, rect)
    assert flux == pytest.approx(8.0)
    r, z, w, nr, nz = boundary_nodes(rect, "inner")
    assert np.all(nr == -1) and w.sum() == pytest.approx(2.0)
    assert integrate_boundary(lambda r, z: np.ones_like(r), rect, "outer") == pytest.approx(4.0)


def test_graded_rule_log_moments():
    t, w = graded_radial_rule()
    for k in range(1, 6):
        exact = (-1) ** k * math.factorial(k) / 2 ** (k + 1)
        # int_0^1 r log(r)^k dr
        assert w @ (t * np.log(t) ** k) == pytest.approx(exact, abs=1e-11)


def test_polar_rules_areas_and_singular_integrals():
    rect = Rectangle(1.0, 2.0, -1.0, 1.0)
    assert polar_integrate(lambda a, b: np.ones_like(a), rect, (1.3, 0.4)) == pytest.approx(2.0, abs=1e-12)
    disk = Disk((0.5, -0.5), 2.0)
    assert polar_integrate(lambda a, b: np.ones_like(a), disk, (1.0, 0.0)) == pytest.approx(4 * math.pi, abs=1e-10)
    # 1/|x| on the unit disk about its centre: 2 pi
    val = polar_integrate(lambda a, b: 1 / np.hypot(a, b), Disk((0, 0), 1.0), (0.0, 0.0))
    assert val == pytest.approx(2 * math.pi, abs=1e-10)
