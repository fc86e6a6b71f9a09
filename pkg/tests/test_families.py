import math

import numpy as np
import pytest

from axipmt.families import (Bump, GeometrostaticParams, KerrNewmanParams, from_prolate, geometrostatic_metric,
                             kerr_newman_metric, make_family, perturb, to_prolate)
from axipmt.fields import DomainError
from axipmt.functionals import falloff_check


def test_kerr_newman_parameters():
    p = KerrNewmanParams(1.0, 0.5, 0.3)
    assert p.k == pytest.approx(math.sqrt(0.66))
    q = p.scaled(0.25)
    assert (q.a, q.e) == pytest.approx((0.125, 0.075))
    with pytest.raises(ValueError):
        KerrNewmanParams(1.0, 0.8, 0.7)
    with pytest.raises(ValueError):
        KerrNewmanParams(0.0)


def test_prolate_roundtrip():
    p = KerrNewmanParams(1.0, 0.5, 0.3)
    rho, z = np.array([0.3, 2.0, 0.01]), np.array([0.2, -3.0, 2.0])
    x, y = to_prolate(p, rho, z)
    r2, z2 = from_prolate(p, x, y)
    assert np.allclose(r2, rho) and np.allclose(z2, z)
    with pytest.raises(DomainError):
        to_prolate(p, 0.0, 0.1)


def test_geometrostatic_single_puncture_values():
    m = geometrostatic_metric(GeometrostaticParams.single(0.5))
    # conformal factor (1 + 0.5/5)^2 at r = 5
    assert float(m.u(3.0, 4.0)) == pytest.approx(-2 * math.log(1.1), abs=1e-14)
    assert float(m.u(3.0, 4.0)) == pytest.approx(-0.19062, abs=1e-5)
    assert float(m.alpha(3.0, 4.0)) == 0.0
    assert GeometrostaticParams.single(0.5).total == 1.0


def test_make_family_validation():
    assert make_family("kerr_newman", m=2.0).params["m"] == 2.0
    with pytest.raises(ValueError):
        make_family("flat", m=1.0)
    with pytest.raises(ValueError):
        make_family("kerr-newman", q=1.0)
    with pytest.raises(ValueError):
        make_family("geometrostatic")
    with pytest.raises(ValueError):
        make_family("minkowski")


def test_bump_shape():
    b = Bump(3.0, 0.0, 1.0, 0.2)
    j = b.jet(np.array([3.0, 3.5, 4.0, 5.0]), np.zeros(4))
    assert j["f"][0] == pytest.approx(0.2)
    assert j["f"][1] == pytest.approx(0.2 * math.exp(1 - 1 / 0.75))
    assert j["f"][2] == 0.0 and j["f"][3] == 0.0
    fd = b.field().finite_difference(2e-4).jet(3.4, 0.3)
    ex = b.field().jet(3.4, 0.3)
    for key in ex:
        assert float(fd[key]) == pytest.approx(float(ex[key]), rel=1e-5, abs=1e-8)
    with pytest.raises(ValueError):
        Bump(0.5, 0.0, 1.0, 0.1)


def test_perturb_extends_falloff_radius():
    base = kerr_newman_metric(KerrNewmanParams(0.5, 0.1, 0.1))
    m = perturb(base, alpha_bump=Bump(6.0, 0.0, 1.0, 1e-3))
    assert m.asym.R0 == pytest.approx(7.0)
    assert m.params["perturbed"]
    assert float(m.alpha(6.0, 0.0) - base.alpha(6.0, 0.0)) == pytest.approx(1e-3)
    assert perturb(base) is base


def test_declared_falloff_constants_hold():
    for m in (make_family("kerr-newman", m=1.0, a=0.5, e=0.3), make_family("kerr-newman", m=0.1, a=0.05),
              make_family("geometrostatic", punctures=[[0.5, 0.2, 0.3], [-0.5, 0.1, 0.1]]),
              make_family("flat")):
        rep = falloff_check(m, strong=True)
        assert rep.passed and rep.strong_passed, m.params
