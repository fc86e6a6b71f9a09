import math

import pytest

from axipmt.conditions import (area_enlarging, default_grid, minimal_coordinate_sphere, penrose_location_check,
                               radial_monotonicity, rm_implies_ae_check, standard_grid, sub_imcf_check)
from axipmt.families import Bump, make_family, perturb
from axipmt.fields import Grid2D, PreconditionError
from axipmt.functionals import GeneratingCurve

SMALL = Grid2D(0.9, 10.0, -10.0, 10.0, 60, 80)


def test_kerr_newman_conditions(kn):
    g = standard_grid()
    rm = radial_monotonicity(kn, g)
    assert rm.holds and rm.strict
    assert rm.margin == pytest.approx(0.00185, rel=0.01)
    assert sub_imcf_check(kn, g).holds
    ae = area_enlarging(kn, g)
    assert ae.holds and ae.margin == pytest.approx(0.1399, rel=1e-3)


def test_flat_margins_are_zero(flat):
    for check in (radial_monotonicity, area_enlarging, sub_imcf_check):
        v = check(flat, SMALL)
        assert v.holds and v.margin == 0.0
        assert set(v.to_dict()) == {"condition", "holds", "margin", "witness"}


def test_line_restriction(kn):
    v = radial_monotonicity(kn, SMALL, rho0=2.0)
    assert v.samples == 80 and v.witness[0] == 2.0


def test_negative_alpha_bump_breaks_everything(flat):
    m = perturb(flat, alpha_bump=Bump(3.0, 0.0, 1.0, -1e-2))
    g = Grid2D(0.9, 10.0, -10.0, 10.0, 200, 400)
    ae, rm, sub = area_enlarging(m, g), radial_monotonicity(m, g), sub_imcf_check(m, g)
    assert not (ae.holds or rm.holds or sub.holds)
    assert ae.witness == pytest.approx((3.0, 0.0), abs=0.1)
    # a dip in alpha rises again for rho > 3, which is where monotonicity breaks
    assert rm.witness[0] > 3.0 and sub.witness[0] == pytest.approx(rm.witness[0], abs=0.1)


def test_rm_implies_ae(kn):
    rep = rm_implies_ae_check(kn, standard_grid())
    assert rep["holds"]
    assert rep["reconstruction_error"] < 1e-10
    # a plain cut-off at R_far would leave |alpha - 2u|(R_far) behind
    assert rep["cutoff_error"] == pytest.approx(rep["far_residual"], rel=1e-6)
    bad = perturb(make_family("flat"), alpha_bump=Bump(3.0, 0.0, 1.0, -1e-2))
    with pytest.raises(PreconditionError):
        rm_implies_ae_check(bad, SMALL)


def test_default_grid_respects_floor(kn):
    g = default_grid(kn)
    assert g.rho_min == pytest.approx(2 * kn.rho_floor)
    assert g.rho_max == pytest.approx(10 * kn.asym.R0)


def test_minimal_sphere_geometrostatic(geo, flat):
    s = minimal_coordinate_sphere(geo)
    assert s.interior
    assert s.radius == pytest.approx(0.5, abs=1e-6)
    assert s.area == pytest.approx(16 * math.pi, abs=1e-6)
    assert not minimal_coordinate_sphere(flat).interior
    small = make_family("geometrostatic", punctures=[[0.0, 0.05, 0.05]])
    assert minimal_coordinate_sphere(small, (0.005, 1.0)).radius == pytest.approx(0.05, abs=1e-6)


def test_penrose_location(geo):
    rep = penrose_location_check(geo, GeneratingCurve.semicircle(0.5), 1.0)
    assert rep["location_ok"] and rep["penrose_ok"]
    assert rep["penrose_ratio"] == pytest.approx(1.0, abs=1e-9)
    assert rep["location_bound"] == pytest.approx(2 * math.sqrt(2))
    with pytest.raises(PreconditionError):
        penrose_location_check(geo, GeneratingCurve.segment((1, 0), (1, 1)), 1.0)
