import numpy as np
import pytest

from axipmt.fields import DomainError, Grid2D, ScalarField2D, default_fd_step


def poly_jet(r, z):
    return {"f": r**3 * z, "rho": 3 * r**2 * z, "z": r**3, "rhorho": 6 * r * z, "zz": 0 * r,
            "rhoz": 3 * r**2}


def test_closed_and_fd_jets_agree():
    f = ScalarField2D.from_jet(poly_jet, name="r3z")
    r, z = np.array([0.7, 1.5, 3.0]), np.array([-0.4, 0.2, 1.1])
    closed = f.jet(r, z)
    fd = f.jet(r, z, mode="fd")
    for key in closed:
        assert np.allclose(fd[key], closed[key], rtol=1e-6, atol=1e-6), key


def test_one_sided_stencils_at_domain_edge():
    f = ScalarField2D(lambda r, z: r**2 * z**2, rho_min=1.0)
    j = f.jet(np.array([1.0]), np.array([0.5]))
    assert j["rho"][0] == pytest.approx(2 * 0.25, abs=1e-6)
    assert j["rhorho"][0] == pytest.approx(2 * 0.25, abs=1e-5)
    assert j["rhoz"][0] == pytest.approx(4 * 0.5, abs=1e-5)


def test_fd_default_steps():
    assert default_fd_step(0.01) == pytest.approx(1e-5)
    assert default_fd_step(10.0) == pytest.approx(1e-3)
    assert default_fd_step(10.0, 2) == pytest.approx(1e-2)


def test_domain_and_mode_errors():
    f = ScalarField2D(lambda r, z: r, rho_min=0.5)
    with pytest.raises(DomainError):
        f(0.1, 0.0)
    with pytest.raises(ValueError):
        f.jet(1.0, 0.0, mode="closed")
    with pytest.raises(ValueError):
        f.partial("phi", 1.0, 0.0)


def test_arithmetic_keeps_closed_form():
    a = ScalarField2D.from_jet(poly_jet)
    b = ScalarField2D.constant(2.0)
    c = 3 * a - b
    assert c.closed_form
    assert c(2.0, 1.0) == pytest.approx(22.0)
    assert c.partial("rho", 2.0, 1.0) == pytest.approx(36.0)
    assert (a * 0).is_zero


def test_grid_mesh_and_csv(tmp_path):
    g = Grid2D(1.0, 2.0, -1.0, 1.0, 3, 2)
    rho, z = g.mesh()
    assert rho.shape == (2, 3)
    path = tmp_path / "g.csv"
    g.dump_csv(rho + z, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "rho,z,value"
    assert lines[1] == "1.0,-1.0,0.0"
    assert len(lines) == 7
    with pytest.raises(ValueError):
        Grid2D(0.0, 1.0, 0, 1, 4, 4, "log")
