import math

import numpy as np
import pytest

from gradshape.errors import CapabilityError, DegenerateError, DomainError
from gradshape.intrinsic import (chart_eval, fd_laplacian, gauss_map, gauss_map_alt,
                                 hessian_from_gauss, sample_chart_points, schrodinger_potential,
                                 verify_isothermal)
from gradshape.suites import isothermal_order
from gradshape.tensions import make_builtin

from conftest import interior_slopes

ALL_CHART_MODELS = [("trivial_example", ()), ("young_tableaux", ()), ("enharmonic", ()),
                    ("p_laplace", (1.5,)), ("p_laplace", (2.0,)), ("p_laplace", (3.0,)),
                    ("dimer_square", ())]


def test_gauss_map_isotropic():
    gamma, mu = gauss_map((2.0, 0.0, 2.0))
    assert gamma == pytest.approx(-1j, abs=1e-15)
    assert abs(mu) < 1e-15


def test_gauss_map_enharmonic_slope():
    gamma, mu = gauss_map((1.0, 0.0, 0.25))
    assert gamma == pytest.approx(-0.5j, abs=1e-15)
    assert mu == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_beltrami_trivial_example():
    _, mu = gauss_map((4.0, 0.0, 0.25))
    assert mu == pytest.approx(0.6, abs=1e-15)


def test_gauss_map_rejects_indefinite():
    with pytest.raises(DomainError):
        gauss_map((1.0, 2.0, 1.0))


def test_gauss_forms_agree_and_bounds(sigma_model, rng):
    s, t = interior_slopes(sigma_model, 100, rng)
    hs = sigma_model.hessian(s, t)
    for k in range(100):
        h = (hs[0][k], hs[1][k], hs[2][k])
        gamma, mu = gauss_map(h)
        assert gamma.imag < 0
        assert abs(mu) < 1
        assert abs(gamma - gauss_map_alt(h)) < 1e-12 * max(1.0, abs(gamma))
        back = hessian_from_gauss(gamma, math.sqrt(h[0] * h[2] - h[1] ** 2))
        assert back == pytest.approx(h, rel=1e-10, abs=1e-10)


def test_chart_eval_enharmonic_origin():
    p = chart_eval(make_builtin("enharmonic"), 0.0)
    assert p.slope == pytest.approx((1.0, 1.0))
    assert p.conformal.gamma == pytest.approx(-1j, abs=1e-15)


def test_chart_eval_dimer_at_i():
    p = chart_eval(make_builtin("dimer_square"), 1j)
    assert p.slope == pytest.approx((0.0, 0.0), abs=1e-15)
    assert p.conformal.psi == 1.0


def test_chart_eval_trivial_example():
    p = chart_eval(make_builtin("trivial_example"), 1 - 1j)
    assert p.slope == pytest.approx((1.0, 1.0))
    assert p.conformal.psi == pytest.approx(2.0)


@pytest.mark.parametrize("name, params", ALL_CHART_MODELS)
def test_chart_identities(name, params, rng):
    m = make_builtin(name, params)
    for z in sample_chart_points(m, 40, rng):
        p = chart_eval(m, z)
        s_z, t_z = p.slope_derivs
        c = p.conformal
        assert abs(s_z / t_z - c.gamma) < 1e-10 * max(1.0, abs(c.gamma))
        assert c.gamma.imag < 0
        assert abs(c.mu) < 1
        assert c.psi**2 == pytest.approx(c.kappa, rel=1e-10)


def test_chart_eval_errors():
    with pytest.raises(DomainError):
        chart_eval(make_builtin("trivial_example"), 1 + 1j)
    with pytest.raises(DomainError):
        chart_eval(make_builtin("dimer_square"), -1j)


def test_schrodinger_examples():
    assert schrodinger_potential(make_builtin("enharmonic"), 0.3 + 0.7j) == 0.5
    assert schrodinger_potential(make_builtin("p_laplace", (2.0,)), 1 + 1j) == 0.0
    assert schrodinger_potential(make_builtin("p_laplace", (4.0,)), 2.0) == pytest.approx(1.0 / 12.0, abs=1e-15)
    with pytest.raises(DomainError):
        schrodinger_potential(make_builtin("p_laplace", (3.0,)), 0.0)


@pytest.mark.parametrize("name, params", [("enharmonic", ()), ("p_laplace", (3.0,)),
                                          ("p_laplace", (4.0,)), ("trivial_example", ())])
def test_potential_closed_matches_fd(name, params, rng):
    m = make_builtin(name, params)
    for z in sample_chart_points(m, 20, rng):
        closed = schrodinger_potential(m, z, method="closed")
        fd = schrodinger_potential(m, z, method="fd")
        assert fd == pytest.approx(closed, abs=1e-7)


def test_potential_bad_method():
    with pytest.raises(ValueError):
        schrodinger_potential(make_builtin("enharmonic"), 0.0, method="spectral")


@pytest.mark.parametrize("name, params, trivial", [
    ("trivial_example", (), True), ("dimer_square", (), True), ("young_tableaux", (), True),
    ("enharmonic", (), False), ("p_laplace", (3.0,), False), ("p_laplace", (2.0,), True),
])
def test_trivial_potential_flag(name, params, trivial, rng):
    m = make_builtin(name, params)
    assert m.trivial_potential == trivial
    lap = [abs(fd_laplacian(m.chart.psi, z, 1e-3)) for z in sample_chart_points(m, 50, rng)]
    assert (max(lap) < 1e-4) == trivial


def test_fd_laplacian_richardson_is_fourth_order():
    # Laplacian of e^u cos(v) v^2 is 2 e^u cos v - 4 v e^u sin v
    f = lambda z: np.real(np.exp(z)) * np.imag(z) ** 2
    z = 0.3 + 0.4j
    u, v = z.real, z.imag
    want = 2 * math.exp(u) * math.cos(v) - 4 * v * math.exp(u) * math.sin(v)
    e1 = abs(fd_laplacian(f, z, 1e-2, richardson=True) - want)
    e2 = abs(fd_laplacian(f, z, 5e-3, richardson=True) - want)
    assert e1 / e2 > 10
    assert abs(fd_laplacian(f, z, 1e-3) - want) < 1e-5


def test_verify_isothermal_examples():
    assert max(verify_isothermal(make_builtin("enharmonic"), 0.0, 1e-5)) < 1e-6
    assert max(verify_isothermal(make_builtin("trivial_example"), 1 - 1j)) < 1e-6
    r = verify_isothermal(make_builtin("young_tableaux"), math.pi * 1j)
    assert r[2] < 1e-6


def test_verify_isothermal_needs_sigma():
    with pytest.raises(CapabilityError):
        verify_isothermal(make_builtin("dimer_square"), 1j)


def test_verify_isothermal_degenerate():
    # young chart: s_z = -i/(2 pi z) is tiny far away
    with pytest.raises(DegenerateError):
        verify_isothermal(make_builtin("young_tableaux"), 1e15j)


@pytest.mark.parametrize("name, params", [("trivial_example", ()), ("young_tableaux", ()),
                                          ("enharmonic", ()), ("p_laplace", (3.0,)),
                                          ("p_laplace", (1.5,))])
def test_isothermal_second_order(name, params, rng):
    m = make_builtin(name, params)
    order = isothermal_order(m, sample_chart_points(m, 20, rng))
    live = order[np.isfinite(order)]
    assert live.size >= 1
    assert np.all(np.abs(live - 2.0) < 0.2)
