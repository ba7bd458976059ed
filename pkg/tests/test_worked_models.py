import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gradshape.envelope import frozen_boundary, sample_mesh
from gradshape.errors import ConvergenceError, DegenerateError, DomainError
from gradshape.halfplane import extend
from gradshape.suites import LSHAPE_A, LSHAPE_SURDS, mode_residual
from gradshape.worked_models import (ElementarySolutionEnh, LShapeParams, aztec_boundaries,
                                     aztec_closed_form, aztec_facet_planes, aztec_field,
                                     aztec_height, aztec_inverse, burgers_solve,
                                     enharmonic_parameters, enharmonic_solution, lshape_field,
                                     lshape_g_values, lshape_solve, plaplace_mode)


@pytest.fixture(scope="module")
def lshape():
    return lshape_solve(LSHAPE_A)


# -- Aztec ---------------------------------------------------------------------

def test_aztec_field_values():
    f = aztec_field()
    assert abs(f.G.value(1j)) < 1e-15
    assert abs(f.phi.value(1j)) < 1e-15 and abs(f.phi_star.value(1j)) < 1e-15
    assert abs(f.phi.value(0.5 + 1e-6j)) < 1e-5
    assert f.psi.value(1j) == 1.0


@pytest.mark.parametrize("z, xy", [(1j, (0.0, 0.0)), (1 + 1j, (-0.5, 1 / 6)), (0j, (0.5, 0.5))])
def test_aztec_closed_form(z, xy):
    assert aztec_closed_form(z) == pytest.approx(xy, abs=1e-15)


def test_aztec_closed_form_lower_half_plane():
    with pytest.raises(DomainError):
        aztec_closed_form(1 - 1j)


def test_aztec_inverse_examples():
    assert aztec_inverse(0.0, 0.0) == pytest.approx(1j, abs=1e-15)
    assert aztec_inverse(-0.5, 1 / 6) == pytest.approx(1 + 1j, abs=1e-12)
    with pytest.raises(DomainError):
        aztec_inverse(0.6, 0.6)
    with pytest.raises(DomainError):
        aztec_inverse(0.5, 0.5)


def test_aztec_round_trip(rng):
    z = rng.uniform(-5, 5, 1000) + 1j * rng.uniform(1e-2, 5, 1000)
    x, y = aztec_closed_form(z)
    assert np.abs(aztec_inverse(x, y) - z).max() < 1e-9


def test_aztec_height_examples():
    assert abs(aztec_height(0.0, 0.0)) < 1e-12
    r = 0.5 * (1 - 1e-9)
    assert abs(aztec_height(r, r)) < 1e-4
    with pytest.raises(DomainError):
        aztec_height(0.6, 0.6)


def test_aztec_facet_planes_on_square_edges(rng):
    # boundary height 2|x| - 1 on |x| + |y| = 1; each facet plane matches it on two edges
    edges = [(sx, sy) for sx in (1, -1) for sy in (1, -1)]
    cover = np.zeros(4, int)
    for s, t, g in aztec_facet_planes():
        hits = []
        for k, (sx, sy) in enumerate(edges):
            xe = sx * rng.uniform(0, 1, 20)
            ye = sy * (1 - np.abs(xe))
            if np.allclose(s * xe + t * ye + g, 2 * np.abs(xe) - 1, atol=1e-14):
                hits.append(k)
        assert len(hits) == 2
        cover[hits] += 1
    assert np.all(cover == 2)


def test_height_meets_facet_at_arctic_circle():
    f = aztec_field()
    s_b, t_b, g_b = aztec_boundaries()
    for a in (-3.0, -0.5, 0.5, 3.0):
        fb = frozen_boundary(f, [a])
        x, y = fb.x[0] * (1 - 1e-8), fb.y[0] * (1 - 1e-8)
        plane = s_b.interval_value(a) * x + t_b.interval_value(a) * y + g_b.interval_value(a)
        assert aztec_height(x, y) == pytest.approx(plane, abs=1e-6)


# -- L-shape ---------------------------------------------------------------------

def test_lshape_surds(lshape):
    assert lshape.points == pytest.approx(LSHAPE_SURDS, abs=1e-8)
    assert abs(lshape.g_u_at_branch()) < 1e-10


def test_lshape_decimals(lshape):
    # decimal expansion of the surds; the last three differ from the commonly quoted
    # 1.67545, 3.56716, 6.70170 in the fifth place
    want = (-4, -1.878680, -1, 1.675417, 3.567223, 6.701670)
    assert lshape.points == pytest.approx(want, abs=1e-6)


def test_lshape_invariants(lshape):
    p = lshape
    assert p.a1 < p.a2 < p.a3 == -1 < 0 < p.a4 < p.a5 < p.a6
    assert p.interpolation_residual() < 1e-10
    assert abs(p.z_of_u(p.a2)) < 1e-12 and abs(p.z_of_u(p.a5)) < 1e-12
    u = p.branch_point
    h = 1e-6
    zu = (p.z_of_u(u + h) - p.z_of_u(u - h)) / (2 * h)
    assert abs(zu) < 1e-8


@pytest.mark.parametrize("a", [0.6, 0.5, -0.1])
def test_lshape_infeasible(a):
    with pytest.raises(DomainError):
        lshape_solve(a)


def test_lshape_reports_residuals_when_no_solution():
    with pytest.raises(ConvergenceError) as exc:
        lshape_solve(0.1)
    assert exc.value.residuals


@pytest.mark.parametrize("a", [0.15, 0.2, 0.3, 0.4, 0.45, 0.49])
def test_lshape_solves_across_range(a):
    p = lshape_solve(a)
    assert abs(p.g_u_at_branch()) < 1e-10
    assert p.interpolation_residual() < 1e-10


def test_lshape_boundary_values(lshape):
    a = lshape.a
    g = lshape.g_boundary()
    assert g.interval_value(0.5 * (lshape.a4 + lshape.a5)) == pytest.approx(4 * a - 1)
    assert lshape_g_values(a) == pytest.approx((1, -1, 1, 4 * a - 1, 8 * a - 3, 4 * a - 1, 1, -1))
    f = lshape_field(lshape)
    mid = 0.5 * (lshape.a1 + lshape.a2)
    assert extend(f.phi.boundary, mid + 1e-9j) == pytest.approx(2.0, abs=1e-6)


def test_lshape_field_rejects_other_a(lshape):
    with pytest.raises(DomainError):
        lshape_field(lshape, 0.3)


def test_lshape_json_round_trip(lshape):
    d = json.loads(lshape.to_json())
    assert d["a1"] == pytest.approx(-4.0, abs=1e-8)
    assert LShapeParams.from_dict(d) == lshape


def test_lshape_mesh_is_bounded(lshape):
    mesh = sample_mesh(lshape_field(lshape), (-8, 8, 0.01, 8), (80, 80))
    live = ~mesh.frozen
    assert live.mean() > 0.99
    assert np.abs(mesh.x[live]).max() < 10 and np.abs(mesh.y[live]).max() < 10


# -- enharmonic elementary solutions ----------------------------------------------

def test_enharmonic_xy_solution(rng):
    e = ElementarySolutionEnh(0.0, -1.0)
    u, v = rng.uniform(-1, 1, 20), rng.uniform(-1, 1, 20)
    x, y, h = enharmonic_solution(e, u, v)
    np.testing.assert_allclose(x, np.exp(-v))
    np.testing.assert_allclose(y, np.exp(u))
    np.testing.assert_allclose(h, x * y)


def test_enharmonic_degenerate_zero():
    x, y, h = enharmonic_solution(ElementarySolutionEnh(0.0, 0.0), 0.3, -0.2)
    assert (float(x), float(y), float(h)) == (1.0, 0.0, 0.0)


def test_enharmonic_constraint():
    ElementarySolutionEnh(-0.5, (-1 + math.sqrt(2)) / 2)
    with pytest.raises(DomainError):
        ElementarySolutionEnh(0.5, 0.5)
    with pytest.raises(DomainError):
        ElementarySolutionEnh(-1.0, 0.0)


@given(st.floats(0, 2 * math.pi))
def test_enharmonic_slope_field(theta):
    e = ElementarySolutionEnh.from_angle(theta)
    if abs(e.a + 1) < 0.1 or abs(e.a - e.b) < 0.1 or abs(e.b) < 0.1:
        return
    u, v = 0.2, -0.1
    d = 1e-6
    # dh = s dx + t dy along both parameter directions
    x0, y0, h0 = enharmonic_solution(e, u, v)
    for du, dv in ((d, 0), (0, d)):
        x1, y1, h1 = enharmonic_solution(e, u + du, v + dv)
        x2, y2, h2 = enharmonic_solution(e, u - du, v - dv)
        dh = (h1 - h2) / (2 * d)
        pred = math.exp(u) * (x1 - x2) / (2 * d) + math.exp(-v) * (y1 - y2) / (2 * d)
        assert dh == pytest.approx(pred, rel=1e-6, abs=1e-8)
    uu, vv = enharmonic_parameters(e, x0, y0)
    assert (float(uu), float(vv)) == pytest.approx((u, v), abs=1e-10)


def test_enharmonic_parameters_degenerate():
    with pytest.raises(DegenerateError):
        enharmonic_parameters(ElementarySolutionEnh(0.0, 0.0), 1.0, 1.0)


# -- p-Laplace modes -----------------------------------------------------------------

def test_plaplace_cosine_mode(rng):
    m = plaplace_mode(2.0, 1.0, (1, 1, 1, 0))
    r, th = rng.uniform(0.5, 2, 50), rng.uniform(-3, 3, 50)
    np.testing.assert_allclose(m(r, th), 2 * r * np.cos(th), atol=1e-14)


def test_plaplace_radial_exponent():
    m = plaplace_mode(4.0, 0.0, (1, 0, 1, 0))
    assert m.lam == pytest.approx(math.sqrt(1 / 3))
    assert m(2.0, 0.3) == pytest.approx(2.0 ** math.sqrt(1 / 3))
    assert mode_residual(m) < 1e-5


def test_plaplace_zero_mode_and_errors():
    m = plaplace_mode(3.0, 0.5, (1, 2, 0, 0))
    assert np.all(m(np.array([0.5, 1.0]), np.array([0.1, 0.2])) == 0)
    with pytest.raises(DomainError):
        m(0.0, 0.0)
    with pytest.raises(DomainError):
        plaplace_mode(1.0, 0.0, (1, 0, 1, 0))


@pytest.mark.parametrize("p, c", [(3.0, 0.1), (4.0, 2.0), (1.5, 0.7), (6.0, 0.0)])
def test_plaplace_mode_solves_schrodinger(p, c):
    assert mode_residual(plaplace_mode(p, c, (0.3, -0.7, 1.1, 0.4))) < 1e-5


# -- Young tableaux Burgers ----------------------------------------------------------

def test_burgers_linear_f():
    r = burgers_solve([1.0, 0.0], 1.0, 0.0)
    assert r.z == pytest.approx(1j, abs=1e-12)
    assert (r.s, r.t) == pytest.approx((0.0, 1 / math.pi), abs=1e-12)


def test_burgers_frozen_points():
    with pytest.raises(DegenerateError):
        burgers_solve([1.0, 0.0], 1.0, 3.0)
    with pytest.raises(DegenerateError):
        burgers_solve([2.0], 0.5, 1.0)


@given(st.floats(0.1, 3), st.floats(-1.5, 1.5))
def test_burgers_satisfies_equation(x, y):
    f = (np.array([1.0, 0.0, 0.5]), np.array([1.0, 2.0]))  # (z^2 + 1/2)/(z + 2)
    try:
        r = burgers_solve(f, x, y)
    except DegenerateError:
        return
    val = y + x / r.z + (r.z**2 + 0.5) / (r.z + 2)
    assert abs(val) < 1e-12 * max(1, abs(r.z))
    assert r.z.imag > 0
    # chart inversion reproduces z
    assert -math.pi * r.t * (math.tan(math.pi * r.s) - 1j) == pytest.approx(r.z, rel=1e-10)
