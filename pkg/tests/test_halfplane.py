import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from gradshape.errors import DomainError
from gradshape.halfplane import HarmonicFn, PiecewiseBoundary, deriv, extend
from gradshape.worked_models import AZTEC_G, AZTEC_JUMPS, AZTEC_S

AZ_G = PiecewiseBoundary(AZTEC_JUMPS, AZTEC_G)
AZ_S = PiecewiseBoundary(AZTEC_JUMPS, AZTEC_S)
STEP = PiecewiseBoundary((0.0,), (0.0, 1.0))


def random_points(rng, n=100):
    return rng.uniform(-5, 5, n) + 1j * rng.uniform(0.1, 10, n)


def test_aztec_g_at_i():
    assert abs(extend(AZ_G, 1j)) < 1e-15


def test_single_jump_at_i():
    assert extend(STEP, 1j) == pytest.approx(0.5, abs=1e-15)


def test_aztec_g_far_away():
    assert abs(extend(AZ_G, 1e6j)) < 1e-5


def poisson(b, z):
    x, y = z.real, z.imag
    edges = (-np.inf,) + b.jumps + (np.inf,)
    total = 0.0
    for lo, hi, c in zip(edges, edges[1:], b.values):
        total += c * quad(lambda t: y / ((x - t) ** 2 + y * y), lo, hi)[0] / math.pi
    return total


@pytest.mark.parametrize("z", [1j, 0.3 + 0.2j, -2 + 5j, 0.9 + 0.01j])
def test_extend_matches_poisson_quadrature(z):
    assert extend(AZ_G, z) == pytest.approx(poisson(AZ_G, z), abs=1e-9)


def test_deriv_examples():
    assert abs(deriv(AZ_G, 1j)) < 1e-15
    assert deriv(AZ_S, 1j) == pytest.approx((-1 + 1j) / math.pi, abs=1e-15)
    assert deriv(STEP, 1j) == pytest.approx(1 / (2 * math.pi), abs=1e-15)


def test_errors():
    with pytest.raises(DomainError):
        extend(AZ_G, 0.5)
    with pytest.raises(DomainError):
        extend(AZ_G, 0.5 - 1j)
    with pytest.raises(DomainError):
        deriv(AZ_G, 1.0 + 0j)
    with pytest.raises(DomainError):
        PiecewiseBoundary((1.0, 0.0), (0, 1, 2))
    with pytest.raises(DomainError):
        PiecewiseBoundary((0.0,), (1.0,))
    with pytest.raises(DomainError):
        PiecewiseBoundary((0.0,), (1.0, float("nan")))


def test_no_jumps_is_constant():
    b = PiecewiseBoundary((), (3.0,))
    assert extend(b, 2 + 1j) == 3.0
    assert deriv(b, 2 + 1j) == 0


def test_cauchy_riemann_consistency(rng):
    h = 1e-5
    for b in (AZ_G, AZ_S):
        z = random_points(rng)
        ux = (extend(b, z + h) - extend(b, z - h)) / (2 * h)
        uy = (extend(b, z + 1j * h) - extend(b, z - 1j * h)) / (2 * h)
        d = deriv(b, z)
        assert np.abs(ux - 2 * d.real).max() < 1e-6
        assert np.abs(uy + 2 * d.imag).max() < 1e-6


def test_harmonicity(rng):
    # near Im z = 0.1 the h^2 truncation term dominates; 2e-4 balances it against roundoff
    h = 2e-4
    z = random_points(rng)
    for b in (AZ_G, AZ_S):
        lap = (extend(b, z + h) + extend(b, z - h) + extend(b, z + 1j * h)
               + extend(b, z - 1j * h) - 4 * extend(b, z)) / h**2
        assert np.abs(lap).max() < 1e-6


@given(st.lists(st.floats(-20, 20), min_size=1, max_size=6, unique=True),
       st.lists(st.floats(-5, 5), min_size=7, max_size=7))
def test_boundary_recovery(jumps, values):
    jumps = sorted(jumps)
    if min(np.diff(jumps), default=1.0) < 1e-2:
        return
    b = PiecewiseBoundary(jumps, values[:len(jumps) + 1])
    edges = [jumps[0] - 1.0] + jumps + [jumps[-1] + 1.0]
    for k in range(len(edges) - 1):
        mid = 0.5 * (edges[k] + edges[k + 1])
        # each jump of size dv at distance d shifts the value by dv * arctan(eps / d) / pi
        bound = sum(abs(b.values[j + 1] - b.values[j]) * math.atan(1e-6 / abs(mid - a)) / math.pi
                    for j, a in enumerate(jumps))
        assert abs(extend(b, mid + 1e-6j) - b.values[k]) <= bound * (1 + 1e-6) + 1e-12


def test_aztec_g_printed_formula(rng):
    z = random_points(rng, 200)
    printed = (2 / math.pi) * (-math.pi / 2 + np.angle(z - 1) - np.angle(z) + np.angle(z + 1))
    assert np.abs(extend(AZ_G, z) - printed).max() < 1e-12


def test_json_round_trip():
    b = PiecewiseBoundary.from_json(AZ_G.to_json())
    assert b == AZ_G
    with pytest.raises(DomainError):
        PiecewiseBoundary.from_dict({"jumps": [0.0]})


def test_harmonic_fn_wrappers():
    f = HarmonicFn.piecewise(AZ_S, "s")
    assert f.value(1j) == extend(AZ_S, 1j)
    assert f.deriv(1j) == deriv(AZ_S, 1j)
    c = HarmonicFn.constant(2.5)
    assert c.value(1j) == 2.5 and c.deriv(1j) == 0
    assert c.value(np.array([1j, 2j])).tolist() == [2.5, 2.5]
    g = HarmonicFn.closed_form(lambda z: np.real(z**2), lambda z: z)
    assert g.value(1 + 1j) == 0.0
    assert "piecewise" in repr(f)


def test_vectorised_matches_scalar(rng):
    z = random_points(rng, 10)
    vec = extend(AZ_G, z)
    assert np.allclose(vec, [extend(AZ_G, w) for w in z], atol=0, rtol=0)
