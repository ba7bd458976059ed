"""Intrinsic-coordinate machinery: Gauss map, Beltrami coefficient, kappa and psi.

The intrinsic coordinate ``z`` is orientation reversing, so the complex slope
``gamma = s_z / t_z`` always has negative imaginary part.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateError, DomainError
from .tensions import HessianTriple, Slope, SurfaceTensionModel, require_chart, require_sigma

DEFAULT_FD_STEP = 1e-5
DEGENERATE_DERIV = 1e-14


class ConformalData(NamedTuple):
    gamma: complex
    mu: complex
    kappa: float
    psi: float


class ChartPoint(NamedTuple):
    slope: Slope
    slope_derivs: tuple  # (s_z, t_z)
    conformal: ConformalData


def gauss_map(h) -> tuple[complex, complex]:
    """Complex slope ``gamma`` and Beltrami coefficient ``mu`` of a Hessian."""
    sss, sst, stt = (float(v) for v in h)
    det = sss * stt - sst * sst
    if not (sss > 0 and det > 0):
        raise DomainError(f"Hessian ({sss}, {sst}, {stt}) is not positive definite")
    root = math.sqrt(det)
    gamma = complex(-sst, -root) / sss
    mu = complex(sss - stt, 2.0 * sst) / (sss + stt + 2.0 * root)
    return gamma, mu


def gauss_map_alt(h) -> complex:
    """Second closed form of the complex slope, ``sigma_tt / (-sigma_st + i sqrt(det))``."""
    sss, sst, stt = (float(v) for v in h)
    det = sss * stt - sst * sst
    if not (sss > 0 and det > 0):
        raise DomainError("Hessian is not positive definite")
    return stt / complex(-sst, math.sqrt(det))


def hessian_from_gauss(gamma: complex, kappa: float) -> HessianTriple:
    """Recover the Hessian from the complex slope and ``kappa = sqrt(det H)``."""
    if not gamma.imag < 0:
        raise DegenerateError(f"complex slope {gamma} is not in the lower half-plane")
    sss = kappa / -gamma.imag
    sst = -gamma.real * sss
    return HessianTriple(sss, sst, (kappa * kappa + sst * sst) / sss)


def _check_point(model: SurfaceTensionModel, z) -> complex:
    require_chart(model)
    z = complex(z)
    if not bool(model.chart.contains(z)):
        raise DomainError(f"z={z} is outside the chart domain of {model.name}")
    return z


def chart_eval(model: SurfaceTensionModel, z) -> ChartPoint:
    """Slope, its complex derivatives and the conformal data at chart point ``z``."""
    z = _check_point(model, z)
    ch = model.chart
    s, t = (float(v) for v in ch.inverse(z))
    s_z, t_z = (complex(v) for v in ch.derivs(z))
    psi = float(ch.psi(z))
    if model.has_closed_sigma:
        hs = model.hessian(s, t)
        gamma, mu = gauss_map(hs)
        kappa = math.sqrt(float(hs[0] * hs[2] - hs[1] ** 2))
    else:
        if abs(t_z) < DEGENERATE_DERIV:
            raise DegenerateError(f"t_z vanishes at z={z}")
        gamma = s_z / t_z
        kappa = psi * psi
        _, mu = gauss_map(hessian_from_gauss(gamma, kappa))
    return ChartPoint(Slope(s, t), (s_z, t_z), ConformalData(gamma, mu, kappa, psi))


def fd_laplacian(f, z, step: float, richardson: bool = False):
    """Five-point Laplacian of a real (or complex) function of ``z = u + iv``.

    With ``richardson`` the steps ``h`` and ``2h`` are combined into a
    fourth-order estimate.
    """
    def five(h):
        return (f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4.0 * f(z)) / (h * h)

    if not richardson:
        return five(step)
    return (4.0 * five(step) - five(2.0 * step)) / 3.0


def schrodinger_potential(model: SurfaceTensionModel, z, method: str = "auto") -> float:
    """Potential ``q = Laplacian(psi) / psi`` at ``z``.

    ``method`` is ``"closed"``, ``"fd"`` or ``"auto"`` (closed form when the
    model provides one).
    """
    z = _check_point(model, z)
    ch = model.chart
    if method not in ("auto", "closed", "fd"):
        raise ValueError(f"unknown method {method!r}")
    if method != "fd" and ch.potential is not None:
        return float(ch.potential(z))
    if method == "closed":
        raise DomainError(f"{model.name} has no closed-form potential")
    h = 1e-3 * max(1.0, abs(z))
    probes = [z + 2 * h, z - 2 * h, z + 2j * h, z - 2j * h]
    if not all(bool(ch.contains(w)) for w in probes):
        raise DomainError(f"finite-difference stencil at z={z} leaves the chart domain")
    return float(fd_laplacian(ch.psi, z, h, richardson=True)) / float(ch.psi(z))


def _wirtinger(f, z: complex, h: float) -> complex:
    fu = (f(z + h) - f(z - h)) / (2.0 * h)
    fv = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    return 0.5 * (fu - 1j * fv)


def verify_isothermal(model: SurfaceTensionModel, z, fd_step: float = DEFAULT_FD_STEP):
    """Residuals ``(r1, r2, r3)`` of the three isothermal identities at ``z``.

    ``r1 = |X_z/t_z + Y_z/s_z|``, ``r2 = |s_z/t_z - gamma|`` and
    ``r3 = |X_z/t_z + i sqrt(det H)|``, with ``X_z, Y_z`` from central
    differences of the gradient of sigma pulled back through the chart.
    """
    require_sigma(model)
    z = _check_point(model, z)
    ch = model.chart
    h = fd_step * max(1.0, abs(z))

    def grad(w):
        s, t = ch.inverse(w)
        x, y = model.gradient(float(s), float(t))
        return complex(float(x), float(y))

    x_z = _wirtinger(lambda w: grad(w).real, z, h)
    y_z = _wirtinger(lambda w: grad(w).imag, z, h)
    point = chart_eval(model, z)
    s_z, t_z = point.slope_derivs
    if abs(s_z) < DEGENERATE_DERIV or abs(t_z) < DEGENERATE_DERIV:
        raise DegenerateError(f"chart derivatives vanish at z={z}")
    root = point.conformal.kappa
    r1 = abs(x_z / t_z + y_z / s_z)
    r2 = abs(s_z / t_z - point.conformal.gamma)
    r3 = abs(x_z / t_z + 1j * root)
    return r1, r2, r3


def sample_chart_points(model: SurfaceTensionModel, n: int, rng: np.random.Generator):
    """Random chart points in a unit-scale patch of each built-in's domain."""
    name = model.name
    if name == "trivial_example":
        return rng.uniform(0.5, 2.0, n) - 1j * rng.uniform(0.5, 2.0, n)
    if name in ("young_tableaux", "dimer_square"):
        return rng.uniform(-2.0, 2.0, n) + 1j * rng.uniform(0.3, 2.0, n)
    if name == "enharmonic":
        return rng.uniform(-1.0, 1.0, n) + 1j * rng.uniform(-1.0, 1.0, n)
    if name == "p_laplace":
        radius = rng.uniform(0.5, 2.0, n)
        return radius * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    raise DomainError(f"no sampling patch for {name}")
