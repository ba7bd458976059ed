"""Envelopes of harmonically moving tangent planes.

Given harmonic ``phi = s psi``, ``phi_star = t psi``, ``G = psi c`` and
``psi > 0`` on a parameter domain, each parameter ``zeta`` determines the
plane ``x3 = s x + t y + G/psi``.  The tangency point solves the complex line
equation ``s_z x + t_z y + (G/psi)_z = 0``; real and imaginary parts give the
two real unknowns whenever ``gamma = s_z/t_z`` is not real.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateError, DomainError
from .halfplane import HarmonicFn
from .tensions import SurfaceTensionModel, require_chart

FROZEN_TOL = 1e-12
DEFAULT_EPS = (1e-2, 1e-3, 1e-4)
SPREAD_TOL = 1e-3


def upper_half_plane(z):
    return np.imag(z) > 0


@dataclass
class TangentPlaneField:
    phi: HarmonicFn
    phi_star: HarmonicFn
    G: HarmonicFn
    psi: HarmonicFn
    domain: Callable = upper_half_plane
    model: Optional[SurfaceTensionModel] = None
    label: str = ""


class EnvelopePoint(NamedTuple):
    zeta: complex
    x: float
    y: float
    h: float
    s: float
    t: float
    gamma: complex
    frozen: bool = False


def field_from_model(model: SurfaceTensionModel, G: HarmonicFn, label: str = "") -> TangentPlaneField:
    """Moving-plane field whose slopes come from the model's intrinsic chart."""
    require_chart(model)
    if not model.trivial_potential:
        raise DomainError(f"{model.name} does not have trivial potential; s*psi is not harmonic")
    ch = model.chart

    def times_psi(which):
        def value(z):
            return ch.inverse(z)[which] * ch.psi(z)

        def d(z):
            return ch.derivs(z)[which] * ch.psi(z) + ch.inverse(z)[which] * ch.psi_z(z)

        return HarmonicFn.closed_form(value, d, label=("s", "t")[which] + "*psi")

    psi = HarmonicFn.closed_form(ch.psi, ch.psi_z, label="psi")
    return TangentPlaneField(times_psi(0), times_psi(1), G, psi, domain=ch.contains, model=model,
                             label=label or model.name)


def _solve(f: TangentPlaneField, zeta):
    """Vectorised envelope solve; returns a dict of arrays plus a frozen mask."""
    z = np.asarray(zeta, dtype=complex)
    psi = np.asarray(f.psi.value(z), float)
    psi_z = np.asarray(f.psi.deriv(z), complex)
    phi, phi_z = np.asarray(f.phi.value(z), float), np.asarray(f.phi.deriv(z), complex)
    phs, phs_z = np.asarray(f.phi_star.value(z), float), np.asarray(f.phi_star.deriv(z), complex)
    big_g, big_g_z = np.asarray(f.G.value(z), float), np.asarray(f.G.deriv(z), complex)

    with np.errstate(divide="ignore", invalid="ignore"):
        inv_psi = 1.0 / psi
        s, t, g = phi * inv_psi, phs * inv_psi, big_g * inv_psi
        s_z = (phi_z - s * psi_z) * inv_psi
        t_z = (phs_z - t * psi_z) * inv_psi
        g_z = (big_g_z - g * psi_z) * inv_psi
        gamma = s_z / t_z
        x = -np.imag(g_z / t_z) / gamma.imag
        y = -np.imag(g_z / s_z) / np.imag(1.0 / gamma)
        h = s * x + t * y + g
    frozen = ~(np.abs(gamma.imag) >= FROZEN_TOL) | ~np.isfinite(x) | ~np.isfinite(y)
    bad_psi = ~(psi > 0)
    return dict(zeta=z, x=x, y=y, h=h, s=s, t=t, gamma=gamma, s_z=s_z, t_z=t_z, g_z=g_z,
                frozen=frozen | bad_psi, bad_psi=bad_psi)


def envelope_point(f: TangentPlaneField, zeta) -> EnvelopePoint:
    """Tangency point of the plane labelled by ``zeta``."""
    zeta = complex(zeta)
    if not bool(f.domain(zeta)):
        raise DomainError(f"zeta={zeta} is outside the parameter domain")
    r = _solve(f, zeta)
    if r["bad_psi"]:
        raise DomainError(f"psi <= 0 at zeta={zeta}")
    if r["frozen"]:
        raise DegenerateError(f"degenerate complex slope {complex(r['gamma'])} at zeta={zeta} (frozen)")
    return EnvelopePoint(zeta, float(r["x"]), float(r["y"]), float(r["h"]), float(r["s"]),
                         float(r["t"]), complex(r["gamma"]))


def line_residual(f: TangentPlaneField, zeta):
    """``|s_z x + t_z y + (G/psi)_z|`` at the solved tangency point."""
    r = _solve(f, zeta)
    return np.abs(r["s_z"] * r["x"] + r["t_z"] * r["y"] + r["g_z"])


def _neville_at_zero(eps, vals):
    """Value at 0 of the interpolating polynomial through ``(eps[k], vals[k])``."""
    p = [np.asarray(v, float) for v in vals]
    n = len(eps)
    for m in range(1, n):
        for i in range(n - m):
            j = i + m
            p[i] = (eps[j] * p[i] - eps[i] * p[i + 1]) / (eps[j] - eps[i])
    return p[0]


@dataclass
class FrozenBoundary:
    samples: np.ndarray
    x: np.ndarray
    y: np.ndarray
    spread: np.ndarray
    flagged: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


def frozen_boundary(f: TangentPlaneField, samples, eps_sequence=DEFAULT_EPS,
                    spread_tol: float = SPREAD_TOL) -> FrozenBoundary:
    """Limit of the tangency points as ``zeta -> a`` from above, for real samples ``a``.

    The envelope is evaluated at ``a + i eps`` for each ``eps`` and extrapolated
    to ``eps = 0`` with Neville's scheme.  ``spread`` compares the full
    extrapolation with the one that drops the largest ``eps``; samples whose
    spread exceeds ``spread_tol`` (or with a degenerate evaluation) are flagged.
    """
    a = np.atleast_1d(np.asarray(samples, float))
    eps = [float(e) for e in eps_sequence]
    if len(eps) < 2 or any(e <= 0 for e in eps):
        raise DomainError("eps_sequence needs at least two positive values")
    xs, ys, bad = [], [], np.zeros(a.shape, bool)
    for e in eps:
        r = _solve(f, a + 1j * e)
        xs.append(r["x"])
        ys.append(r["y"])
        bad |= r["frozen"]
    x0, y0 = _neville_at_zero(eps, xs), _neville_at_zero(eps, ys)
    x1, y1 = _neville_at_zero(eps[1:], xs[1:]), _neville_at_zero(eps[1:], ys[1:])
    spread = np.hypot(x0 - x1, y0 - y1)
    flagged = bad | ~(spread <= spread_tol)
    return FrozenBoundary(a, x0, y0, spread, flagged)


@dataclass
class Mesh:
    """Envelope points on a row-major parameter grid (``u`` varies fastest)."""

    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    h: np.ndarray
    s: np.ndarray
    t: np.ndarray
    gamma: np.ndarray
    frozen: np.ndarray
    shape: tuple = field(default=(0, 0))

    def __len__(self):
        return self.u.size

    def __getitem__(self, k) -> EnvelopePoint:
        return EnvelopePoint(complex(self.u[k], self.v[k]), float(self.x[k]), float(self.y[k]),
                             float(self.h[k]), float(self.s[k]), float(self.t[k]),
                             complex(self.gamma[k]), bool(self.frozen[k]))

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def grid(self, name: str) -> np.ndarray:
        """Array ``name`` reshaped to ``(nv, nu)``."""
        return getattr(self, name).reshape(self.shape)


def sample_mesh(f: TangentPlaneField, window, resolution) -> Mesh:
    """Evaluate the envelope on a ``nu x nv`` grid over ``[u0, u1] x [v0, v1]``.

    Degenerate parameters are flagged ``frozen`` (their coordinates are NaN)
    rather than aborting the mesh.
    """
    u0, u1, v0, v1 = (float(w) for w in window)
    nu, nv = (int(n) for n in resolution)
    if not (u1 > u0 and v1 > v0):
        raise DomainError(f"empty window {window}")
    if nu < 2 or nv < 2:
        raise DomainError(f"resolution must be at least 2x2, got {nu}x{nv}")
    uu, vv = np.meshgrid(np.linspace(u0, u1, nu), np.linspace(v0, v1, nv))
    zeta = (uu + 1j * vv).ravel()
    if not np.all(f.domain(zeta)):
        raise DomainError("window is not interior to the parameter domain")
    r = _solve(f, zeta)
    frozen = r["frozen"]
    nan = lambda a: np.where(frozen, np.nan, a)
    return Mesh(zeta.real, zeta.imag, nan(r["x"]), nan(r["y"]), nan(r["h"]), nan(r["s"]),
                nan(r["t"]), r["gamma"], frozen, shape=(nv, nu))


def jacobian_sign_changes(mesh: Mesh) -> int:
    """Number of adjacent grid pairs across which ``det d(x, y)/d(u, v)`` flips sign."""
    x, y = mesh.grid("x"), mesh.grid("y")
    du = (mesh.u[1] - mesh.u[0]) if mesh.shape[1] > 1 else 1.0
    dv = (mesh.grid("v")[1, 0] - mesh.grid("v")[0, 0]) if mesh.shape[0] > 1 else 1.0
    x_v, x_u = np.gradient(x, dv, du)
    y_v, y_u = np.gradient(y, dv, du)
    sign = np.sign(x_u * y_v - x_v * y_u)
    flips = (sign[:, 1:] * sign[:, :-1] < 0).sum() + (sign[1:, :] * sign[:-1, :] < 0).sum()
    return int(flips)


def ampere_residual(f: TangentPlaneField, zeta, step: float = 1e-6):
    """``|z_x / z_y - gamma|`` from central differences of ``zeta -> (x, y)``.

    The inverse map's derivatives come from inverting the Jacobian of the
    envelope parameterisation, so the check is meaningful wherever that map is
    locally injective.
    """
    z = np.asarray(zeta, complex)
    h = step * np.maximum(1.0, np.abs(z))
    xp, xm = _solve(f, z + h), _solve(f, z - h)
    yp, ym = _solve(f, z + 1j * h), _solve(f, z - 1j * h)
    x_u, y_u = (xp["x"] - xm["x"]) / (2 * h), (xp["y"] - xm["y"]) / (2 * h)
    x_v, y_v = (yp["x"] - ym["x"]) / (2 * h), (yp["y"] - ym["y"]) / (2 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (y_v - 1j * y_u) / (-x_v + 1j * x_u)
    return np.abs(ratio - _solve(f, z)["gamma"])


def local_plane_slopes(mesh: Mesh):
    """Least-squares plane through each interior node and its four grid neighbours.

    Returns ``(s_fit, t_fit)`` on the interior ``(nv-2, nu-2)`` block.
    """
    x, y, h = mesh.grid("x"), mesh.grid("y"), mesh.grid("h")
    centre = (slice(1, -1), slice(1, -1))
    nbrs = [(slice(1, -1), slice(2, None)), (slice(1, -1), slice(None, -2)),
            (slice(2, None), slice(1, -1)), (slice(None, -2), slice(1, -1))]
    dx = np.stack([x[c] - x[centre] for c in nbrs], axis=-1)
    dy = np.stack([y[c] - y[centre] for c in nbrs], axis=-1)
    dh = np.stack([h[c] - h[centre] for c in nbrs], axis=-1)
    # the plane passes through the centre node exactly; fit the slope from four offsets
    a11, a12, a22 = (dx * dx).sum(-1), (dx * dy).sum(-1), (dy * dy).sum(-1)
    b1, b2 = (dx * dh).sum(-1), (dy * dh).sum(-1)
    det = a11 * a22 - a12 * a12
    return (a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det


def complex_slope(f: TangentPlaneField, zeta):
    """``gamma = s_z / t_z`` of the field at ``zeta``."""
    g = _solve(f, zeta)["gamma"]
    return g if np.ndim(g) else complex(g)
