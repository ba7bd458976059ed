"""Finite-difference residuals and field comparison."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..errors import DegenerateError, DomainError
from ..tensions import SurfaceTensionModel, require_sigma
from .grid import LIQUID, OUTSIDE, GridField

DEGENERATE_ZY = 1e-14


def _l2(r) -> float:
    """Euclidean norm scaled by the max so tiny entries do not underflow."""
    m = float(r.max()) if r.size else 0.0
    if m == 0.0 or not np.isfinite(m):
        return m
    return m * float(np.sqrt(np.sum((r / m) ** 2)))


@dataclass
class ResidualReport:
    max_abs: float
    l2: float
    nodes: int
    values: np.ndarray
    field: Optional[GridField] = None

    def summary(self) -> dict:
        return {"max_abs": self.max_abs, "l2": self.l2, "nodes": self.nodes}

    def to_json(self) -> str:
        return json.dumps(self.summary())


def _report(values, keep, template: Optional[GridField] = None) -> ResidualReport:
    vals = np.asarray(values, float)
    r = np.abs(vals[keep])
    if r.size == 0:
        raise DomainError("no unmasked nodes to report on")
    gf = None
    if template is not None:
        mask = np.where(keep, LIQUID, OUTSIDE).astype(np.int8)
        gf = GridField(template.origin, template.spacing, np.where(keep, vals, np.nan), mask)
    return ResidualReport(float(r.max()), _l2(r), int(r.size), vals, gf)


def _shifts(a, k=1):
    """Neighbour views ``a[i+k], a[i-k], a[j+k], a[j-k]`` on the padded interior."""
    return a[2 * k:, k:-k], a[:-2 * k, k:-k], a[k:-k, 2 * k:], a[k:-k, :-2 * k]


def el_residual(model: SurfaceTensionModel, h: GridField) -> ResidualReport:
    """``div(grad sigma(grad h))`` by centred differences of centred-difference slopes.

    The stencil reaches two nodes out, so the report covers nodes at least two
    away from the grid edge whose whole stencil is liquid with slopes inside
    the domain.
    """
    require_sigma(model)
    nx, ny = h.dims
    if nx < 5 or ny < 5:
        raise DomainError("el_residual needs at least 5x5 nodes")
    dx, dy = h.spacing
    v = h.values
    liquid = h.liquid & np.isfinite(v)

    s = np.full(v.shape, np.nan)
    t = np.full(v.shape, np.nan)
    s[1:-1, 1:-1] = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * dx)
    t[1:-1, 1:-1] = (v[1:-1, 2:] - v[1:-1, :-2]) / (2 * dy)
    with np.errstate(all="ignore"):
        inside = model.margin(s, t) > 0
        X, Y = model.gradient(np.where(inside, s, np.nan), np.where(inside, t, np.nan))
    good = np.zeros(v.shape, bool)
    good[1:-1, 1:-1] = liquid[1:-1, 1:-1]
    for a in _shifts(liquid):
        good[1:-1, 1:-1] &= a
    good &= inside

    res = np.full(v.shape, np.nan)
    xp, xm, _, _ = _shifts(np.asarray(X, float))
    _, _, yp, ym = _shifts(np.asarray(Y, float))
    res[1:-1, 1:-1] = (xp - xm) / (2 * dx) + (yp - ym) / (2 * dy)
    keep = np.zeros(v.shape, bool)
    keep[1:-1, 1:-1] = good[1:-1, 1:-1]
    for a in _shifts(good):
        keep[1:-1, 1:-1] &= a
    keep &= np.isfinite(res)
    return _report(res, keep, h)


def kappa_harmonic_residual(kappa: GridField, w: GridField) -> ResidualReport:
    """Conservative 5-point ``div(kappa grad w)`` with harmonic-mean face conductivities."""
    if not kappa.congruent(w):
        raise DomainError("kappa and w grids are not congruent")
    k, f = kappa.values, w.values
    use = kappa.liquid & w.liquid & np.isfinite(k) & np.isfinite(f)
    if np.any(k[use] <= 0):
        raise DomainError("kappa must be positive")
    dx, dy = w.spacing

    def face(a, b):
        return 2.0 * a * b / (a + b)

    kc = k[1:-1, 1:-1]
    fc = f[1:-1, 1:-1]
    kxp, kxm, kyp, kym = _shifts(k)
    fxp, fxm, fyp, fym = _shifts(f)
    res = np.full(f.shape, np.nan)
    with np.errstate(all="ignore"):
        res[1:-1, 1:-1] = ((face(kc, kxp) * (fxp - fc) - face(kc, kxm) * (fc - fxm)) / dx**2
                           + (face(kc, kyp) * (fyp - fc) - face(kc, kym) * (fc - fym)) / dy**2)
    keep = np.zeros(f.shape, bool)
    keep[1:-1, 1:-1] = use[1:-1, 1:-1]
    for a in _shifts(use):
        keep[1:-1, 1:-1] &= a
    return _report(res, keep, w)


def ampere_check(zmap, gamma, points, step: float = 1e-5) -> ResidualReport:
    """``|z_x / z_y - gamma(z)|`` at ``points`` with central differences of ``zmap``."""
    pts = np.atleast_2d(np.asarray(points, float))
    if pts.shape[1] != 2:
        raise DomainError("points must be (x, y) pairs")
    x, y = pts[:, 0], pts[:, 1]
    try:
        with np.errstate(all="ignore"):
            z = np.asarray(zmap(x, y), complex)
            z_x = (np.asarray(zmap(x + step, y), complex) - np.asarray(zmap(x - step, y), complex)) / (2 * step)
            z_y = (np.asarray(zmap(x, y + step), complex) - np.asarray(zmap(x, y - step), complex)) / (2 * step)
    except DomainError as exc:
        raise DegenerateError(f"ampere_check: map not differentiable at the given points ({exc})") from exc
    bad = ~np.isfinite(z_y) | ~np.isfinite(z_x) | (np.abs(z_y) < DEGENERATE_ZY)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise DegenerateError(f"ampere_check: |z_y| degenerate at ({x[k]}, {y[k]})")
    with np.errstate(all="ignore"):
        res = np.abs(z_x / z_y - np.asarray(gamma(z), complex))
    if not np.all(np.isfinite(res)):
        raise DegenerateError("ampere_check: gamma is not finite at some points")
    return _report(res, np.ones(res.shape, bool))


class FieldDiff(NamedTuple):
    max_abs: float
    l2: float
    rms: float


def compare_fields(f1: GridField, f2: GridField) -> FieldDiff:
    """Max, raw l2 and RMS of ``f1 - f2`` over nodes unmasked in both."""
    if not f1.congruent(f2):
        raise DomainError("fields are not on congruent grids")
    if f1.mask is not None and f2.mask is not None and not np.array_equal(f1.mask, f2.mask):
        raise DomainError("field masks differ")
    keep = f1.liquid & f2.liquid
    d = np.abs(f1.values - f2.values)[keep]
    if d.size == 0:
        raise DomainError("no common unmasked nodes")
    l2 = _l2(d)
    return FieldDiff(float(d.max()), l2, l2 / math.sqrt(d.size))
