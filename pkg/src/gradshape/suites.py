"""Built-in verification suites run by ``gradshape verify``."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .envelope import complex_slope, frozen_boundary, sample_mesh
from .intrinsic import fd_laplacian, sample_chart_points, schrodinger_potential, verify_isothermal
from .oracle.residuals import ampere_check, el_residual
from .tensions import make_builtin
from .worked_models import (ElementarySolutionEnh, aztec_closed_form, aztec_field, aztec_height,
                            aztec_inverse, enharmonic_grid, lshape_solve, plaplace_mode)

SUITES = ("isothermal", "aztec", "lshape", "enharmonic", "plaplace")
# residuals below this at the coarse step are roundoff, not truncation error
ORDER_FLOOR = 1e-9


class Check(NamedTuple):
    suite: str
    name: str
    value: float
    tol: float
    passed: bool


def _check(suite, name, value, tol, lower=False):
    value = float(value)
    ok = value >= tol if lower else value <= tol
    return Check(suite, name, value, tol, bool(ok and math.isfinite(value)))


def isothermal_models():
    return [make_builtin("trivial_example"), make_builtin("young_tableaux"),
            make_builtin("enharmonic"), make_builtin("p_laplace", (1.5,)),
            make_builtin("p_laplace", (2.0,)), make_builtin("p_laplace", (3.0,)),
            make_builtin("p_laplace", (4.0,))]


def isothermal_order(model, zs, coarse=1e-3, fine=1e-4):
    """Observed FD order per residual component, ``nan`` where the coarse residual is roundoff."""
    rc = np.array([verify_isothermal(model, z, coarse) for z in zs]).max(axis=0)
    rf = np.array([verify_isothermal(model, z, fine) for z in zs]).max(axis=0)
    order = np.full(3, np.nan)
    live = rc > ORDER_FLOOR
    order[live] = np.log10(rc[live] / np.maximum(rf[live], 1e-300)) / math.log10(coarse / fine)
    return order


def isothermal_suite(n=50, seed=0):
    out = []
    for m in isothermal_models():
        zs = sample_chart_points(m, n, np.random.default_rng(seed))
        r = np.array([verify_isothermal(m, z, 1e-5) for z in zs]).max()
        out.append(_check("isothermal", f"{m.spec} max residual", r, 1e-5))
        order = isothermal_order(m, zs)
        live = order[np.isfinite(order)]
        if live.size:
            out.append(_check("isothermal", f"{m.spec} FD order", live.min(), 1.8, lower=True))
    young = make_builtin("young_tableaux")
    rng = np.random.default_rng(seed)
    s, t = rng.uniform(-0.45, 0.45, 100), rng.uniform(0.2, 2.0, 100)
    hs = young.hessian(s, t)
    out.append(_check("isothermal", "young_tableaux det H - pi^2", np.abs(hs.det - math.pi**2).max(), 1e-8))
    return out


def aztec_suite():
    f = aztec_field()
    out = []
    uu, vv = np.meshgrid(np.linspace(-3, 3, 100), np.linspace(1e-2, 3, 100))
    zeta = (uu + 1j * vv).ravel()
    mesh = sample_mesh(f, (-3, 3, 1e-2, 3), (100, 100))
    cx, cy = aztec_closed_form(zeta)
    out.append(_check("aztec", "envelope vs closed form", max(np.abs(mesh.x - cx).max(), np.abs(mesh.y - cy).max()), 1e-10))
    fb = frozen_boundary(f, np.linspace(-5, 5, 200))
    out.append(_check("aztec", "arctic circle |x^2+y^2-1/2|", np.abs(fb.x**2 + fb.y**2 - 0.5).max(), 1e-6))
    back = aztec_inverse(cx, cy)
    out.append(_check("aztec", "inverse round trip", np.abs(back - zeta).max(), 1e-9))
    out.append(_check("aztec", "height at origin", abs(aztec_height(0.0, 0.0)), 1e-12))
    rng = np.random.default_rng(1)
    r = np.sqrt(rng.uniform(0, 1, 200)) * 0.95 / math.sqrt(2)
    th = rng.uniform(0, 2 * math.pi, 200)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    rep = ampere_check(aztec_inverse, lambda z: complex_slope(f, z), pts, 1e-5)
    out.append(_check("aztec", "ampere residual", rep.max_abs, 1e-4))
    return out


LSHAPE_A = (10 - 3 * math.sqrt(2)) / 16
LSHAPE_SURDS = (-4.0, -4 + 3 / math.sqrt(2), -1.0, (-1 + 9 * math.sqrt(2)) / 7,
                (8 + 12 * math.sqrt(2)) / 7, (-4 + 36 * math.sqrt(2)) / 7)


def lshape_suite():
    p = lshape_solve(LSHAPE_A)
    err = max(abs(a - b) for a, b in zip(p.points, LSHAPE_SURDS))
    return [_check("lshape", "cut points vs closed-form surds", err, 1e-8),
            _check("lshape", "|G_u| at branch point", abs(p.g_u_at_branch()), 1e-10)]


def enharmonic_elementary(n=20, seed=0):
    """``n`` random elementary solutions with ``|a+1|``, ``|a-b|``, ``|b|`` all above 0.1."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        e = ElementarySolutionEnh.from_angle(rng.uniform(0, 2 * math.pi))
        if abs(e.a + 1) > 0.1 and abs(e.a - e.b) > 0.1 and abs(e.b) > 0.1:
            out.append(e)
    return out


def enharmonic_suite(seed=0):
    m = make_builtin("enharmonic")
    zs = sample_chart_points(m, 50, np.random.default_rng(seed))
    q = np.array([schrodinger_potential(m, z, method="fd") for z in zs])
    out = [_check("enharmonic", "potential - 1/2 (finite differences)", np.abs(q - 0.5).max(), 1e-8)]
    worst = max(el_residual(m, enharmonic_grid(e)).max_abs for e in enharmonic_elementary(20, seed))
    out.append(_check("enharmonic", "elementary solutions EL residual", worst, 1e-5))
    return out


def plaplace_sets(n=10, seed=0):
    rng = np.random.default_rng(seed)
    return [(float(rng.uniform(1.2, 5.0)), float(rng.uniform(0.0, 3.0)), rng.uniform(-1, 1, 4))
            for _ in range(n)]


def mode_residual(mode, n=200, seed=0, step=1e-3):
    """Max of ``|(-Laplace + q) w|`` by 5-point differences on the annulus ``0.5 < R < 2``."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.5 + 2 * step, 2.0 - 2 * step, n)
    # keep the stencil away from the angular branch cut
    z = r * np.exp(1j * rng.uniform(-0.9 * math.pi, 0.9 * math.pi, n))
    lap = fd_laplacian(mode.at, z, step, richardson=True)
    return float(np.abs(-lap + mode.potential(z) * mode.at(z)).max())


def plaplace_suite(seed=0):
    worst = max(mode_residual(plaplace_mode(p, c, k), seed=seed) for p, c, k in plaplace_sets(10, seed))
    q2 = make_builtin("p_laplace", (2.0,)).chart.potential(np.array([0.5, 1j, -1.5 - 0.5j]))
    return [_check("plaplace", "mode residual on annulus", worst, 1e-5),
            _check("plaplace", "potential at p=2", np.abs(q2).max(), 0.0)]


def run_suite(name):
    table = {"isothermal": isothermal_suite, "aztec": aztec_suite, "lshape": lshape_suite,
             "enharmonic": enharmonic_suite, "plaplace": plaplace_suite}
    if name == "all":
        return [c for s in SUITES for c in table[s]()]
    if name not in table:
        raise ValueError(f"unknown suite {name!r}")
    return table[name]()
