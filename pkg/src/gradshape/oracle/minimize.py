"""Direct minimisation of the triangulated functional by coordinate descent."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .. import _accel
from ..errors import CapabilityError, DomainError, InfeasibleError
from ..tensions import SurfaceTensionModel, require_sigma
from . import _kernels
from .grid import FROZEN, LIQUID, OUTSIDE, GridField

FROZEN_MARGIN = 1e-6
PROJECTION_STEPS = 100


def _domain_nodes(domain, n):
    """Bounding box, spacing and the in-domain node mask for ``domain``.

    ``domain`` is either ``(x0, x1, y0, y1)`` or a sequence of polygon vertices.
    """
    nx, ny = (int(n), int(n)) if np.isscalar(n) else (int(n[0]), int(n[1]))
    if nx < 3 or ny < 3:
        raise DomainError(f"grid needs at least 3x3 nodes, got {nx}x{ny}")
    arr = np.asarray(domain, float)
    if arr.ndim == 1 and arr.size == 4:
        x0, x1, y0, y1 = arr
        if not (x1 > x0 and y1 > y0):
            raise DomainError(f"empty rectangle {tuple(arr)}")
        inside = np.ones((nx, ny), bool)
        poly = None
    elif arr.ndim == 2 and arr.shape[1] == 2 and arr.shape[0] >= 3:
        x0, y0 = arr.min(axis=0)
        x1, y1 = arr.max(axis=0)
        poly = arr
        inside = None
    else:
        raise DomainError("domain must be (x0, x1, y0, y1) or an (k, 2) vertex list")
    dx, dy = (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1)
    xs, ys = x0 + dx * np.arange(nx), y0 + dy * np.arange(ny)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    if poly is not None:
        from matplotlib.path import Path

        pad = 1e-9 * max(dx, dy)
        path = Path(poly)
        pts = np.column_stack([xx.ravel(), yy.ravel()])
        # accept nodes on the polygon edges whichever the winding
        inside = (path.contains_points(pts, radius=pad) | path.contains_points(pts, radius=-pad))
        inside = inside.reshape(nx, ny)
    return (x0, y0), (dx, dy), xx, yy, inside


def _structure(inside):
    nx, ny = inside.shape
    cell = inside[:-1, :-1]
    act_l = cell & inside[1:, :-1] & inside[1:, 1:]
    act_u = cell & inside[:-1, 1:] & inside[1:, 1:]
    act_l = act_l & inside[:-1, :-1]
    free = np.zeros_like(inside)
    # a node is free when all six incident triangles are active
    core = (act_l[1:, 1:] & act_u[1:, 1:] & act_l[:-1, :-1] & act_u[:-1, :-1]
            & act_l[:-1, 1:] & act_u[1:, :-1])
    free[1:-1, 1:-1] = core
    return act_l, act_u, free


def _harmonic_fill(h, free):
    """Discrete 5-point harmonic interpolation of the non-free values into ``free``."""
    idx = -np.ones(free.shape, np.int64)
    fi, fj = np.nonzero(free)
    m = fi.size
    if m == 0:
        return h
    idx[fi, fj] = np.arange(m)
    rows, cols, vals = [np.arange(m)], [np.arange(m)], [np.full(m, 4.0)]
    rhs = np.zeros(m)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = fi + di, fj + dj
        k = idx[ni, nj]
        inner = k >= 0
        rows.append(np.arange(m)[inner])
        cols.append(k[inner])
        vals.append(-np.ones(inner.sum()))
        rhs[~inner] += h[ni[~inner], nj[~inner]]
    a = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(m, m))
    out = h.copy()
    out[fi, fj] = spla.spsolve(a.tocsc(), rhs)
    return out


def _slopes_ok(model, h, act_l, act_u, dx, dy):
    s_l, t_l, s_u, t_u = _kernels.triangle_slopes(h, dx, dy)
    with np.errstate(all="ignore"):
        ok_l = model.margin(s_l, t_l) > 0
        ok_u = model.margin(s_u, t_u) > 0
    return bool(np.all(ok_l | ~act_l) and np.all(ok_u | ~act_u))


def _frozen_nodes(model, h, act_l, act_u, dx, dy, inside):
    s_l, t_l, s_u, t_u = _kernels.triangle_slopes(h, dx, dy)
    with np.errstate(all="ignore"):
        near_l = act_l & ~(model.margin(s_l, t_l) >= FROZEN_MARGIN)
        near_u = act_u & ~(model.margin(s_u, t_u) >= FROZEN_MARGIN)
    near = np.zeros(inside.shape, bool)
    for tri, corners in ((near_l, ((0, 0), (1, 0), (1, 1))), (near_u, ((0, 0), (0, 1), (1, 1)))):
        for di, dj in corners:
            near[di:di + tri.shape[0], dj:dj + tri.shape[1]] |= tri
    return near & inside


def _colour_order(free):
    fi, fj = np.nonzero(free)
    colour = (fi + fj) % 3
    order = np.lexsort((fj, fi, colour))
    start = np.searchsorted(colour[order], np.arange(4)).astype(np.int64)
    return fi[order].astype(np.int64), fj[order].astype(np.int64), start


def minimize_variational(model: SurfaceTensionModel, domain, boundary_h, n, tol: float = 1e-9,
                         max_iters: int = 20000, backend=None, initial=None) -> GridField:
    """Minimise ``sum_T area(T) sigma(grad h|_T)`` with Dirichlet data ``boundary_h``.

    Returns a :class:`GridField` whose ``meta`` carries ``converged``, ``sweeps``,
    ``energies`` (one entry per sweep, starting with the initial field),
    ``max_update`` and ``backend``.  A run that hits ``max_iters`` returns the
    best field with ``converged=False``.

    ``initial`` (optional callable ``(X, Y) -> h``) replaces the harmonic
    interpolant on the free nodes; it must satisfy the slope constraint.
    """
    require_sigma(model)
    if model.kernel_id < 0:
        raise CapabilityError(f"no minimiser kernel for model {model.spec}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    backend = _accel.resolve_backend(backend)
    origin, (dx, dy), xx, yy, inside = _domain_nodes(domain, n)
    act_l, act_u, free = _structure(inside)
    fixed = inside & ~free

    h = np.zeros(inside.shape)
    h[fixed] = np.asarray(boundary_h(xx[fixed], yy[fixed]), float) * np.ones(fixed.sum())
    if not np.all(np.isfinite(h[fixed])):
        raise DomainError("boundary data is not finite")

    if initial is not None:
        h[free] = np.asarray(initial(xx[free], yy[free]), float) * np.ones(free.sum())
        if not _slopes_ok(model, h, act_l, act_u, dx, dy):
            raise InfeasibleError("supplied initial field violates the slope constraint")
    else:
        harm = _harmonic_fill(h, free)
        h = harm
        if not _slopes_ok(model, h, act_l, act_u, dx, dy):
            s0, t0 = model.center_slope
            c0 = float(np.mean(harm[fixed] - s0 * xx[fixed] - t0 * yy[fixed]))
            plane = s0 * xx + t0 * yy + c0
            for k in range(1, PROJECTION_STEPS + 1):
                lam = 1.0 - k / PROJECTION_STEPS
                h = harm.copy()
                h[free] = lam * harm[free] + (1.0 - lam) * plane[free]
                if _slopes_ok(model, h, act_l, act_u, dx, dy):
                    break
            else:
                raise InfeasibleError(
                    f"no constraint-satisfying initial field for {model.spec} after "
                    f"{PROJECTION_STEPS} projection steps")

    kid, kp = int(model.kernel_id), float(model.kernel_param)
    energies = [_kernels.total_energy(h, act_l, act_u, dx, dy, kid, kp)]
    ni, nj, start = _colour_order(free)
    prev = np.zeros(inside.shape)
    sweep = _kernels.sweep_numba if backend == "numba" else _kernels.sweep_numpy
    converged, sweeps, biggest = ni.size == 0, 0, 0.0
    while not converged and sweeps < max_iters:
        biggest = sweep(h, ni, nj, start, prev, act_l, act_u, dx, dy, kid, kp, tol)
        sweeps += 1
        energies.append(_kernels.total_energy(h, act_l, act_u, dx, dy, kid, kp))
        converged = biggest < tol

    mask = np.full(inside.shape, LIQUID, np.int8)
    mask[_frozen_nodes(model, h, act_l, act_u, dx, dy, inside)] = FROZEN
    mask[~inside] = OUTSIDE
    values = np.where(inside, h, np.nan)
    meta = {"converged": bool(converged), "sweeps": sweeps, "energies": energies,
            "max_update": float(biggest), "backend": backend, "model": model.spec,
            "free_nodes": int(ni.size)}
    return GridField(origin, (dx, dy), values, mask, meta)
