"""Coordinate-descent sweeps for the triangulated functional.

Each grid cell ``(i, j)`` is split along its ``(i, j)-(i+1, j+1)`` diagonal
into a lower triangle ``L = {(i,j), (i+1,j), (i+1,j+1)}`` and an upper
triangle ``U = {(i,j), (i,j+1), (i+1,j+1)}``.  A node touches six triangles.

Free nodes are coloured ``(i + j) mod 3``: nodes of one colour never share a
triangle, so a colour class can be relaxed simultaneously and the result is
the same as relaxing its nodes one after the other.  Both backends visit the
colours in order ``0, 1, 2`` and run the same bracket + golden-section search
on every node.  Where the two ``pow``/``log`` implementations round differently
a golden-section comparison can flip, so the backends agree to the solver
accuracy rather than bit for bit.

Kernel ids: 0 trivial_example, 1 young_tableaux, 2 enharmonic, 3 p_laplace.
"""
import math

import numpy as np

from .._accel import njit

GOLDEN = 0.6180339887498949
MAX_EXPAND = 60


# -- numba path --------------------------------------------------------------

@njit
def _sigma_nb(kid, p, s, t):
    if kid == 0:
        if s > 0.0 and t > 0.0:
            return (2.0 / 3.0) * (1.0 / (s * s) + 1.0 / (t * t))
        return np.inf
    if kid == 1:
        if -0.5 < s < 0.5 and t > 0.0:
            return -(1.0 + math.log(math.cos(math.pi * s) / (math.pi * t))) * t
        return np.inf
    if kid == 2:
        if s > 0.0 and t > 0.0:
            return -math.log(s * t)
        return np.inf
    return (s * s + t * t) ** (0.5 * p)


@njit
def _node_energy_nb(h, i, j, act_l, act_u, dx, dy, kid, p):
    e = 0.0
    # cell (i, j): both triangles
    if act_l[i, j]:
        e += _sigma_nb(kid, p, (h[i + 1, j] - h[i, j]) / dx, (h[i + 1, j + 1] - h[i + 1, j]) / dy)
    if act_u[i, j]:
        e += _sigma_nb(kid, p, (h[i + 1, j + 1] - h[i, j + 1]) / dx, (h[i, j + 1] - h[i, j]) / dy)
    # cell (i-1, j-1): both triangles
    if act_l[i - 1, j - 1]:
        e += _sigma_nb(kid, p, (h[i, j - 1] - h[i - 1, j - 1]) / dx, (h[i, j] - h[i, j - 1]) / dy)
    if act_u[i - 1, j - 1]:
        e += _sigma_nb(kid, p, (h[i, j] - h[i - 1, j]) / dx, (h[i - 1, j] - h[i - 1, j - 1]) / dy)
    # cell (i-1, j): lower only
    if act_l[i - 1, j]:
        e += _sigma_nb(kid, p, (h[i, j] - h[i - 1, j]) / dx, (h[i, j + 1] - h[i, j]) / dy)
    # cell (i, j-1): upper only
    if act_u[i, j - 1]:
        e += _sigma_nb(kid, p, (h[i + 1, j] - h[i, j]) / dx, (h[i, j] - h[i, j - 1]) / dy)
    return e


@njit
def _trial_nb(h, i, j, val, act_l, act_u, dx, dy, kid, p):
    h[i, j] = val
    return _node_energy_nb(h, i, j, act_l, act_u, dx, dy, kid, p)


@njit
def sweep_numba(h, nodes_i, nodes_j, color_start, prev, act_l, act_u, dx, dy, kid, p, tol):
    """One colour-ordered sweep; returns the largest accepted update."""
    biggest = 0.0
    gtol = 0.1 * tol
    for c in range(3):
        for k in range(color_start[c], color_start[c + 1]):
            i, j = nodes_i[k], nodes_j[k]
            h0 = h[i, j]
            f0 = _trial_nb(h, i, j, h0, act_l, act_u, dx, dy, kid, p)
            w = max(4.0 * prev[i, j], 10.0 * tol)
            lo, mid, hi, fmid = h0 - w, h0, h0 + w, f0
            fa = _trial_nb(h, i, j, lo, act_l, act_u, dx, dy, kid, p)
            fc = _trial_nb(h, i, j, hi, act_l, act_u, dx, dy, kid, p)
            left = fa < f0
            right = (not left) and fc < f0
            if left:
                mid, fmid, hi = lo, fa, h0
            elif right:
                mid, fmid, lo = hi, fc, h0
            if left or right:
                step = w
                for _ in range(MAX_EXPAND):
                    step *= 2.0
                    new = mid - step if left else mid + step
                    fnew = _trial_nb(h, i, j, new, act_l, act_u, dx, dy, kid, p)
                    if fnew < fmid:
                        if left:
                            hi = mid
                        else:
                            lo = mid
                        mid, fmid = new, fnew
                    else:
                        if left:
                            lo = new
                        else:
                            hi = new
                        break
            x1 = hi - GOLDEN * (hi - lo)
            x2 = lo + GOLDEN * (hi - lo)
            f1 = _trial_nb(h, i, j, x1, act_l, act_u, dx, dy, kid, p)
            f2 = _trial_nb(h, i, j, x2, act_l, act_u, dx, dy, kid, p)
            while hi - lo > gtol:
                if f1 < f2:
                    hi, x2, f2 = x2, x1, f1
                    x1 = hi - GOLDEN * (hi - lo)
                    f1 = _trial_nb(h, i, j, x1, act_l, act_u, dx, dy, kid, p)
                else:
                    lo, x1, f1 = x1, x2, f2
                    x2 = lo + GOLDEN * (hi - lo)
                    f2 = _trial_nb(h, i, j, x2, act_l, act_u, dx, dy, kid, p)
            if f1 <= f2:
                xb, fb = x1, f1
            else:
                xb, fb = x2, f2
            if fb < f0:
                h[i, j] = xb
                d = abs(xb - h0)
            else:
                h[i, j] = h0
                d = 0.0
            prev[i, j] = d
            if d > biggest:
                biggest = d
    return biggest


# -- numpy path --------------------------------------------------------------

def sigma_numpy(kid, p, s, t):
    """Vectorised surface tension; ``inf`` off the open slope domain."""
    with np.errstate(all="ignore"):
        if kid == 0:
            ok = (s > 0) & (t > 0)
            val = (2.0 / 3.0) * (1.0 / (s * s) + 1.0 / (t * t))
        elif kid == 1:
            ok = (s > -0.5) & (s < 0.5) & (t > 0)
            val = -(1.0 + np.log(np.cos(np.pi * s) / (np.pi * t))) * t
        elif kid == 2:
            ok = (s > 0) & (t > 0)
            val = -np.log(s * t)
        else:
            return (s * s + t * t) ** (0.5 * p)
    return np.where(ok, val, np.inf)


def triangle_slopes(h, dx, dy):
    """Slopes ``(sL, tL, sU, tU)`` of every cell's two triangles."""
    s_l = (h[1:, :-1] - h[:-1, :-1]) / dx
    t_l = (h[1:, 1:] - h[1:, :-1]) / dy
    s_u = (h[1:, 1:] - h[:-1, 1:]) / dx
    t_u = (h[:-1, 1:] - h[:-1, :-1]) / dy
    return s_l, t_l, s_u, t_u


def total_energy(h, act_l, act_u, dx, dy, kid, p):
    s_l, t_l, s_u, t_u = triangle_slopes(h, dx, dy)
    e_l = np.where(act_l, sigma_numpy(kid, p, s_l, t_l), 0.0)
    e_u = np.where(act_u, sigma_numpy(kid, p, s_u, t_u), 0.0)
    return 0.5 * dx * dy * float(e_l.sum() + e_u.sum())


def _node_energy_np(h, ii, jj, act_l, act_u, dx, dy, kid, p):
    im, jm, ip, jp = ii - 1, jj - 1, ii + 1, jj + 1

    def tri(act, s, t):
        return np.where(act, sigma_numpy(kid, p, s, t), 0.0)

    c = h[ii, jj]
    e = tri(act_l[ii, jj], (h[ip, jj] - c) / dx, (h[ip, jp] - h[ip, jj]) / dy)
    e = e + tri(act_u[ii, jj], (h[ip, jp] - h[ii, jp]) / dx, (h[ii, jp] - c) / dy)
    e = e + tri(act_l[im, jm], (h[ii, jm] - h[im, jm]) / dx, (c - h[ii, jm]) / dy)
    e = e + tri(act_u[im, jm], (c - h[im, jj]) / dx, (h[im, jj] - h[im, jm]) / dy)
    e = e + tri(act_l[im, jj], (c - h[im, jj]) / dx, (h[ii, jp] - c) / dy)
    e = e + tri(act_u[ii, jm], (h[ip, jj] - c) / dx, (c - h[ii, jm]) / dy)
    return e


def sweep_numpy(h, nodes_i, nodes_j, color_start, prev, act_l, act_u, dx, dy, kid, p, tol):
    """Vectorised counterpart of :func:`sweep_numba` (one colour class at a time)."""
    biggest = 0.0
    gtol = 0.1 * tol
    for c in range(3):
        ii = nodes_i[color_start[c]:color_start[c + 1]]
        jj = nodes_j[color_start[c]:color_start[c + 1]]
        if ii.size == 0:
            continue

        def energy(vals):
            h[ii, jj] = vals
            return _node_energy_np(h, ii, jj, act_l, act_u, dx, dy, kid, p)

        h0 = h[ii, jj].copy()
        f0 = energy(h0)
        w = np.maximum(4.0 * prev[ii, jj], 10.0 * tol)
        lo, mid, hi, fmid = h0 - w, h0.copy(), h0 + w, f0.copy()
        fa, fc = energy(lo), energy(hi)
        left = fa < f0
        right = ~left & (fc < f0)
        mid[left], fmid[left], hi[left] = lo[left], fa[left], h0[left]
        mid[right], fmid[right], lo[right] = hi[right], fc[right], h0[right]

        step = w.copy()
        active = left | right
        for _ in range(MAX_EXPAND):
            if not active.any():
                break
            step = np.where(active, step * 2.0, step)
            new = np.where(left, mid - step, mid + step)
            fnew = energy(np.where(active, new, mid))
            grow = active & (fnew < fmid)
            stop = active & ~grow
            lo = np.where(stop & left, new, np.where(grow & right, mid, lo))
            hi = np.where(stop & right, new, np.where(grow & left, mid, hi))
            mid = np.where(grow, new, mid)
            fmid = np.where(grow, fnew, fmid)
            active = grow

        x1 = hi - GOLDEN * (hi - lo)
        x2 = lo + GOLDEN * (hi - lo)
        f1, f2 = energy(x1), energy(x2)
        active = hi - lo > gtol
        while active.any():
            shrink_hi = active & (f1 < f2)
            shrink_lo = active & ~(f1 < f2)
            hi = np.where(shrink_hi, x2, hi)
            lo = np.where(shrink_lo, x1, lo)
            x2n = np.where(shrink_hi, x1, x2)
            x1n = np.where(shrink_lo, x2, x1)
            f2 = np.where(shrink_hi, f1, f2)
            f1 = np.where(shrink_lo, f2, f1)
            x1n = np.where(shrink_hi, hi - GOLDEN * (hi - lo), x1n)
            x2n = np.where(shrink_lo, lo + GOLDEN * (hi - lo), x2n)
            probe = np.where(shrink_hi, x1n, np.where(shrink_lo, x2n, x1n))
            fp = energy(probe)
            f1 = np.where(shrink_hi, fp, f1)
            f2 = np.where(shrink_lo, fp, f2)
            x1, x2 = x1n, x2n
            active = hi - lo > gtol

        take1 = f1 <= f2
        xb = np.where(take1, x1, x2)
        fb = np.where(take1, f1, f2)
        accept = fb < f0
        final = np.where(accept, xb, h0)
        h[ii, jj] = final
        d = np.abs(final - h0)
        prev[ii, jj] = d
        if d.size:
            biggest = max(biggest, float(d.max()))
    return biggest
