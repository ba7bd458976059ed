"""Fully worked limit shapes and elementary solutions.

* Aztec diamond: four frozen facets, liquid disk ``x^2 + y^2 < 1/2``.
* L-shaped Aztec region: a degree-two cover ``z(u)`` of the dimer chart whose
  free parameters are fixed by requiring ``G_u = 0`` at the branch point.
* Enharmonic elementary solutions, separated p-Laplace modes and the complex
  Burgers equation for random Young tableaux.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .envelope import TangentPlaneField
from .errors import ConvergenceError, DegenerateError, DomainError
from .halfplane import HarmonicFn, PiecewiseBoundary, deriv as hp_deriv
from .oracle.grid import GridField

# -- Aztec diamond -----------------------------------------------------------

AZTEC_JUMPS = (-1.0, 0.0, 1.0)
AZTEC_S = (0.0, 2.0, 0.0, -2.0)
AZTEC_T = (2.0, 0.0, -2.0, 0.0)
AZTEC_G = (1.0, -1.0, 1.0, -1.0)


def aztec_boundaries():
    return tuple(PiecewiseBoundary(AZTEC_JUMPS, vals) for vals in (AZTEC_S, AZTEC_T, AZTEC_G))


def aztec_field() -> TangentPlaneField:
    s, t, g = aztec_boundaries()
    return TangentPlaneField(
        HarmonicFn.piecewise(s, "s"),
        HarmonicFn.piecewise(t, "t"),
        HarmonicFn.piecewise(g, "G"),
        HarmonicFn.constant(1.0, "psi"),
        label="aztec",
    )


def aztec_facet_planes():
    """Facet planes ``(s, t, G)`` in boundary-interval order ``z<-1, -1<z<0, 0<z<1, z>1``."""
    return tuple(zip(AZTEC_S, AZTEC_T, AZTEC_G))


def aztec_closed_form(z):
    """Tangency point ``(x, y)`` of parameter ``z`` in closed form."""
    z = np.asarray(z, complex)
    if np.any(z.imag < 0):
        raise DomainError("aztec_closed_form needs Im z >= 0")
    a2 = np.abs(z) ** 2
    den = 2.0 * (1.0 + a2)
    x, y = (1.0 - 2.0 * z.real - a2) / den, (1.0 + 2.0 * z.real - a2) / den
    return (x, y) if x.ndim else (float(x), float(y))


def aztec_inverse(x, y):
    """Parameter ``z`` of the liquid point ``(x, y)``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    disc = 1.0 - 2.0 * (x * x + y * y)
    if np.any(~(disc > 0)):
        raise DomainError("point is outside the liquid disk x^2 + y^2 < 1/2")
    den = 1.0 + x + y
    if np.any(den == 0):
        raise DomainError("1 + x + y vanishes")
    z = (y - x + 1j * np.sqrt(disc)) / den
    return z if z.ndim else complex(z)


def aztec_height(x, y):
    """Height of the Aztec limit shape on the liquid disk."""
    z = aztec_inverse(x, y)
    s, t, g = aztec_boundaries()
    from .halfplane import extend

    h = extend(s, z) * np.asarray(x) + extend(t, z) * np.asarray(y) + extend(g, z)
    return h if np.ndim(h) else float(h)


# -- L-shaped region ---------------------------------------------------------

LSHAPE_S = (0.0, 2.0, 0.0, -2.0, 0.0, 2.0, 0.0, -2.0)
LSHAPE_T = (2.0, 0.0, -2.0, 0.0, 2.0, 0.0, -2.0, 0.0)


def lshape_g_values(a: float):
    return (1.0, -1.0, 1.0, 4 * a - 1, 8 * a - 3, 4 * a - 1, 1.0, -1.0)


@dataclass(frozen=True)
class LShapeParams:
    a: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    A: float
    residual: float = float("nan")
    iterations: int = 0

    @property
    def points(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a5, self.a6)

    @property
    def cuts(self):
        return (self.a1, self.a2, self.a3, 0.0, self.a4, self.a5, self.a6)

    @property
    def branch_point(self) -> complex:
        """Critical point of ``z(u)`` in the upper half-plane, ``u^2 = a2 a5``."""
        return 1j * math.sqrt(-self.a2 * self.a5)

    def z_of_u(self, u):
        u = np.asarray(u, complex)
        return self.A * (u - self.a2) * (u - self.a5) / u

    def interpolation_residual(self) -> float:
        targets = (-1.0, 0.0, 1.0, -1.0, 0.0, 1.0)
        got = self.z_of_u(np.array(self.points, complex))
        return float(np.max(np.abs(got - np.array(targets))))

    def g_boundary(self) -> PiecewiseBoundary:
        return PiecewiseBoundary(self.cuts, lshape_g_values(self.a))

    def g_u_at_branch(self) -> complex:
        return complex(hp_deriv(self.g_boundary(), self.branch_point))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["branch_point"] = [self.branch_point.real, self.branch_point.imag]
        d["g_u_at_branch"] = abs(self.g_u_at_branch())
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "LShapeParams":
        keys = ("a", "a1", "a2", "a3", "a4", "a5", "a6", "A", "residual", "iterations")
        return cls(**{k: d[k] for k in keys if k in d})


def _cover_from(a1: float, a2: float):
    """Remaining cover parameters ``(A, a4, a5, a6)`` from ``(a1, a2)`` with ``a3 = -1``.

    From ``z(-1) = 1`` and ``z(a1) = -1``; the other two preimages follow from
    Vieta on ``z(u) = -1`` and ``z(u) = 1``.
    """
    den = a2 - 2.0 * a1 - a1 * a2
    if den == 0:
        return None
    a5 = a1 * (1.0 + 2.0 * a2 - a1) / den
    if not (a5 > 0 and math.isfinite(a5)):
        return None
    big_a = -1.0 / ((1.0 + a2) * (1.0 + a5))
    return big_a, a2 * a5 / a1, a5, -a2 * a5


def _lshape_params(a, a1, a2, residual=float("nan"), iterations=0):
    cover = _cover_from(a1, a2)
    if cover is None:
        return None
    big_a, a4, a5, a6 = cover
    if not (a1 < a2 < -1.0 < 0.0 < a4 < a5 < a6 and big_a > 0):
        return None
    return LShapeParams(a, a1, a2, -1.0, a4, a5, a6, big_a, residual, iterations)


def _branch_condition(a, a1, a2):
    """Scaled branch condition ``2 pi i |u*| G_u(u*)`` as a real 2-vector, or None if infeasible.

    The factor ``|u*|`` makes the residual scale invariant, so configurations
    drifting off to infinity do not look like roots.
    """
    p = _lshape_params(a, a1, a2)
    if p is None:
        return None
    u = p.branch_point
    steps = -np.diff(np.asarray(lshape_g_values(a)))
    val = abs(u) * complex(np.sum(steps / (u - np.asarray(p.cuts))))
    return np.array([val.real, val.imag])


RUNAWAY_A1 = -1e6


def _to_ordered(y):
    """Map unconstrained ``(y1, y2)`` to ``a1 < a2 < -1``."""
    gap = math.exp(y[0])
    frac = 1.0 / (1.0 + math.exp(-y[1]))
    a1 = -1.0 - gap
    return a1, a1 + frac * gap


def lshape_solve(a: float, tol: float = 1e-14, max_iter: int = 100, scan: int = 80) -> LShapeParams:
    """Cover parameters of the L-shape for facet intercept parameter ``a``.

    A coarse scan over ``a1 < a2 < -1`` seeds a damped Newton iteration on the
    two real equations ``Re, Im G_u(u*) = 0``.  Both run in the unconstrained
    coordinates ``y1 = log(-1 - a1)`` and ``y2 = logit((a2 - a1)/(-1 - a1))``,
    which keep the ordering automatically and cope with the wide range of
    scales ``a1`` takes across ``a``.
    """
    a = float(a)
    if not (0.0 <= a < 0.5):
        raise DomainError(f"a={a} is outside the feasible range 0 <= a < 1/2")

    def residual(y):
        try:
            return _branch_condition(a, *_to_ordered(y))
        except OverflowError:
            return None

    best, guess = math.inf, None
    # a1 from about -1.5 to -1000
    for y1 in np.linspace(math.log(0.5), math.log(1000.0), scan):
        for y2 in np.linspace(-6.0, 6.0, scan):
            f = residual((y1, y2))
            if f is not None and np.hypot(*f) < best:
                best, guess = float(np.hypot(*f)), np.array([y1, y2])
    if guess is None:
        raise ConvergenceError(f"no feasible (a1, a2) found for a={a}")

    y, fy = guess, residual(guess)
    norm = float(np.hypot(*fy))
    it = 0
    while norm > tol and it < max_iter:
        it += 1
        jac = np.empty((2, 2))
        for k in range(2):
            hk = 1e-7 * max(1.0, abs(y[k]))
            yp, ym = y.copy(), y.copy()
            yp[k] += hk
            ym[k] -= hk
            fp, fm = residual(yp), residual(ym)
            if fp is None or fm is None:
                raise ConvergenceError(f"Newton left the feasible region for a={a}", residuals=norm)
            jac[:, k] = (fp - fm) / (2 * hk)
        try:
            step = np.linalg.solve(jac, -fy)
        except np.linalg.LinAlgError:
            raise ConvergenceError(f"singular Jacobian for a={a}", residuals=norm) from None
        lam = 1.0
        while lam > 1e-10:
            trial = y + lam * step
            ft = residual(trial)
            if ft is not None and np.hypot(*ft) < norm:
                y, fy, norm = trial, ft, float(np.hypot(*ft))
                break
            lam *= 0.5
        else:
            break
    a1, a2 = _to_ordered(y)
    if a1 < RUNAWAY_A1:
        # the preimage of z = -1 merges with u = infinity: facet P1 has collapsed
        raise ConvergenceError(
            f"no eight-facet solution for a={a}: iteration ran off to a1={a1:.3e}",
            residuals={"a1": a1, "a2": a2, "scaled_residual": norm})
    p = _lshape_params(a, a1, a2)
    g_u = abs(p.g_u_at_branch())
    if not (norm <= max(1e-10, 10 * tol) and g_u <= 1e-10):
        raise ConvergenceError(
            f"branch condition not met for a={a}: |G_u|={g_u:.3e}, a1={a1:.6g}, a2={a2:.6g}",
            residuals={"g_u": g_u, "a1": a1, "a2": a2})
    return _lshape_params(a, a1, a2, residual=g_u, iterations=it)


def lshape_field(p: LShapeParams, a: float | None = None) -> TangentPlaneField:
    """Moving-plane field on the ``u`` upper half-plane for solved parameters."""
    a = p.a if a is None else float(a)
    if a != p.a:
        raise DomainError(f"parameters were solved for a={p.a}, not a={a}")
    if p.interpolation_residual() > 1e-8:
        raise DomainError("inconsistent L-shape parameters: z(u) misses its interpolation targets")
    cuts = p.cuts
    return TangentPlaneField(
        HarmonicFn.piecewise(PiecewiseBoundary(cuts, LSHAPE_S), "s"),
        HarmonicFn.piecewise(PiecewiseBoundary(cuts, LSHAPE_T), "t"),
        HarmonicFn.piecewise(PiecewiseBoundary(cuts, lshape_g_values(a)), "G"),
        HarmonicFn.constant(1.0, "psi"),
        label=f"lshape(a={a})",
    )


# -- enharmonic elementary solutions -----------------------------------------

@dataclass(frozen=True)
class ElementarySolutionEnh:
    a: float
    b: float

    def __post_init__(self):
        if abs(self.a**2 + self.b**2 + self.a + self.b) > 1e-12:
            raise DomainError(f"(a, b)=({self.a}, {self.b}) is not on a^2 + b^2 + a + b = 0")
        if self.a == -1:
            raise DomainError("a = -1 is excluded")

    @classmethod
    def from_angle(cls, theta: float) -> "ElementarySolutionEnh":
        r = 1.0 / math.sqrt(2.0)
        return cls(-0.5 + r * math.cos(theta), -0.5 + r * math.sin(theta))


def enharmonic_solution(e: ElementarySolutionEnh, u, v):
    """Parametric point ``(x, y, h)`` of the elementary solution at ``(u, v)``.

    The slope there is ``(e^u, e^-v)``.
    """
    a, b = e.a, e.b
    u, v = np.asarray(u, float), np.asarray(v, float)
    x = np.exp(a * u + b * v)
    y = -(b / (a + 1.0)) * np.exp((a + 1.0) * u + (b + 1.0) * v)
    h = ((a - b) / (a + 1.0)) * np.exp((a + 1.0) * u + b * v)
    return x, y, h


def enharmonic_parameters(e: ElementarySolutionEnh, x, y):
    """Invert ``(u, v) -> (x, y)``; needs ``a != b`` and ``y`` on the image side."""
    a, b = e.a, e.b
    if abs(a - b) < 1e-12 or b == 0:
        raise DegenerateError("elementary solution is not locally invertible (a == b or b == 0)")
    c = -b / (a + 1.0)
    ly = np.log(np.asarray(y, float) / c)
    lx = np.log(np.asarray(x, float))
    u = ((b + 1.0) * lx - b * ly) / (a - b)
    v = (a * ly - (a + 1.0) * lx) / (a - b)
    return u, v


def enharmonic_grid(e: ElementarySolutionEnh, centre=(0.0, 0.0), half_width=0.005, n=21) -> GridField:
    """Height of an elementary solution sampled on a regular ``(x, y)`` patch.

    The patch is centred at the image of the parameter ``centre``.
    """
    x0, y0, _ = enharmonic_solution(e, *centre)
    x0, y0 = float(x0), float(y0)
    wx, wy = half_width * abs(x0), half_width * abs(y0)

    def height(xx, yy):
        u, v = enharmonic_parameters(e, xx, yy)
        return enharmonic_solution(e, u, v)[2]

    return GridField.sample(height, (x0 - wx, x0 + wx), (y0 - wy, y0 + wy), n)


# -- p-Laplace separated modes -----------------------------------------------

class PLaplaceMode:
    """``w(R, theta) = A(R) B(theta)`` solving ``(-Laplace + C/R^2) w = 0``.

    ``B = C1 e^{i nu theta} + C2 e^{-i nu theta}`` with ``nu = sqrt(c)`` and
    ``A = c1 R^lam + c2 R^-lam`` with ``lam = sqrt(C + c)`` (complex roots are
    allowed).  The chart point is ``z = R e^{-i theta}``.
    """

    def __init__(self, p: float, c: float, coeffs):
        if not p > 1:
            raise DomainError(f"p_laplace requires p > 1, got p={p}")
        self.p, self.c = float(p), float(c)
        self.C = (p - 2.0) ** 2 / (4.0 * (p - 1.0))
        self.C1, self.C2, self.c1, self.c2 = (complex(k) for k in coeffs)
        self.nu = cmath.sqrt(self.c)
        self.lam = cmath.sqrt(self.C + self.c)

    def __call__(self, R, theta):
        R = np.asarray(R, float)
        if np.any(~(R > 0)):
            raise DomainError("R must be positive")
        theta = np.asarray(theta, float)
        b = self.C1 * np.exp(1j * self.nu * theta) + self.C2 * np.exp(-1j * self.nu * theta)
        a = self.c1 * R**self.lam + self.c2 * R ** (-self.lam)
        return a * b

    def at(self, z):
        z = np.asarray(z, complex)
        return self(np.abs(z), -np.angle(z))

    def potential(self, z):
        return self.C / np.abs(np.asarray(z, complex)) ** 2


def plaplace_mode(p: float, c: float, coeffs) -> PLaplaceMode:
    return PLaplaceMode(p, c, coeffs)


# -- Young tableaux: complex Burgers -----------------------------------------

@dataclass(frozen=True)
class BurgersRoot:
    z: complex
    s: float
    t: float


def _as_rational(f):
    if isinstance(f, np.poly1d):
        return f, np.poly1d([1.0])
    if isinstance(f, tuple) and len(f) == 2:
        return np.poly1d(np.asarray(f[0], float)), np.poly1d(np.asarray(f[1], float))
    return np.poly1d(np.asarray(f, float)), np.poly1d([1.0])


def burgers_solve(f, x: float, y: float) -> BurgersRoot:
    """Root ``z`` in the upper half-plane of ``y + x/z + f(z) = 0``.

    ``f`` is a polynomial (coefficients, highest degree first, or ``np.poly1d``)
    or a ``(numerator, denominator)`` pair.  Among several roots in the upper
    half-plane the one with the largest imaginary part is returned.
    """
    num, den = _as_rational(f)
    z_poly = np.poly1d([1.0, 0.0])
    poly = y * z_poly * den + x * den + z_poly * num
    cands = []
    for r in np.roots(poly.coeffs):
        scale = max(1.0, abs(r))
        if r.imag <= 1e-10 * scale or abs(den(r)) < 1e-12 * scale or abs(r) < 1e-14:
            continue
        for _ in range(3):
            g = y + x / r + num(r) / den(r)
            dg = -x / r**2 + (num.deriv()(r) * den(r) - num(r) * den.deriv()(r)) / den(r) ** 2
            if dg == 0:
                break
            r = r - g / dg
        if r.imag > 0:
            cands.append(complex(r))
    if not cands:
        raise DegenerateError(f"no root in the upper half-plane at (x, y)=({x}, {y}): frozen point")
    z = max(cands, key=lambda w: w.imag)
    return BurgersRoot(z, -math.atan2(z.real, z.imag) / math.pi, z.imag / math.pi)
