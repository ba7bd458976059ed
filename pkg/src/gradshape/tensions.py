"""Surface tensions and their intrinsic charts.

A :class:`SurfaceTensionModel` bundles a convex integrand ``sigma(s, t)`` on a
slope domain ``N`` together with an optional closed-form intrinsic chart
``z(s, t)``.  Everything here is vectorised: scalars and numpy arrays are both
accepted wherever a slope or a chart point is expected.

Built-in models::

    trivial_example   sigma = (2/3)(s^-2 + t^-2)          on (0, inf)^2
    young_tableaux    sigma = -(1 + log(cos(pi s)/(pi t))) t on (-1/2, 1/2) x (0, inf)
    enharmonic        sigma = -log(st)                    on (0, inf)^2
    p_laplace:p=P     sigma = (s^2 + t^2)^(P/2)           on R^2
    dimer_square      chart only (normalised sigma/pi)    on |s| + |t| <= 2
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import CapabilityError, DomainError

BOUNDARY_TOL = 1e-12

BUILTIN_NAMES = ("trivial_example", "young_tableaux", "enharmonic", "p_laplace", "dimer_square")


class Slope(NamedTuple):
    s: float
    t: float


class HessianTriple(NamedTuple):
    sigma_ss: float
    sigma_st: float
    sigma_tt: float

    @property
    def det(self):
        return self.sigma_ss * self.sigma_tt - self.sigma_st**2


class Membership(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Chart:
    """Closed-form intrinsic coordinate of a model.

    ``inverse(z) -> (s, t)`` and ``derivs(z) -> (s_z, t_z)`` use the Wirtinger
    derivative ``d/dz = (d/du - i d/dv) / 2``.
    """

    forward: Callable
    inverse: Callable
    derivs: Callable
    psi: Callable
    psi_z: Callable
    contains: Callable
    potential: Optional[Callable] = None
    description: str = ""


@dataclass(frozen=True)
class SurfaceTensionModel:
    name: str
    params: tuple
    margin: Callable
    sigma: Optional[Callable] = None
    gradient: Optional[Callable] = None
    hessian: Optional[Callable] = None
    chart: Optional[Chart] = None
    trivial_potential: bool = False
    constant_kappa: bool = False
    center_slope: tuple = (0.0, 0.0)
    # integer tag and parameter for the compiled minimizer kernels; -1 = unsupported
    kernel_id: int = -1
    kernel_param: float = 0.0
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def has_closed_sigma(self) -> bool:
        return self.sigma is not None

    @property
    def has_closed_chart(self) -> bool:
        return self.chart is not None

    @property
    def spec(self) -> str:
        if self.name == "p_laplace":
            return f"p_laplace:p={self.params[0]!r}"
        return self.name

    def __repr__(self):
        return f"SurfaceTensionModel({self.spec!r})"


def _re_im(z):
    z = np.asarray(z, dtype=complex)
    return z.real, z.imag


# -- trivial example ---------------------------------------------------------

def _trivial_example() -> SurfaceTensionModel:
    def sigma(s, t):
        return (2.0 / 3.0) * (s**-2.0 + t**-2.0)

    def gradient(s, t):
        return -(4.0 / 3.0) * s**-3.0, -(4.0 / 3.0) * t**-3.0

    def hessian(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        return HessianTriple(4.0 * s**-4.0, np.zeros_like(s + t), 4.0 * t**-4.0)

    def forward(s, t):
        return 1.0 / np.asarray(s, float) - 1j / np.asarray(t, float)

    def inverse(z):
        u, v = _re_im(z)
        return 1.0 / u, -1.0 / v

    def derivs(z):
        u, v = _re_im(z)
        return -0.5 / u**2 + 0j, -0.5j / v**2

    chart = Chart(
        forward=forward,
        inverse=inverse,
        derivs=derivs,
        psi=lambda z: -np.imag(np.asarray(z, complex) ** 2),
        psi_z=lambda z: 1j * np.asarray(z, complex),
        contains=lambda z: (np.real(z) > 0) & (np.imag(z) < 0),
        potential=lambda z: np.zeros_like(np.real(z)),
        description="z = 1/s - i/t on the fourth quadrant",
    )
    return SurfaceTensionModel(
        name="trivial_example",
        params=(),
        margin=lambda s, t: np.minimum(s, t),
        sigma=sigma,
        gradient=gradient,
        hessian=hessian,
        chart=chart,
        trivial_potential=True,
        center_slope=(1.0, 1.0),
        kernel_id=0,
    )


# -- random Young tableaux ---------------------------------------------------

def _young_tableaux() -> SurfaceTensionModel:
    pi = math.pi

    def sigma(s, t):
        return -(1.0 + np.log(np.cos(pi * s) / (pi * t))) * t

    def gradient(s, t):
        return pi * t * np.tan(pi * s), np.log(pi * t / np.cos(pi * s))

    def hessian(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        return HessianTriple(pi**2 * t / np.cos(pi * s) ** 2, pi * np.tan(pi * s), 1.0 / t)

    def forward(s, t):
        return -pi * np.asarray(t, float) * (np.tan(pi * np.asarray(s, float)) - 1j)

    def inverse(z):
        u, v = _re_im(z)
        return -np.arctan2(u, v) / pi, v / pi

    def derivs(z):
        z = np.asarray(z, complex)
        return -0.5j / (pi * z), np.full_like(z, -0.5j / pi)

    sqrt_pi = math.sqrt(pi)
    chart = Chart(
        forward=forward,
        inverse=inverse,
        derivs=derivs,
        psi=lambda z: np.full_like(np.real(z), sqrt_pi, dtype=float),
        psi_z=lambda z: np.zeros_like(np.asarray(z, complex)),
        contains=lambda z: np.imag(z) > 0,
        potential=lambda z: np.zeros_like(np.real(z)),
        description="z = -pi t (tan(pi s) - i) on the upper half-plane",
    )
    return SurfaceTensionModel(
        name="young_tableaux",
        params=(),
        margin=lambda s, t: np.minimum(0.5 - np.abs(s), t),
        sigma=sigma,
        gradient=gradient,
        hessian=hessian,
        chart=chart,
        trivial_potential=True,
        constant_kappa=True,
        center_slope=(0.0, 1.0),
        kernel_id=1,
    )


# -- enharmonic --------------------------------------------------------------

def _enharmonic() -> SurfaceTensionModel:
    def sigma(s, t):
        return -np.log(s * t)

    def gradient(s, t):
        return -1.0 / np.asarray(s, float), -1.0 / np.asarray(t, float)

    def hessian(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        return HessianTriple(s**-2.0, np.zeros_like(s + t), t**-2.0)

    def forward(s, t):
        return np.log(np.asarray(s, float)) - 1j * np.log(np.asarray(t, float))

    def inverse(z):
        u, v = _re_im(z)
        return np.exp(u), np.exp(-v)

    def derivs(z):
        u, v = _re_im(z)
        return 0.5 * np.exp(u) + 0j, 0.5j * np.exp(-v)

    def psi(z):
        u, v = _re_im(z)
        return np.exp(0.5 * (v - u))

    chart = Chart(
        forward=forward,
        inverse=inverse,
        derivs=derivs,
        psi=psi,
        psi_z=lambda z: -0.25 * (1 + 1j) * psi(z),
        contains=lambda z: np.isfinite(np.asarray(z, complex)),
        potential=lambda z: np.full_like(np.real(z), 0.5, dtype=float),
        description="z = log s - i log t on the whole plane",
    )
    return SurfaceTensionModel(
        name="enharmonic",
        params=(),
        margin=lambda s, t: np.minimum(s, t),
        sigma=sigma,
        gradient=gradient,
        hessian=hessian,
        chart=chart,
        center_slope=(1.0, 1.0),
        kernel_id=2,
    )


# -- p-Laplacian -------------------------------------------------------------

def _p_laplace(p: float) -> SurfaceTensionModel:
    if not p > 1:
        raise DomainError(f"p_laplace requires p > 1, got p={p}")
    alpha = math.sqrt(p - 1.0)
    m = 1.0 / alpha - 1.0
    k = (p * p * (p - 1.0)) ** 0.25
    beta = (p - 2.0) / (2.0 * alpha)
    c_pot = (p - 2.0) ** 2 / (4.0 * (p - 1.0))

    def sigma(s, t):
        return (s * s + t * t) ** (p / 2.0)

    def gradient(s, t):
        w = p * (s * s + t * t) ** (p / 2.0 - 1.0)
        return w * s, w * t

    def hessian(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        r2 = s * s + t * t
        a = p * r2 ** (p / 2.0 - 1.0)
        b = p * (p - 2.0) * r2 ** (p / 2.0 - 2.0)
        return HessianTriple(a + b * s * s, b * s * t, a + b * t * t)

    def forward(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        r = np.hypot(s, t)
        return r ** (alpha - 1.0) * (s - 1j * t)

    def inverse(z):
        z = np.asarray(z, complex)
        w = np.abs(z) ** m * np.conj(z)
        return w.real, w.imag

    def derivs(z):
        z = np.asarray(z, complex)
        big_r = np.abs(z)
        w_z = 0.5 * m * big_r ** (m - 2.0) * np.conj(z) ** 2
        wbar_z = big_r**m * (0.5 * m + 1.0)
        return 0.5 * (w_z + wbar_z), (w_z - wbar_z) / 2j

    chart = Chart(
        forward=forward,
        inverse=inverse,
        derivs=derivs,
        psi=lambda z: k * np.abs(z) ** beta,
        psi_z=lambda z: k * 0.5 * beta * np.abs(z) ** (beta - 2.0) * np.conj(z),
        contains=lambda z: np.abs(z) > 0,
        potential=lambda z: c_pot / np.abs(z) ** 2,
        description=f"z = r^{alpha:.6g} e^(-i theta), punctured plane",
    )
    return SurfaceTensionModel(
        name="p_laplace",
        params=(float(p),),
        margin=lambda s, t: np.full(np.broadcast(s, t).shape, np.inf),
        sigma=sigma,
        gradient=gradient,
        hessian=hessian,
        chart=chart,
        trivial_potential=(p == 2),
        constant_kappa=(p == 2),
        center_slope=(0.0, 0.0),
        kernel_id=3,
        kernel_param=float(p),
        extras={"alpha": alpha, "C": c_pot},
    )


# -- square-lattice dimers ---------------------------------------------------

def _dimer_square() -> SurfaceTensionModel:
    pi = math.pi

    def partner(z):
        z = np.asarray(z, complex)
        return (1.0 + z) / (z - 1.0)

    def inverse(z):
        z = np.asarray(z, complex)
        az, aw = np.angle(z), np.angle(partner(z))
        return (2.0 / pi) * (az - aw - pi), (2.0 / pi) * (az + aw)

    def forward(s, t):
        s, t = np.asarray(s, float), np.asarray(t, float)
        az = 0.25 * pi * (s + t) + 0.5 * pi
        aw = 0.25 * pi * (t - s) - 0.5 * pi
        sa, cb, sb = np.sin(az), np.cos(aw), np.sin(aw)
        rho = (-sa * cb - np.sqrt((sa * cb) ** 2 + sb**2)) / sb
        return rho * np.exp(1j * az)

    def derivs(z):
        z = np.asarray(z, complex)
        a, b = 1.0 / z, 2.0 / (z * z - 1.0)
        return (a + b) / (pi * 1j), (a - b) / (pi * 1j)

    chart = Chart(
        forward=forward,
        inverse=inverse,
        derivs=derivs,
        psi=lambda z: np.ones_like(np.real(z), dtype=float),
        psi_z=lambda z: np.zeros_like(np.asarray(z, complex)),
        contains=lambda z: np.imag(z) > 0,
        potential=lambda z: np.zeros_like(np.real(z)),
        description="1 + z + w - zw = 0, z in the upper half-plane",
    )
    return SurfaceTensionModel(
        name="dimer_square",
        params=(),
        margin=lambda s, t: (2.0 - np.abs(s) - np.abs(t)) / math.sqrt(2.0),
        chart=chart,
        trivial_potential=True,
        constant_kappa=True,
        center_slope=(0.0, 0.0),
        extras={"partner": partner},
    )


def make_builtin(name: str, params=()) -> SurfaceTensionModel:
    """Construct one of the built-in models.

    ``p_laplace`` takes its exponent as the single entry of ``params``.
    """
    params = tuple(float(x) for x in params)
    if name == "p_laplace":
        if len(params) != 1:
            raise DomainError("p_laplace needs exactly one parameter p")
        return _p_laplace(params[0])
    builders = {
        "trivial_example": _trivial_example,
        "young_tableaux": _young_tableaux,
        "enharmonic": _enharmonic,
        "dimer_square": _dimer_square,
    }
    if name not in builders:
        raise DomainError(f"unknown model {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    if params:
        raise DomainError(f"model {name!r} takes no parameters")
    return builders[name]()


def parse_model(spec: str) -> SurfaceTensionModel:
    """Parse a model selector such as ``enharmonic`` or ``p_laplace:p=3``."""
    name, _, rest = spec.strip().partition(":")
    params = []
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if name != "p_laplace" or key.strip() != "p" or not eq:
                raise DomainError(f"bad model parameter {item!r} in {spec!r}")
            try:
                params.append(float(value))
            except ValueError:
                raise DomainError(f"bad model parameter {item!r} in {spec!r}") from None
    elif name == "p_laplace":
        raise DomainError("p_laplace needs a parameter, e.g. p_laplace:p=3")
    return make_builtin(name, params)


def slope_membership(model: SurfaceTensionModel, slope, tol: float = BOUNDARY_TOL) -> Membership:
    m = float(model.margin(float(slope[0]), float(slope[1])))
    if m > tol:
        return Membership.INTERIOR
    if m >= -tol:
        return Membership.BOUNDARY
    return Membership.OUTSIDE


def require_sigma(model: SurfaceTensionModel):
    if not model.has_closed_sigma:
        raise CapabilityError(f"{model.name} has no closed-form surface tension")


def require_chart(model: SurfaceTensionModel):
    if not model.has_closed_chart:
        raise CapabilityError(f"{model.name} has no closed-form intrinsic chart")


def evaluate(model: SurfaceTensionModel, slope):
    """Return ``(sigma, (X, Y), HessianTriple)`` at an interior slope."""
    require_sigma(model)
    s, t = float(slope[0]), float(slope[1])
    where = slope_membership(model, (s, t))
    if where is not Membership.INTERIOR:
        raise DomainError(f"slope ({s}, {t}) is {where.value} for {model.name}")
    x, y = model.gradient(s, t)
    hs = model.hessian(s, t)
    return float(model.sigma(s, t)), (float(x), float(y)), HessianTriple(*(float(v) for v in hs))
