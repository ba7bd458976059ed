"""Harmonic functions on the upper half-plane with piecewise-constant boundary data.

For jumps ``a_1 < ... < a_n`` and values ``c_0, ..., c_n`` (``c_k`` on
``(a_k, a_{k+1})``) the bounded harmonic extension is

    u(z) = c_n + (1/pi) sum_k (c_{k-1} - c_k) arg(z - a_k)

and its Wirtinger derivative is ``(1/(2 pi i)) sum_k (c_{k-1} - c_k)/(z - a_k)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PiecewiseBoundary:
    jumps: tuple
    values: tuple

    def __post_init__(self):
        jumps = tuple(float(a) for a in self.jumps)
        values = tuple(float(c) for c in self.values)
        if len(values) != len(jumps) + 1:
            raise DomainError(f"need len(values) == len(jumps) + 1, got {len(values)} and {len(jumps)}")
        if any(b <= a for a, b in zip(jumps, jumps[1:])):
            raise DomainError("jumps must be strictly increasing")
        if not all(math.isfinite(v) for v in jumps + values):
            raise DomainError("boundary data must be finite")
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "values", values)

    @property
    def steps(self) -> np.ndarray:
        """``c_{k-1} - c_k`` for every jump."""
        c = np.asarray(self.values)
        return c[:-1] - c[1:]

    def interval_value(self, x: float) -> float:
        """Boundary value on the open interval containing real ``x``."""
        if x in self.jumps:
            raise DomainError(f"x={x} is a jump point")
        return self.values[int(np.searchsorted(self.jumps, x))]

    def to_json(self) -> str:
        return json.dumps({"jumps": list(self.jumps), "values": list(self.values)})

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseBoundary":
        try:
            return cls(tuple(data["jumps"]), tuple(data["values"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"boundary data needs 'jumps' and 'values': {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseBoundary":
        return cls.from_dict(json.loads(text))


def _upper(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(~(z.imag > 0)):
        raise DomainError("harmonic extension is defined for Im z > 0 only")
    return z


def extend(b: PiecewiseBoundary, z):
    """Value of the harmonic extension of ``b`` at ``z`` (scalar or array)."""
    z = _upper(z)
    out = np.full(z.shape, b.values[-1], dtype=float)
    for a, d in zip(b.jumps, b.steps):
        out += (d / math.pi) * np.angle(z - a)
    return out if out.ndim else float(out)


def deriv(b: PiecewiseBoundary, z):
    """Wirtinger derivative ``d/dz`` of the harmonic extension of ``b``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.isin(z, np.asarray(b.jumps, dtype=complex))):
        raise DomainError("derivative is undefined at a jump point")
    z = _upper(z)
    out = np.zeros(z.shape, dtype=complex)
    for a, d in zip(b.jumps, b.steps):
        out += d / (z - a)
    out /= 2j * math.pi
    return out if out.ndim else complex(out)


class HarmonicFn:
    """A real harmonic function with its holomorphic Wirtinger derivative."""

    def __init__(self, value: Callable, deriv: Callable, boundary: PiecewiseBoundary | None = None,
                 label: str = ""):
        self._value = value
        self._deriv = deriv
        self.boundary = boundary
        self.label = label

    @classmethod
    def piecewise(cls, b: PiecewiseBoundary, label: str = "") -> "HarmonicFn":
        return cls(lambda z: extend(b, z), lambda z: deriv(b, z), boundary=b, label=label)

    @classmethod
    def closed_form(cls, value: Callable, deriv: Callable, label: str = "") -> "HarmonicFn":
        return cls(value, deriv, label=label)

    @classmethod
    def constant(cls, c: float, label: str = "") -> "HarmonicFn":
        c = float(c)
        return cls(
            lambda z: np.full(np.shape(z), c) if np.ndim(z) else c,
            lambda z: np.zeros(np.shape(z), complex) if np.ndim(z) else 0j,
            label=label or f"{c}",
        )

    def value(self, z):
        return self._value(z)

    def deriv(self, z):
        return self._deriv(z)

    def __repr__(self):
        kind = "piecewise" if self.boundary is not None else "closed_form"
        return f"HarmonicFn({kind}{', ' + self.label if self.label else ''})"
