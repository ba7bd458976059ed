"""Rectangular grid fields and their CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import DomainError

LIQUID, FROZEN, OUTSIDE = 0, 1, 2


@dataclass
class GridField:
    """Values on the nodes ``(x0 + i dx, y0 + j dy)``; ``values[i, j]``."""

    origin: tuple
    spacing: tuple
    values: np.ndarray
    mask: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or min(self.values.shape) < 2:
            raise DomainError(f"grid needs at least 2x2 nodes, got shape {self.values.shape}")
        dx, dy = (float(d) for d in self.spacing)
        if not (dx > 0 and dy > 0):
            raise DomainError("grid spacing must be positive")
        self.spacing = (dx, dy)
        self.origin = (float(self.origin[0]), float(self.origin[1]))
        if self.mask is not None:
            self.mask = np.asarray(self.mask, dtype=np.int8)
            if self.mask.shape != self.values.shape:
                raise DomainError("mask shape does not match values")

    @property
    def dims(self) -> tuple:
        return self.values.shape

    @property
    def liquid(self) -> np.ndarray:
        if self.mask is None:
            return np.ones(self.dims, bool)
        return self.mask == LIQUID

    def coords(self):
        """Node coordinate arrays ``(X, Y)`` with ``indexing='ij'``."""
        nx, ny = self.dims
        xs = self.origin[0] + self.spacing[0] * np.arange(nx)
        ys = self.origin[1] + self.spacing[1] * np.arange(ny)
        return np.meshgrid(xs, ys, indexing="ij")

    def congruent(self, other: "GridField") -> bool:
        return (self.dims == other.dims
                and np.allclose(self.origin, other.origin, rtol=0, atol=1e-12)
                and np.allclose(self.spacing, other.spacing, rtol=1e-12, atol=0))

    def with_values(self, values, mask=None) -> "GridField":
        return GridField(self.origin, self.spacing, values, self.mask if mask is None else mask)

    @classmethod
    def sample(cls, fn, x_range, y_range, n) -> "GridField":
        """Sample ``fn(X, Y)`` on an ``n x n`` (or ``(nx, ny)``) grid spanning the ranges."""
        nx, ny = (n, n) if np.isscalar(n) else n
        dx = (x_range[1] - x_range[0]) / (nx - 1)
        dy = (y_range[1] - y_range[0]) / (ny - 1)
        g = cls((x_range[0], y_range[0]), (dx, dy), np.zeros((nx, ny)))
        xx, yy = g.coords()
        g.values = np.asarray(fn(xx, yy), float) + np.zeros((nx, ny))
        return g

    def to_csv(self, path=None) -> str:
        xx, yy = self.coords()
        mask = np.zeros(self.dims, np.int8) if self.mask is None else self.mask
        buf = io.StringIO()
        buf.write("x,y,h,mask\n")
        for i in range(self.dims[0]):
            for j in range(self.dims[1]):
                buf.write(f"{xx[i, j]:.17g},{yy[i, j]:.17g},{self.values[i, j]:.17g},{int(mask[i, j])}\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "GridField":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise DomainError(f"{path}: empty grid file")
        x = np.array([float(r["x"]) for r in rows])
        y = np.array([float(r["y"]) for r in rows])
        xs, ys = np.unique(x), np.unique(y)
        nx, ny = xs.size, ys.size
        if nx * ny != len(rows):
            raise DomainError(f"{path}: nodes do not form a rectangular grid")
        values = np.array([float(r["h"]) for r in rows]).reshape(nx, ny)
        mask = np.array([int(r.get("mask") or 0) for r in rows]).reshape(nx, ny)
        return cls((xs[0], ys[0]), (xs[1] - xs[0], ys[1] - ys[0]), values, mask)
