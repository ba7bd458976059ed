"""Independent checks: finite-difference residuals and direct minimisation."""
from .grid import FROZEN, LIQUID, OUTSIDE, GridField
from .minimize import minimize_variational

__all__ = ["GridField", "LIQUID", "FROZEN", "OUTSIDE", "minimize_variational"]
