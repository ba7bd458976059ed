"""Explicit limit shapes of planar gradient variational problems.

Solutions are built as envelopes of tangent planes whose coefficients are
kappa-harmonic in an intrinsic conformal coordinate, and are cross-checked
against finite-difference residuals and a direct convex minimiser.
"""
__version__ = "0.1.0"

from .errors import (CapabilityError, ConvergenceError, DegenerateError, DomainError,
                     GradshapeError, InfeasibleError)
from .tensions import (HessianTriple, Membership, Slope, SurfaceTensionModel, evaluate,
                       make_builtin, parse_model, slope_membership)
from .intrinsic import (chart_eval, gauss_map, schrodinger_potential, verify_isothermal)
from .halfplane import HarmonicFn, PiecewiseBoundary, deriv, extend
from .envelope import (EnvelopePoint, Mesh, TangentPlaneField, envelope_point, field_from_model,
                       frozen_boundary, sample_mesh)
from .worked_models import (ElementarySolutionEnh, LShapeParams, aztec_closed_form, aztec_field,
                            aztec_height, aztec_inverse, burgers_solve, enharmonic_solution,
                            lshape_field, lshape_solve, plaplace_mode)
from .oracle import GridField, minimize_variational
from .oracle.residuals import (ResidualReport, ampere_check, compare_fields, el_residual,
                               kappa_harmonic_residual)
from .export import export_mesh
