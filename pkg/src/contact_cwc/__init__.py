"""Contact wrench cone of rectangular surface contacts.

The closed-form cone lives in :mod:`contact_cwc.closed_form`; an independent
reconstruction from corner friction pyramids, with LP, double-description and
Fourier-Motzkin routines, lives in :mod:`contact_cwc.polytope`.
"""

from .closed_form import (MEMBERSHIP_TOL, FaceForm, StabilityReport, YawBounds,
                          check_wrench, face_form, tau_safe_control, yaw_bounds)
from .contact_model import (FZ_EPSILON, ContactForceSet, ContactPatch, NormalizedWrench,
                            Wrench, compose_wrench, normalize, wrench_map_matrix, zmp)
from .errors import (CWCError, DegenerateNormalForce, ExpressionSwell, Infeasible,
                     NumericalFailure, PointOutsidePatch, ZeroFriction)
from .polytope import (InequalitySystem, SpanForm, cwc_span, fourier_motzkin_eliminate,
                       friction_pyramid_generators, membership_lp, remove_redundant,
                       span_to_face)
from .reconstruction import (InteriorForceSystem, reconstruct_forces,
                             redistribute_to_vertices)

__version__ = "0.1.0"

__all__ = [
    "MEMBERSHIP_TOL", "FZ_EPSILON",
    "ContactPatch", "Wrench", "ContactForceSet", "NormalizedWrench",
    "FaceForm", "YawBounds", "StabilityReport", "SpanForm", "InequalitySystem",
    "InteriorForceSystem",
    "wrench_map_matrix", "compose_wrench", "zmp", "normalize",
    "check_wrench", "face_form", "yaw_bounds", "tau_safe_control",
    "friction_pyramid_generators", "cwc_span", "membership_lp", "span_to_face",
    "remove_redundant", "fourier_motzkin_eliminate",
    "reconstruct_forces", "redistribute_to_vertices",
    "CWCError", "DegenerateNormalForce", "ZeroFriction", "PointOutsidePatch",
    "Infeasible", "NumericalFailure", "ExpressionSwell",
]
