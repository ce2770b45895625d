"""Closed-form contact wrench cone of a rectangular patch.

A wrench ``w = (fx, fy, fz, taux, tauy, tauz)`` is transmissible through the
patch when

* ``|fx| <= mu fz`` and ``|fy| <= mu fz``                      (Coulomb, W1-W2)
* ``|taux| <= Y fz`` and ``|tauy| <= X fz``                    (ZMP, W4-W5)
* ``tau_min <= tauz <= tau_max``                               (yaw, W6)

with

    tau_min = -mu (X + Y) fz + |Y fx - mu taux| + |X fy - mu tauy|
    tau_max = +mu (X + Y) fz - |Y fx + mu taux| - |X fy + mu tauy|

Expanding the absolute values gives 16 homogeneous half-spaces. They are
listed in a fixed order (see :data:`ROW_LABELS`) and every margin reported by
this module is the signed distance ``u.w`` for the unit normal ``u`` of the
corresponding half-space: negative means satisfied.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contact_model import FZ_EPSILON, ContactPatch, Wrench
from .errors import ZeroFriction

#: Absolute slack on normalized rows below which a wrench counts as a member.
MEMBERSHIP_TOL = 1e-9

_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

ROW_LABELS = (
    "W1:+fx", "W1:-fx",
    "W2:+fy", "W2:-fy",
    "W4:+taux", "W4:-taux",
    "W5:+tauy", "W5:-tauy",
    "W6:tau_min(+,+)", "W6:tau_min(+,-)", "W6:tau_min(-,+)", "W6:tau_min(-,-)",
    "W6:tau_max(+,+)", "W6:tau_max(+,-)", "W6:tau_max(-,+)", "W6:tau_max(-,-)",
)


@dataclass(frozen=True)
class FaceForm:
    """Polyhedral cone ``{w : rows @ w <= 0}`` with one label per row."""

    rows: np.ndarray
    row_labels: tuple

    def margins(self, w) -> np.ndarray:
        """Signed row distances; accepts one wrench or an (N, 6) array."""
        w = np.asarray(w.as_array() if isinstance(w, Wrench) else w, dtype=float)
        return w @ self.rows.T

    def contains(self, w, tol: float = MEMBERSHIP_TOL):
        return np.max(self.margins(w), axis=-1) <= tol

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class YawBounds:
    """Admissible yaw-torque interval and its midpoint.

    ``deviation`` is the half-width clamped at zero; ``deviation_signed`` keeps
    the raw value, negative when the interval is empty (``empty_range``).
    """

    tau_min: float
    tau_max: float
    tau_safe: float
    deviation: float
    deviation_signed: float
    empty_range: bool

    def to_dict(self) -> dict:
        return {
            "tau_min": self.tau_min,
            "tau_max": self.tau_max,
            "tau_safe": self.tau_safe,
            "deviation": self.deviation,
            "deviation_signed": self.deviation_signed,
            "empty_range": self.empty_range,
        }


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of :func:`check_wrench`.

    ``min_margin`` is the smallest slack over all rows, i.e. ``-max(margins)``;
    it is positive strictly inside the cone. ``boundary`` marks members whose
    worst row is within the membership tolerance of zero. ``weak_normal`` is
    raised when the normal force is below ``fz_epsilon`` while other
    components are not zero, where the strict inequality ``fz > 0`` fails.
    """

    member: bool
    margins: np.ndarray
    row_labels: tuple
    min_margin: float
    zmp: tuple | None
    yaw: YawBounds
    boundary: bool = False
    weak_normal: bool = False
    violated: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "min_margin": self.min_margin,
            "margins": dict(zip(self.row_labels, self.margins.tolist())),
            "violated": list(self.violated),
            "zmp": None if self.zmp is None else list(self.zmp),
            "yaw": self.yaw.to_dict(),
            "boundary": self.boundary,
            "weak_normal": self.weak_normal,
        }


def _row_norms(patch: ContactPatch) -> np.ndarray:
    X, Y, mu = patch.X, patch.Y, patch.mu
    n_friction = np.sqrt(1.0 + mu ** 2)
    n_yaw = np.sqrt(X ** 2 + Y ** 2 + (mu * (X + Y)) ** 2 + 2 * mu ** 2 + 1.0)
    return np.array(
        [n_friction] * 4
        + [np.sqrt(1.0 + Y ** 2)] * 2
        + [np.sqrt(1.0 + X ** 2)] * 2
        + [n_yaw] * 8
    )


def margins_many(patch: ContactPatch, W) -> np.ndarray:
    """Normalized margins of the 16 rows for an array of wrenches.

    ``W`` has shape (..., 6); the result has shape (..., 16) and follows the
    order of :data:`ROW_LABELS`.
    """
    W = np.asarray(W, dtype=float)
    fx, fy, fz, tx, ty, tz = np.moveaxis(W, -1, 0)
    X, Y, mu = patch.X, patch.Y, patch.mu
    span = mu * (X + Y) * fz
    lo_x, lo_y = Y * fx - mu * tx, X * fy - mu * ty
    hi_x, hi_y = Y * fx + mu * tx, X * fy + mu * ty
    cols = [
        fx - mu * fz, -fx - mu * fz,
        fy - mu * fz, -fy - mu * fz,
        tx - Y * fz, -tx - Y * fz,
        ty - X * fz, -ty - X * fz,
    ]
    # tauz >= tau_min: one row per sign choice inside the two absolute values
    cols += [s1 * lo_x + s2 * lo_y - span - tz for s1, s2 in _SIGNS]
    cols += [s1 * hi_x + s2 * hi_y - span + tz for s1, s2 in _SIGNS]
    return np.stack(cols, axis=-1) / _row_norms(patch)


def contains_many(patch: ContactPatch, W, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Vectorized membership test for an (N, 6) array of wrenches.

    Rows of one group share a norm, so the largest margin of each group is
    its absolute-value form; the result equals ``margins_many(...).max(-1) <= tol``.
    """
    W = np.asarray(W, dtype=float)
    fx, fy, fz, tx, ty, tz = np.moveaxis(W, -1, 0)
    X, Y, mu = patch.X, patch.Y, patch.mu
    n = _row_norms(patch)
    span = mu * (X + Y) * fz
    worst = (np.maximum(np.abs(fx), np.abs(fy)) - mu * fz) / n[0]
    np.maximum(worst, (np.abs(tx) - Y * fz) / n[4], out=worst)
    np.maximum(worst, (np.abs(ty) - X * fz) / n[6], out=worst)
    low = np.abs(Y * fx - mu * tx) + np.abs(X * fy - mu * ty) - span - tz
    high = np.abs(Y * fx + mu * tx) + np.abs(X * fy + mu * ty) - span + tz
    np.maximum(worst, np.maximum(low, high) / n[8], out=worst)
    return worst <= tol


def yaw_bounds_many(patch: ContactPatch, W):
    """``(tau_min, tau_max, tau_safe, deviation_signed)`` arrays for (N, 6) input."""
    W = np.asarray(W, dtype=float)
    fx, fy, fz, tx, ty, _ = np.moveaxis(W, -1, 0)
    X, Y, mu = patch.X, patch.Y, patch.mu
    span = mu * (X + Y) * fz
    tau_min = -span + np.abs(Y * fx - mu * tx) + np.abs(X * fy - mu * ty)
    tau_max = span - np.abs(Y * fx + mu * tx) - np.abs(X * fy + mu * ty)
    tau_safe = (np.sign(-fx * tx) * np.minimum(Y * np.abs(fx), mu * np.abs(tx))
                + np.sign(-fy * ty) * np.minimum(X * np.abs(fy), mu * np.abs(ty)))
    deviation = (span - np.maximum(Y * np.abs(fx), mu * np.abs(tx))
                 - np.maximum(X * np.abs(fy), mu * np.abs(ty)))
    return tau_min, tau_max, tau_safe, deviation


def yaw_bounds(patch: ContactPatch, w: Wrench) -> YawBounds:
    """Yaw-torque interval allowed by the other five wrench components.

    The midpoint ``tau_safe`` is evaluated with the sign/min expression, so it
    is generally nonzero when tangential forces and roll/pitch torques are
    present. Larger tangential forces or roll/pitch torques shrink the
    interval; the raw half-width may go negative once the other conditions
    are violated, which is reported through ``empty_range``.
    """
    tau_min, tau_max, tau_safe, deviation = (
        float(v) for v in yaw_bounds_many(patch, w.as_array()))
    return YawBounds(
        tau_min=tau_min,
        tau_max=tau_max,
        tau_safe=tau_safe,
        deviation=max(deviation, 0.0),
        deviation_signed=deviation,
        empty_range=tau_min > tau_max,
    )


def tau_safe_control(patch: ContactPatch, w: Wrench) -> float:
    """Yaw torque to command so that the yaw margin is maximal."""
    return yaw_bounds(patch, w).tau_safe


def check_wrench(patch: ContactPatch, w: Wrench, tol: float = MEMBERSHIP_TOL,
                 fz_epsilon: float = FZ_EPSILON) -> StabilityReport:
    """Decide whether ``w`` lies in the contact wrench cone of ``patch``.

    Works for ``mu = 0`` as well, in which case the cone reduces to the ZMP
    condition with zero tangential force and zero yaw torque. The cone is
    tested in its closed form: at ``fz = 0`` only the zero wrench passes.
    """
    margins = margins_many(patch, w.as_array())
    worst = float(margins.max())
    member = worst <= tol
    has_normal = w.fz >= fz_epsilon
    others = (w.fx, w.fy, w.taux, w.tauy, w.tauz)
    return StabilityReport(
        member=member,
        margins=margins,
        row_labels=ROW_LABELS,
        min_margin=-worst,
        zmp=(-w.tauy / w.fz, w.taux / w.fz) if has_normal else None,
        yaw=yaw_bounds(patch, w),
        boundary=member and worst > -tol,
        weak_normal=(not has_normal) and any(v != 0.0 for v in others),
        violated=tuple(label for label, m in zip(ROW_LABELS, margins) if m > tol),
    )


def unnormalized_rows(X, Y, mu) -> list:
    """The 16 rows as plain lists, in :data:`ROW_LABELS` order.

    Accepts floats or exact numbers such as ``fractions.Fraction``.
    """
    zero, one = X - X, X / X
    s = mu * (X + Y)
    rows = [
        [one, zero, -mu, zero, zero, zero], [-one, zero, -mu, zero, zero, zero],
        [zero, one, -mu, zero, zero, zero], [zero, -one, -mu, zero, zero, zero],
        [zero, zero, -Y, one, zero, zero], [zero, zero, -Y, -one, zero, zero],
        [zero, zero, -X, zero, one, zero], [zero, zero, -X, zero, -one, zero],
    ]
    for s1, s2 in _SIGNS:
        rows.append([s1 * Y, s2 * X, -s, -s1 * mu, -s2 * mu, -one])
    for s1, s2 in _SIGNS:
        rows.append([s1 * Y, s2 * X, -s, s1 * mu, s2 * mu, one])
    return rows


def face_form(patch: ContactPatch) -> FaceForm:
    """The 16 unit-normal half-spaces of the cone.

    ``fz >= 0`` is not listed: it follows from the two W1 rows when ``mu > 0``.
    """
    if patch.mu <= 0:
        raise ZeroFriction("face form needs mu > 0; use zero_friction_face_form")
    rows = np.array(unnormalized_rows(patch.X, patch.Y, patch.mu), dtype=float)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return FaceForm(rows=rows, row_labels=ROW_LABELS)


ZERO_FRICTION_LABELS = (
    "W1:+fx", "W1:-fx", "W2:+fy", "W2:-fy",
    "W4:+taux", "W4:-taux", "W5:+tauy", "W5:-tauy",
    "W6:+tauz", "W6:-tauz",
)


def zero_friction_rows(X, Y) -> list:
    """Unnormalized rows of the frictionless cone, in :data:`ZERO_FRICTION_LABELS` order."""
    zero, one = X - X, X / X
    return [
        [one, zero, zero, zero, zero, zero], [-one, zero, zero, zero, zero, zero],
        [zero, one, zero, zero, zero, zero], [zero, -one, zero, zero, zero, zero],
        [zero, zero, -Y, one, zero, zero], [zero, zero, -Y, -one, zero, zero],
        [zero, zero, -X, zero, one, zero], [zero, zero, -X, zero, -one, zero],
        [zero, zero, zero, zero, zero, one], [zero, zero, zero, zero, zero, -one],
    ]


def zero_friction_face_form(patch: ContactPatch) -> FaceForm:
    """Reduced cone for a frictionless patch.

    Tangential forces and yaw torque are pinned to zero and the ZMP must lie
    in the rectangle.
    """
    rows = np.array(zero_friction_rows(patch.X, patch.Y), dtype=float)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return FaceForm(rows=rows, row_labels=ZERO_FRICTION_LABELS)
