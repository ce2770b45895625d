"""Corner forces realizing a wrench, and redistribution of interior forces.

:func:`reconstruct_forces` goes from a wrench back to four corner forces
inside their friction pyramids. :func:`redistribute_to_vertices` moves
arbitrary point forces inside the rectangle to its corners with bilinear
weights; the resulting wrench is unchanged and friction feasibility is kept
because each corner force is a nonnegative combination of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .closed_form import MEMBERSHIP_TOL, margins_many
from .contact_model import ContactForceSet, ContactPatch, Wrench, wrench_map_matrix
from .errors import Infeasible, PointOutsidePatch


@dataclass(frozen=True)
class InteriorForceSystem:
    """Point forces ``forces[j]`` applied at ``points[j] = (x, y)`` on the patch."""

    points: np.ndarray
    forces: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        forces = np.asarray(self.forces, dtype=float).reshape(-1, 3)
        if len(points) != len(forces):
            raise ValueError("need one force per application point")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "forces", forces)

    def wrench(self) -> Wrench:
        """Resultant wrench at the patch center."""
        x, y = self.points[:, 0], self.points[:, 1]
        fx, fy, fz = self.forces.T
        return Wrench(fx.sum(), fy.sum(), fz.sum(),
                      np.dot(y, fz), -np.dot(x, fz), np.dot(x, fy) - np.dot(y, fx))


def bilinear_weights(patch: ContactPatch, points) -> np.ndarray:
    """Weights of corners C1..C4 reproducing each point, shape (N, 4).

    Every row sums to one, is nonnegative on the rectangle and strictly
    positive in its interior; ``weights @ corners`` gives back the points.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    X, Y = patch.X, patch.Y
    ax_p = (X + points[:, 0]) / (2 * X)
    ax_m = (X - points[:, 0]) / (2 * X)
    ay_p = (Y + points[:, 1]) / (2 * Y)
    ay_m = (Y - points[:, 1]) / (2 * Y)
    return np.stack([ax_p * ay_p, ax_p * ay_m, ax_m * ay_m, ax_m * ay_p], axis=1)


def redistribute_to_vertices(patch: ContactPatch, system: InteriorForceSystem,
                             tol: float = 1e-12) -> ContactForceSet:
    """Move every point force to the corners with bilinear weights."""
    scale = max(patch.X, patch.Y)
    outside = ((np.abs(system.points[:, 0]) > patch.X + tol * scale)
               | (np.abs(system.points[:, 1]) > patch.Y + tol * scale))
    if outside.any():
        j = int(np.flatnonzero(outside)[0])
        raise PointOutsidePatch(f"point {system.points[j].tolist()} lies outside "
                                f"the {2 * patch.X} x {2 * patch.Y} rectangle")
    weights = bilinear_weights(patch, system.points)
    return ContactForceSet.from_array(weights.T @ system.forces)


# LP variables, per corner i: fz_i, fx_i = u_i - v_i, fy_i = p_i - q_i
_PER_CORNER = 5
_NF = 4 * _PER_CORNER


def _force_lp(patch: ContactPatch, stage: str):
    """Standard-form LP over corner forces for one reconstruction stage.

    Columns are the 20 split force variables, then 8 friction slacks, then
    4 normal-force slacks, then (stages "minmax" and "maxmin" only) the bound
    ``t``. Rows are the 6 wrench equations, 8 friction rows
    ``u_i + v_i <= mu fz_i``, ``p_i + q_i <= mu fz_i`` and 4 normal-force rows:

    * ``minmax``: ``fz_i <= t``, minimize ``t``;
    * ``tangential``: ``fz_i <= t*`` (given in the right-hand side), minimize
      the total tangential magnitude;
    * ``maxmin``: ``fz_i >= t``, maximize ``t``.
    """
    with_t = stage in ("minmax", "maxmin")
    n = _NF + 8 + 4 + (1 if with_t else 0)
    A = np.zeros((18, n))
    for i, (x, y) in enumerate(patch.corners):
        fz, u, v, p, q = (_PER_CORNER * i + k for k in range(5))
        A[0, u], A[0, v] = 1.0, -1.0
        A[1, p], A[1, q] = 1.0, -1.0
        A[2, fz] = 1.0
        A[3, fz] = y
        A[4, fz] = -x
        A[5, p], A[5, q], A[5, u], A[5, v] = x, -x, -y, y
        A[6 + i, [u, v]] = 1.0
        A[6 + i, fz] = -patch.mu
        A[6 + i, _NF + i] = 1.0
        A[10 + i, [p, q]] = 1.0
        A[10 + i, fz] = -patch.mu
        A[10 + i, _NF + 4 + i] = 1.0
        A[14 + i, fz] = 1.0
        A[14 + i, _NF + 8 + i] = -1.0 if stage == "maxmin" else 1.0
        if with_t:
            A[14 + i, n - 1] = -1.0
    c = np.zeros(n)
    if stage == "minmax":
        c[n - 1] = 1.0
    elif stage == "maxmin":
        c[n - 1] = -1.0
    else:
        for i in range(4):
            c[_PER_CORNER * i + 1:_PER_CORNER * i + 5] = 1.0
    return A, c


def _forces_from_solution(x):
    z = x[:, :_NF].reshape(-1, 4, _PER_CORNER)
    return np.stack([z[:, :, 1] - z[:, :, 2], z[:, :, 3] - z[:, :, 4], z[:, :, 0]], axis=2)


def reconstruct_forces_many(patch: ContactPatch, W, strict: bool = False):
    """Batched :func:`reconstruct_forces`.

    Returns ``(forces, ok)`` with ``forces`` of shape (N, 4, 3) (NaN where no
    solution exists) and the boolean mask ``ok``.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    N = len(W)
    norms = np.linalg.norm(W, axis=1)
    forces = np.full((N, 4, 3), np.nan)
    ok = norms == 0
    forces[ok] = 0.0
    idx = np.flatnonzero(~ok)
    if idx.size == 0:
        return forces, ok
    unit = W[idx] / norms[idx, None]
    B = np.hstack([unit, np.zeros((idx.size, 12))])

    A, c = _force_lp(patch, "minmax")
    first = lp.solve_batch(A, B, c)
    solved = np.flatnonzero(first.status == lp.OPTIMAL)
    F = np.full((idx.size, 4, 3), np.nan)

    # second stage: keep the max normal force, spend as little friction as possible
    A2, c2 = _force_lp(patch, "tangential")
    B2 = B[solved].copy()
    B2[:, 14:] = first.fun[solved][:, None]
    second = lp.solve_batch(A2, B2, c2)
    done = second.status == lp.OPTIMAL
    F[solved] = _forces_from_solution(first.x[solved])
    F[solved[done]] = _forces_from_solution(second.x[done])

    if strict and solved.size:
        interior = margins_many(patch, unit[solved]).max(axis=1) < -MEMBERSHIP_TOL
        sel = solved[interior]
        if sel.size:
            A3, c3 = _force_lp(patch, "maxmin")
            third = lp.solve_batch(A3, B[sel], c3)
            good = third.status == lp.OPTIMAL
            # both solutions realize the wrench; their average keeps every fz_i > 0
            F[sel[good]] = 0.5 * (F[sel[good]] + _forces_from_solution(third.x[good]))

    forces[idx[solved]] = F[solved] * norms[idx[solved], None, None]
    ok[idx[solved]] = True
    return forces, ok


def reconstruct_forces(patch: ContactPatch, w: Wrench, strict: bool = False) -> ContactForceSet:
    """Corner forces in their friction pyramids whose resultant is ``w``.

    Among all solutions the one minimizing the largest corner normal force is
    returned; remaining freedom is spent minimizing the total tangential
    force, and any tie left after that is resolved by Bland's rule. With
    ``strict=True`` and ``w`` strictly inside the cone, the result is averaged
    with a max-min solution so that every corner pushes with ``fz_i > 0``.

    Raises :class:`Infeasible` when no such forces exist.
    """
    forces, ok = reconstruct_forces_many(patch, w.as_array(), strict=strict)
    if not ok[0]:
        raise Infeasible(f"no friction-feasible corner forces produce {w}")
    return ContactForceSet.from_array(forces[0])
