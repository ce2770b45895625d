"""Rectangular contact patches, wrenches and the corner wrench map.

Frame convention
----------------
All quantities live in the surface frame of the contact link: the origin ``O``
is the center of the rectangle, ``x`` runs along the half-length ``X``, ``y``
along the half-width ``Y`` and ``z`` is the contact normal pointing into the
link. Rotating a wrench into a world frame is the caller's job.

Corner numbering is fixed and every function in the package relies on it::

        y
        ^
    C4  |  C1        C1 = ( X,  Y)
   -----+-----> x    C2 = ( X, -Y)
    C3  |  C2        C3 = (-X, -Y)
                     C4 = (-X,  Y)

With this numbering a unit normal force at corner ``Ci = (xi, yi)`` produces
the torque ``(yi, -xi, 0)`` at ``O``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNormalForce, ZeroFriction

#: Default threshold below which the normal force is treated as zero by
#: operations that divide by it.
FZ_EPSILON = 1e-10


@dataclass(frozen=True)
class ContactPatch:
    """Rectangular contact area with half-dimensions ``X``, ``Y`` and friction ``mu``."""

    X: float
    Y: float
    mu: float

    def __post_init__(self):
        for name in ("X", "Y", "mu"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.X <= 0 or self.Y <= 0:
            raise ValueError(f"half-dimensions must be positive, got X={self.X}, Y={self.Y}")
        if self.mu < 0:
            raise ValueError(f"friction coefficient must be nonnegative, got mu={self.mu}")

    @property
    def corners(self) -> np.ndarray:
        """Corner coordinates as a (4, 2) array, in the order C1..C4."""
        X, Y = self.X, self.Y
        return np.array([[X, Y], [X, -Y], [-X, -Y], [-X, Y]])

    def scaled(self, area_factor: float) -> "ContactPatch":
        """Patch whose area is multiplied by ``area_factor`` (both sides by its square root)."""
        if area_factor <= 0:
            raise ValueError("area factor must be positive")
        s = math.sqrt(area_factor)
        return ContactPatch(self.X * s, self.Y * s, self.mu)


@dataclass(frozen=True)
class Wrench:
    """Contact wrench at the patch center, in the surface frame."""

    fx: float
    fy: float
    fz: float
    taux: float
    tauy: float
    tauz: float

    def __post_init__(self):
        for name in ("fx", "fy", "fz", "taux", "tauy", "tauz"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"wrench component {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, values) -> "Wrench":
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape != (6,):
            raise ValueError(f"a wrench has 6 components, got {values.size}")
        return cls(*values.tolist())

    def as_array(self) -> np.ndarray:
        return np.array([self.fx, self.fy, self.fz, self.taux, self.tauy, self.tauz])

    @property
    def force(self) -> np.ndarray:
        return np.array([self.fx, self.fy, self.fz])

    @property
    def torque(self) -> np.ndarray:
        return np.array([self.taux, self.tauy, self.tauz])


@dataclass(frozen=True)
class ContactForceSet:
    """Forces applied at corners C1, C2, C3, C4 (see the module docstring)."""

    f1: tuple
    f2: tuple
    f3: tuple
    f4: tuple

    def __post_init__(self):
        for name in ("f1", "f2", "f3", "f4"):
            f = tuple(float(v) for v in getattr(self, name))
            if len(f) != 3 or not all(math.isfinite(v) for v in f):
                raise ValueError(f"{name} must be a finite 3-vector")
            object.__setattr__(self, name, f)

    @classmethod
    def from_array(cls, forces) -> "ContactForceSet":
        """Build from a (4, 3) array or a stacked 12-vector."""
        forces = np.asarray(forces, dtype=float).reshape(4, 3)
        return cls(*(tuple(row) for row in forces))

    def as_array(self) -> np.ndarray:
        """Forces as a (4, 3) array, one row per corner."""
        return np.array([self.f1, self.f2, self.f3, self.f4])

    def stacked(self) -> np.ndarray:
        """Forces stacked as ``(f1, f2, f3, f4)`` into a 12-vector."""
        return self.as_array().reshape(12)

    def friction_feasible(self, mu: float, tol: float = 1e-9) -> bool:
        """True when every corner force lies in the linearized friction cone."""
        F = self.as_array()
        fz = F[:, 2]
        return bool(
            np.all(fz >= -tol)
            and np.all(np.abs(F[:, 0]) <= mu * fz + tol)
            and np.all(np.abs(F[:, 1]) <= mu * fz + tol)
        )


@dataclass(frozen=True)
class NormalizedWrench:
    """Dimensionless wrench coordinates used by the elimination argument."""

    K1: float
    K2: float
    K3: float
    C1: float
    C2: float
    px: float
    py: float

    def denormalize(self, patch: ContactPatch, fz: float) -> Wrench:
        """Recover the wrench given the normal force it was normalized by."""
        X, Y, mu = patch.X, patch.Y, patch.mu
        return Wrench(
            fx=self.K1 * mu * fz,
            fy=self.K2 * mu * fz,
            fz=fz,
            taux=self.C1 * Y * fz,
            tauy=self.C2 * X * fz,
            tauz=self.K3 * mu * (X + Y) * fz,
        )


def wrench_map_matrix(patch: ContactPatch) -> np.ndarray:
    """6x12 matrix taking stacked corner forces to the wrench at the patch center.

    Row ``k`` gives wrench component ``k`` in the order
    ``(fx, fy, fz, taux, tauy, tauz)``; columns are ``(f1x, f1y, f1z, f2x, ...)``.
    """
    G = np.zeros((6, 12))
    for i, (x, y) in enumerate(patch.corners):
        cols = slice(3 * i, 3 * i + 3)
        G[0:3, cols] = np.eye(3)
        # torque of f at (x, y, 0): (y fz, -x fz, x fy - y fx)
        G[3, 3 * i + 2] = y
        G[4, 3 * i + 2] = -x
        G[5, 3 * i + 0] = -y
        G[5, 3 * i + 1] = x
    return G


def compose_wrench(patch: ContactPatch, forces: ContactForceSet) -> Wrench:
    """Resultant wrench at the patch center of the four corner forces."""
    F = forces.as_array()
    corners = patch.corners
    f = F.sum(axis=0)
    taux = np.dot(corners[:, 1], F[:, 2])
    tauy = -np.dot(corners[:, 0], F[:, 2])
    tauz = np.dot(corners[:, 0], F[:, 1]) - np.dot(corners[:, 1], F[:, 0])
    return Wrench(f[0], f[1], f[2], taux, tauy, tauz)


def _check_normal_force(fz: float, fz_epsilon: float):
    if not fz >= fz_epsilon:
        raise DegenerateNormalForce(
            f"normal force {fz!r} is below the threshold {fz_epsilon!r}")


def zmp(patch: ContactPatch, w: Wrench, fz_epsilon: float = FZ_EPSILON) -> tuple[float, float]:
    """Zero-moment point ``(-tauy / fz, taux / fz)`` in the surface frame.

    The point lies in the rectangle exactly when the roll and pitch torque
    bounds ``|taux| <= Y fz`` and ``|tauy| <= X fz`` hold.
    """
    _check_normal_force(w.fz, fz_epsilon)
    return (-w.tauy / w.fz, w.taux / w.fz)


def normalize(patch: ContactPatch, w: Wrench, fz_epsilon: float = FZ_EPSILON) -> NormalizedWrench:
    _check_normal_force(w.fz, fz_epsilon)
    if patch.mu <= 0:
        raise ZeroFriction("normalization divides by the friction coefficient")
    X, Y, mu, fz = patch.X, patch.Y, patch.mu, w.fz
    return NormalizedWrench(
        K1=w.fx / (mu * fz),
        K2=w.fy / (mu * fz),
        K3=w.tauz / (mu * (X + Y) * fz),
        C1=w.taux / (Y * fz),
        C2=w.tauy / (X * fz),
        px=X / (X + Y),
        py=Y / (X + Y),
    )
