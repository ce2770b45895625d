"""Randomized cross-validation of the closed form against the polytope oracle.

Wrenches are drawn per patch from two sources with a seeded generator:

* conic combinations of the span rays with random, partly sparse weights
  (members, some of them on faces of the cone);
* an ambient box scaled to the patch, ``fx, fy`` in ``0.6 mu [-1, 1]``,
  ``fz`` in ``[-0.25, 1]``, ``taux`` in ``0.6 Y [-1, 1]``, ``tauy`` in
  ``0.6 X [-1, 1]`` and ``tauz`` in ``0.6 mu (X + Y) [-1, 1]``; roughly a
  quarter of these are members.

Samples whose worst normalized margin (computed on the unit-length wrench)
lies within ``epsilon`` of zero are excluded from the comparison.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .closed_form import MEMBERSHIP_TOL, margins_many
from .contact_model import ContactPatch, wrench_map_matrix
from .polytope import cwc_span, membership_lp_many
from .reconstruction import reconstruct_forces_many

DEFAULT_X = (0.05, 0.1, 0.3)
DEFAULT_Y = (0.05, 0.1, 0.3)
DEFAULT_MU = (0.1, 0.5, 1.0)

AMBIENT_SCALE = 0.6

#: Width of the excluded band around the cone boundary, on normalized margins.
BOUNDARY_EPSILON = 1e-7


@dataclass(frozen=True)
class ValidationConfig:
    X: tuple = DEFAULT_X
    Y: tuple = DEFAULT_Y
    mu: tuple = DEFAULT_MU
    samples: int = 10_000
    seed: int = 0
    epsilon: float = BOUNDARY_EPSILON
    reconstruct_samples: int = 1000
    allow_boundary: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample per patch")
        if self.epsilon < 0:
            raise ValueError("boundary band must be nonnegative")
        for X in self.X:
            for Y in self.Y:
                for mu in self.mu:
                    ContactPatch(X, Y, mu)

    def patches(self):
        return [ContactPatch(X, Y, mu) for X in self.X for Y in self.Y for mu in self.mu]


@dataclass
class PatchResult:
    patch: ContactPatch
    samples: int
    members: int
    excluded: int
    disagreements: int
    reconstructed: int
    reconstruction_failures: int
    seconds: float

    @property
    def passed(self) -> bool:
        return self.disagreements == 0 and self.reconstruction_failures == 0


@dataclass
class ValidationReport:
    config: ValidationConfig
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.config.allow_boundary:
            return all(r.reconstruction_failures == 0 for r in self.results)
        return all(r.passed for r in self.results)


def sample_wrenches(patch: ContactPatch, n: int, rng: np.random.Generator):
    """``(W, conic)``: ``n`` wrenches and a mask flagging the conic half."""
    rays = cwc_span(patch).rays
    n_conic = n // 2
    n_ambient = n - n_conic
    density = rng.choice([1.0, 0.5, 0.25], size=(n_conic, 1))
    lam = rng.uniform(0.0, 1.0, (n_conic, len(rays))) * (rng.random((n_conic, len(rays))) < density)
    conic = lam @ rays
    mu = patch.mu if patch.mu > 0 else 0.05
    scale = AMBIENT_SCALE * np.array([mu, mu, 0.0, patch.Y, patch.X, mu * (patch.X + patch.Y)])
    ambient = rng.uniform(-1.0, 1.0, (n_ambient, 6)) * scale
    ambient[:, 2] = rng.uniform(-0.25, 1.0, n_ambient)
    W = np.vstack([conic, ambient])
    return W, np.arange(n) < n_conic


def worst_unit_margin(patch: ContactPatch, W) -> np.ndarray:
    """Largest normalized margin of each wrench after scaling it to unit length."""
    W = np.atleast_2d(np.asarray(W, dtype=float))
    norms = np.linalg.norm(W, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return margins_many(patch, W / norms).max(axis=1)


def reconstruction_errors(patch: ContactPatch, W, forces, ok, tol: float = 1e-9):
    """Per-sample flags for failed round trips among solved wrenches.

    A solved wrench fails when the corner forces miss the wrench by more than
    ``tol`` (relative to its norm) or leave their friction pyramids.
    """
    G = wrench_map_matrix(patch)
    bad = np.zeros(len(W), bool)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return bad
    F = forces[idx]
    scale = np.maximum(np.linalg.norm(W[idx], axis=1), 1e-300)
    residual = np.abs(F.reshape(-1, 12) @ G.T - W[idx]).max(axis=1) / scale
    fz = F[..., 2]
    slack = tol * scale[:, None]
    friction = ((np.abs(F[..., 0]) <= patch.mu * fz + slack)
                & (np.abs(F[..., 1]) <= patch.mu * fz + slack)
                & (fz >= -slack)).all(axis=1)
    bad[idx] = (residual > tol) | ~friction
    return bad


def validate_patch(patch: ContactPatch, config: ValidationConfig, index: int = 0) -> PatchResult:
    start = time.perf_counter()
    rng = np.random.default_rng([config.seed, index])
    W, _ = sample_wrenches(patch, config.samples, rng)
    worst = worst_unit_margin(patch, W)
    closed = worst <= MEMBERSHIP_TOL
    oracle = membership_lp_many(cwc_span(patch), W)
    outside = np.abs(worst) >= config.epsilon if config.epsilon > 0 else np.ones(len(W), bool)
    disagreements = int(np.sum((closed != oracle) & outside))

    # reconstruction round trip on a deterministic subset
    k = min(config.reconstruct_samples, len(W))
    sub = np.linspace(0, len(W) - 1, k).astype(int) if k else np.array([], int)
    forces, ok = reconstruct_forces_many(patch, W[sub])
    contradiction = (ok != closed[sub]) & outside[sub]
    failures = int(np.sum(contradiction | reconstruction_errors(patch, W[sub], forces, ok)))
    return PatchResult(
        patch=patch,
        samples=len(W),
        members=int(closed.sum()),
        excluded=int(np.sum(~outside)),
        disagreements=disagreements,
        reconstructed=int(k),
        reconstruction_failures=failures,
        seconds=time.perf_counter() - start,
    )


def run_validation(config: ValidationConfig) -> ValidationReport:
    report = ValidationReport(config)
    for i, patch in enumerate(config.patches()):
        report.results.append(validate_patch(patch, config, i))
    return report
