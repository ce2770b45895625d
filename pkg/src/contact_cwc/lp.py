"""Dense two-phase simplex with Bland's rule.

Problems are in standard form::

    minimize    c @ x
    subject to  A @ x = b,  x >= 0

:func:`solve_batch` solves many problems that share ``A`` and ``c`` but differ
in ``b`` (one tableau per problem, pivots vectorized across the batch). Every
problem follows Bland's smallest-index rule for both the entering and the
leaving variable, so results are deterministic and cycling cannot occur.
Sizes in this package stay below ~40 columns, so the dense tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure

OPTIMAL, INFEASIBLE, UNBOUNDED = 0, 1, 2

_RUNNING = -1

#: Problems per vectorized tableau block; keeps the working set cache-sized.
CHUNK = 256


@dataclass
class LPResult:
    status: np.ndarray
    x: np.ndarray
    fun: np.ndarray
    infeasibility: np.ndarray
    iterations: int

    @property
    def success(self) -> np.ndarray:
        return self.status == OPTIMAL


def _pivot(T, basis, idx, rows, cols):
    k = np.arange(len(idx))
    sub = T[idx]
    prow = sub[k, rows, :] / sub[k, rows, cols][:, None]
    colv = sub[k, :, cols]
    sub -= colv[:, :, None] * prow[:, None, :]
    sub[k, rows, :] = prow
    T[idx] = sub
    basis[idx, rows] = cols


def _iterate(T, basis, running, ncols, tol, pivot_tol, max_iter):
    """Run Bland pivots on the problems flagged in ``running``.

    Returns the final status of each running problem (OPTIMAL or UNBOUNDED)
    and the number of pivot rounds.
    """
    m = T.shape[1] - 1
    status = np.where(running, _RUNNING, OPTIMAL)
    rounds = 0
    for rounds in range(1, max_iter + 1):
        idx = np.flatnonzero(status == _RUNNING)
        if idx.size == 0:
            return status, rounds - 1
        negative = T[idx, m, :ncols] < -tol
        improvable = negative.any(axis=1)
        status[idx[~improvable]] = OPTIMAL
        idx = idx[improvable]
        if idx.size == 0:
            return status, rounds
        enter = negative[improvable].argmax(axis=1)

        col = T[idx, :m, :][np.arange(idx.size), :, enter]
        rhs = T[idx, :m, -1]
        eligible = col > pivot_tol
        ratio = np.where(eligible, rhs / np.where(eligible, col, 1.0), np.inf)
        best = ratio.min(axis=1)
        bounded = np.isfinite(best)
        status[idx[~bounded]] = UNBOUNDED
        idx, enter, ratio, best = idx[bounded], enter[bounded], ratio[bounded], best[bounded]
        if idx.size == 0:
            continue
        # Bland: among tied rows leave with the smallest basic variable index
        ties = ratio <= best[:, None] + 1e-12 * (1.0 + np.abs(best[:, None]))
        key = np.where(ties, basis[idx], np.iinfo(basis.dtype).max)
        leave = key.argmin(axis=1)
        _pivot(T, basis, idx, leave, enter)
    if np.any(status == _RUNNING):
        raise NumericalFailure(f"simplex did not terminate within {max_iter} pivots")
    return status, rounds


def solve_batch(A, B, c=None, *, chunk: int | None = None, **kwargs) -> LPResult:
    """Solve ``min c@x, A@x = b_k, x >= 0`` for every row ``b_k`` of ``B``.

    With ``c=None`` only phase 1 runs and the result reports feasibility
    (``status`` is OPTIMAL for feasible problems, INFEASIBLE otherwise).
    A problem is declared feasible when the phase-1 residual
    ``min ||A x - b||_1`` is at most ``feas_tol * max(1, ||b||_1)``.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    chunk = chunk or CHUNK
    if len(B) <= chunk:
        return _solve_chunk(A, B, c, **kwargs)
    parts = [_solve_chunk(A, B[k:k + chunk], c, **kwargs) for k in range(0, len(B), chunk)]
    return LPResult(
        status=np.concatenate([p.status for p in parts]),
        x=np.concatenate([p.x for p in parts]),
        fun=np.concatenate([p.fun for p in parts]),
        infeasibility=np.concatenate([p.infeasibility for p in parts]),
        iterations=max(p.iterations for p in parts),
    )


def _solve_chunk(A, B, c=None, *, feas_tol: float = 1e-9, tol: float = 1e-11,
                 pivot_tol: float = 1e-9, max_iter: int | None = None) -> LPResult:
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    N = B.shape[0]
    if B.shape[1] != m:
        raise ValueError(f"right-hand sides must have {m} entries, got {B.shape[1]}")
    if max_iter is None:
        max_iter = 50 * (m + n)

    sign = np.where(B < 0, -1.0, 1.0)
    T = np.zeros((N, m + 1, n + m + 1))
    T[:, :m, :n] = sign[:, :, None] * A
    T[:, :m, n:n + m] = np.eye(m)
    T[:, :m, -1] = np.abs(B)
    T[:, m, :n] = -T[:, :m, :n].sum(axis=1)
    T[:, m, -1] = -T[:, :m, -1].sum(axis=1)
    basis = np.tile(np.arange(n, n + m), (N, 1))

    # artificial columns never re-enter once they leave the basis
    _, rounds = _iterate(T, basis, np.ones(N, bool), n, tol, pivot_tol, max_iter)
    infeasibility = np.maximum(-T[:, m, -1], 0.0)
    feasible = infeasibility <= feas_tol * np.maximum(1.0, np.abs(B).sum(axis=1))
    status = np.where(feasible, OPTIMAL, INFEASIBLE)

    if c is not None and feasible.any():
        c = np.asarray(c, dtype=float)
        idx = np.flatnonzero(feasible)
        _drive_out_artificials(T, basis, idx, n, pivot_tol)
        cb = np.where(basis[idx] < n, c[np.minimum(basis[idx], n - 1)], 0.0)
        T[idx, m, :] = 0.0
        T[idx, m, :n] = c
        T[idx, m, :] -= np.einsum("ki,kij->kj", cb, T[idx, :m, :])
        running = np.zeros(N, bool)
        running[idx] = True
        phase2, r2 = _iterate(T, basis, running, n, tol, pivot_tol, max_iter)
        rounds += r2
        status = np.where(feasible & (phase2 == UNBOUNDED), UNBOUNDED, status)

    x = np.zeros((N, n))
    rows, slots = np.nonzero(basis < n)
    x[rows, basis[rows, slots]] = np.maximum(T[rows, slots, -1], 0.0)
    fun = x @ c if c is not None else np.zeros(N)
    fun = np.where(status == OPTIMAL, fun, np.nan)
    return LPResult(status=status, x=x, fun=fun, infeasibility=infeasibility,
                    iterations=rounds)


def _drive_out_artificials(T, basis, idx, n, pivot_tol):
    m = T.shape[1] - 1
    for r in range(m):
        sel = idx[basis[idx, r] >= n]
        if sel.size == 0:
            continue
        entries = np.abs(T[sel, r, :n]) > pivot_tol
        can = entries.any(axis=1)
        sel = sel[can]
        if sel.size == 0:
            continue
        # the artificial sits at level zero; pin it before pivoting
        T[sel, r, -1] = 0.0
        cols = entries[can].argmax(axis=1)
        _pivot(T, basis, sel, np.full(sel.size, r), cols)


def solve(A, b, c=None, **kwargs) -> LPResult:
    """Single-problem convenience wrapper around :func:`solve_batch`."""
    res = solve_batch(A, np.asarray(b, dtype=float)[None, :], c, **kwargs)
    return LPResult(status=res.status[0], x=res.x[0], fun=res.fun[0],
                    infeasibility=res.infeasibility[0], iterations=res.iterations)


def maximize_over_polyhedron(objective, A_ub, b_ub, box: float | None = None, **kwargs):
    """Maximize ``objective @ w`` subject to ``A_ub @ w <= b_ub`` with ``w`` free.

    ``box`` adds ``|w_i| <= box``. Returns ``(status, value, w)``.
    """
    objective = np.asarray(objective, dtype=float)
    A_ub = np.asarray(A_ub, dtype=float).reshape(-1, objective.size)
    b_ub = np.asarray(b_ub, dtype=float).reshape(-1)
    d = objective.size
    rows = [np.hstack([A_ub, -A_ub])]
    rhs = [b_ub]
    if box is not None:
        # w = u - v with 0 <= u, v <= box
        rows.append(np.hstack([np.eye(d), np.zeros((d, d))]))
        rows.append(np.hstack([np.zeros((d, d)), np.eye(d)]))
        rhs += [np.full(d, box), np.full(d, box)]
    G = np.vstack(rows)
    h = np.concatenate(rhs)
    k = G.shape[0]
    A = np.hstack([G, np.eye(k)])
    c = np.concatenate([-objective, objective, np.zeros(k)])
    res = solve(A, h, c, **kwargs)
    w = res.x[:d] - res.x[d:2 * d]
    value = -res.fun if res.status == OPTIMAL else np.nan
    return int(res.status), value, w
