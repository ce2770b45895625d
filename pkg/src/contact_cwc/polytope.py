"""Wrench cone built from corner friction pyramids, and cone conversions.

This module rebuilds the contact wrench cone without using the closed-form
inequalities: each corner carries a linearized friction cone, the corner
generators are pushed through the wrench map, and the resulting span form is
either queried directly by LP or converted to a face form by double
description. :func:`fourier_motzkin_eliminate` offers a second, symbolic
route, optionally in exact rational arithmetic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import lp
from .closed_form import unnormalized_rows, zero_friction_rows
from .contact_model import ContactPatch, Wrench, wrench_map_matrix
from .errors import ExpressionSwell, NumericalFailure

#: Angular threshold (radians) under which two rays count as duplicates.
RAY_ANGLE_TOL = 1e-10

#: Tolerance for ray/face incidence in the double description method.
DD_TOL = 1e-10


@dataclass(frozen=True)
class SpanForm:
    """Cone ``{R.T @ lam : lam >= 0}`` for the unit rays stored in ``rays``."""

    rays: np.ndarray

    def __len__(self):
        return len(self.rays)

    def deduplicated(self, angle_tol: float = RAY_ANGLE_TOL) -> "SpanForm":
        kept = []
        for r in self.rays:
            if not any(_angle(r, k) < angle_tol for k in kept):
                kept.append(r)
        return SpanForm(np.array(kept))

    def contains(self, w) -> bool:
        return membership_lp(self, w)


def _angle(u, v) -> float:
    cos = np.clip(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)), -1.0, 1.0)
    return float(np.arccos(cos))


@dataclass(frozen=True)
class InequalitySystem:
    """Rows ``A[k] @ w <= b[k]``.

    ``A`` and ``b`` are float arrays, or object arrays of ``Fraction`` in exact
    mode. ``history`` optionally tracks, for every row, the set of original
    rows it was combined from, and ``eliminations`` counts the Fourier-Motzkin
    steps performed since; both feed the Chernikov pruning rule.
    """

    A: np.ndarray
    b: np.ndarray
    history: tuple | None = None
    eliminations: int = 0

    def __post_init__(self):
        A = np.asarray(self.A)
        if A.ndim == 1:
            A = A.reshape(0 if A.size == 0 else 1, -1)
        b = np.asarray(self.b).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError("A and b must have the same number of rows")
        if A.dtype != object and (np.isnan(A).any() or np.isnan(b).any()):
            raise ValueError("inequality system contains NaN")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def cone(cls, A) -> "InequalitySystem":
        A = np.asarray(A)
        zero = Fraction(0) if A.dtype == object else 0.0
        return cls(A, np.full(A.shape[0], zero, dtype=A.dtype))

    @property
    def exact(self) -> bool:
        return self.A.dtype == object

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def __len__(self):
        return self.A.shape[0]

    def as_float(self) -> "InequalitySystem":
        return InequalitySystem(self.A.astype(float), self.b.astype(float))

    def as_exact(self) -> "InequalitySystem":
        to_frac = np.vectorize(Fraction, otypes=[object])
        A = to_frac(self.A) if self.A.size else self.A.astype(object)
        b = to_frac(self.b) if self.b.size else self.b.astype(object)
        return InequalitySystem(A, b, self.history, self.eliminations)

    def is_cone(self) -> bool:
        return all(v == 0 for v in self.b)

    def contains(self, w, tol: float = 1e-9) -> bool:
        f = self.as_float()
        w = np.asarray(w.as_array() if isinstance(w, Wrench) else w, dtype=float)
        norms = np.linalg.norm(f.A, axis=1)
        norms[norms == 0] = 1.0
        return bool(np.all((f.A @ w - f.b) / norms <= tol))

    def normalized(self) -> "InequalitySystem":
        """Float copy with every row scaled to a unit normal (zero rows kept)."""
        f = self.as_float()
        norms = np.linalg.norm(f.A, axis=1)
        norms[norms == 0] = 1.0
        return InequalitySystem(f.A / norms[:, None], f.b / norms)


def friction_pyramid_generators(mu: float) -> np.ndarray:
    """Unit extreme rays of the pyramid ``|fx|, |fy| <= mu fz``.

    Rays are ordered ``(+,+), (+,-), (-,+), (-,-)`` on the tangential signs.
    For ``mu = 0`` the pyramid collapses to the single ray ``(0, 0, 1)``.
    """
    if mu < 0:
        raise ValueError("friction coefficient must be nonnegative")
    if mu == 0:
        return np.array([[0.0, 0.0, 1.0]])
    gens = np.array([[sx * mu, sy * mu, 1.0] for sx, sy in ((1, 1), (1, -1), (-1, 1), (-1, -1))])
    return gens / np.linalg.norm(gens, axis=1, keepdims=True)


def cwc_span(patch: ContactPatch) -> SpanForm:
    """Span form of the wrench cone: pyramid generators placed at each corner."""
    G = wrench_map_matrix(patch)
    gens = friction_pyramid_generators(patch.mu)
    rays = []
    for i in range(4):
        for g in gens:
            rays.append(G[:, 3 * i:3 * i + 3] @ g)
    rays = np.array(rays)
    rays /= np.linalg.norm(rays, axis=1, keepdims=True)
    return SpanForm(rays)


def membership_lp_many(span: SpanForm, W) -> np.ndarray:
    """Decide ``w in cone(rays)`` for every row of ``W`` by phase-1 simplex.

    Each wrench is scaled to unit length first, so the feasibility threshold is
    relative to the wrench magnitude. The zero wrench is always a member.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    norms = np.linalg.norm(W, axis=1)
    out = norms == 0
    idx = np.flatnonzero(~out)
    if idx.size:
        res = lp.solve_batch(span.rays.T, W[idx] / norms[idx, None])
        out[idx] = res.status == lp.OPTIMAL
    return out


def membership_lp(span: SpanForm, w) -> bool:
    """Whether some ``lam >= 0`` satisfies ``sum_j lam_j r_j = w``."""
    w = w.as_array() if isinstance(w, Wrench) else w
    return bool(membership_lp_many(span, np.asarray(w, dtype=float)[None, :])[0])


# -- span form to face form -------------------------------------------------

def _complement_basis(Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(Q).

    Built by Gram-Schmidt over the coordinate axes in index order, so it
    consists of plain axes whenever possible.
    """
    d, r = Q.shape
    basis = [q for q in Q.T]
    extra = []
    for e in np.eye(d):
        v = e.copy()
        for q in basis:
            v -= np.dot(v, q) * q
        if np.linalg.norm(v) > 1e-8:
            v /= np.linalg.norm(v)
            basis.append(v)
            extra.append(v)
        if len(basis) == d:
            break
    return np.array(extra).reshape(-1, d)


def _span_basis(R: np.ndarray):
    """Orthonormal basis of span(R), deterministic up to the input order."""
    basis = []
    for r in R:
        v = r.astype(float).copy()
        for q in basis:
            v -= np.dot(v, q) * q
        if np.linalg.norm(v) > 1e-9 * max(1.0, np.linalg.norm(r)):
            basis.append(v / np.linalg.norm(v))
    return np.array(basis).T.reshape(R.shape[1], len(basis))


def _polar_extreme_rays(H: np.ndarray, tol: float = DD_TOL) -> np.ndarray:
    """Extreme rays of the pointed cone ``{a : H @ a <= 0}`` (double description).

    ``H`` must have full column rank. Rays are kept with the set of rows of
    ``H`` they make tight (as a bitmask); a new ray is generated for every
    pair of adjacent rays lying on opposite sides of the row being added.
    """
    k, r = H.shape
    order = []
    for i in range(k):
        trial = H[order + [i]]
        if np.linalg.matrix_rank(trial, tol=1e-9) == len(order) + 1:
            order.append(i)
        if len(order) == r:
            break
    if len(order) < r:
        raise NumericalFailure("ray set is rank deficient in its own span")
    Binv = np.linalg.inv(H[order])
    rays = [-Binv[:, j] / np.linalg.norm(Binv[:, j]) for j in range(r)]
    full = sum(1 << i for i in order)
    tight = [full & ~(1 << order[j]) for j in range(r)]

    for h in range(k):
        if h in order:
            continue
        values = np.array([np.dot(H[h], a) for a in rays])
        pos = [i for i, v in enumerate(values) if v > tol]
        neg = [i for i, v in enumerate(values) if v < -tol]
        zero = [i for i, v in enumerate(values) if abs(v) <= tol]
        new_rays, new_tight = [], []
        for p in pos:
            for q in neg:
                common = tight[p] & tight[q]
                if bin(common).count("1") < r - 2:
                    continue
                if any(j not in (p, q) and tight[j] & common == common
                       for j in range(len(rays))):
                    continue
                a = values[p] * rays[q] - values[q] * rays[p]
                new_rays.append(a / np.linalg.norm(a))
                new_tight.append(common | (1 << h))
        keep = neg + zero
        rays = [rays[i] for i in keep] + new_rays
        tight = [tight[i] | ((1 << h) if i in zero else 0) for i in keep] + new_tight
        if not rays:
            break
    return np.array(rays).reshape(-1, r)


def span_to_face(span: SpanForm, remove_redundancy: bool = True) -> InequalitySystem:
    """Half-space description ``A w <= 0`` of the conic hull of ``span.rays``.

    Lower-dimensional cones get a pair of opposite rows for every direction
    orthogonal to their linear span. Rows have unit norm.
    """
    if len(span) == 0:
        raise NumericalFailure("empty ray set")
    R = span.deduplicated().rays
    d = R.shape[1]
    Q = _span_basis(R)
    rows = []
    if Q.shape[1] > 0:
        facets = _polar_extreme_rays(R @ Q)
        rows.extend(Q @ f for f in facets)
    for p in _complement_basis(Q):
        rows.extend([p, -p])
    A = np.array(rows).reshape(-1, d)
    A /= np.linalg.norm(A, axis=1, keepdims=True)
    A[np.abs(A) < 1e-15] = 0.0
    system = InequalitySystem.cone(A)
    if remove_redundancy:
        system = remove_redundant(system)
    return system


# -- redundancy removal -----------------------------------------------------

def _sort_key(row, b):
    return tuple(np.round(np.append(row, b), 9).tolist())


def remove_redundant(system: InequalitySystem, tol: float = 1e-9) -> InequalitySystem:
    """Drop every row implied by the remaining ones.

    Rows are first put in lexicographic order of their rounded (normalized)
    coefficients, then tested in that order: a row goes when maximizing its
    left-hand side over the other surviving rows cannot exceed its bound.
    Cones are bounded by the box ``|w_i| <= 1`` for the test. The output
    keeps the input arithmetic (float or exact) and the lexicographic order.
    """
    if len(system) == 0:
        return system
    normed = system.normalized()
    # all-zero rows are either vacuous or make the system empty
    nonzero = [i for i in range(len(system)) if np.any(normed.A[i] != 0)]
    order = sorted(nonzero, key=lambda i: _sort_key(normed.A[i], normed.b[i]))
    cone = system.is_cone()
    kept = list(order)
    for i in order:
        others = [j for j in kept if j != i]
        if not others:
            continue
        status, value, _ = lp.maximize_over_polyhedron(
            normed.A[i], normed.A[others], normed.b[others], box=1.0 if cone else None)
        if status == lp.UNBOUNDED:
            continue
        if status == lp.INFEASIBLE or value <= normed.b[i] + tol:
            kept.remove(i)
    return _subset(system, kept)


def _subset(system: InequalitySystem, idx) -> InequalitySystem:
    idx = list(idx)
    history = None if system.history is None else tuple(system.history[i] for i in idx)
    return InequalitySystem(system.A[idx].reshape(len(idx), system.dim), system.b[idx],
                            history, system.eliminations)


# -- Fourier-Motzkin --------------------------------------------------------

def _canonical(row, b):
    """Positive rescaling that makes equal half-spaces compare equal."""
    values = list(row) + [b]
    lead = next((v for v in values if v != 0), None)
    if lead is None:
        return tuple(values)
    scale = abs(lead)
    return tuple(v / scale for v in values)


def fourier_motzkin_eliminate(system: InequalitySystem, var_index: int, *,
                              exact: bool = False, max_rows: int = 5000,
                              drop_column: bool = True) -> InequalitySystem:
    """Eliminate variable ``var_index`` by pairing its upper and lower bounds.

    Rows where the variable has a positive coefficient bound it from above,
    negative coefficients bound it from below. Each (upper, lower) pair is
    combined with positive weights so that the variable cancels; rows without
    the variable are kept. Exact duplicates are merged, and when the input
    carries ``history`` the Chernikov rule drops combinations that involve
    more original rows than eliminations performed plus one.

    With ``exact=True`` the system is converted to ``Fraction`` arithmetic.
    A :class:`ExpressionSwell` warning is emitted when the result has more
    than ``max_rows`` rows.
    """
    if exact and not system.exact:
        system = system.as_exact()
    A, b = system.A, system.b
    history = system.history
    coef = A[:, var_index]
    upper = [i for i in range(len(system)) if coef[i] > 0]
    lower = [i for i in range(len(system)) if coef[i] < 0]
    keep = [i for i in range(len(system)) if coef[i] == 0]

    rows, rhs, hist = [], [], []
    for i in keep:
        rows.append(A[i])
        rhs.append(b[i])
        hist.append(None if history is None else history[i])
    # after k eliminations a facet combines at most k + 1 original rows
    limit = system.eliminations + 2
    for u in upper:
        for l in lower:
            h = None
            if history is not None:
                h = history[u] | history[l]
                if len(h) > limit:
                    continue
            cu, cl = coef[u], -coef[l]
            rows.append(A[u] * cl + A[l] * cu)
            rhs.append(b[u] * cl + b[l] * cu)
            hist.append(h)

    seen = {}
    out_rows, out_rhs, out_hist = [], [], []
    for row, r, h in zip(rows, rhs, hist):
        if drop_column:
            row = np.delete(row, var_index)
        if system.exact:
            key = _canonical(row, r)
        else:
            scale = np.abs(row).max() or 1.0
            key = tuple(np.round(np.append(row, r) / scale, 12).tolist())
        if key in seen:
            continue
        seen[key] = len(out_rows)
        out_rows.append(row)
        out_rhs.append(r)
        out_hist.append(h)

    ncols = A.shape[1] - (1 if drop_column else 0)
    dtype = object if system.exact else float
    new_A = np.array(out_rows, dtype=dtype).reshape(len(out_rows), ncols)
    new_b = np.array(out_rhs, dtype=dtype).reshape(len(out_rhs))
    if len(out_rows) > max_rows:
        warnings.warn(f"Fourier-Motzkin produced {len(out_rows)} rows (cap {max_rows})",
                      ExpressionSwell, stacklevel=2)
    new_history = None if history is None else tuple(out_hist)
    return InequalitySystem(new_A, new_b, new_history, system.eliminations + 1)


def eliminate_equalities(E, system: InequalitySystem, variables) -> tuple:
    """Use the equality rows ``E @ x = 0`` to substitute out some ``variables``.

    Each equality is solved for the first listed variable it still contains.
    Returns ``(system, remaining)`` where ``system`` no longer depends on the
    substituted variables (their columns are zero) and ``remaining`` lists the
    variables left for inequality elimination.
    """
    E = np.array(E, dtype=system.A.dtype)
    A = system.A.copy()
    remaining = list(variables)
    for k in range(E.shape[0]):
        pivot = next((v for v in remaining if E[k, v] != 0), None)
        if pivot is None:
            continue
        row = E[k] / E[k, pivot]
        A = A - np.outer(A[:, pivot], row)
        E = E - np.outer(E[:, pivot], row)
        remaining.remove(pivot)
    return InequalitySystem(A, system.b, system.history, system.eliminations), remaining


def project(system: InequalitySystem, variables, *, exact: bool = False,
            max_rows: int = 5000) -> InequalitySystem:
    """Eliminate ``variables`` one at a time and delete their columns.

    The next variable is the one producing the fewest new rows. Rows are
    tracked with Chernikov histories; afterwards all-zero rows are dropped.
    """
    if exact and not system.exact:
        system = system.as_exact()
    if system.history is None:
        system = InequalitySystem(system.A, system.b,
                                  tuple(frozenset([i]) for i in range(len(system))), 0)
    todo = list(variables)
    while todo:
        def cost(v):
            col = system.A[:, v]
            p = sum(1 for c in col if c > 0)
            n = sum(1 for c in col if c < 0)
            return (p * n - p - n, v)
        v = min(todo, key=cost)
        system = fourier_motzkin_eliminate(system, v, max_rows=max_rows, drop_column=False)
        todo.remove(v)
    keep = [j for j in range(system.dim) if j not in set(variables)]
    A = system.A[:, keep]
    nonzero = [i for i in range(len(system)) if any(a != 0 for a in A[i])]
    for i in range(len(system)):
        if i not in nonzero and system.b[i] < 0:
            raise NumericalFailure("projected system is infeasible (0 <= negative)")
    history = tuple(system.history[i] for i in nonzero)
    return InequalitySystem(A[nonzero].reshape(len(nonzero), len(keep)), system.b[nonzero],
                            history, system.eliminations)


def force_cone_system(X, Y, mu):
    """Corner-force description of the wrench cone over variables ``(f, w)``.

    Returns ``(E, system)`` with equality rows ``E @ (f, w) = 0`` encoding the
    wrench map and the friction-pyramid rows of each corner (including
    ``fz_i >= 0``). Works with floats or ``Fraction`` patch data.
    """
    zero, one = X - X, X / X
    E = [[zero] * 18 for _ in range(6)]
    corners = [(X, Y), (X, -Y), (-X, -Y), (-X, Y)]
    for i, (x, y) in enumerate(corners):
        fx, fy, fz = 3 * i, 3 * i + 1, 3 * i + 2
        E[0][fx] = E[1][fy] = E[2][fz] = one
        E[3][fz] = y
        E[4][fz] = -x
        E[5][fx] = -y
        E[5][fy] = x
    for k in range(6):
        E[k][12 + k] = -one
    rows = []
    for i in range(4):
        fx, fy, fz = 3 * i, 3 * i + 1, 3 * i + 2
        for t in (fx, fy):
            for s in (one, -one):
                row = [zero] * 18
                row[t], row[fz] = s, -mu
                rows.append(row)
        row = [zero] * 18
        row[fz] = -one
        rows.append(row)
    dtype = object if isinstance(X, Fraction) else float
    A = np.array(rows, dtype=dtype)
    return np.array(E, dtype=dtype), InequalitySystem.cone(A)


def project_wrench_cone(patch: ContactPatch, *, exact: bool = True,
                        remove_redundancy: bool = True) -> InequalitySystem:
    """Face form of the wrench cone obtained by eliminating all corner forces.

    The six force variables fixed by the wrench map are substituted first, the
    other six go through Fourier-Motzkin. With ``exact=True`` everything runs
    on the exact binary values of the patch parameters as ``Fraction``.
    """
    conv = Fraction if exact else float
    X, Y, mu = conv(patch.X), conv(patch.Y), conv(patch.mu)
    E, system = force_cone_system(X, Y, mu)
    system, remaining = eliminate_equalities(E, system, range(12))
    eliminated = [v for v in range(12) if v not in remaining]
    system = project(system, remaining, exact=exact)
    keep = [j for j in range(18) if j not in remaining]
    # substituted columns are identically zero; drop them as well
    cols = [keep.index(j) for j in keep if j not in eliminated]
    system = InequalitySystem(system.A[:, cols], system.b, system.history, system.eliminations)
    if remove_redundancy:
        system = remove_redundant(system)
    return system


def matches_closed_form(system: InequalitySystem, patch: ContactPatch) -> bool:
    """Exact test that ``system`` is the closed-form face form up to row order and scaling.

    Requires an exact system; the closed-form rows are built from the exact
    binary values of the patch parameters. For ``mu = 0`` the cone is not
    full-dimensional, its rows are not unique, and the test falls back to
    :func:`same_cone` against the reduced frictionless rows.
    """
    if not system.exact:
        raise ValueError("exact comparison needs a Fraction system")
    if not system.is_cone():
        return False
    X, Y, mu = Fraction(patch.X), Fraction(patch.Y), Fraction(patch.mu)
    if mu == 0:
        reference = InequalitySystem.cone(np.array(zero_friction_rows(X, Y), dtype=object))
        return same_cone(system, reference)
    expected = {_canonical(row, Fraction(0)) for row in unnormalized_rows(X, Y, mu)}
    produced = [_canonical(row, b) for row, b in zip(system.A, system.b)]
    return len(produced) == len(set(produced)) and set(produced) == expected


def implies(system: InequalitySystem, other: InequalitySystem, tol: float = 1e-9) -> bool:
    """Whether every row of ``other`` holds on the whole set described by ``system``."""
    normed, target = system.normalized(), other.normalized()
    box = 1.0 if system.is_cone() else None
    for a, b in zip(target.A, target.b):
        status, value, _ = lp.maximize_over_polyhedron(a, normed.A, normed.b, box=box)
        if status == lp.UNBOUNDED or (status == lp.OPTIMAL and value > b + tol):
            return False
    return True


def same_cone(first: InequalitySystem, second: InequalitySystem, tol: float = 1e-9) -> bool:
    """Mutual implication test between two inequality systems."""
    return implies(first, second, tol) and implies(second, first, tol)
