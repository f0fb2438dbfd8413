"""Index and group inverses of square matrices (and operator matrices).

The group inverse of ``M`` is the unique ``X`` with ``MXM = M``,
``XMX = X`` and ``MX = XM``; it exists exactly when ``M`` has index at
most one, i.e. ``rank(M^2) == rank(M)``.  Computation goes through a rank
factorization ``M = C @ F`` built from column-pivoted QR: the inverse
exists iff ``F @ C`` is invertible, and then ``M# = C @ (FC)^-2 @ F``.

Also here: enumeration of the extreme rays of ``range(A) intersected with the nonnegative orthant`` (support-set enumeration, exact for small orders), which backs
the nonnegativity-on-range test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .numkernel import (
    DEFAULT_TOL,
    CapabilityError,
    InconsistencyError,
    Tolerances,
    as_square,
    null_basis,
    numerical_rank,
    qr_column_pivoted,
    range_basis,
)

_RAY_ENUM_MAX_ORDER = 15


def index_of(m, tol: Tolerances = DEFAULT_TOL) -> int:
    """Smallest ``k >= 0`` with ``rank(M^(k+1)) == rank(M^k)``, capped at the order."""
    m = as_square(m)
    n = m.shape[0]
    power = np.eye(n)
    prev_rank = n
    for k in range(n + 1):
        nxt = power @ m
        scale = np.linalg.norm(nxt)
        if scale > 0:
            nxt = nxt / scale
        rank = numerical_rank(nxt, tol)
        if rank == prev_rank:
            return k
        power, prev_rank = nxt, rank
    return n


@dataclass(frozen=True)
class GroupInverseResult:
    exists: bool
    index: int
    inverse: np.ndarray | None
    residuals: tuple[float, float, float] | None  # ||MXM-M||, ||XMX-X||, ||MX-XM||


def group_inverse(m, tol: Tolerances = DEFAULT_TOL) -> GroupInverseResult:
    """Group inverse via rank factorization; non-existence is a result, not an error."""
    m = as_square(m)
    n = m.shape[0]
    idx = index_of(m, tol)
    q, _, perm, rank = qr_column_pivoted(m, tol)
    if rank == 0:
        # zero matrix: its own group inverse
        z = np.zeros_like(m)
        return GroupInverseResult(True, 0 if n == 0 else idx, z, (0.0, 0.0, 0.0))
    c = q[:, :rank]
    f = c.T @ m
    fc = f @ c
    sv = np.linalg.svd(fc, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= tol.rank_tol * sv[0]:
        return GroupInverseResult(False, idx, None, None)
    x = c @ np.linalg.solve(fc, np.linalg.solve(fc, f))
    res = (
        float(np.linalg.norm(m @ x @ m - m)),
        float(np.linalg.norm(x @ m @ x - x)),
        float(np.linalg.norm(m @ x - x @ m)),
    )
    return GroupInverseResult(True, idx, x, res)


@dataclass(frozen=True)
class ExistenceAudit:
    """The four equivalent group-inverse existence conditions, computed independently."""

    complementary_subspaces: bool
    range_of_square_equals_range: bool
    null_of_square_equals_null: bool
    axioms_solvable: bool

    @property
    def exists(self) -> bool:
        return self.complementary_subspaces


def group_inverse_exists_audit(m, tol: Tolerances = DEFAULT_TOL) -> ExistenceAudit:
    """Check the four existence characterizations and demand unanimity.

    Disagreement raises :class:`InconsistencyError` carrying the dissenting
    items.
    """
    m = as_square(m)
    n = m.shape[0]
    m2 = m @ m
    r_basis = range_basis(m, tol)
    n_basis = null_basis(m, tol)
    stacked = np.hstack([r_basis, n_basis]) if n else np.zeros((0, 0))
    complementary = numerical_rank(stacked, tol) == n
    rank_m = r_basis.shape[1]
    scale = np.linalg.norm(m2)
    m2n = m2 / scale if scale > 0 else m2
    rank_m2 = numerical_rank(m2n, tol)
    range_eq = rank_m2 == rank_m
    null_eq = (n - rank_m2) == n_basis.shape[1]
    axioms = group_inverse(m, tol).exists
    audit = ExistenceAudit(complementary, range_eq, null_eq, axioms)
    flags = {
        "complementary_subspaces": complementary,
        "range_of_square_equals_range": range_eq,
        "null_of_square_equals_null": null_eq,
        "axioms_solvable": axioms,
    }
    if len(set(flags.values())) > 1:
        raise InconsistencyError("group-inverse existence conditions disagree", flags)
    return audit


def is_normal(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = as_square(m)
    scale = 1.0 + np.linalg.norm(m) ** 2
    return np.linalg.norm(m @ m.T - m.T @ m) <= tol.eq_tol * scale


def normality_implies_group_inverse_check(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Vacuously true for non-normal input; a normal matrix must be group invertible."""
    if not is_normal(m, tol):
        return True
    if not group_inverse(m, tol).exists:
        raise InconsistencyError("normal matrix reported as not group invertible")
    return True


def orthant_slice_extreme_rays(q, n: int, tol: Tolerances = DEFAULT_TOL):
    """Extreme rays of ``{x >= 0 : q @ x = 0}`` by support-set enumeration.

    ``q`` may have zero rows (the slice is then the whole orthant).  Exact
    for a pointed polyhedral cone: a support ``S`` carries an extreme ray
    iff the columns of ``q`` restricted to ``S`` have a one-dimensional
    null space whose generator is strictly one-signed on ``S``.  Rays are
    returned normalized to unit 1-norm.  Orders above 15 are refused
    (2^n support sets).
    """
    if n > _RAY_ENUM_MAX_ORDER:
        raise CapabilityError(f"extreme-ray enumeration limited to order {_RAY_ENUM_MAX_ORDER}, got {n}")
    q = np.asarray(q, dtype=float).reshape(-1, n) if np.asarray(q).size else np.zeros((0, n))
    rays = []
    for size in range(1, n + 1):
        for support in itertools.combinations(range(n), size):
            cols = q[:, support]
            if q.shape[0] == 0:
                if size != 1:
                    continue
                gen = np.ones(1)
            else:
                _, sv, vh = np.linalg.svd(cols)
                rank = int(np.count_nonzero(sv > tol.rank_tol * sv[0])) if sv.size and sv[0] > 0 else 0
                if size - rank != 1:
                    continue
                gen = vh[-1]
            if np.min(np.abs(gen)) <= tol.rank_tol * np.max(np.abs(gen)):
                continue  # actual support is smaller; covered by a subset
            if np.all(gen > 0) or np.all(gen < 0):
                ray = np.zeros(n)
                ray[list(support)] = np.abs(gen)
                rays.append(ray / np.sum(ray))
    return rays


def range_orthant_extreme_rays(a, tol: Tolerances = DEFAULT_TOL):
    """Extreme rays of ``range(A) intersected with the nonnegative orthant``."""
    a = as_square(a)
    # range(A) = null(A^T)^perp, so membership is A^T-null-basis^T x = 0
    q = null_basis(a.T, tol).T
    return orthant_slice_extreme_rays(q, a.shape[0], tol)


@dataclass(frozen=True)
class NonnegOnRangeReport:
    ok: bool
    rays: list
    min_component: float  # most negative entry of inverse-mapped rays (0 when no rays)


def nonneg_on_range(a, a_sharp, tol: Tolerances = DEFAULT_TOL) -> NonnegOnRangeReport:
    """Does ``x >= 0, x in range(A)`` imply ``A# x >= 0``?

    Decided exactly on the extreme rays of the polyhedral cone
    ``range(A) intersected with the orthant``; vacuously true when that cone is ``{0}``.
    """
    a = as_square(a)
    a_sharp = as_square(a_sharp)
    rays = range_orthant_extreme_rays(a, tol)
    if not rays:
        return NonnegOnRangeReport(True, [], 0.0)
    worst = min(float(np.min(a_sharp @ r)) for r in rays)
    return NonnegOnRangeReport(worst >= -tol.feas_tol, rays, worst)
