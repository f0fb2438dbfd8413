"""Is a linear subspace's intersection with a cone trivial?

Two ambient settings are supported: vectors against the nonnegative
orthant, and symmetric matrices (svec coordinates) against the positive
semidefinite cone.

Orthant decisions are exact, via Stiemke's alternative implemented as two
linear programs: either the subspace contains a nonzero nonnegative
vector (witness), or its orthogonal complement contains a strictly
positive vector (certificate) -- never both.

PSD decisions run a three-stage pipeline: a trace shortcut (a subspace of
trace-zero matrices meets the cone only at 0, certified by the identity),
a primal witness search (Dykstra alternating projections between the
trace-one slice of the subspace and the cone, multiple seeded starts),
and a dual certificate search (projected supergradient ascent of the
smallest eigenvalue over the trace-normalized orthogonal complement).
``UNDECIDED`` is an honest outcome when both searches exhaust their
budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numkernel import DEFAULT_TOL, InconsistencyError, Tolerances, lp_solve
from .symspace import smat, svec, sym_dim


@dataclass(frozen=True)
class SubspaceSpec:
    """A linear subspace given by an orthonormal basis.

    ``ambient`` is ``"vec"`` (vectors in R^n) or ``"sym"`` (symmetric
    matrices of order n in svec coordinates).  ``basis`` has one column
    per basis element; zero columns means the zero subspace.
    """

    ambient: str
    n: int
    basis: np.ndarray

    def __post_init__(self):
        if self.ambient not in ("vec", "sym"):
            raise ValueError(f"unknown ambient {self.ambient!r}")
        dim = self.n if self.ambient == "vec" else sym_dim(self.n)
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != dim:
            raise ValueError(f"basis must be {dim}-by-k, got {b.shape}")
        gram = b.T @ b
        if b.shape[1] and np.linalg.norm(gram - np.eye(b.shape[1])) > 1e-7:
            raise ValueError("basis columns must be orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _orthonormalize(columns: np.ndarray, tol: Tolerances) -> np.ndarray:
    if columns.size == 0:
        return columns.reshape(columns.shape[0], 0)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((columns.shape[0], 0))
    rank = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return u[:, :rank]


def _complement_basis(basis: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement, from a full SVD.

    Safe for every edge (empty basis, full basis): the trailing left
    singular vectors span the complement exactly, with no dependence on
    the scale of a projector residue.
    """
    dim = basis.shape[0]
    if basis.shape[1] == 0:
        return np.eye(dim)
    u, s, _ = np.linalg.svd(basis, full_matrices=True)
    rank = int(np.count_nonzero(s > tol.rank_tol * s[0])) if s[0] > 0 else 0
    return u[:, rank:]


def subspace_from_vectors(vectors, n: int, tol: Tolerances = DEFAULT_TOL) -> SubspaceSpec:
    """Span of the given vectors in R^n (orthonormalized)."""
    cols = np.column_stack([np.asarray(v, dtype=float).ravel() for v in vectors]) \
        if len(vectors) else np.zeros((n, 0))
    return SubspaceSpec("vec", n, _orthonormalize(cols, tol))


def subspace_from_matrices(matrices, n: int, tol: Tolerances = DEFAULT_TOL) -> SubspaceSpec:
    """Span of the given symmetric matrices, in svec coordinates."""
    cols = np.column_stack([svec(m) for m in matrices]) if len(matrices) \
        else np.zeros((sym_dim(n), 0))
    return SubspaceSpec("sym", n, _orthonormalize(cols, tol))


def subspace_from_coordinates(columns, n: int, tol: Tolerances = DEFAULT_TOL) -> SubspaceSpec:
    """Subspace of the symmetric space spanned by svec-coordinate columns."""
    cols = np.asarray(columns, dtype=float).reshape(sym_dim(n), -1)
    return SubspaceSpec("sym", n, _orthonormalize(cols, tol))


class ConeStatus(enum.Enum):
    TRIVIAL_CERTIFIED = "trivial_certified"
    NONTRIVIAL_WITNESS = "nontrivial_witness"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ConeDecision:
    """Decision with evidence.

    ``witness``: nonzero cone element inside the subspace, normalized to
    unit trace (sym) or unit coordinate sum (vec).
    ``certificate``: element of the orthogonal complement lying strictly
    inside the (self-dual) cone; its inner product with any cone element
    of the subspace forces that element to zero.
    """

    status: ConeStatus
    witness: np.ndarray | None = None
    certificate: np.ndarray | None = None


@dataclass(frozen=True)
class ConeBudget:
    """Search budget for the PSD pipeline (documented defaults)."""

    starts: int = 16
    projection_iters: int = 5000
    ascent_iters: int = 5000
    seed: int = 0


DEFAULT_BUDGET = ConeBudget()


def orthant_intersection(spec: SubspaceSpec, tol: Tolerances = DEFAULT_TOL) -> ConeDecision:
    """Exact dichotomy for subspace vs. nonnegative orthant (Stiemke).

    Primal LP: maximize the coordinate sum of ``y`` over ``y`` in the
    subspace with ``0 <= y <= 1``; a positive optimum yields a witness.
    Dual LP: find ``z`` in the orthogonal complement with ``z >= 1``
    componentwise; feasibility yields a certificate.  Exactly one side
    succeeds; anything else raises :class:`InconsistencyError`.
    """
    if spec.ambient != "vec":
        raise ValueError("orthant_intersection expects a vector-ambient subspace")
    n, b = spec.n, spec.basis
    k = spec.dim

    witness = None
    if k > 0:
        a_ub = np.vstack([-b, b])
        b_ub = np.concatenate([np.zeros(n), np.ones(n)])
        res = lp_solve(-(b.T @ np.ones(n)), a_ub=a_ub, b_ub=b_ub,
                       bounds=[(None, None)] * k, tol=tol)
        if res.status == "optimal" and -res.objective > tol.feas_tol:
            y = b @ res.x
            witness = y / np.sum(y)

    certificate = None
    comp = _complement_basis(b, tol)
    if comp.shape[1] > 0:
        res = lp_solve(np.zeros(comp.shape[1]), a_ub=-comp, b_ub=-np.ones(n),
                       bounds=[(None, None)] * comp.shape[1], tol=tol)
        if res.status == "optimal":
            certificate = comp @ res.x

    if (witness is None) == (certificate is None):
        raise InconsistencyError(
            "Stiemke alternative violated: primal and dual searches "
            f"{'both succeeded' if witness is not None else 'both failed'}")
    if witness is not None:
        return ConeDecision(ConeStatus.NONTRIVIAL_WITNESS, witness=witness)
    return ConeDecision(ConeStatus.TRIVIAL_CERTIFIED, certificate=certificate)


def _psd_project_coords(v: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(smat(v))
    return svec((q * np.maximum(w, 0.0)) @ q.T)


def _min_eig_coords(v: np.ndarray):
    w, q = np.linalg.eigh(smat(v))
    return float(w[0]), q[:, 0]


def _dykstra_witness(basis, n, start, iters, tol: Tolerances):
    """One Dykstra run between {v in S : tr = 1} and the PSD cone.

    Returns the affine-side iterate once it is PSD within ``feas_tol``
    (it lies in the subspace with unit trace by construction), or None.
    Bails out early when the gap between the two projections stalls well
    above the tolerance, which signals an empty or separated intersection.
    """
    s_id = svec(np.eye(n))
    u = basis @ (basis.T @ s_id)
    uu = float(u @ u)
    if uu <= tol.feas_tol ** 2:
        return None  # trace functional (nearly) vanishes on S; handled upstream

    def proj_affine(v):
        w = basis @ (basis.T @ v)
        return w + ((1.0 - w @ s_id) / uu) * u

    x = start
    corr = np.zeros_like(start)
    best_gap = np.inf
    stalled = 0
    for it in range(iters):
        a = proj_affine(x)
        if _min_eig_coords(a)[0] >= -tol.feas_tol:
            return a
        y = a + corr
        p = _psd_project_coords(y)
        corr = y - p
        x = p
        gap = float(np.linalg.norm(a - p))
        if gap < best_gap * (1.0 - 1e-3):
            best_gap, stalled = gap, 0
        else:
            stalled += 1
            if stalled >= 200 and gap > 10.0 * tol.feas_tol:
                return None
    return None


def _ascent_certificate(comp, n, iters, tol: Tolerances):
    """Supergradient ascent of the minimum eigenvalue over {P in S-perp : tr = n}."""
    if comp.shape[1] == 0:
        return None
    s_id = svec(np.eye(n))
    u = comp @ (comp.T @ s_id)
    uu = float(u @ u)
    if uu <= tol.feas_tol ** 2:
        return None  # identity is orthogonal to S-perp: no trace-n slice

    def proj_affine(v):
        w = comp @ (comp.T @ v)
        return w + ((n - w @ s_id) / uu) * u

    p = proj_affine(s_id)
    for it in range(1, iters + 1):
        lam, vec = _min_eig_coords(p)
        if lam > tol.feas_tol:
            return smat(p)
        step = n / np.sqrt(it)
        p = proj_affine(p + step * svec(np.outer(vec, vec)))
    return None


def psd_intersection(spec: SubspaceSpec, tol: Tolerances = DEFAULT_TOL,
                     budget: ConeBudget = DEFAULT_BUDGET) -> ConeDecision:
    """Decide whether a subspace of symmetric matrices meets the PSD cone nontrivially.

    Pipeline: trace shortcut, a one-step certificate probe, then the
    primal Dykstra witness search from ``budget.starts`` deterministic
    seeds (lowest start index wins), then the full dual eigenvalue ascent
    for a certificate, else ``UNDECIDED``.
    """
    if spec.ambient != "sym":
        raise ValueError("psd_intersection expects a symmetric-ambient subspace")
    n, basis = spec.n, spec.basis
    s_id = svec(np.eye(n))

    if spec.dim == 0 or np.linalg.norm(basis.T @ s_id) <= tol.feas_tol:
        # every element of S is trace-zero, and a PSD matrix with zero trace is zero
        return ConeDecision(ConeStatus.TRIVIAL_CERTIFIED, certificate=np.eye(n))

    # identity inside S: immediate witness
    inside = basis @ (basis.T @ s_id)
    if np.linalg.norm(inside - s_id) <= tol.feas_tol:
        return ConeDecision(ConeStatus.NONTRIVIAL_WITNESS, witness=np.eye(n) / n)

    # cheap certificate probe: if the complement's trace-slice projection of
    # the identity is already definite, triviality is proven outright (a
    # certificate and a witness can never coexist, so probing early cannot
    # disagree with the primal search)
    comp = _complement_basis(basis, tol)
    cert = _ascent_certificate(comp, n, 1, tol)
    if cert is not None:
        return ConeDecision(ConeStatus.TRIVIAL_CERTIFIED, certificate=cert)

    for start_index in range(budget.starts):
        if start_index == 0:
            start = s_id / n
        else:
            rng = np.random.default_rng([budget.seed, start_index])
            start = basis @ rng.standard_normal(spec.dim)
        found = _dykstra_witness(basis, n, start, budget.projection_iters, tol)
        if found is not None:
            w = smat(found)
            return ConeDecision(ConeStatus.NONTRIVIAL_WITNESS, witness=w / np.trace(w))

    cert = _ascent_certificate(comp, n, budget.ascent_iters, tol)
    if cert is not None:
        return ConeDecision(ConeStatus.TRIVIAL_CERTIFIED, certificate=cert)
    return ConeDecision(ConeStatus.UNDECIDED)


def collect_psd_witness_samples(spec: SubspaceSpec, tol: Tolerances = DEFAULT_TOL,
                                starts: int = 16, iters: int = 600, seed: int = 0):
    """Approximate elements of (subspace cap PSD cone) from many Dykstra starts.

    Unlike :func:`psd_intersection` this does not stop at the first hit:
    it returns one (unit-trace) sample per successful start, giving the
    refutation searches a variety of cone points to probe.
    """
    if spec.ambient != "sym":
        raise ValueError("expects a symmetric-ambient subspace")
    n, basis = spec.n, spec.basis
    if spec.dim == 0:
        return []
    s_id = svec(np.eye(n))
    if np.linalg.norm(basis.T @ s_id) <= tol.feas_tol:
        return []
    samples = []
    for start_index in range(starts):
        if start_index == 0:
            start = s_id / n
        else:
            rng = np.random.default_rng([seed, start_index])
            start = basis @ rng.standard_normal(spec.dim)
        found = _dykstra_witness(basis, n, start, iters, tol)
        if found is not None:
            w = smat(found)
            samples.append(w / np.trace(w))
    return samples
