"""The Hilbert space of real symmetric matrices with the trace inner product.

``svec``/``smat`` provide the standard isometric coordinatization: the
upper triangle is stacked row-major, off-diagonal entries scaled by
``sqrt(2)`` so that ``tr(X @ Y) == svec(X) @ svec(Y)``.  Under this
coordinatization the adjoint of a linear operator on symmetric matrices
is literally the transpose of its coordinate matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numkernel import DEFAULT_TOL, Tolerances, as_square, sym_eigen

SQRT2 = float(np.sqrt(2.0))


def sym_dim(n: int) -> int:
    """Dimension n(n+1)/2 of the space of symmetric n-by-n matrices."""
    return n * (n + 1) // 2


def order_from_dim(d: int) -> int:
    """Inverse of :func:`sym_dim`; rejects lengths that are not triangular."""
    n = int((np.sqrt(8 * d + 1) - 1) / 2 + 0.5)
    if sym_dim(n) != d:
        raise ValueError(f"{d} is not n(n+1)/2 for any integer n")
    return n


@lru_cache(maxsize=None)
def _triu_indices(n: int):
    iu = np.triu_indices(n)
    scale = np.where(iu[0] == iu[1], 1.0, SQRT2)
    return iu, scale


def svec(x) -> np.ndarray:
    """Coordinate vector of a symmetric matrix (length n(n+1)/2)."""
    x = as_square(x)
    iu, scale = _triu_indices(x.shape[0])
    return x[iu] * scale


def smat(v) -> np.ndarray:
    """Symmetric matrix from its coordinate vector; inverse of :func:`svec`."""
    v = np.asarray(v, dtype=float).ravel()
    n = order_from_dim(v.size)
    iu, scale = _triu_indices(n)
    x = np.zeros((n, n))
    x[iu] = v / scale
    x = x + x.T
    x[np.diag_indices(n)] *= 0.5
    return x


def basis_matrix(i: int, j: int, n: int) -> np.ndarray:
    """Symmetric basis matrix with unit entries at positions (i, j), (j, i).

    Indices are 1-based with ``1 <= i <= j <= n``; ``i == j`` gives the
    matrix with a single unit diagonal entry.
    """
    if not (1 <= i <= j <= n):
        raise ValueError(f"indices out of range: i={i}, j={j}, n={n}")
    e = np.zeros((n, n))
    e[i - 1, j - 1] = 1.0
    e[j - 1, i - 1] = 1.0
    return e


def sym_basis(n: int):
    """All basis matrices for order ``n`` in (i, j) upper-triangle order."""
    return [basis_matrix(i, j, n) for i in range(1, n + 1) for j in range(i, n + 1)]


class PsdClass(enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE_SINGULAR = "positive_semidefinite_singular"
    INDEFINITE = "indefinite"
    NEGATIVE_SEMIDEFINITE = "negative_semidefinite"
    NEGATIVE_DEFINITE = "negative_definite"
    ZERO = "zero"

    @property
    def is_psd(self) -> bool:
        return self in (PsdClass.POSITIVE_DEFINITE,
                        PsdClass.POSITIVE_SEMIDEFINITE_SINGULAR,
                        PsdClass.ZERO)


@dataclass(frozen=True)
class PsdStatus:
    classification: PsdClass
    min_eigenvalue: float
    max_eigenvalue: float


def psd_classify(x, tol: Tolerances = DEFAULT_TOL) -> PsdStatus:
    """Classify a symmetric matrix against the semidefinite cone.

    The decision band is ``psd_tol * (1 + max |eigenvalue|)``, so boundary
    (singular semidefinite) matrices are recognized at any scale.
    """
    w, _ = sym_eigen(x, tol)
    lo, hi = float(w[0]), float(w[-1])
    band = tol.psd_tol * (1.0 + max(abs(lo), abs(hi)))
    if lo > band:
        cls = PsdClass.POSITIVE_DEFINITE
    elif hi < -band:
        cls = PsdClass.NEGATIVE_DEFINITE
    elif abs(lo) <= band and abs(hi) <= band:
        cls = PsdClass.ZERO
    elif lo >= -band:
        cls = PsdClass.POSITIVE_SEMIDEFINITE_SINGULAR
    elif hi <= band:
        cls = PsdClass.NEGATIVE_SEMIDEFINITE
    else:
        cls = PsdClass.INDEFINITE
    return PsdStatus(cls, lo, hi)


def is_psd(x, tol: Tolerances = DEFAULT_TOL) -> bool:
    return psd_classify(x, tol).classification.is_psd


def psd_project(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Nearest positive semidefinite matrix (eigenvalue clipping at zero)."""
    w, v = sym_eigen(x, tol)
    return (v * np.maximum(w, 0.0)) @ v.T


def min_eigenvalue(x) -> float:
    """Smallest eigenvalue of the symmetrized part of ``x``."""
    x = as_square(x)
    return float(np.linalg.eigvalsh(0.5 * (x + x.T))[0])

