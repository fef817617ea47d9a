"""Symmetric eigenvalues and (conditional) definiteness checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .diagram import format_real
from .errors import BadMatrix, NotSymmetric

__all__ = [
    "sym_eigenvalues",
    "sum_zero_basis",
    "DefinitenessReport",
    "definiteness_check",
]

SYMMETRY_TOL = 1e-12
MAX_SWEEPS = 100


def _square(M) -> np.ndarray:
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise BadMatrix(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise BadMatrix("matrix has non-finite entries")
    return A


def sym_eigenvalues(M, rtol: float = 1e-12) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm is at most
    ``rtol * ||M||_F``; more than 100 sweeps raises ``NoConvergence``.
    """
    A = _square(M)
    if A.size:
        scale = max(1.0, float(np.max(np.abs(A))))
        if float(np.max(np.abs(A - A.T))) > SYMMETRY_TOL * scale:
            raise NotSymmetric("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    eig, _ = _backend.jacobi_eigenvalues(A, rtol, MAX_SWEEPS)
    return np.sort(eig)


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of ``{c : sum(c) = 0}`` from one Householder reflection.

    The reflection ``H`` swaps ``e_1`` and ``1/sqrt(n)``; its last ``n - 1``
    columns are orthogonal to the all-ones vector.
    """
    if n <= 1:
        return np.zeros((max(n, 0), 0))
    u = np.full(n, 1.0 / np.sqrt(n))
    w = u.copy()
    w[0] -= 1.0
    H = np.eye(n) - 2.0 * np.outer(w, w) / float(w @ w)
    return H[:, 1:]


@dataclass(frozen=True)
class DefinitenessReport:
    eigenvalues: np.ndarray
    n_positive: int
    n_negative: int
    psd: bool
    cnd: bool
    subspace_eigenvalues: np.ndarray
    tol: float

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else 0.0

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1]) if self.eigenvalues.size else 0.0

    def to_text(self, precision: int = 17) -> str:
        lines = [f"eigenvalue {i} {format_real(v, precision)}" for i, v in enumerate(self.eigenvalues)]
        lines.append(f"positive {self.n_positive}")
        lines.append(f"negative {self.n_negative}")
        lines.append(f"psd {str(self.psd).lower()}")
        lines.append(f"cnd {str(self.cnd).lower()}")
        return "\n".join(lines) + "\n"


def definiteness_check(M, tol: float = 1e-8) -> DefinitenessReport:
    """Eigen-analysis of a symmetric matrix.

    ``psd`` holds when the smallest eigenvalue is at least
    ``-tol * max(1, |largest eigenvalue|)``.  ``cnd`` applies the same test,
    mirrored, to the matrix restricted to the sum-zero subspace.  Eigenvalues
    are counted as positive or negative when they exceed ``tol`` times the
    largest absolute eigenvalue in magnitude.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    A = _square(M)
    eig = sym_eigenvalues(A)
    n = eig.size
    if n == 0:
        return DefinitenessReport(eig, 0, 0, True, True, eig, tol)
    big = float(np.max(np.abs(eig)))
    thr = tol * big
    n_pos = int(np.sum(eig > thr))
    n_neg = int(np.sum(eig < -thr))
    psd = bool(eig[0] >= -tol * max(1.0, abs(float(eig[-1]))))
    V = sum_zero_basis(n)
    B = V.T @ A @ V
    B = 0.5 * (B + B.T)
    sub = sym_eigenvalues(B) if B.size else np.zeros(0)
    cnd = bool(sub.size == 0 or sub[-1] <= tol * max(1.0, abs(float(sub[0]))))
    return DefinitenessReport(eig, n_pos, n_neg, psd, cnd, sub, tol)
