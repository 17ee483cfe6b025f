"""Dense complex linear algebra for small bipartite Hilbert spaces.

Operators are plain complex numpy arrays in the computational product basis,
with |i>_A |k>_B mapped to row index i*dB + k. Everything here is sized for
composite dimensions up to ~64, so dense LAPACK routines are used throughout.
All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

DEFAULT_TOL = 1e-9

# LU pivots below SINGULARITY_FACTOR * max|A| are treated as singular.
SINGULARITY_FACTOR = 1e-12


class NotHermitianError(ValueError):
    """Matrix is not Hermitian within the requested tolerance."""


class SingularMatrixError(ValueError):
    """Linear system has a pivot below the singularity threshold."""


class DimensionMismatchError(ValueError):
    """Operands have inconsistent Hilbert-space dimensions."""


class HermitianEigenResult(NamedTuple):
    """Spectral decomposition H = V diag(w) V^dag, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry of |M - M^dag|."""
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return the Hermitian part of m, or raise if m is not Hermitian within tol."""
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(f"matrix deviates from Hermiticity by {defect:.3e} > tol={tol:.3e}")
    return (m + m.conj().T) / 2


def _check_bipartite(m: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    a = as_complex_matrix(m)
    n = dim_a * dim_b
    if a.shape != (n, n):
        raise DimensionMismatchError(f"expected a {n}x{n} matrix for dims {dim_a}x{dim_b}, got {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product, (A (x) B)[i*rB+k, j*cB+l] = A[i,j] B[k,l]."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_transpose(m, dim_a: int, dim_b: int, subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of one tensor factor in the product basis.

    Involutive, trace-preserving and Hermiticity-preserving. ``subsystem``
    selects which factor ("A" or "B") gets transposed.
    """
    a = _check_bipartite(m, dim_a, dim_b)
    t = a.reshape(dim_a, dim_b, dim_a, dim_b)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return np.ascontiguousarray(t).reshape(dim_a * dim_b, dim_a * dim_b)


def partial_trace(m, dim_a: int, dim_b: int, keep: str = "A") -> np.ndarray:
    """Trace out one tensor factor, keeping the other."""
    a = _check_bipartite(m, dim_a, dim_b)
    t = a.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("ikil->kl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def eig_hermitian(h, tol: float = DEFAULT_TOL) -> HermitianEigenResult:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues come out ascending with orthonormal eigenvector columns
    aligned to them. Raises NotHermitianError if max|H - H^dag| > tol.
    """
    hs = require_hermitian(as_complex_matrix(h), tol)
    w, v = np.linalg.eigh(hs)
    return HermitianEigenResult(w, v)


def solve_linear(a, b) -> np.ndarray:
    """Solve A x = b by LU with partial pivoting.

    Raises SingularMatrixError when any pivot falls below
    SINGULARITY_FACTOR * max|A|.
    """
    am = as_complex_matrix(a)
    if am.shape[0] != am.shape[1]:
        raise DimensionMismatchError(f"expected a square system, got {am.shape}")
    bv = np.asarray(b, dtype=complex)
    if bv.shape[0] != am.shape[0]:
        raise DimensionMismatchError(f"rhs length {bv.shape[0]} does not match system size {am.shape[0]}")
    amax = float(np.max(np.abs(am)))
    if amax == 0.0:
        raise SingularMatrixError("zero matrix")
    with warnings.catch_warnings():
        # singular factors are handled by the pivot check below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(am)
    min_pivot = float(np.min(np.abs(np.diag(lu))))
    if min_pivot < SINGULARITY_FACTOR * amax:
        raise SingularMatrixError(f"pivot {min_pivot:.3e} below threshold {SINGULARITY_FACTOR * amax:.3e}")
    return lu_solve((lu, piv), bv)


def is_psd(h, tol: float = DEFAULT_TOL) -> bool:
    """True iff the Hermitian matrix h has min eigenvalue >= -tol."""
    hs = require_hermitian(as_complex_matrix(h), tol)
    return bool(np.linalg.eigvalsh(hs)[0] >= -tol)
