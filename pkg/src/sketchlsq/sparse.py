"""Sparse and dense matrix kernels shared by the solvers.

Dense matrices and vectors are plain ``numpy.ndarray`` objects of dtype
float64.  Sparse matrices use :class:`CsrMatrix`, a validated, immutable
compressed-sparse-row container; matrix-vector products are delegated to
``scipy.sparse`` whose CSR kernels accumulate row by row and are therefore
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

__all__ = [
    "CsrMatrix",
    "SvdNonConvergence",
    "as_vector",
    "spmv",
    "spmv_t",
    "dense_qr",
    "dense_svd",
    "condition_number",
]


class SvdNonConvergence(np.linalg.LinAlgError):
    """The dense SVD iteration failed to converge."""


def as_vector(values, name: str = "vector") -> np.ndarray:
    """Return ``values`` as a 1-d float64 array, rejecting NaN and Inf."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """Compressed sparse row matrix with strictly increasing column indices per row."""

    rows: int
    cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    _scipy: sp.csr_matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows, cols = int(self.rows), int(self.cols)
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        row_ptr = np.asarray(self.row_ptr, dtype=np.int64)
        col_idx = np.asarray(self.col_idx, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if row_ptr.shape != (rows + 1,):
            raise ValueError("row_ptr must have length rows + 1")
        if row_ptr[0] != 0 or np.any(np.diff(row_ptr) < 0):
            raise ValueError("row_ptr must start at 0 and be nondecreasing")
        nnz = int(row_ptr[-1])
        if col_idx.shape != (nnz,) or values.shape != (nnz,):
            raise ValueError("row_ptr[-1] must equal len(col_idx) == len(values)")
        if nnz:
            if col_idx.min() < 0 or col_idx.max() >= cols:
                raise ValueError("column index out of range")
            # strictly increasing inside each row; a decrease is only allowed at a row start
            step = np.diff(col_idx)
            row_start = np.zeros(nnz, dtype=bool)
            row_start[row_ptr[:-1][np.diff(row_ptr) > 0]] = True
            if np.any((step <= 0) & ~row_start[1:]):
                raise ValueError("column indices must be strictly increasing within each row")
        if not np.all(np.isfinite(values)):
            raise ValueError("values contain non-finite entries")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "row_ptr", _frozen(row_ptr))
        object.__setattr__(self, "col_idx", _frozen(col_idx))
        object.__setattr__(self, "values", _frozen(values))
        mat = sp.csr_matrix((values, col_idx, row_ptr), shape=(rows, cols))
        mat.has_sorted_indices = True
        object.__setattr__(self, "_scipy", mat)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return int(self.row_ptr[-1])

    @classmethod
    def from_scipy(cls, mat) -> "CsrMatrix":
        """Convert any scipy sparse matrix; duplicates are summed, explicit zeros kept."""
        csr = sp.csr_matrix(mat, dtype=np.float64, copy=True)
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr.shape[0], csr.shape[1], csr.indptr, csr.indices, csr.data)

    @classmethod
    def from_dense(cls, a, drop_zeros: bool = True) -> "CsrMatrix":
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("dense input must be two-dimensional")
        if drop_zeros:
            return cls.from_scipy(sp.csr_matrix(a))
        rows, cols = a.shape
        row_ptr = np.arange(0, rows * cols + 1, cols) if cols else np.zeros(rows + 1, int)
        col_idx = np.tile(np.arange(cols), rows)
        return cls(rows, cols, row_ptr, col_idx, a.ravel())

    @classmethod
    def identity(cls, n: int) -> "CsrMatrix":
        return cls(n, n, np.arange(n + 1), np.arange(n), np.ones(n))

    def to_scipy(self) -> sp.csr_matrix:
        """Return a copy as ``scipy.sparse.csr_matrix``."""
        return self._scipy.copy()

    def toarray(self) -> np.ndarray:
        return self._scipy.toarray()

    def __matmul__(self, other):
        return self._scipy @ np.asarray(other, dtype=np.float64)

    def column_stack(self, extra) -> "CsrMatrix":
        """Append dense columns on the right (used to sketch ``[A, b]``)."""
        extra = np.asarray(extra, dtype=np.float64).reshape(self.rows, -1)
        return CsrMatrix.from_scipy(sp.hstack([self._scipy, sp.csr_matrix(extra)]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return id(self)

    def __repr__(self) -> str:
        return f"CsrMatrix(rows={self.rows}, cols={self.cols}, nnz={self.nnz})"


def spmv(A: CsrMatrix, x) -> np.ndarray:
    """Return ``A @ x``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.cols,):
        raise ValueError(f"dimension mismatch: A has {A.cols} columns, x has shape {x.shape}")
    return A._scipy @ x


def spmv_t(A: CsrMatrix, y) -> np.ndarray:
    """Return ``A.T @ y``."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (A.rows,):
        raise ValueError(f"dimension mismatch: A has {A.rows} rows, y has shape {y.shape}")
    return A._scipy.T @ y


def dense_qr(M) -> tuple[np.ndarray, np.ndarray]:
    """Thin Householder QR with a nonnegative diagonal in ``R``.

    Parameters
    ----------
    M : (s, n) array_like with ``s >= n``

    Returns
    -------
    Q : (s, n) ndarray with orthonormal columns
    R : (n, n) upper triangular ndarray, ``R[i, i] >= 0``
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < M.shape[1]:
        raise ValueError(f"dense_qr needs a tall matrix, got shape {M.shape}")
    # LAPACK geqrf/orgqr: Householder reflections
    Q, R = scipy.linalg.qr(M, mode="economic", check_finite=True)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Q * signs, R * signs[:, None]


def dense_svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Compact SVD ``M = U @ diag(sigma) @ V.T``.

    Returns ``V`` (not ``V.T``).  Singular values are nonincreasing.  If the
    divide-and-conquer driver fails to converge the plain QR-iteration driver
    is tried before :class:`SvdNonConvergence` is raised.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < M.shape[1]:
        raise ValueError(f"dense_svd needs a tall matrix, got shape {M.shape}")
    try:
        U, sigma, Vt = scipy.linalg.svd(M, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            U, sigma, Vt = scipy.linalg.svd(M, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise SvdNonConvergence(str(exc)) from exc
    return U, sigma, Vt.T


def singular_values(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    try:
        return scipy.linalg.svdvals(M)
    except np.linalg.LinAlgError as exc:
        raise SvdNonConvergence(str(exc)) from exc


def condition_number(M) -> float:
    """2-norm condition number over singular values above 1e-300.

    Returns ``inf`` when the smallest singular value underflows.
    """
    sigma = singular_values(M)
    if sigma.size == 0 or sigma[0] == 0.0:
        raise ValueError("condition number of a zero matrix is undefined")
    if sigma[-1] <= 1e-300:
        return float("inf")
    return float(sigma[0] / sigma[-1])
