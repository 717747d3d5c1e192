"""Right preconditioners built from a sketched matrix ``SA``.

Two kinds are supported:

* :class:`QrPreconditioner` -- ``SA = QR``; the preconditioned matrix is ``A R^{-1}``.
* :class:`SvdPreconditioner` -- truncated SVD ``SA ~ U_r S_r V_r^T``;
  the preconditioned matrix is ``A P`` with ``P = V_r S_r^{-1}``.

Either can be applied *explicitly* (form the dense ``m x k`` matrix once with
:func:`form_explicit`) or *implicitly* (apply ``A`` and the preconditioner in
every product with :func:`apply_implicit` / :func:`apply_implicit_t`).
The two are identical in exact arithmetic but the explicit product is far
more accurate when ``A`` is badly conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from .sketch import CountSketch, apply_to_vector
from .sparse import CsrMatrix, dense_qr, dense_svd, spmv, spmv_t

__all__ = [
    "RankDeficient",
    "QrPreconditioner",
    "SvdPreconditioner",
    "PreconditionedSystem",
    "build_qr_precond",
    "build_svd_precond",
    "form_explicit",
    "apply_implicit",
    "apply_implicit_t",
    "recover_solution",
    "warm_start",
    "DEFAULT_RCOND",
    "DEFAULT_DIAG_TOL",
]

DEFAULT_RCOND = 1e-12
DEFAULT_DIAG_TOL = 1e-14


class RankDeficient(np.linalg.LinAlgError):
    """The triangular factor of the sketched matrix is numerically singular."""


@dataclass(frozen=True, eq=False)
class QrPreconditioner:
    R: np.ndarray
    Q: np.ndarray

    @property
    def ncols(self) -> int:
        return self.R.shape[1]

    @property
    def n(self) -> int:
        return self.R.shape[0]


@dataclass(frozen=True, eq=False)
class SvdPreconditioner:
    P: np.ndarray
    effective_rank: int
    rcond: float
    sigma: np.ndarray
    U: np.ndarray
    #: full spectrum of the sketched matrix, before truncation
    sigma_all: np.ndarray | None = None

    @property
    def ncols(self) -> int:
        return self.effective_rank

    @property
    def n(self) -> int:
        return self.P.shape[0]


Preconditioner = Union[QrPreconditioner, SvdPreconditioner]


@dataclass(frozen=True, eq=False)
class PreconditionedSystem:
    """``min ||B y - b||`` with ``B = A M`` held either densely or as ``(A, M)``."""

    mode: str
    A: CsrMatrix
    precond: Preconditioner
    b: np.ndarray
    B: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in ("explicit", "implicit"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "explicit":
            if self.B is None:
                object.__setattr__(self, "B", form_explicit(self.A, self.precond))
            if self.B.shape != (self.A.rows, self.precond.ncols):
                raise ValueError("explicit B has the wrong shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.rows, self.precond.ncols

    def matvec(self, y) -> np.ndarray:
        if self.mode == "explicit":
            return self.B @ y
        return apply_implicit(self.precond, self.A, y)

    def rmatvec(self, u) -> np.ndarray:
        if self.mode == "explicit":
            return self.B.T @ u
        return apply_implicit_t(self.precond, self.A, u)


def build_qr_precond(A_sketched, diag_tol: float = DEFAULT_DIAG_TOL) -> QrPreconditioner:
    """QR-factor the sketched matrix; raise :class:`RankDeficient` if ``R`` is numerically singular.

    ``R`` is declared singular when ``min |R_ii| <= diag_tol * max |R_ii|``.
    """
    A_sketched = np.asarray(A_sketched, dtype=np.float64)
    if A_sketched.shape[0] < A_sketched.shape[1]:
        raise ValueError("sketched matrix must have at least as many rows as columns")
    Q, R = dense_qr(A_sketched)
    d = np.abs(np.diag(R))
    dmax = d.max() if d.size else 0.0
    if dmax == 0.0 or d.min() <= diag_tol * dmax:
        ratio = d.min() / dmax if dmax else 0.0
        raise RankDeficient(
            f"R is numerically singular: min|R_ii|/max|R_ii| = {ratio:.3e} <= {diag_tol:.1e}"
        )
    return QrPreconditioner(R=R, Q=Q)


def build_svd_precond(A_sketched, rcond: float = DEFAULT_RCOND) -> SvdPreconditioner:
    """Truncated-SVD preconditioner keeping singular values above ``rcond * sigma_1``."""
    if not 0 < rcond < 1:
        raise ValueError("rcond must lie in (0, 1)")
    U, sigma, V = dense_svd(A_sketched)
    if sigma.size == 0 or sigma[0] == 0.0:
        raise np.linalg.LinAlgError("sketched matrix is zero; no singular value above threshold")
    r = int(np.count_nonzero(sigma > rcond * sigma[0]))
    P = V[:, :r] / sigma[:r]
    return SvdPreconditioner(
        P=P, effective_rank=r, rcond=rcond, sigma=sigma[:r].copy(), U=U[:, :r], sigma_all=sigma
    )


def form_explicit(A: CsrMatrix, pre: Preconditioner) -> np.ndarray:
    """Dense preconditioned matrix ``A R^{-1}`` or ``A P``.

    For QR, ``B^T`` is obtained from one triangular solve ``R^T B^T = A^T``
    (column ``j`` of ``B`` depends only on columns ``0..j`` of ``A``).
    """
    if A.cols != pre.n:
        raise ValueError(f"dimension mismatch: A has {A.cols} columns, preconditioner acts on {pre.n}")
    Ad = A.toarray()
    if isinstance(pre, QrPreconditioner):
        Bt = scipy.linalg.solve_triangular(pre.R, Ad.T, trans="T", lower=False, check_finite=False)
        return np.ascontiguousarray(Bt.T)
    return Ad @ pre.P


def _solve_r(R: np.ndarray, y: np.ndarray, trans: str = "N") -> np.ndarray:
    if np.any(np.diag(R) == 0.0):
        raise RankDeficient("singular triangular factor")
    return scipy.linalg.solve_triangular(R, y, trans=trans, lower=False, check_finite=False)


def apply_implicit(pre: Preconditioner, A: CsrMatrix, y) -> np.ndarray:
    """``A (R^{-1} y)`` or ``A (P y)`` without forming the product matrix."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (pre.ncols,):
        raise ValueError("dimension mismatch in apply_implicit")
    if isinstance(pre, QrPreconditioner):
        return spmv(A, _solve_r(pre.R, y))
    return spmv(A, pre.P @ y)


def apply_implicit_t(pre: Preconditioner, A: CsrMatrix, u) -> np.ndarray:
    """``R^{-T} (A^T u)`` or ``P^T (A^T u)``."""
    z = spmv_t(A, u)
    if isinstance(pre, QrPreconditioner):
        return _solve_r(pre.R, z, trans="T")
    return pre.P.T @ z


def recover_solution(pre: Preconditioner, y) -> np.ndarray:
    """Map a preconditioned iterate back: ``x = R^{-1} y`` or ``x = P y``."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (pre.ncols,):
        raise ValueError(f"expected a vector of length {pre.ncols}, got shape {y.shape}")
    if isinstance(pre, QrPreconditioner):
        return _solve_r(pre.R, y)
    return pre.P @ y


def warm_start(pre: Preconditioner, S: CountSketch, b) -> np.ndarray:
    """Sketch-and-solve starting point ``y0 = Q^T (S b)`` (``U_r^T (S b)`` for the SVD kind)."""
    Sb = apply_to_vector(S, b)
    left = pre.Q if isinstance(pre, QrPreconditioner) else pre.U
    if Sb.shape[0] != left.shape[0]:
        raise ValueError("sketch size does not match the retained orthonormal factor")
    return left.T @ Sb
