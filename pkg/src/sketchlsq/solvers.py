"""LSQR, a dense direct baseline, and the sketch-preconditioned solvers.

The composed solvers share one pipeline::

    S = count sketch (s = ceil(gamma * n))      -- sketch.new_count_sketch
    SA = S @ A                                  -- sketch.apply_left
    M = R^{-1} (QR) or P = V_r S_r^{-1} (SVD)   -- precond.build_*_precond
    y = LSQR on B = A M                         -- explicit or implicit B
    x = M y                                     -- precond.recover_solution

``csqrp_lsqr`` / ``cssvdp_lsqr`` form ``B`` explicitly; ``csqr_plsqr`` /
``cssvd_plsqr`` apply ``A`` and ``M`` separately at every LSQR step.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from . import precond as pc
from .sketch import DEFAULT_GAMMA, apply_left, default_sketch_size, new_count_sketch
from .sparse import CsrMatrix, as_vector, condition_number, dense_qr, spmv, spmv_t

__all__ = [
    "LinearOperator",
    "SolveOptions",
    "SolveReport",
    "as_operator",
    "lsqr",
    "direct_dense_ls",
    "csqrp_lsqr",
    "cssvdp_lsqr",
    "csqr_plsqr",
    "cssvd_plsqr",
    "plain_lsqr",
    "iteration_bound",
    "METHODS",
]


@dataclass(frozen=True)
class LinearOperator:
    """Forward/adjoint pair ``y -> B y`` and ``u -> B^T u``."""

    rows: int
    cols: int
    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols


def as_operator(B) -> LinearOperator:
    """Wrap a dense array, :class:`CsrMatrix`, or :class:`PreconditionedSystem`."""
    if isinstance(B, LinearOperator):
        return B
    if isinstance(B, CsrMatrix):
        return LinearOperator(B.rows, B.cols, lambda y: spmv(B, y), lambda u: spmv_t(B, u))
    if isinstance(B, pc.PreconditionedSystem):
        m, k = B.shape
        return LinearOperator(m, k, B.matvec, B.rmatvec)
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2:
        raise TypeError("cannot interpret input as a linear operator")
    return LinearOperator(B.shape[0], B.shape[1], B.__matmul__, B.T.__matmul__)


@dataclass
class SolveOptions:
    """LSQR controls.

    ``max_iter=None`` means "number of columns of the operator".  ``initial``
    is either ``None`` (zero start) or an explicit starting vector.
    """

    tau: float = 1e-8
    max_iter: Optional[int] = None
    initial: Optional[np.ndarray] = None
    record_history: bool = False

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolveReport:
    x: np.ndarray
    iterations: Optional[int]
    relative_residual: float
    relative_ls_error: float
    residual_history: Optional[np.ndarray] = None
    precond_time: float = 0.0
    solve_time: float = 0.0
    kappa_B: Optional[float] = None
    converged: bool = True
    stop_reason: str = ""
    method: str = ""
    effective_rank: Optional[int] = None
    y: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def total_time(self) -> float:
        return self.precond_time + self.solve_time


_STOP_MESSAGES = {
    0: "b is zero; x = 0 is exact",
    1: "residual small enough (compatible system)",
    2: "least-squares optimality reached",
    3: "iteration limit reached",
    4: "breakdown in bidiagonalization",
}


def lsqr(B, b, opts: SolveOptions | None = None, callback=None) -> SolveReport:
    """Paige-Saunders LSQR for ``min ||B y - b||_2``.

    Stops when ``||r|| <= tau * (||b|| + ||B|| ||y||)`` (compatible system) or
    ``||B^T r|| <= tau * ||B|| ||r||`` (least squares), with ``||B||`` the
    running Frobenius estimate, or after ``max_iter`` steps.  ``callback``
    is called as ``callback(k, y_k)`` after every step.

    The reported residual is recomputed explicitly from the final iterate.
    """
    opts = opts or SolveOptions()
    op = as_operator(B)
    b = as_vector(b, "b")
    if b.shape != (op.rows,):
        raise ValueError(f"dimension mismatch: operator has {op.rows} rows, b has {b.size}")
    n = op.cols
    max_iter = n if opts.max_iter is None else opts.max_iter
    tau = opts.tau
    t0 = time.perf_counter()

    bnorm = np.linalg.norm(b)
    if opts.initial is None:
        y = np.zeros(n)
        u = b.copy()
    else:
        y = as_vector(opts.initial, "initial").copy()
        if y.shape != (n,):
            raise ValueError("initial vector has the wrong length")
        u = b - op.forward(y)
    history = [] if opts.record_history else None

    def finish(itn, reason, converged=True):
        r = b - op.forward(y)
        rn = np.linalg.norm(r)
        rel = rn / bnorm if bnorm > 0 else 0.0
        return SolveReport(
            x=y,
            iterations=itn,
            relative_residual=float(rel),
            relative_ls_error=float(rel**2),
            residual_history=None if history is None else np.asarray(history),
            solve_time=time.perf_counter() - t0,
            converged=converged,
            stop_reason=_STOP_MESSAGES[reason],
        )

    beta = np.linalg.norm(u)
    if history is not None:
        history.append(beta)
    if bnorm == 0.0 and beta == 0.0:
        return finish(0, 0)
    if beta == 0.0:
        return finish(0, 1)
    u /= beta
    v = op.adjoint(u)
    alpha = np.linalg.norm(v)
    if alpha == 0.0:
        return finish(0, 2)
    v /= alpha
    w = v.copy()

    phibar, rhobar = beta, alpha
    anorm2 = 0.0
    rnorm = beta
    arnorm = alpha * beta

    for itn in range(1, max_iter + 1):
        u = op.forward(v) - alpha * u
        beta = np.linalg.norm(u)
        anorm2 += alpha**2 + beta**2
        if beta > 0:
            u /= beta
            v = op.adjoint(u) - beta * v
            alpha = np.linalg.norm(v)
            if alpha > 0:
                v /= alpha

        rho = math.hypot(rhobar, beta)
        c, s = rhobar / rho, beta / rho
        theta = s * alpha
        rhobar = -c * alpha
        phi = c * phibar
        phibar = s * phibar

        y += (phi / rho) * w
        w = v - (theta / rho) * w

        rnorm = phibar
        arnorm = phibar * alpha * abs(c)
        anorm = math.sqrt(anorm2)
        ynorm = np.linalg.norm(y)
        if history is not None:
            history.append(rnorm)
        if callback is not None:
            callback(itn, y)

        if rnorm <= tau * (bnorm + anorm * ynorm):
            return finish(itn, 1)
        if arnorm <= tau * anorm * rnorm:
            return finish(itn, 2)
        if beta == 0.0 or alpha == 0.0:
            return finish(itn, 4)
    return finish(max_iter, 3, converged=False)


def _relative_errors(A: CsrMatrix, x: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return 0.0, 0.0
    rel = np.linalg.norm(b - spmv(A, x)) / bnorm
    return float(rel), float(rel**2)


def direct_dense_ls(A: CsrMatrix, b, diag_tol: float = pc.DEFAULT_DIAG_TOL) -> SolveReport:
    """Densify ``A`` and solve by Householder QR; the desk-scale accuracy oracle."""
    b = as_vector(b, "b")
    if A.rows < A.cols:
        raise ValueError("direct_dense_ls needs rows >= cols")
    if b.shape != (A.rows,):
        raise ValueError("dimension mismatch between A and b")
    t0 = time.perf_counter()
    Q, R = dense_qr(A.toarray())
    d = np.abs(np.diag(R))
    if d.size and (d.max() == 0.0 or d.min() <= diag_tol * d.max()):
        raise pc.RankDeficient("A is numerically rank deficient; direct QR solve refused")
    t1 = time.perf_counter()
    x = scipy.linalg.solve_triangular(R, Q.T @ b, lower=False, check_finite=False)
    t2 = time.perf_counter()
    rel, rel2 = _relative_errors(A, x, b)
    return SolveReport(
        x=x,
        iterations=None,
        relative_residual=rel,
        relative_ls_error=rel2,
        precond_time=t1 - t0,
        solve_time=t2 - t1,
        method="direct",
        stop_reason="Householder QR",
    )


def _check_problem(A: CsrMatrix, b, gamma: float) -> tuple[np.ndarray, int]:
    b = as_vector(b, "b")
    if b.shape != (A.rows,):
        raise ValueError("dimension mismatch between A and b")
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    s = default_sketch_size(A.cols, gamma)
    if s >= A.rows:
        raise ValueError(f"sketch size s={s} must be smaller than m={A.rows}; reduce gamma")
    return b, s


def _sketched_solve(
    A: CsrMatrix,
    b,
    *,
    kind: str,
    explicit: bool,
    gamma: float,
    seed: int,
    opts: SolveOptions | None,
    rcond: float,
    diag_tol: float,
    warm: bool,
    compute_kappa: bool,
    method: str,
    callback=None,
) -> SolveReport:
    b, s = _check_problem(A, b, gamma)
    opts = opts or SolveOptions()

    t0 = time.perf_counter()
    S = new_count_sketch(s, A.rows, seed)
    SA = apply_left(S, A)
    if kind == "qr":
        pre = pc.build_qr_precond(SA, diag_tol)
    else:
        pre = pc.build_svd_precond(SA, rcond)
    mode = "explicit" if explicit else "implicit"
    system = pc.PreconditionedSystem(mode, A, pre, b)
    precond_time = time.perf_counter() - t0

    if warm and opts.initial is None:
        opts = replace(opts, initial=pc.warm_start(pre, S, b))
    t1 = time.perf_counter()
    rep = lsqr(system, b, opts, callback=callback)
    x = pc.recover_solution(pre, rep.x)
    solve_time = time.perf_counter() - t1

    rel, rel2 = _relative_errors(A, x, b)
    kappa = None
    if compute_kappa:
        B = system.B if explicit else pc.form_explicit(A, pre)
        kappa = condition_number(B)
    return SolveReport(
        x=x,
        iterations=rep.iterations,
        relative_residual=rel,
        relative_ls_error=rel2,
        residual_history=rep.residual_history,
        precond_time=precond_time,
        solve_time=solve_time,
        kappa_B=kappa,
        converged=rep.converged,
        stop_reason=rep.stop_reason,
        method=method,
        effective_rank=pre.effective_rank if kind == "svd" else A.cols,
        y=rep.x,
    )


def csqrp_lsqr(
    A: CsrMatrix,
    b,
    gamma: float = DEFAULT_GAMMA,
    seed: int = 0,
    opts: SolveOptions | None = None,
    *,
    diag_tol: float = pc.DEFAULT_DIAG_TOL,
    warm_start: bool = False,
    compute_kappa: bool = False,
    callback=None,
) -> SolveReport:
    """Count sketch + QR preconditioning, LSQR on the explicit ``A R^{-1}``.

    Raises :class:`~sketchlsq.precond.RankDeficient` when ``R`` is singular.
    """
    return _sketched_solve(
        A, b, kind="qr", explicit=True, gamma=gamma, seed=seed, opts=opts,
        rcond=pc.DEFAULT_RCOND, diag_tol=diag_tol, warm=warm_start,
        compute_kappa=compute_kappa, method="csqrp", callback=callback,
    )


def cssvdp_lsqr(
    A: CsrMatrix,
    b,
    gamma: float = DEFAULT_GAMMA,
    rcond: float = pc.DEFAULT_RCOND,
    seed: int = 0,
    opts: SolveOptions | None = None,
    *,
    warm_start: bool = False,
    compute_kappa: bool = False,
    callback=None,
) -> SolveReport:
    """Count sketch + truncated-SVD preconditioning, LSQR on the explicit ``A P``.

    Works for rank-deficient ``A``; the effective rank is reported.
    """
    return _sketched_solve(
        A, b, kind="svd", explicit=True, gamma=gamma, seed=seed, opts=opts,
        rcond=rcond, diag_tol=pc.DEFAULT_DIAG_TOL, warm=warm_start,
        compute_kappa=compute_kappa, method="cssvdp", callback=callback,
    )


def csqr_plsqr(
    A: CsrMatrix,
    b,
    gamma: float = DEFAULT_GAMMA,
    seed: int = 0,
    opts: SolveOptions | None = None,
    *,
    diag_tol: float = pc.DEFAULT_DIAG_TOL,
    warm_start: bool = False,
    compute_kappa: bool = False,
    callback=None,
) -> SolveReport:
    """As :func:`csqrp_lsqr` but ``R^{-1}`` is applied inside every LSQR product."""
    return _sketched_solve(
        A, b, kind="qr", explicit=False, gamma=gamma, seed=seed, opts=opts,
        rcond=pc.DEFAULT_RCOND, diag_tol=diag_tol, warm=warm_start,
        compute_kappa=compute_kappa, method="csqr_p", callback=callback,
    )


def cssvd_plsqr(
    A: CsrMatrix,
    b,
    gamma: float = DEFAULT_GAMMA,
    rcond: float = pc.DEFAULT_RCOND,
    seed: int = 0,
    opts: SolveOptions | None = None,
    *,
    warm_start: bool = False,
    compute_kappa: bool = False,
    callback=None,
) -> SolveReport:
    """As :func:`cssvdp_lsqr` but ``P`` is applied inside every LSQR product."""
    return _sketched_solve(
        A, b, kind="svd", explicit=False, gamma=gamma, seed=seed, opts=opts,
        rcond=rcond, diag_tol=pc.DEFAULT_DIAG_TOL, warm=warm_start,
        compute_kappa=compute_kappa, method="cssvd_p", callback=callback,
    )


def plain_lsqr(A: CsrMatrix, b, opts: SolveOptions | None = None) -> SolveReport:
    """Unpreconditioned LSQR on ``A`` itself."""
    rep = lsqr(A, b, opts)
    rep.method = "lsqr"
    return rep


METHODS = {
    "csqrp": csqrp_lsqr,
    "cssvdp": cssvdp_lsqr,
    "csqr_p": csqr_plsqr,
    "cssvd_p": cssvd_plsqr,
    "lsqr": plain_lsqr,
    "direct": direct_dense_ls,
}


def iteration_bound(tau: float, epsilon: float) -> int:
    """Smallest ``k >= (ln 2 + |ln tau|) / |ln epsilon|``.

    With a (1 +/- epsilon) embedding, LSQR on ``B`` from a zero start has
    ``||y_k - y*||_{B^T B} <= tau ||y*||_{B^T B}`` after this many steps.
    """
    if not (0 < tau < 1 and 0 < epsilon < 1):
        raise ValueError("tau and epsilon must lie in (0, 1)")
    k = (math.log(2.0) + abs(math.log(tau))) / abs(math.log(epsilon))
    # absorb roundoff so exact integers are not bumped up
    return max(1, math.ceil(k - 1e-12))
