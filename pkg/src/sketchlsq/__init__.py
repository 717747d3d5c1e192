"""Sketch-preconditioned LSQR for sparse overdetermined least squares."""

from .mmio import MatrixMarketError, read_matrix_market, read_vector, write_matrix_market, write_vector
from .precond import (
    PreconditionedSystem,
    QrPreconditioner,
    RankDeficient,
    SvdPreconditioner,
    build_qr_precond,
    build_svd_precond,
    form_explicit,
    recover_solution,
)
from .sketch import CountSketch, apply_left, embedding_distortion, new_count_sketch
from .solvers import (
    METHODS,
    SolveOptions,
    SolveReport,
    csqr_plsqr,
    csqrp_lsqr,
    cssvd_plsqr,
    cssvdp_lsqr,
    direct_dense_ls,
    iteration_bound,
    lsqr,
    plain_lsqr,
)
from .sparse import CsrMatrix, SvdNonConvergence, condition_number, spmv, spmv_t

__version__ = "0.1.0"
