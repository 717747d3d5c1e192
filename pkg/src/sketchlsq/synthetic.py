"""Seeded test problems with a prescribed singular spectrum."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .sketch import make_rng
from .sparse import CsrMatrix

__all__ = [
    "log_spectrum",
    "matrix_with_spectrum",
    "ill_conditioned",
    "rank_deficient",
    "random_sparse",
    "consistent_rhs",
    "inconsistent_rhs",
]


def log_spectrum(n: int, kappa: float) -> np.ndarray:
    """``n`` log-spaced singular values from 1 down to ``1/kappa``."""
    return np.logspace(0.0, -np.log10(kappa), n)


def _orthonormal(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((rows, cols)))
    return Q * np.sign(np.diag(R))


def matrix_with_spectrum(m: int, sigma, seed: int, n: int | None = None) -> CsrMatrix:
    """Dense ``U diag(sigma) V^T`` (stored as CSR) with Haar-random ``U`` (m x k), ``V`` (n x k).

    ``n`` defaults to ``len(sigma)``; a shorter ``sigma`` gives a rank-``len(sigma)`` matrix.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    k = sigma.size
    n = k if n is None else n
    if k > n or n > m:
        raise ValueError("need len(sigma) <= n <= m")
    rng = make_rng(seed)
    U = _orthonormal(m, k, rng)
    V = _orthonormal(n, k, rng)
    return CsrMatrix.from_dense((U * sigma) @ V.T, drop_zeros=False)


def ill_conditioned(m: int, n: int, kappa: float, seed: int) -> CsrMatrix:
    return matrix_with_spectrum(m, log_spectrum(n, kappa), seed)


def rank_deficient(m: int, n: int, rank: int, gap: float, seed: int) -> CsrMatrix:
    """``m x n`` matrix of exact rank ``rank``.

    The nonzero singular values decay log-linearly from 1 to ``1/gap``; the
    remaining ``n - rank`` are zero up to roundoff, so numerically they sit
    near ``1e-16`` and are separated from the kept ones by a wide gap.
    """
    return matrix_with_spectrum(m, log_spectrum(rank, gap), seed, n=n)


def random_sparse(m: int, n: int, density: float, seed: int, col_scale_decades: float = 0.0) -> CsrMatrix:
    """Random sparse matrix with Gaussian entries.

    ``col_scale_decades > 0`` scales column ``j`` by ``10**(-decades * j / (n-1))``,
    a cheap way to make sparse matrices badly conditioned.  Every column keeps
    at least one nonzero.
    """
    rng = make_rng(seed)
    M = sp.random(m, n, density=density, format="csc", random_state=rng, data_rvs=rng.standard_normal)
    rows = rng.integers(0, m, size=n)
    M = M + sp.csc_matrix((rng.standard_normal(n), (rows, np.arange(n))), shape=(m, n))
    if col_scale_decades:
        scale = 10.0 ** (-col_scale_decades * np.arange(n) / max(n - 1, 1))
        M = M @ sp.diags(scale)
    return CsrMatrix.from_scipy(M)


def consistent_rhs(A: CsrMatrix, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``b = A x*`` with standard normal ``x*``; returns ``(b, x*)``."""
    x = make_rng(seed).standard_normal(A.cols)
    return A @ x, x


def inconsistent_rhs(A: CsrMatrix, seed: int, noise: float = 1e-2) -> np.ndarray:
    """``A x* + e`` with a Gaussian perturbation scaled to ``noise * ||A x*||``."""
    rng = make_rng(seed)
    x = rng.standard_normal(A.cols)
    b = A @ x
    e = rng.standard_normal(A.rows)
    return b + noise * np.linalg.norm(b) / np.linalg.norm(e) * e
