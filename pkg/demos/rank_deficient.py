"""Rank-deficient least squares: QR fails loudly, truncated SVD recovers.

Run: python demos/rank_deficient.py
"""

import numpy as np

from sketchlsq import solvers as sv
from sketchlsq.precond import RankDeficient
from sketchlsq.synthetic import inconsistent_rhs, rank_deficient

A = rank_deficient(3000, 80, rank=50, gap=1e8, seed=2)
b = inconsistent_rhs(A, seed=2)

try:
    sv.csqrp_lsqr(A, b, seed=0)
except RankDeficient as exc:
    print(f"csqrp: {exc}")

svd = sv.cssvdp_lsqr(A, b, seed=0)
# reference: dense SVD least squares with the same relative cutoff
x_ref = np.linalg.lstsq(A.toarray(), b, rcond=1e-12)[0]
ref = np.linalg.norm(A @ x_ref - b) ** 2 / np.linalg.norm(b) ** 2
print(f"cssvdp: effective rank {svd.effective_rank}, {svd.iterations} iterations")
print(f"rel_ls_error cssvdp {svd.relative_ls_error:.6e}  dense SVD {ref:.6e}")
print(f"difference {abs(svd.relative_ls_error - ref):.1e}")
