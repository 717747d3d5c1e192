"""Random feature method: assemble a Poisson problem and solve it sketched.

Solves -Lap u = f on the unit square (manufactured sin-sin solution) on a
2 x 2 partition with the smooth PoU, then reports the PDE error as the
number of features per subdomain grows.  Run: python demos/rfm_poisson.py
"""

from sketchlsq import solvers as sv
from sketchlsq.config import parse_pde_config

TEMPLATE = """
[pde]
operator = laplace
solution = sin_sin
nx = 2
ny = 2
q = 41
J = {J}
pou = b
seed = 1
"""

for J in (25, 50, 100, 200):
    problem = parse_pde_config(TEMPLATE.format(J=J)).build()
    A, b = problem.assemble()
    rep = sv.cssvdp_lsqr(A, b, seed=3, opts=sv.SolveOptions(tau=1e-12))
    err = problem.relative_l2_error(rep.x)
    print(f"J={J:4d}  A {A.rows}x{A.cols}  rank {rep.effective_rank:5d}  IT {rep.iterations:4d}  "
          f"rel L2 error {err:.2e}")
