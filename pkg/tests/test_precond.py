import numpy as np
import pytest

from sketchlsq.precond import (
    PreconditionedSystem,
    QrPreconditioner,
    RankDeficient,
    apply_implicit,
    apply_implicit_t,
    build_qr_precond,
    build_svd_precond,
    form_explicit,
    recover_solution,
    warm_start,
)
from sketchlsq.sketch import (
    CountSketch,
    apply_left,
    apply_to_vector,
    distortion_epsilon,
    embedding_distortion,
    new_count_sketch,
    range_basis,
)
from sketchlsq.sparse import CsrMatrix, condition_number
from sketchlsq.synthetic import ill_conditioned, log_spectrum, matrix_with_spectrum

from conftest import random_csr


def sketched(A, gamma=3.0, seed=0):
    S = new_count_sketch(int(np.ceil(gamma * A.cols)), A.rows, seed)
    return S, apply_left(S, A)


def test_qr_identity():
    pre = build_qr_precond(np.eye(5))
    np.testing.assert_allclose(pre.R, np.eye(5))


def test_qr_zero_column():
    M = np.random.default_rng(0).standard_normal((10, 4))
    M[:, 2] = 0.0
    with pytest.raises(RankDeficient):
        build_qr_precond(M)


def test_qr_collapses_condition():
    A = ill_conditioned(300, 20, 1e12, seed=1)
    _, SA = sketched(A, gamma=15)
    pre = build_qr_precond(SA)
    assert condition_number(form_explicit(A, pre)) <= 10


def test_svd_exact_truncation():
    pre = build_svd_precond(np.diag([4.0, 2.0, 1e-20]), rcond=1e-12)
    assert pre.effective_rank == 2
    np.testing.assert_allclose(np.abs(pre.P), [[0.25, 0], [0, 0.5], [0, 0]], atol=1e-16)


def test_svd_orthonormal_columns():
    Q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((12, 4)))
    pre = build_svd_precond(Q)
    assert pre.effective_rank == 4
    np.testing.assert_allclose(pre.sigma, 1.0, rtol=1e-14)
    # P = V up to the rotation freedom of a repeated singular value
    np.testing.assert_allclose(pre.P.T @ pre.P, np.eye(4), atol=1e-12)


def test_svd_rank_detection():
    sig = np.logspace(0, -3, 5)
    M = matrix_with_spectrum(60, sig, seed=4, n=20).toarray()
    assert build_svd_precond(M, rcond=1e-10).effective_rank == 5


def test_svd_rcond_range():
    with pytest.raises(ValueError):
        build_svd_precond(np.eye(3), rcond=0.0)


def test_explicit_identity():
    pre = build_qr_precond(np.eye(4))
    np.testing.assert_array_equal(form_explicit(CsrMatrix.identity(4), pre), np.eye(4))


def test_svd_reconstruction_with_bijective_sketch():
    A = random_csr(30, 6, density=0.5, seed=7)
    S = CountSketch(30, 30, np.arange(30), np.ones(30))
    pre = build_svd_precond(apply_left(S, A))
    B = form_explicit(A, pre)
    # B = U, so B diag(sigma) V^T = A
    V = pre.P * pre.sigma
    assert np.linalg.norm(B * pre.sigma @ V.T - A.toarray()) <= 1e-12 * np.linalg.norm(A.toarray())


def test_desk_problem_kappa():
    A = ill_conditioned(2000, 100, 1e12, seed=0)
    _, SA = sketched(A)
    assert condition_number(form_explicit(A, build_qr_precond(SA))) <= 10
    assert condition_number(form_explicit(A, build_svd_precond(SA))) <= 10


def test_implicit_matches_explicit(rng):
    A = ill_conditioned(400, 15, 1e6, seed=3)
    _, SA = sketched(A)
    for pre in (build_qr_precond(SA), build_svd_precond(SA)):
        B = form_explicit(A, pre)
        y = rng.standard_normal(pre.ncols)
        u = rng.standard_normal(A.rows)
        By = B @ y
        assert np.linalg.norm(By - apply_implicit(pre, A, y)) <= 1e-10 * np.linalg.norm(By)
        np.testing.assert_allclose(apply_implicit_t(pre, A, u), B.T @ u, rtol=1e-9, atol=1e-9)


def test_implicit_identity_r(rng):
    A = random_csr(10, 3, seed=1)
    pre = build_qr_precond(np.eye(3))
    y = rng.standard_normal(3)
    np.testing.assert_array_equal(apply_implicit(pre, A, y), A @ y)


def test_recover_solution():
    pre = build_qr_precond(np.eye(2))
    np.testing.assert_array_equal(recover_solution(pre, [1.0, 2.0]), [1.0, 2.0])
    hand = QrPreconditioner(R=np.array([[2.0, 1.0], [0.0, 4.0]]), Q=np.eye(2))
    np.testing.assert_allclose(recover_solution(hand, [4.0, 8.0]), [1.0, 2.0])
    R = np.triu(np.random.default_rng(5).standard_normal((6, 6))) + 4 * np.eye(6)
    y = np.arange(6.0)
    x = recover_solution(QrPreconditioner(R=R, Q=np.eye(6)), y)
    np.testing.assert_allclose(R @ x, y, atol=1e-13)


def test_warm_start():
    A = ill_conditioned(200, 5, 1e3, seed=2)
    S, SA = sketched(A)
    pre = build_qr_precond(SA)
    assert not warm_start(pre, S, np.zeros(200)).any()
    # a b whose sketch is orthogonal to range(Q)
    target = np.zeros(S.s)
    target[:] = np.random.default_rng(0).standard_normal(S.s)
    target -= pre.Q @ (pre.Q.T @ target)
    b = np.zeros(200)
    for j in range(S.s):
        i = np.flatnonzero(S.bucket == j)[0]
        b[i] = S.sign[i] * target[j]
    np.testing.assert_allclose(apply_to_vector(S, b), target, atol=1e-14)
    assert np.linalg.norm(warm_start(pre, S, b)) <= 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_kappa_bounded_by_measured_distortion(seed):
    # 200 random directions only probe the extremes well in a low-dimensional range
    A = ill_conditioned(2000, 5, 1e8, seed=seed)
    S, SA = sketched(A, gamma=20, seed=seed)
    eps = distortion_epsilon(*embedding_distortion(S, range_basis(A), 200, seed=1))
    kappa = condition_number(form_explicit(A, build_qr_precond(SA)))
    assert kappa <= np.sqrt((1 + eps) / (1 - eps)) * 1.05


def test_kappa_bounded_by_exact_distortion():
    A = ill_conditioned(2000, 10, 1e8, seed=6)
    S, SA = sketched(A, gamma=20)
    # the extreme ratios over range(A) are the squared singular values of S U
    s = np.linalg.svd(apply_left(S, range_basis(A)), compute_uv=False)
    eps = distortion_epsilon(s[-1] ** 2, s[0] ** 2)
    kappa = condition_number(form_explicit(A, build_qr_precond(SA)))
    assert kappa <= np.sqrt((1 + eps) / (1 - eps)) * (1 + 1e-10)


def test_effective_rank_gap():
    sig = np.concatenate([np.logspace(0, -2, 6), np.full(4, 1e-9)])
    hits = 0
    for seed in range(50):
        A = matrix_with_spectrum(300, sig, seed=seed)
        _, SA = sketched(A, seed=seed)
        hits += build_svd_precond(SA, rcond=1e-6).effective_rank == 6
    assert hits >= 49


def test_full_column_rank_of_b():
    A = ill_conditioned(500, 20, 1e10, seed=8)
    _, SA = sketched(A)
    B = form_explicit(A, build_qr_precond(SA))
    assert np.linalg.svd(B, compute_uv=False)[-1] > 0.1


def test_preconditioned_system_modes(rng):
    A = ill_conditioned(120, 6, 1e4, seed=9)
    _, SA = sketched(A)
    pre = build_qr_precond(SA)
    b = rng.standard_normal(120)
    ex = PreconditionedSystem("explicit", A, pre, b)
    im = PreconditionedSystem("implicit", A, pre, b)
    y = rng.standard_normal(6)
    np.testing.assert_allclose(ex.matvec(y), im.matvec(y), rtol=1e-10)
    assert ex.shape == im.shape == (120, 6)
    with pytest.raises(ValueError):
        PreconditionedSystem("sideways", A, pre, b)
