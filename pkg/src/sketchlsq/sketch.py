"""Count-sketch transform and empirical subspace-embedding checks.

A count sketch ``S = Phi @ D`` (``s x m``) sends row ``i`` of its input to
bucket ``h(i)`` with sign ``d_i``.  It is stored as the two length-``m``
arrays and never materialized; ``S @ A`` costs one pass over ``nnz(A)``.

Random stream
-------------
Every random quantity in the package comes from ``numpy.random.Generator``
driven by the counter-based Philox4x64 bit generator seeded with the
user's 64-bit seed (see :func:`make_rng`).  For a count sketch the stream
is consumed in a fixed order: ``m`` bucket draws ``integers(0, s)`` first,
then ``m`` sign draws ``integers(0, 2)`` mapped ``0 -> -1, 1 -> +1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sparse import CsrMatrix, as_vector

__all__ = [
    "CountSketch",
    "EmbeddingParams",
    "make_rng",
    "new_count_sketch",
    "apply_left",
    "apply_to_vector",
    "embedding_distortion",
    "distortion_epsilon",
    "range_basis",
    "lemma_sketch_size",
    "default_sketch_size",
]

DEFAULT_GAMMA = 3.0


def make_rng(seed: int) -> np.random.Generator:
    """Seeded Philox generator; the single source of randomness in the package."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True, eq=False)
class CountSketch:
    s: int
    m: int
    bucket: np.ndarray
    sign: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        bucket = np.asarray(self.bucket, dtype=np.int64)
        sign = np.asarray(self.sign, dtype=np.float64)
        if bucket.shape != (self.m,) or sign.shape != (self.m,):
            raise ValueError("bucket and sign must have length m")
        if self.m and (bucket.min() < 0 or bucket.max() >= self.s):
            raise ValueError("bucket index outside [0, s)")
        if not np.all(np.abs(sign) == 1.0):
            raise ValueError("signs must be +1 or -1")
        bucket.setflags(write=False)
        sign.setflags(write=False)
        object.__setattr__(self, "bucket", bucket)
        object.__setattr__(self, "sign", sign)

    @property
    def shape(self) -> tuple[int, int]:
        return self.s, self.m

    def todense(self) -> np.ndarray:
        """Materialize ``S``; for tests and small examples only."""
        S = np.zeros((self.s, self.m))
        S[self.bucket, np.arange(self.m)] = self.sign
        return S

    def is_bijective(self) -> bool:
        return self.s == self.m and np.unique(self.bucket).size == self.m


@dataclass(frozen=True)
class EmbeddingParams:
    """Distortion ``epsilon``, failure probability ``delta`` and oversampling ``gamma`` for ``n`` columns."""

    epsilon: float
    delta: float
    gamma: float
    n: int

    def __post_init__(self):
        if not (0 < self.epsilon < 1 and 0 < self.delta < 1):
            raise ValueError("epsilon and delta must lie in (0, 1)")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def lemma_size(self) -> int:
        return lemma_sketch_size(self.n, self.delta, self.epsilon)

    @property
    def oversampled_size(self) -> int:
        return default_sketch_size(self.n, self.gamma)


def lemma_sketch_size(n: int, delta: float, epsilon: float) -> int:
    """Sketch size ``(n**2 + n) / (delta * epsilon**2)`` guaranteeing a (1 +/- eps) embedding w.p. 1 - delta."""
    return math.ceil((n * n + n) / (delta * epsilon**2))


def default_sketch_size(n: int, gamma: float = DEFAULT_GAMMA) -> int:
    return math.ceil(gamma * n)


def new_count_sketch(s: int, m: int, seed: int) -> CountSketch:
    """Draw a count sketch with ``s`` buckets for ``m`` source rows."""
    s, m = int(s), int(m)
    if s < 1 or s > m:
        raise ValueError(f"sketch size must satisfy 1 <= s <= m, got s={s}, m={m}")
    rng = make_rng(seed)
    bucket = rng.integers(0, s, size=m, dtype=np.int64)
    sign = rng.integers(0, 2, size=m, dtype=np.int64) * 2.0 - 1.0
    return CountSketch(s, m, bucket, sign, seed)


def apply_left(S: CountSketch, A: CsrMatrix) -> np.ndarray:
    """Dense ``S @ A``: row ``j`` is the signed sum of the rows of ``A`` hashed to ``j``."""
    if S.m != A.rows:
        raise ValueError(f"dimension mismatch: sketch has m={S.m}, A has {A.rows} rows")
    out = np.zeros((S.s, A.cols))
    row_of_entry = np.repeat(np.arange(A.rows), np.diff(A.row_ptr))
    # np.add.at is unbuffered and walks the nonzeros in storage order
    np.add.at(out, (S.bucket[row_of_entry], A.col_idx), S.sign[row_of_entry] * A.values)
    return out


def apply_to_vector(S: CountSketch, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (S.m,):
        raise ValueError(f"dimension mismatch: sketch has m={S.m}, vector has shape {v.shape}")
    out = np.zeros(S.s)
    np.add.at(out, S.bucket, S.sign * v)
    return out


def embedding_distortion(S: CountSketch, A: CsrMatrix, trials: int, seed: int) -> tuple[float, float]:
    """Smallest and largest ``||S A x||^2 / ||A x||^2`` over random unit ``x``.

    Directions are Gaussian vectors normalized to unit length, drawn from
    ``make_rng(seed)``; directions annihilated by ``A`` are skipped.  The
    sampled range underestimates the worst case over all ``x``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    SA = apply_left(S, A)
    X = make_rng(seed).standard_normal((A.cols, trials))
    X /= np.linalg.norm(X, axis=0)
    AX = A @ X
    num = np.sum((SA @ X) ** 2, axis=0)
    den = np.sum(AX**2, axis=0)
    keep = den > 0
    if not np.any(keep):
        raise ValueError("A annihilates every sampled direction")
    ratio = num[keep] / den[keep]
    return float(ratio.min()), float(ratio.max())


def distortion_epsilon(lo: float, hi: float) -> float:
    """Collapse a measured ratio range into a single distortion ``epsilon``."""
    return max(1.0 - lo, hi - 1.0)


def range_basis(A: CsrMatrix, extra=None) -> CsrMatrix:
    """Orthonormal basis of ``range(A)`` (or of ``range([A, extra])``), as a dense-in-CSR matrix.

    Distortion measured on this basis is the distortion on the whole column
    space: ``x`` is then uniform on the unit sphere of ``range(A)`` instead of
    being skewed toward the dominant singular directions of ``A``.
    """
    M = A.toarray()
    if extra is not None:
        M = np.column_stack([M, np.asarray(extra, dtype=np.float64)])
    U, sig, _ = np.linalg.svd(M, full_matrices=False)
    if not sig.size or sig[0] == 0.0:
        raise ValueError("zero matrix has no range")
    keep = sig > sig[0] * max(M.shape) * np.finfo(float).eps
    return CsrMatrix.from_dense(U[:, keep], drop_zeros=False)
