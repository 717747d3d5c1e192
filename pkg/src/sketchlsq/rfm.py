"""Random feature method (RFM) least-squares systems for 2D scalar PDEs.

The solution of ``L u = f`` in a rectangle ``Omega`` with Dirichlet data
``u = g`` on the boundary is sought as

    u_n(x) = sum_i psi_i(x) sum_j u_ij tanh(k_ij . l_i(x) + b_ij)

where ``l_i`` maps subdomain ``i`` onto ``[-1, 1]^2`` and ``psi_i`` is a
partition-of-unity (PoU) function.  Collocating the PDE and the boundary
condition turns the penalty loss into ``min ||A u - b||`` with one row per
(point, equation), each row scaled by ``sqrt(lambda)``.

Supported operators: ``laplace`` (``-Lap u = f``) and ``helmholtz``
(``Lap u + k^2 u = f``).  PoU kinds: ``"a"`` (indicator of ``[-1, 1]``) and
``"b"`` (C^1 sine blend supported on ``[-5/4, 5/4]``).  With kind ``"a"``
and several subdomains, continuity across interfaces is imposed by extra
rows (see :func:`interface_rows`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .sketch import make_rng
from .sparse import CsrMatrix

__all__ = [
    "Partition",
    "FeatureSet",
    "CollocationSet",
    "PdeSpec",
    "RfmProblem",
    "normalized_coord",
    "pou_1d",
    "pou_value",
    "new_features",
    "feature_eval",
    "collocation_points",
    "assemble",
    "interface_rows",
    "evaluate",
    "relative_l2_error",
    "manufactured",
    "SOLUTIONS",
]

POU_KINDS = ("a", "b")


@dataclass(frozen=True, eq=False)
class Partition:
    """Uniform ``nx x ny`` box partition of a rectangle.

    ``centers`` and ``radii`` are ``(M_p, 2)`` arrays; subdomain ``i`` is the
    box ``[c - r, c + r]`` and subdomains are numbered x-fastest.
    """

    domain: tuple[float, float, float, float]
    grid: tuple[int, int]
    pou: str
    centers: np.ndarray
    radii: np.ndarray

    @classmethod
    def uniform(cls, domain=(0.0, 1.0, 0.0, 1.0), grid=(1, 1), pou: str = "b") -> "Partition":
        x0, x1, y0, y1 = map(float, domain)
        nx, ny = map(int, grid)
        if pou not in POU_KINDS:
            raise ValueError(f"pou must be one of {POU_KINDS}, got {pou!r}")
        if nx < 1 or ny < 1 or not (x1 > x0 and y1 > y0):
            raise ValueError("invalid domain or grid")
        hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
        cx = x0 + hx * (np.arange(nx) + 0.5)
        cy = y0 + hy * (np.arange(ny) + 0.5)
        centers = np.array([(x, y) for y in cy for x in cx])
        radii = np.tile([hx / 2, hy / 2], (nx * ny, 1))
        return cls((x0, x1, y0, y1), (nx, ny), pou, centers, radii)

    @property
    def size(self) -> int:
        return len(self.centers)

    def box(self, i: int) -> tuple[float, float, float, float]:
        (cx, cy), (rx, ry) = self.centers[i], self.radii[i]
        return cx - rx, cx + rx, cy - ry, cy + ry


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Frozen random parameters: ``weights`` ``(M_p, J, 2)``, ``biases`` ``(M_p, J)``."""

    weights: np.ndarray
    biases: np.ndarray
    bound: float
    seed: int

    @property
    def per_subdomain(self) -> int:
        return self.biases.shape[1]

    @property
    def count(self) -> int:
        return self.biases.size


@dataclass(frozen=True, eq=False)
class CollocationSet:
    """Collocation points and penalty weights.

    Interface data is stored column-wise, one entry per interface point:
    ``interface_points`` ``(N, 2)``, the two subdomain indices
    ``interface_left``/``interface_right`` (left/below first) and the
    normal ``interface_axis`` (0 for a vertical edge, 1 for a horizontal one).
    """

    interior: np.ndarray
    boundary: np.ndarray
    lambda_interior: float = 1.0
    lambda_boundary: float = 1.0
    lambda_interface: float = 1.0
    interface_points: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    interface_left: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    interface_right: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    interface_axis: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    interface_order: str = "C1"

    @property
    def rows(self) -> int:
        per = 2 if self.interface_order == "C1" else 1
        return len(self.interior) + len(self.boundary) + per * len(self.interface_points)


@dataclass(frozen=True)
class PdeSpec:
    """``operator`` is ``"laplace"`` (``-Lap u = f``) or ``"helmholtz"`` (``Lap u + k^2 u = f``)."""

    operator: str
    forcing: Callable[[np.ndarray], np.ndarray]
    boundary: Callable[[np.ndarray], np.ndarray]
    exact: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    wave_number: float = 0.0

    def __post_init__(self):
        if self.operator not in ("laplace", "helmholtz"):
            raise ValueError(f"unknown operator {self.operator!r}")
        if self.wave_number < 0:
            raise ValueError("wave number must be nonnegative")


# ---------------------------------------------------------------------------
# PoU and features


def normalized_coord(partition: Partition, i: int, x) -> np.ndarray:
    """``(x - c_i) / r_i`` componentwise; ``x`` is a point or an ``(N, 2)`` array."""
    if not 0 <= i < partition.size:
        raise IndexError(f"subdomain index {i} out of range")
    r = partition.radii[i]
    if np.any(r == 0):
        raise ValueError("zero subdomain radius")
    return (np.asarray(x, dtype=np.float64) - partition.centers[i]) / r


def pou_1d(kind: str, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-dimensional PoU profile and its first two derivatives at ``t``."""
    t = np.asarray(t, dtype=np.float64)
    zero = np.zeros_like(t)
    if kind == "a":
        return (np.abs(t) <= 1.0).astype(np.float64), zero, zero.copy()
    if kind != "b":
        raise ValueError(f"unknown PoU kind {kind!r}")
    s2 = np.sin(2 * np.pi * t)
    c2 = np.cos(2 * np.pi * t)
    core = np.abs(t) <= 0.75
    left = (t >= -1.25) & (t < -0.75)
    right = (t > 0.75) & (t <= 1.25)
    val = np.where(core, 1.0, 0.0)
    val = np.where(left, 0.5 * (1 + s2), val)
    val = np.where(right, 0.5 * (1 - s2), val)
    d1 = np.where(left, np.pi * c2, np.where(right, -np.pi * c2, 0.0))
    d2 = np.where(left, -2 * np.pi**2 * s2, np.where(right, 2 * np.pi**2 * s2, 0.0))
    return val, d1, d2


def pou_value(kind: str, l) -> np.ndarray | float:
    """Tensor-product PoU ``prod_k psi(l_k)`` at normalized coordinates ``l``.

    A scalar ``l`` is treated as a 1D coordinate.
    """
    l = np.asarray(l, dtype=np.float64)
    if l.ndim == 0:
        return float(pou_1d(kind, l)[0])
    val = pou_1d(kind, l)[0]
    return np.prod(val, axis=-1)


def new_features(partition: Partition, per_subdomain: int, seed: int, bound: float = 1.0) -> FeatureSet:
    """Draw weights then biases, uniform on ``[-bound, bound]``, from ``make_rng(seed)``."""
    if per_subdomain < 1:
        raise ValueError("need at least one feature per subdomain")
    rng = make_rng(seed)
    M = partition.size
    weights = rng.uniform(-bound, bound, size=(M, per_subdomain, 2))
    biases = rng.uniform(-bound, bound, size=(M, per_subdomain))
    return FeatureSet(weights, biases, float(bound), int(seed))


def _pou_weights(partition: Partition, pts: np.ndarray) -> list[tuple]:
    """Per subdomain: (point mask, psi, grad psi, laplacian psi) restricted to the mask.

    Points on a shared edge of PoU kind ``"a"`` belong to the lowest-index
    subdomain that contains them, so the indicators still sum to one.  For
    kind ``"b"`` the profile of a subdomain touching the domain boundary is
    held at 1 on the outward side, which keeps ``sum_i psi_i = 1`` on the
    whole domain (a single subdomain gets ``psi = 1``).
    """
    out = []
    owned = np.zeros(len(pts), dtype=bool)
    nx, ny = partition.grid
    for i in range(partition.size):
        r = partition.radii[i]
        l = (pts - partition.centers[i]) / r
        p, d1, d2 = pou_1d(partition.pou, l)
        if partition.pou == "b":
            ix, iy = i % nx, i // nx
            for axis, (k, nk) in enumerate(((ix, nx), (iy, ny))):
                flat = np.zeros(len(pts), dtype=bool)
                if k == 0:
                    flat |= l[:, axis] < 0
                if k == nk - 1:
                    flat |= l[:, axis] > 0
                p[flat, axis], d1[flat, axis], d2[flat, axis] = 1.0, 0.0, 0.0
        psi = p[:, 0] * p[:, 1]
        mask = psi != 0.0
        if partition.pou == "a":
            mask &= ~owned
            owned |= mask
        p, d1, d2, l = p[mask], d1[mask], d2[mask], l[mask]
        psi = p[:, 0] * p[:, 1]
        grad = np.stack([d1[:, 0] * p[:, 1] / r[0], p[:, 0] * d1[:, 1] / r[1]], axis=1)
        lap = d2[:, 0] * p[:, 1] / r[0] ** 2 + p[:, 0] * d2[:, 1] / r[1] ** 2
        out.append((mask, psi, grad, lap, l))
    return out


def _tanh_block(features: FeatureSet, partition: Partition, i: int, l: np.ndarray):
    """tanh features of subdomain ``i`` at normalized points ``l``: value, gradient, laplacian in x."""
    K = features.weights[i]
    r = partition.radii[i]
    t = np.tanh(l @ K.T + features.biases[i])
    dt = 1.0 - t * t
    grad = dt[:, :, None] * (K / r)[None, :, :]
    lap = -2.0 * t * dt * np.sum((K / r) ** 2, axis=1)
    return t, grad, lap


def _local(features, partition, i, psi, gpsi, lpsi, l, derivative):
    phi, gphi, lphi = _tanh_block(features, partition, i, l)
    if derivative == "value":
        return psi[:, None] * phi
    if derivative == "grad":
        return psi[:, None, None] * gphi + phi[:, :, None] * gpsi[:, None, :]
    if derivative == "laplacian":
        cross = np.einsum("nk,njk->nj", gpsi, gphi)
        return psi[:, None] * lphi + 2.0 * cross + phi * lpsi[:, None]
    raise ValueError(f"unknown derivative {derivative!r}")


def feature_eval(features: FeatureSet, partition: Partition, x, derivative: str = "value") -> np.ndarray:
    """All ``n = M_p * J`` basis functions ``psi_i phi_ij`` (or derivatives) at points ``x``.

    Returns ``(N, n)`` for ``"value"`` and ``"laplacian"`` and ``(N, n, 2)``
    for ``"grad"``.  A single point gives the leading axis dropped.
    """
    pts = np.asarray(x, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    J = features.per_subdomain
    shape = (len(pts), partition.size * J) + ((2,) if derivative == "grad" else ())
    out = np.zeros(shape)
    for i, (mask, psi, gpsi, lpsi, l) in enumerate(_pou_weights(partition, pts)):
        if mask.any():
            out[mask, i * J:(i + 1) * J] = _local(features, partition, i, psi, gpsi, lpsi, l, derivative)
    return out[0] if single else out


def evaluate(coef, features: FeatureSet, partition: Partition, x, derivative: str = "value") -> np.ndarray:
    """The RFM solution ``u_n`` (or a derivative) at points ``x``."""
    F = feature_eval(features, partition, x, derivative)
    if derivative == "grad":
        return np.einsum("nfk,f->nk", F, coef)
    return F @ np.asarray(coef, dtype=np.float64)


# ---------------------------------------------------------------------------
# collocation and assembly


def _on_boundary(pts: np.ndarray, domain, tol: float) -> np.ndarray:
    x0, x1, y0, y1 = domain
    return (
        (np.abs(pts[:, 0] - x0) <= tol)
        | (np.abs(pts[:, 0] - x1) <= tol)
        | (np.abs(pts[:, 1] - y0) <= tol)
        | (np.abs(pts[:, 1] - y1) <= tol)
    )


def collocation_points(
    partition: Partition,
    q: int,
    lambda_interior: float = 1.0,
    lambda_boundary: float | None = None,
    lambda_interface: float = 1.0,
    interface_order: str = "C1",
) -> CollocationSet:
    """``q x q`` equispaced points per subdomain (edges included), merged globally.

    Points on the domain boundary carry the boundary condition; the rest the
    PDE.  ``lambda_boundary=None`` picks ``m_interior / m_boundary``.  For PoU
    kind ``"a"`` with several subdomains the grid points lying on interior
    edges also become interface points.
    """
    if q < 2:
        raise ValueError("need at least 2 points per side")
    if interface_order not in ("C0", "C1"):
        raise ValueError("interface_order must be 'C0' or 'C1'")
    x0, x1, y0, y1 = partition.domain
    nx, ny = partition.grid
    gx = np.linspace(x0, x1, nx * (q - 1) + 1)
    gy = np.linspace(y0, y1, ny * (q - 1) + 1)
    # identical to the union of the per-subdomain grids, without duplicate points
    pts = np.array([(x, y) for y in gy for x in gx])
    tol = 1e-12 * max(x1 - x0, y1 - y0)
    on_b = _on_boundary(pts, partition.domain, tol)
    interior, boundary = pts[~on_b], pts[on_b]
    if lambda_boundary is None:
        lambda_boundary = len(interior) / len(boundary) if len(interior) else 1.0

    ip, il, ir, ia = [], [], [], []
    if partition.pou == "a" and partition.size > 1:
        for j in range(ny):
            for i in range(nx):
                k = j * nx + i
                xa, xb, ya, yb = partition.box(k)
                if i + 1 < nx:  # vertical edge shared with the right neighbour
                    ys = gy[(j * (q - 1)):(j + 1) * (q - 1) + 1]
                    for y in ys:
                        if y0 + tol < y < y1 - tol:
                            ip.append((xb, y)), il.append(k), ir.append(k + 1), ia.append(0)
                if j + 1 < ny:  # horizontal edge shared with the upper neighbour
                    xs = gx[(i * (q - 1)):(i + 1) * (q - 1) + 1]
                    for x in xs:
                        if x0 + tol < x < x1 - tol:
                            ip.append((x, yb)), il.append(k), ir.append(k + nx), ia.append(1)
    return CollocationSet(
        interior=interior,
        boundary=boundary,
        lambda_interior=float(lambda_interior),
        lambda_boundary=float(lambda_boundary),
        lambda_interface=float(lambda_interface),
        interface_points=np.asarray(ip, dtype=np.float64).reshape(-1, 2),
        interface_left=np.asarray(il, dtype=int),
        interface_right=np.asarray(ir, dtype=int),
        interface_axis=np.asarray(ia, dtype=int),
        interface_order=interface_order,
    )


def _operator_rows(pde: PdeSpec, features, partition, pts, scale):
    """COO triplets of ``scale * L(psi_i phi_ij)`` at ``pts``."""
    J = features.per_subdomain
    rows, cols, vals = [], [], []
    for i, (mask, psi, gpsi, lpsi, l) in enumerate(_pou_weights(partition, pts)):
        if not mask.any():
            continue
        lap = _local(features, partition, i, psi, gpsi, lpsi, l, "laplacian")
        if pde.operator == "laplace":
            block = -lap
        else:
            val = _local(features, partition, i, psi, gpsi, lpsi, l, "value")
            block = lap + pde.wave_number**2 * val
        _append_block(rows, cols, vals, np.flatnonzero(mask), i * J, scale * block)
    return rows, cols, vals


def _value_rows(features, partition, pts, scale):
    J = features.per_subdomain
    rows, cols, vals = [], [], []
    for i, (mask, psi, gpsi, lpsi, l) in enumerate(_pou_weights(partition, pts)):
        if mask.any():
            block = _local(features, partition, i, psi, gpsi, lpsi, l, "value")
            _append_block(rows, cols, vals, np.flatnonzero(mask), i * J, scale * block)
    return rows, cols, vals


def _append_block(rows, cols, vals, row_idx, col0, block):
    nr, nc = block.shape
    rows.append(np.repeat(row_idx, nc))
    cols.append(np.tile(np.arange(col0, col0 + nc), nr))
    vals.append(block.ravel())


def interface_rows(
    partition: Partition, features: FeatureSet, colloc: CollocationSet, order: str | None = None
) -> tuple[sp.csr_matrix, np.ndarray]:
    """Continuity rows ``sqrt(lambda_C) * (phi_left - phi_right)`` at interface points.

    ``order="C0"`` gives one value-jump row per point; ``"C1"`` adds a
    normal-derivative-jump row right after it.  Inside its support the
    indicator PoU is constant, so only the tanh features enter.  Returns a
    sparse block with ``features.count`` columns and a zero right-hand side.
    """
    order = order or colloc.interface_order
    n = features.count
    if partition.pou != "a":
        warnings.warn("interface rows are only needed for PoU kind 'a'; none added", stacklevel=2)
        return sp.csr_matrix((0, n)), np.zeros(0)
    if order not in ("C0", "C1"):
        raise ValueError("order must be 'C0' or 'C1'")
    pts = colloc.interface_points
    per = 2 if order == "C1" else 1
    J = features.per_subdomain
    w = math.sqrt(colloc.lambda_interface)
    rows, cols, vals = [], [], []
    for p, (pt, a, b, axis) in enumerate(
        zip(pts, colloc.interface_left, colloc.interface_right, colloc.interface_axis)
    ):
        for sub, sign in ((a, 1.0), (b, -1.0)):
            l = normalized_coord(partition, sub, pt[None, :])
            phi, gphi, _ = _tanh_block(features, partition, sub, l)
            c = np.arange(sub * J, (sub + 1) * J)
            rows.append(np.full(J, per * p)), cols.append(c), vals.append(sign * w * phi[0])
            if order == "C1":
                rows.append(np.full(J, per * p + 1)), cols.append(c), vals.append(sign * w * gphi[0, :, axis])
    if not rows:
        return sp.csr_matrix((0, n)), np.zeros(0)
    M = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(per * len(pts), n)
    ).tocsr()
    return M, np.zeros(per * len(pts))


def assemble(
    pde: PdeSpec, partition: Partition, features: FeatureSet, colloc: CollocationSet
) -> tuple[CsrMatrix, np.ndarray]:
    """Least-squares system for the penalty loss.

    Row order: interior points (PDE rows), boundary points (Dirichlet rows),
    then interface rows.  Each row and its right-hand side are multiplied by
    ``sqrt(lambda)`` of its block so that ``||A u - b||^2`` equals the loss.
    """
    if features.count == 0:
        raise ValueError("feature set is empty")
    if len(colloc.interior) + len(colloc.boundary) == 0:
        raise ValueError("empty collocation set")
    if features.biases.shape[0] != partition.size:
        raise ValueError("feature set does not match the partition")
    n = features.count
    wI, wB = math.sqrt(colloc.lambda_interior), math.sqrt(colloc.lambda_boundary)
    mI, mB = len(colloc.interior), len(colloc.boundary)

    blocks, rhs = [], []
    if mI:
        r, c, v = _operator_rows(pde, features, partition, colloc.interior, wI)
        blocks.append(_coo(r, c, v, mI, n))
        rhs.append(wI * np.asarray(pde.forcing(colloc.interior), dtype=np.float64))
    if mB:
        r, c, v = _value_rows(features, partition, colloc.boundary, wB)
        blocks.append(_coo(r, c, v, mB, n))
        rhs.append(wB * np.asarray(pde.boundary(colloc.boundary), dtype=np.float64))
    if partition.pou == "a" and partition.size > 1 and len(colloc.interface_points):
        M, z = interface_rows(partition, features, colloc)
        blocks.append(M)
        rhs.append(z)
    A = CsrMatrix.from_scipy(sp.vstack(blocks, format="csr"))
    return A, np.concatenate(rhs)


def _coo(rows, cols, vals, m, n) -> sp.csr_matrix:
    if not rows:
        return sp.csr_matrix((m, n))
    return sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(m, n)
    ).tocsr()


def error_grid(domain, size: int = 101) -> np.ndarray:
    x0, x1, y0, y1 = domain
    X, Y = np.meshgrid(np.linspace(x0, x1, size), np.linspace(y0, y1, size))
    return np.column_stack([X.ravel(), Y.ravel()])


def relative_l2_error(coef, pde: PdeSpec, features: FeatureSet, partition: Partition, grid: int = 101) -> float:
    """Discrete relative L2 error of ``u_n`` against ``pde.exact`` on a ``grid x grid`` tensor grid."""
    if pde.exact is None:
        raise ValueError("no exact solution available")
    pts = error_grid(partition.domain, grid)
    u = np.asarray(pde.exact(pts), dtype=np.float64)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ValueError("exact solution vanishes on the error grid")
    return float(np.linalg.norm(evaluate(coef, features, partition, pts) - u) / norm)


# ---------------------------------------------------------------------------
# manufactured solutions


@dataclass(frozen=True)
class _Solution:
    u: Callable[[np.ndarray], np.ndarray]
    lap: Callable[[np.ndarray], np.ndarray]


def _sin_sin(p):
    return np.sin(np.pi * p[:, 0]) * np.sin(np.pi * p[:, 1])


def _gauss(p):
    return np.exp(-0.5 * (p[:, 0] ** 2 + p[:, 1] ** 2))


def _wave(p):
    return np.sin(2 * np.pi * p[:, 0]) * np.cos(np.pi * p[:, 1]) + 0.5 * p[:, 0] * p[:, 1]


SOLUTIONS = {
    "sin_sin": _Solution(_sin_sin, lambda p: -2 * np.pi**2 * _sin_sin(p)),
    "gauss": _Solution(_gauss, lambda p: (p[:, 0] ** 2 + p[:, 1] ** 2 - 2) * _gauss(p)),
    "wave": _Solution(
        _wave, lambda p: -5 * np.pi**2 * np.sin(2 * np.pi * p[:, 0]) * np.cos(np.pi * p[:, 1])
    ),
}


def manufactured(solution: str, operator: str = "laplace", wave_number: float = 0.0, domain=(0.0, 1.0, 0.0, 1.0)) -> PdeSpec:
    """PDE whose forcing and Dirichlet data come from a known solution in :data:`SOLUTIONS`."""
    try:
        sol = SOLUTIONS[solution]
    except KeyError:
        raise ValueError(f"unknown solution {solution!r}; choose from {sorted(SOLUTIONS)}") from None
    if operator == "laplace":
        forcing = lambda p: -sol.lap(p)  # noqa: E731
    elif operator == "helmholtz":
        forcing = lambda p: sol.lap(p) + wave_number**2 * sol.u(p)  # noqa: E731
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return PdeSpec(operator, forcing, sol.u, sol.u, tuple(domain), float(wave_number))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RfmProblem:
    """Everything that determines an assembled RFM system."""

    pde: PdeSpec
    partition: Partition
    features: FeatureSet
    colloc: CollocationSet

    @classmethod
    def build(
        cls,
        pde: PdeSpec,
        grid=(1, 1),
        q: int = 10,
        per_subdomain: int = 50,
        pou: str = "b",
        seed: int = 0,
        bound: float = 1.0,
        lambda_interior: float = 1.0,
        lambda_boundary: float | None = None,
        lambda_interface: float = 1.0,
        interface_order: str = "C1",
    ) -> "RfmProblem":
        partition = Partition.uniform(pde.domain, grid, pou)
        features = new_features(partition, per_subdomain, seed, bound)
        colloc = collocation_points(
            partition, q, lambda_interior, lambda_boundary, lambda_interface, interface_order
        )
        return cls(pde, partition, features, colloc)

    def assemble(self) -> tuple[CsrMatrix, np.ndarray]:
        return assemble(self.pde, self.partition, self.features, self.colloc)

    def relative_l2_error(self, coef, grid: int = 101) -> float:
        return relative_l2_error(coef, self.pde, self.features, self.partition, grid)
