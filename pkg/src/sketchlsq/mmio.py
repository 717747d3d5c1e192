"""Matrix Market reading and writing.

Only real (or integer) ``coordinate`` matrices are read as sparse matrices;
``general``, ``symmetric`` and ``skew-symmetric`` storage are accepted and
expanded.  ``pattern`` and ``complex`` files are rejected.  Right-hand sides
are written as one-column ``array`` files and may also be read from plain
whitespace-separated text.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

from .sparse import CsrMatrix, as_vector

__all__ = [
    "MatrixMarketError",
    "read_matrix_market",
    "write_matrix_market",
    "read_vector",
    "write_vector",
]


class MatrixMarketError(ValueError):
    pass


def _data_lines(fh):
    for line in fh:
        s = line.strip()
        if s and not s.startswith("%"):
            yield s


def _parse_header(line: str) -> tuple[str, str, str]:
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket" or parts[1].lower() != "matrix":
        raise MatrixMarketError(f"malformed Matrix Market header: {line.strip()!r}")
    fmt, field, symmetry = (p.lower() for p in parts[2:])
    if fmt not in ("coordinate", "array"):
        raise MatrixMarketError(f"unknown format {fmt!r}")
    if field == "pattern":
        raise MatrixMarketError("pattern-only files carry no values and are not supported")
    if field not in ("real", "integer", "double"):
        raise MatrixMarketError(f"unsupported field {field!r}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise MatrixMarketError(f"unsupported symmetry {symmetry!r}")
    return fmt, field, symmetry


def _read(path) -> tuple[str, str, object]:
    with open(path, "r") as fh:
        header = fh.readline()
        fmt, _, symmetry = _parse_header(header)
        lines = _data_lines(fh)
        try:
            size = next(lines).split()
        except StopIteration:
            raise MatrixMarketError("missing size line") from None
        try:
            dims = [int(t) for t in size]
        except ValueError:
            raise MatrixMarketError(f"malformed size line: {' '.join(size)!r}") from None
        if fmt == "coordinate":
            if len(dims) != 3:
                raise MatrixMarketError("coordinate size line needs rows, cols, nnz")
            rows, cols, nnz = dims
            entries = []
            for line in lines:
                tok = line.split()
                if len(tok) != 3:
                    raise MatrixMarketError(f"malformed entry line: {line!r}")
                entries.append((int(tok[0]), int(tok[1]), float(tok[2])))
            if len(entries) != nnz:
                raise MatrixMarketError(f"expected {nnz} entries, found {len(entries)}")
            return fmt, symmetry, (rows, cols, entries)
        if len(dims) != 2:
            raise MatrixMarketError("array size line needs rows, cols")
        values = [float(line) for line in lines]
        return fmt, symmetry, (dims[0], dims[1], values)


def read_matrix_market(path: str | os.PathLike) -> CsrMatrix:
    """Read a coordinate Matrix Market file into a :class:`CsrMatrix`.

    Symmetric storage is expanded to the full matrix; duplicate entries are summed.
    """
    fmt, symmetry, payload = _read(path)
    if fmt != "coordinate":
        raise MatrixMarketError("expected a coordinate (sparse) matrix file")
    rows, cols, entries = payload
    if entries:
        ij = np.array([(i, j) for i, j, _ in entries], dtype=np.int64) - 1
        v = np.array([e[2] for e in entries], dtype=np.float64)
    else:
        ij, v = np.zeros((0, 2), dtype=np.int64), np.zeros(0)
    if ij.size and (ij.min() < 0 or ij[:, 0].max() >= rows or ij[:, 1].max() >= cols):
        raise MatrixMarketError("entry index out of bounds")
    i, j = ij[:, 0], ij[:, 1]
    if symmetry != "general":
        if rows != cols:
            raise MatrixMarketError("symmetric storage requires a square matrix")
        off = i != j
        mirror = v[off] if symmetry == "symmetric" else -v[off]
        i, j, v = np.concatenate([i, j[off]]), np.concatenate([j, i[off]]), np.concatenate([v, mirror])
    return CsrMatrix.from_scipy(sp.coo_matrix((v, (i, j)), shape=(rows, cols)))


def write_matrix_market(A: CsrMatrix, path: str | os.PathLike, comment: str | None = None) -> None:
    """Write ``A`` as ``coordinate real general`` with 17 significant digits."""
    rows = np.repeat(np.arange(A.rows), np.diff(A.row_ptr)) + 1
    cols = A.col_idx + 1
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.rows} {A.cols} {A.nnz}\n")
        for i, j, v in zip(rows.tolist(), cols.tolist(), A.values.tolist()):
            fh.write(f"{i} {j} {v:.17g}\n")


def write_vector(v, path: str | os.PathLike) -> None:
    """Write a vector as a one-column ``array real general`` file."""
    v = as_vector(v)
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{v.size} 1\n")
        for x in v.tolist():
            fh.write(f"{x:.17g}\n")


def read_vector(path: str | os.PathLike) -> np.ndarray:
    """Read a right-hand side from a Matrix Market file or from plain text."""
    with open(path, "r") as fh:
        first = fh.readline()
    if first.startswith("%%MatrixMarket"):
        fmt, _, payload = _read(path)
        if fmt == "array":
            rows, cols, values = payload
            if cols != 1 or len(values) != rows:
                raise MatrixMarketError("right-hand side must be a single full column")
            return as_vector(values)
        rows, cols, entries = payload
        if cols != 1:
            raise MatrixMarketError("right-hand side must be a single column")
        v = np.zeros(rows)
        for i, _, x in entries:
            v[i - 1] += x
        return as_vector(v)
    return as_vector(np.loadtxt(path, dtype=np.float64, ndmin=1))
