import numpy as np
import pytest

from sketchlsq.mmio import (
    MatrixMarketError,
    read_matrix_market,
    read_vector,
    write_matrix_market,
    write_vector,
)

from conftest import random_csr


def write(tmp_path, text, name="m.mtx"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_identity_file(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real general\n% a comment\n2 2 2\n1 1 1.0\n2 2 1.0\n")
    A = read_matrix_market(p)
    assert A.row_ptr.tolist() == [0, 1, 2]
    np.testing.assert_array_equal(A.toarray(), np.eye(2))


def test_symmetric_expanded(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 1 -1\n3 2 5\n3 3 7\n")
    expect = np.array([[2, -1, 0], [-1, 0, 5], [0, 5, 7]], dtype=float)
    np.testing.assert_array_equal(read_matrix_market(p).toarray(), expect)


def test_skew_symmetric_and_integer(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 3\n")
    np.testing.assert_array_equal(read_matrix_market(p).toarray(), [[0, -3], [3, 0]])


def test_duplicates_summed(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real general\n1 2 3\n1 1 1\n1 1 2.5\n1 2 1\n")
    np.testing.assert_array_equal(read_matrix_market(p).toarray(), [[3.5, 1]])


@pytest.mark.parametrize(
    "text",
    [
        "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n",
        "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n",
        "%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
        "%%MatrixMarket matrix coordinate real general\n2 2\n",
        "%%MatrixMarket matrix coordinate real general\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n",
        "%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n",
        "%%MatrixMarket matrix array real general\n2 1\n1\n2\n",
    ],
)
def test_rejects_bad_files(tmp_path, text):
    with pytest.raises(MatrixMarketError):
        read_matrix_market(write(tmp_path, text))


def test_roundtrip_bitwise(tmp_path):
    A = random_csr(50, 20, density=0.2, seed=4)
    p = tmp_path / "a.mtx"
    write_matrix_market(A, p, comment="random test matrix")
    B = read_matrix_market(p)
    assert B == A
    assert B.values.tobytes() == A.values.tobytes()


def test_roundtrip_awkward_values(tmp_path):
    vals = np.array([[1e-300, -np.pi], [5e300, 1 / 3]])
    from sketchlsq.sparse import CsrMatrix

    A = CsrMatrix.from_dense(vals)
    write_matrix_market(A, tmp_path / "w.mtx")
    assert read_matrix_market(tmp_path / "w.mtx") == A


def test_vector_roundtrip(tmp_path, rng):
    v = rng.standard_normal(17)
    write_vector(v, tmp_path / "b.mtx")
    assert read_vector(tmp_path / "b.mtx").tobytes() == v.tobytes()


def test_vector_plain_text_and_coordinate(tmp_path):
    np.testing.assert_array_equal(read_vector(write(tmp_path, "1.5\n-2\n3e-1\n", "b.txt")), [1.5, -2, 0.3])
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real general\n4 1 2\n1 1 2\n3 1 -1\n", "c.mtx")
    np.testing.assert_array_equal(read_vector(p), [2, 0, -1, 0])
    with pytest.raises(MatrixMarketError):
        read_vector(write(tmp_path, "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n", "d.mtx"))
