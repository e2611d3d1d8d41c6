import numpy as np
from pytest import mark, param, raises

from locus.core import linalg
from locus.core.field import FieldSpec, field_create
from locus.errors import SingularMatrixError


@mark.parametrize(
    "matrix,expected",
    [
        param([[1, 2], [3, 4]], 2, id="full"),
        param([[1, 2], [2, 4]], 1, id="dependent"),
        param([[0, 0], [0, 0]], 0, id="zero"),
        param([[1, 0, 2], [0, 1, 3], [1, 1, 5]], 2, id="sum_row"),
    ],
)
def test_rank_gf7(matrix: list, expected: int) -> None:
    assert linalg.rank(field_create(7), np.array(matrix)) == expected


def test_inverse(gf9: FieldSpec) -> None:
    rng = np.random.default_rng(5)
    found = 0
    while found < 5:
        m = gf9.random(rng, (4, 4))
        if linalg.rank(gf9, m) < 4:
            continue
        found += 1
        inv = linalg.inverse(gf9, m)
        assert np.array_equal(linalg.matmul(gf9, inv, m), np.eye(4, dtype=np.int64))
        assert np.array_equal(linalg.matmul(gf9, m, inv), np.eye(4, dtype=np.int64))


@mark.parametrize(
    "matrix",
    [
        param([[1, 2], [2, 4]], id="singular"),
        param([[1, 2, 3], [4, 5, 6]], id="not_square"),
    ],
)
def test_inverse_singular(matrix: list) -> None:
    with raises(SingularMatrixError):
        linalg.inverse(field_create(7), np.array(matrix))


def test_nullspace(gf13: FieldSpec) -> None:
    rng = np.random.default_rng(7)
    m = gf13.random(rng, (3, 7))
    m[2] = gf13.add(m[0], gf13.mul(5, m[1]))
    ns = linalg.nullspace(gf13, m)
    assert ns.shape == (7 - linalg.rank(gf13, m), 7)
    assert not linalg.matmul(gf13, m, ns.T).any()
    assert linalg.rank(gf13, ns) == ns.shape[0]


def test_row_basis_spans_rows(gf9: FieldSpec) -> None:
    rng = np.random.default_rng(11)
    m = gf9.random(rng, (5, 6))
    m[4] = gf9.add(m[0], m[1])
    basis = linalg.row_basis(gf9, m)
    assert basis.shape[0] == linalg.rank(gf9, m)
    assert linalg.rank(gf9, np.concatenate([basis, m])) == basis.shape[0]


def test_solve_erasures_recovers_codeword(gf13: FieldSpec) -> None:
    rng = np.random.default_rng(2)
    # Reed-Solomon [8, 3], any 5 erasures are recoverable
    points = np.arange(1, 9)
    g = np.stack([gf13.pow(points, i) for i in range(3)])
    h = linalg.nullspace(gf13, g)
    word = linalg.matmul(gf13, gf13.random(rng, 3), g)
    erased = [1, 4, 6]
    damaged = word.copy()
    damaged[erased] = 0
    sol = linalg.solve_erasures(gf13, h, damaged, erased)
    assert sol.consistent
    assert sol.determined.all()
    assert np.array_equal(sol.values, word[erased])


def test_solve_erasures_undetermined() -> None:
    f = field_create(7)
    h = np.array([[1, 1, 1]])
    sol = linalg.solve_erasures(f, h, np.array([0, 0, 3]), [0, 1])
    assert sol.consistent
    assert not sol.determined.any()

    sol = linalg.solve_erasures(f, h, np.array([0, 2, 3]), [0])
    assert sol.determined.all()
    assert sol.values.tolist() == [2]


def test_solve_erasures_inconsistent() -> None:
    f = field_create(7)
    h = np.array([[1, 0, 0], [0, 1, 1]])
    # the second check does not involve the erasure and fails
    sol = linalg.solve_erasures(f, h, np.array([0, 1, 1]), [0])
    assert not sol.consistent
