import numpy as np
from pytest import fixture, mark, param, raises

from locus.core import linalg
from locus.core.cyclic import (
    CyclicCode,
    ZeroSet,
    bch_designed_distance,
    check_and_reversed_dual,
    dual_generator,
    encode,
    generator_from_zeros,
    lemma_zeros_vector,
    local_parity_rows,
    local_structure,
    repair_in_group,
)
from locus.core.field import FieldElement, FieldSpec, field_create, root_of_unity
from locus.core.oracle import Budget, min_distance
from locus.core.poly import Poly
from locus.errors import FieldMismatchError, ParameterError

ZEROS_12_4 = (1, 2, 3, 4, 5, 6, 7, 10)


@fixture(scope="module")
def code_12_4() -> CyclicCode:
    f = field_create(13)
    return generator_from_zeros(f, 12, root_of_unity(f, 12), ZeroSet(12, ZEROS_12_4))


def test_zero_set_normalizes() -> None:
    z = ZeroSet.of(8, [9, -1, 1])
    assert z.exponents == (1, 7)
    assert len(z) == 2
    assert 7 in z
    assert ZeroSet.interval(6, 4, 8).exponents == (0, 1, 4, 5)
    assert ZeroSet(5, (0, 3)).complement() == (1, 2, 4)


def test_zero_set_lift() -> None:
    assert ZeroSet(2, (1,)).lift(8).exponents == (1, 3, 5, 7)
    assert ZeroSet(3, (1,)).lift(12).union(ZeroSet.interval(12, 1, 8)).exponents == ZEROS_12_4
    with raises(ParameterError, match="Cannot lift"):
        ZeroSet(3, (1,)).lift(8)


@mark.parametrize(
    "n,exponents,error",
    [
        param(0, (), "must be positive", id="length"),
        param(4, (4,), "must lie in", id="out_of_range"),
    ],
)
def test_zero_set_errors(n: int, exponents: tuple, error: str) -> None:
    with raises(ParameterError, match=error):
        ZeroSet(n, exponents)


@mark.parametrize(
    "n,exponents,expected",
    [
        param(12, ZEROS_12_4, 8, id="run_1_to_7"),
        param(8, (), 1, id="empty"),
        param(4, (0, 1, 2, 3), 5, id="full"),
        param(8, (6, 7, 0, 1), 5, id="wraps_around"),
        param(10, (1, 2, 5, 6, 7), 4, id="longest_of_two"),
    ],
)
def test_bch_designed_distance(n: int, exponents: tuple, expected: int) -> None:
    assert bch_designed_distance(ZeroSet(n, exponents)) == expected


def test_generator_and_codewords(code_12_4: CyclicCode) -> None:
    c = code_12_4
    f = c.field
    assert c.k == 4
    assert c.dimension == 4
    assert c.g.degree == 8
    for row in c.generator_matrix:
        assert c.is_codeword(row)
    for row in c.nonzero_rows():
        assert c.is_codeword(row)
    assert linalg.rank(f, c.nonzero_rows()) == 4
    assert c.parity_check_matrix.shape == (8, 12)
    word = encode(c, [1, 2, 3, 4])
    assert c.is_codeword(word)
    word[0] = f.add(word[0], 1)
    assert not c.is_codeword(word)
    assert not c.is_codeword(np.zeros(11, dtype=np.int64))


def test_minimum_distance_meets_designed(code_12_4: CyclicCode) -> None:
    report = min_distance(code_12_4.linear_code(), Budget())
    assert report.verified == 8
    assert report.enumerations == 13**4 - 1


def test_dual(code_12_4: CyclicCode) -> None:
    c = code_12_4
    h, reversed_dual = check_and_reversed_dual(c)
    assert h * c.g == Poly.x_pow_minus(c.field, 12)
    assert reversed_dual == h
    d = dual_generator(c)
    assert d.degree == 4
    assert d.leading == 1
    # the dual generator's rows are orthogonal to the code
    dual_rows = np.stack([d.shift(i).padded(12) for i in range(8)])
    assert not linalg.matmul(c.field, c.generator_matrix, dual_rows.T).any()


@mark.parametrize(
    "u,expected",
    [
        param(0, False, id="zero_not_a_zero"),
        param(1, True, id="all_shifts_are_zeros"),
        param(2, False, id="eight_missing"),
    ],
)
def test_lemma_zeros_vector(code_12_4: CyclicCode, u: int, expected: bool) -> None:
    b, in_dual = lemma_zeros_vector(code_12_4, nu=4, m=3, u=u)
    assert b.degree == 8
    assert in_dual == expected


def test_lemma_zeros_vector_errors(code_12_4: CyclicCode) -> None:
    with raises(ParameterError):
        lemma_zeros_vector(code_12_4, nu=5, m=3, u=0)
    with raises(ParameterError):
        lemma_zeros_vector(code_12_4, nu=4, m=3, u=3)


def test_lemma_zeros_vector_random_zero_sets() -> None:
    rng = np.random.default_rng(2024)
    fields = [field_create(5), field_create(7), field_create(3, 2), field_create(11), field_create(13), field_create(2, 4)]
    for _ in range(120):
        f = fields[int(rng.integers(len(fields)))]
        lengths = [n for n in range(2, f.q) if (f.q - 1) % n == 0]
        n = lengths[int(rng.integers(len(lengths)))]
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        nu = divisors[int(rng.integers(len(divisors)))]
        m = n // nu
        size = int(rng.integers(1, n))
        zeros = ZeroSet.of(n, rng.choice(n, size=size, replace=False).tolist())
        c = generator_from_zeros(f, n, root_of_unity(f, n), zeros)
        u = int(rng.integers(m))
        _, in_dual = lemma_zeros_vector(c, nu=nu, m=m, u=u)
        assert in_dual == all((u + i * m) in zeros for i in range(nu)), (f.q, n, nu, zeros.exponents, u)


def test_local_structure(code_12_4: CyclicCode) -> None:
    cert = local_structure(code_12_4, 3, ZeroSet(3, (1,)), 2)
    assert cert.r == 2
    assert cert.nu == 4
    assert cert.ok
    assert cert.exact_dimension
    assert cert.punctured_rank == 2
    assert cert.groups[1] == (1, 5, 9)
    assert cert.group_of(9) == 1
    rows = local_parity_rows(code_12_4, cert, cert.groups[0])
    word = encode(code_12_4, [3, 1, 4, 1])
    assert not linalg.matmul(code_12_4.field, rows, word[list(cert.groups[0])]).any()


@mark.parametrize(
    "m,zloc,delta,error",
    [
        param(5, ZeroSet(5, (1,)), 2, "not a multiple", id="length"),
        param(3, ZeroSet(3, ()), 2, "missing", id="run"),
        param(4, ZeroSet(4, (1,)), 2, "not zeros of the code", id="lift"),
    ],
)
def test_local_structure_errors(code_12_4: CyclicCode, m: int, zloc: ZeroSet, delta: int, error: str) -> None:
    with raises(ParameterError, match=error):
        local_structure(code_12_4, m, zloc, delta)


def test_repair_in_group(code_12_4: CyclicCode) -> None:
    cert = local_structure(code_12_4, 3, ZeroSet(3, (1,)), 2)
    word = encode(code_12_4, [5, 0, 7, 2])
    erased = [0, 4, 5, 10]
    damaged = word.copy()
    damaged[erased] = 0
    res = repair_in_group(code_12_4, cert, damaged, erased)
    # 0 and 4 share a group, the other two are alone in theirs
    assert sorted(res.recovered) == [5, 10]
    assert sorted(res.unresolved) == [0, 4]
    assert np.array_equal(res.word[[5, 10]], word[[5, 10]])


def test_generator_from_zeros_errors() -> None:
    f = field_create(13)
    with raises(ParameterError, match="does not divide"):
        generator_from_zeros(f, 5, f.one, ZeroSet(5, ()))
    with raises(ParameterError, match="order"):
        generator_from_zeros(f, 12, root_of_unity(f, 6), ZeroSet(12, ()))
    with raises(ParameterError, match="defined mod"):
        generator_from_zeros(f, 12, root_of_unity(f, 12), ZeroSet(6, ()))
    with raises(FieldMismatchError):
        generator_from_zeros(f, 6, root_of_unity(field_create(7), 6), ZeroSet(6, ()))


def test_encode_rejects_wrong_length(code_12_4: CyclicCode) -> None:
    with raises(ParameterError):
        encode(code_12_4, [1, 2])


def test_encode_checks_symbol_field(code_12_4: CyclicCode) -> None:
    gf7 = field_create(7)
    with raises(FieldMismatchError):
        encode(code_12_4, [FieldElement(1, gf7), 0, 0, 0])
    with raises(ParameterError, match="not elements of"):
        encode(code_12_4, [1, 13, 0, -1])
    word = encode(code_12_4, [FieldElement(3, code_12_4.field), 1, 4, 1])
    assert np.array_equal(word, encode(code_12_4, [3, 1, 4, 1]))


def test_full_length_code(gf9: FieldSpec) -> None:
    c = generator_from_zeros(gf9, 8, root_of_unity(gf9, 8), ZeroSet.interval(8, 1, 4))
    assert c.k == 5
    assert bch_designed_distance(c.zeros) == 4
    assert min_distance(c.linear_code(), Budget()).verified == 4
