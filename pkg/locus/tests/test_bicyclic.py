import math

import numpy as np
from pytest import fixture, mark, param, raises

from locus.core.bicyclic import (
    BicyclicCode,
    BiZeroSet,
    availability_certificate,
    build_bicyclic,
    column_zero_set,
    dimension_lower_bound,
    hyperbolic_designed_distance,
    hyperbolic_zero_set,
    optimal_lrc_dimension,
    product_baseline,
    product_distance,
    recovering_sets,
    repair_from_set,
    row_zero_set,
    zero_set_counts,
)
from locus.core.field import field_create
from locus.core.oracle import Budget, min_distance
from locus.errors import ParameterError
from locus.types import Outcome


@fixture(scope="module")
def tiny() -> BicyclicCode:
    return build_bicyclic(4, 1, 1, 4, field_create(5))


@fixture(scope="module")
def code21() -> BicyclicCode:
    return build_bicyclic(21, 2, 6, 9, field_create(2, 6))


def test_zero_set_parts() -> None:
    assert len(row_zero_set(6, 2)) == 12
    assert (3, 5) in row_zero_set(6, 2)
    assert len(column_zero_set(6, 1)) == 18
    assert hyperbolic_zero_set(6, 4).pairs == {(0, 0), (0, 1), (0, 2), (1, 0), (2, 0)}
    z = BiZeroSet.of(3, [(4, -1)])
    assert z.pairs == {(1, 2)}
    assert len(z.complement()) == 8
    with raises(ParameterError):
        BiZeroSet(3, frozenset({(3, 0)}))
    with raises(ParameterError):
        z.union(BiZeroSet.of(4, []))


def test_counts_21(code21: BicyclicCode) -> None:
    counts = zero_set_counts(code21)
    assert counts == {
        "L21": 147,
        "L22": 63,
        "D2": 20,
        "L": 189,
        "Z": 193,
        "Z_inclusion_exclusion": 193,
        "dimension": 248,
    }
    assert code21.k == 248
    assert code21.length == 441


def test_bounds_21(code21: BicyclicCode) -> None:
    assert hyperbolic_designed_distance(code21.zeros) >= 9
    bound = dimension_lower_bound(21, 2, 6, 9)
    assert bound == 252 - 9 * (1 + math.log(8))
    assert code21.k >= bound
    baseline = product_baseline(21, (2, 6), product_distance(9))
    assert (baseline.k1, baseline.k2, baseline.k) == (13, 17, 221)
    assert baseline.distance == 3


def test_tiny_code(tiny: BicyclicCode) -> None:
    assert len(tiny.zeros) == 12
    assert tiny.k == 4
    assert hyperbolic_designed_distance(tiny.zeros) == 4
    report = min_distance(tiny.linear_code(), Budget())
    assert report.verified == 4
    assert product_baseline(4, (1, 1), product_distance(4)).k == 4


def test_tiny_codewords(tiny: BicyclicCode) -> None:
    g = tiny.generator_matrix
    assert g.shape == (4, 16)
    for row in g:
        assert tiny.is_codeword(row)
    word = tiny.encode([1, 2, 3, 4])
    assert tiny.is_codeword(word)
    assert tiny.linear_code().contains(word)
    assert not tiny.is_codeword(word[:15])
    with raises(ParameterError):
        tiny.encode([1])


def test_groups_sum_to_zero(code21: BicyclicCode) -> None:
    f = code21.field
    rng = np.random.default_rng(9)
    word = code21.encode(f.random(rng, code21.k))
    assert code21.is_codeword(word)
    for group in code21.vertical_groups() + code21.horizontal_groups():
        assert f.sum(word[group]) == 0


def test_recovering_sets(code21: BicyclicCode) -> None:
    vertical, horizontal = recovering_sets(code21, (4, 10))
    # vertical stride 21 / 3 = 7, horizontal stride 21 / 7 = 3
    assert vertical == [code21.position(11, 10), code21.position(18, 10)]
    assert horizontal == [code21.position(4, b) for b in (1, 4, 7, 13, 16, 19)]
    assert not set(vertical) & set(horizontal)
    with raises(ParameterError):
        recovering_sets(code21, (21, 0))


@mark.parametrize("which", [param("vertical", id="vertical"), param("horizontal", id="horizontal")])
def test_repair_from_set(code21: BicyclicCode, which: str) -> None:
    f = code21.field
    rng = np.random.default_rng(4)
    word = code21.encode(f.random(rng, code21.k))
    damaged = word.copy()
    damaged[code21.position(5, 17)] = 0
    repaired = repair_from_set(code21, damaged, (5, 17), which)
    assert np.array_equal(repaired, word)


def test_repair_from_set_rejects_kind(tiny: BicyclicCode) -> None:
    with raises(ParameterError, match="Unknown recovering set"):
        repair_from_set(tiny, np.zeros(16, dtype=np.int64), (0, 0), "diagonal")


def test_availability(code21: BicyclicCode) -> None:
    cert = availability_certificate(code21, Budget(max_enumerations=1000))
    assert cert.coordinates == 441
    assert cert.disjoint
    assert cert.parity_sums
    assert cert.vertical.outcome == Outcome.VERIFIED
    assert cert.horizontal.outcome == Outcome.VERIFIED
    assert cert.ok
    assert cert.to_dict()["ok"]


def test_optimal_lrc_dimension() -> None:
    # r = n - 1 leaves the Singleton bound
    for n, d in [(8, 3), (12, 5), (20, 2)]:
        assert optimal_lrc_dimension(n, n - 1, d) == n - d + 1
    assert product_distance(9) == 3
    assert product_distance(2) == 2
    assert product_distance(10) == 4


@mark.parametrize(
    "n,r1,r2,delta,q,match",
    [
        param(4, 0, 1, 4, 5, "1 <= r1 <= r2", id="r1_zero"),
        param(4, 3, 1, 4, 5, "1 <= r1 <= r2", id="r2_below_r1"),
        param(6, 3, 5, 4, 7, "r1\\+1=4 does not divide n=6", id="r1_divides"),
        param(4, 1, 2, 4, 5, "r2\\+1=3 does not divide n=4", id="r2_divides"),
        param(6, 1, 2, 4, 5, "n=6 does not divide q-1=4", id="length"),
        param(4, 1, 1, 1, 5, "at least 2", id="delta"),
    ],
)
def test_build_errors(n: int, r1: int, r2: int, delta: int, q: int, match: str) -> None:
    with raises(ParameterError, match=match):
        build_bicyclic(n, r1, r2, delta, field_create(q))


def test_larger_code_exceeds_small_budget() -> None:
    c = build_bicyclic(6, 1, 1, 4, field_create(7))
    assert len(c.zeros) == 27
    assert c.k == 9
    report = min_distance(c.linear_code(), Budget(max_enumerations=10**6))
    assert report.outcome == Outcome.BUDGET_EXCEEDED
