"""
Two-dimensional cyclic codes of length n^2 with availability two.

Codewords are stored row-major: coordinate (a, b) is position a*n + b. A pair (i, j)
stands for the zero (alpha^i, alpha^j) of the bivariate generator.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from locus.core import linalg
from locus.core.field import FieldElement, FieldSpec, root_of_unity
from locus.core.oracle import Budget, LinearCode, OracleReport, locality_verify
from locus.errors import ParameterError
from locus.types import Outcome

log = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class BiZeroSet:
    n: int
    pairs: FrozenSet[Pair]

    def __post_init__(self) -> None:
        bad = sorted(p for p in self.pairs if not (0 <= p[0] < self.n and 0 <= p[1] < self.n))
        if bad:
            raise ParameterError(f"Zero pairs must lie in [0, {self.n - 1}]^2, got {bad[:5]}", "zeros")

    @classmethod
    def of(cls, n: int, pairs: Iterable[Pair]) -> "BiZeroSet":
        return cls(n, frozenset((int(i) % n, int(j) % n) for i, j in pairs))

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    def union(self, other: "BiZeroSet") -> "BiZeroSet":
        if other.n != self.n:
            raise ParameterError(f"Cannot unite zero sets of side {self.n} and {other.n}", "n")
        return BiZeroSet(self.n, self.pairs | other.pairs)

    def complement(self) -> List[Pair]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if (i, j) not in self.pairs]


def row_zero_set(n: int, r1: int) -> BiZeroSet:
    return BiZeroSet.of(n, ((i, j) for i in range(0, n, r1 + 1) for j in range(n)))


def column_zero_set(n: int, r2: int) -> BiZeroSet:
    return BiZeroSet.of(n, ((i, j) for i in range(n) for j in range(0, n, r2 + 1)))


def hyperbolic_zero_set(n: int, delta: int) -> BiZeroSet:
    """{(i, j) : (i+1)(j+1) < delta}"""
    return BiZeroSet.of(n, ((i, j) for i in range(min(n, delta)) for j in range(min(n, delta)) if (i + 1) * (j + 1) < delta))


@dataclass(frozen=True, eq=False)
class BicyclicCode:
    field: FieldSpec
    n: int
    alpha: FieldElement
    r1: int
    r2: int
    delta: int
    zeros: BiZeroSet
    parts: Dict[str, BiZeroSet] = field(default_factory=dict, repr=False)

    @property
    def length(self) -> int:
        return self.n * self.n

    @property
    def k(self) -> int:
        return self.length - len(self.zeros)

    @property
    def vertical_stride(self) -> int:
        return self.n // (self.r1 + 1)

    @property
    def horizontal_stride(self) -> int:
        return self.n // (self.r2 + 1)

    def position(self, a: int, b: int) -> int:
        return a * self.n + b

    def _exponent_rows(self, pairs: Sequence[Pair], sign: int) -> np.ndarray:
        la = int(self.field.log_of(self.alpha.value))
        ij = np.array(pairs, dtype=np.int64).reshape(-1, 2)
        a = np.repeat(np.arange(self.n, dtype=np.int64), self.n)
        b = np.tile(np.arange(self.n, dtype=np.int64), self.n)
        e = sign * (ij[:, :1] * a[None, :] + ij[:, 1:] * b[None, :])
        return self.field.power_of_generator((la * e) % (self.field.q - 1))

    @cached_property
    def generator_matrix(self) -> np.ndarray:
        """Rows alpha^-(i a + j b) over the nonzero pairs (i, j)."""
        return self._exponent_rows(self.zeros.complement(), -1)

    @cached_property
    def parity_check_matrix(self) -> np.ndarray:
        """Rows alpha^(i a + j b) over the zero pairs (i, j)."""
        return self._exponent_rows(sorted(self.zeros.pairs), 1)

    def is_codeword(self, word: Sequence[int]) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            return False
        return not linalg.matmul(self.field, self.parity_check_matrix, word).any()

    def encode(self, msg: Sequence[int]) -> np.ndarray:
        if len(msg) != self.k:
            raise ParameterError(f"Message has {len(msg)} symbols, code dimension is {self.k}", "msg")
        return linalg.matmul(self.field, np.asarray(msg, dtype=np.int64), self.generator_matrix)

    def linear_code(self) -> LinearCode:
        return LinearCode(self.field, self.generator_matrix, name=f"bicyclic[{self.length},{self.k}]")

    def vertical_group(self, b: int, rho: int) -> List[int]:
        nu = self.vertical_stride
        return [self.position(rho + t * nu, b) for t in range(self.r1 + 1)]

    def horizontal_group(self, a: int, rho: int) -> List[int]:
        nu = self.horizontal_stride
        return [self.position(a, rho + t * nu) for t in range(self.r2 + 1)]

    def vertical_groups(self) -> List[List[int]]:
        return [self.vertical_group(b, rho) for b in range(self.n) for rho in range(self.vertical_stride)]

    def horizontal_groups(self) -> List[List[int]]:
        return [self.horizontal_group(a, rho) for a in range(self.n) for rho in range(self.horizontal_stride)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "length": self.length,
            "r": [self.r1, self.r2],
            "delta": self.delta,
            "alpha": int(self.alpha.value),
            "k": self.k,
            "zeros": [list(p) for p in self.zeros],
        }


def build_bicyclic(n: int, r1: int, r2: int, delta: int, f: FieldSpec) -> BicyclicCode:
    if r1 < 1 or r2 < r1:
        raise ParameterError(f"Localities must satisfy 1 <= r1 <= r2, got r1={r1}, r2={r2}", "r")
    if n % (r1 + 1) != 0:
        raise ParameterError(f"r1+1={r1 + 1} does not divide n={n}", "r")
    if n % (r2 + 1) != 0:
        raise ParameterError(f"r2+1={r2 + 1} does not divide n={n}", "r")
    if (f.q - 1) % n != 0:
        raise ParameterError(f"n={n} does not divide q-1={f.q - 1}", "n")
    if delta < 2:
        raise ParameterError(f"delta must be at least 2, got {delta}", "delta")
    l21 = row_zero_set(n, r1)
    l22 = column_zero_set(n, r2)
    d2 = hyperbolic_zero_set(n, delta)
    zeros = l21.union(l22).union(d2)
    alpha = root_of_unity(f, n)
    code = BicyclicCode(f, n, alpha, r1, r2, delta, zeros, parts={"L21": l21, "L22": l22, "D2": d2})
    log.info(f"Built bicyclic [{code.length},{code.k}] code over {f} with r=({r1},{r2}), |D2|={len(d2)}")
    return code


def zero_set_counts(c: BicyclicCode) -> Dict[str, int]:
    """Sizes of the zero-set parts; |Z| both by direct union and by inclusion-exclusion."""
    l21, l22, d2 = c.parts["L21"].pairs, c.parts["L22"].pairs, c.parts["D2"].pairs
    incl_excl = len(l21) + len(l22) + len(d2) - len(l21 & l22) - len(l21 & d2) - len(l22 & d2) + len(l21 & l22 & d2)
    return {
        "L21": len(l21),
        "L22": len(l22),
        "D2": len(d2),
        "L": len(l21 | l22),
        "Z": len(c.zeros),
        "Z_inclusion_exclusion": incl_excl,
        "dimension": c.k,
    }


def dimension_lower_bound(n: int, r1: int, r2: int, delta: int) -> float:
    return n * n * r1 * r2 / ((r1 + 1) * (r2 + 1)) - delta * (1 + math.log(delta - 1))


def hyperbolic_designed_distance(z: BiZeroSet) -> int:
    """The largest d with {(i, j) : (i+1)(j+1) < d} contained in z."""
    n = z.n
    d = 1
    while d <= n * n:
        pairs = [(a - 1, d // a - 1) for a in range(1, min(n, d) + 1) if d % a == 0 and d // a <= n]
        if not all(p in z for p in pairs):
            break
        d += 1
    return d


def recovering_sets(c: BicyclicCode, coord: Pair) -> Tuple[List[int], List[int]]:
    """Vertical set in column b and horizontal set in row a, both excluding (a, b)."""
    a, b = coord
    if not (0 <= a < c.n and 0 <= b < c.n):
        raise ParameterError(f"Coordinate {coord} lies outside the {c.n}x{c.n} array", "coord")
    target = c.position(a, b)
    vertical = [p for p in c.vertical_group(b, a % c.vertical_stride) if p != target]
    horizontal = [p for p in c.horizontal_group(a, b % c.horizontal_stride) if p != target]
    return vertical, horizontal


def repair_from_set(c: BicyclicCode, word: Sequence[int], coord: Pair, which: str = "vertical") -> np.ndarray:
    """Every group sums to zero, so the erased symbol is minus the sum of its recovering set."""
    vertical, horizontal = recovering_sets(c, coord)
    if which not in ("vertical", "horizontal"):
        raise ParameterError(f"Unknown recovering set '{which}', expected vertical or horizontal", "which")
    others = vertical if which == "vertical" else horizontal
    word = np.array(word, dtype=np.int64, copy=True)
    word[c.position(*coord)] = c.field.neg(c.field.sum(word[others]))
    return word


@dataclass
class AvailabilityCertificate:
    r1: int
    r2: int
    coordinates: int
    disjoint: bool
    parity_sums: bool
    vertical: OracleReport
    horizontal: OracleReport
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.disjoint and self.parity_sums and self.vertical.outcome == Outcome.VERIFIED and self.horizontal.outcome == Outcome.VERIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": [self.r1, self.r2],
            "coordinates": self.coordinates,
            "disjoint": self.disjoint,
            "parity_sums": self.parity_sums,
            "vertical": self.vertical.to_dict(),
            "horizontal": self.horizontal.to_dict(),
            "failures": self.failures,
            "ok": self.ok,
        }


def availability_certificate(c: BicyclicCode, budget: Optional[Budget] = None) -> AvailabilityCertificate:
    """
    Punctured checks run once per group; the per-coordinate pass only checks sizes and
    that the two repair groups meet in the target alone.
    """
    budget = budget or Budget()
    f = c.field
    code = c.linear_code()
    vgroups, hgroups = c.vertical_groups(), c.horizontal_groups()
    vertical = locality_verify(code, c.r1, 2, vgroups, budget, instance_id="vertical")
    horizontal = locality_verify(code, c.r2, 2, hgroups, budget, instance_id="horizontal")
    g = c.generator_matrix
    parity_sums = all(not f.sum(g[:, grp], axis=1).any() for grp in vgroups + hgroups)

    failures: List[str] = []
    for a in range(c.n):
        for b in range(c.n):
            vset, hset = recovering_sets(c, (a, b))
            target = c.position(a, b)
            if len(vset) != c.r1 or len(hset) != c.r2:
                failures.append(f"({a},{b}): set sizes {len(vset)}, {len(hset)}")
            elif (set(vset) | {target}) & (set(hset) | {target}) != {target}:
                failures.append(f"({a},{b}): repair groups meet outside the target")
    cert = AvailabilityCertificate(c.r1, c.r2, c.n * c.n, not failures, parity_sums, vertical, horizontal, failures)
    log.info(f"Availability over {c.n * c.n} coordinates: {'verified' if cert.ok else 'failed'}")
    return cert


class ProductBaseline(NamedTuple):
    k1: int
    k2: int
    distance: int

    @property
    def k(self) -> int:
        return self.k1 * self.k2


def optimal_lrc_dimension(n: int, r: int, d: int) -> int:
    """Largest k with k + ceil(k/r) <= n - d + 2."""
    k = 0
    while k + 1 + _ceil(k + 1, r) <= n - d + 2:
        k += 1
    return k


def product_baseline(n: int, r: Tuple[int, int], delta_sqrt: int) -> ProductBaseline:
    """Product of two optimal length-n LRC codes with distance delta_sqrt each."""
    r1, r2 = r
    return ProductBaseline(optimal_lrc_dimension(n, r1, delta_sqrt), optimal_lrc_dimension(n, r2, delta_sqrt), delta_sqrt)


def product_distance(delta: int) -> int:
    return math.isqrt(delta - 1) + 1
