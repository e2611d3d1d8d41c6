"""
Cyclic codes of length n | q-1 described by their defining set of zeros.

Since every n-th root of unity lies in the base field, a zero set is any subset of
exponents mod n and the generator is simply the product of (x - alpha^t).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from locus.core import linalg
from locus.core.field import FieldElement, FieldSpec
from locus.core.oracle import LinearCode
from locus.core.poly import Poly
from locus.errors import ConstructionError, FieldMismatchError, ParameterError

log = logging.getLogger(__name__)

Message = Sequence[Union[int, FieldElement]]


@dataclass(frozen=True)
class ZeroSet:
    n: int
    exponents: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"Zero set length must be positive, got n={self.n}", "n")
        exps = tuple(sorted({int(e) for e in self.exponents}))
        if exps and (exps[0] < 0 or exps[-1] >= self.n):
            raise ParameterError(f"Zero set exponents must lie in [0, {self.n - 1}], got {list(exps)}", "zeros")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, n: int, exponents: Iterable[int]) -> "ZeroSet":
        """Build from arbitrary integers, reduced mod n."""
        return cls(n, tuple(int(e) % n for e in exponents))

    @classmethod
    def interval(cls, n: int, lo: int, hi: int) -> "ZeroSet":
        """{lo, ..., hi - 1} mod n"""
        return cls.of(n, range(lo, hi))

    def __contains__(self, e: object) -> bool:
        return e in self.as_set

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.exponents)

    def union(self, other: "ZeroSet") -> "ZeroSet":
        if other.n != self.n:
            raise ParameterError(f"Cannot unite zero sets of lengths {self.n} and {other.n}", "n")
        return ZeroSet(self.n, self.exponents + other.exponents)

    def shifted(self, s: int) -> "ZeroSet":
        return ZeroSet.of(self.n, (e + s for e in self.exponents))

    def lift(self, n: int) -> "ZeroSet":
        """The union of all shifts of this set by multiples of its length, over Z_n."""
        if n % self.n != 0:
            raise ParameterError(f"Cannot lift a zero set of length {self.n} to length {n}", "n")
        return ZeroSet(n, tuple(e + s * self.n for s in range(n // self.n) for e in self.exponents))

    def complement(self) -> Tuple[int, ...]:
        return tuple(t for t in range(self.n) if t not in self.as_set)


@dataclass(frozen=True)
class CyclicCode:
    field: FieldSpec
    n: int
    alpha: FieldElement
    zeros: ZeroSet
    g: Poly = field(repr=False)

    @property
    def k(self) -> int:
        return self.n - len(self.zeros)

    @property
    def dimension(self) -> int:
        return self.n - self.g.degree

    def alpha_powers(self, exponents: Iterable[int]) -> np.ndarray:
        la = int(self.field.log_of(self.alpha.value))
        return self.field.power_of_generator(la * np.asarray(list(exponents), dtype=np.int64))

    @cached_property
    def generator_matrix(self) -> np.ndarray:
        """Rows x^i g(x) for i < k."""
        rows = np.zeros((self.k, self.n), dtype=np.int64)
        gc = self.g.coeffs
        for i in range(self.k):
            rows[i, i : i + len(gc)] = gc
        return rows

    def nonzero_rows(self) -> np.ndarray:
        """Rows ((alpha^t)^(n-1), ..., alpha^t, 1) for every nonzero t, another basis of the code."""
        ts = np.array(self.zeros.complement(), dtype=np.int64)
        s = np.arange(self.n, dtype=np.int64)
        return self.alpha_powers((ts[:, None] * (self.n - 1 - s[None, :])).ravel()).reshape(len(ts), self.n)

    @cached_property
    def parity_check_matrix(self) -> np.ndarray:
        """Rows (alpha^(z s))_s for every zero z."""
        zs = np.array(self.zeros.exponents, dtype=np.int64)
        s = np.arange(self.n, dtype=np.int64)
        return self.alpha_powers((zs[:, None] * s[None, :]).ravel()).reshape(len(zs), self.n)

    def is_codeword(self, word: Sequence[int]) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.n,):
            return False
        if len(self.zeros) == 0:
            return True
        return not linalg.matmul(self.field, self.parity_check_matrix, word).any()

    def linear_code(self) -> LinearCode:
        return LinearCode(self.field, self.generator_matrix, name=f"cyclic[{self.n},{self.k}]")


def generator_from_zeros(f: FieldSpec, n: int, alpha: FieldElement, zeros: ZeroSet) -> CyclicCode:
    if (f.q - 1) % n != 0:
        raise ParameterError(f"n={n} does not divide q-1={f.q - 1}", "n")
    if alpha.field != f:
        raise FieldMismatchError(alpha.field, f)
    if alpha.is_zero() or alpha.order() != n:
        order = 0 if alpha.is_zero() else alpha.order()
        raise ParameterError(f"alpha={alpha.value} has order {order}, expected {n}", "alpha")
    if zeros.n != n:
        raise ParameterError(f"Zero set is defined mod {zeros.n}, code length is {n}", "zeros")
    la = int(f.log_of(alpha.value))
    roots = f.power_of_generator(la * np.array(zeros.exponents, dtype=np.int64))
    g = Poly.from_roots(f, roots.tolist())
    code = CyclicCode(f, n, alpha, zeros, g)
    log.debug(f"Built cyclic code [{n},{code.k}] over {f} with {len(zeros)} zeros")
    return code


def check_and_reversed_dual(c: CyclicCode) -> Tuple[Poly, Poly]:
    """
    :return: the check polynomial h = (x^n - 1)/g and the generator of the reversed dual code,
        which is h itself.
    """
    h, rem = divmod(Poly.x_pow_minus(c.field, c.n), c.g)
    if not rem.is_zero():
        raise ConstructionError(f"Generator of degree {c.g.degree} does not divide x^{c.n} - 1")
    return h, h


def dual_generator(c: CyclicCode) -> Poly:
    """x^deg(h) h(1/x), normalized to be monic."""
    h, _ = check_and_reversed_dual(c)
    return h.reciprocal().monic()


def lemma_zeros_vector(c: CyclicCode, nu: int, m: int, u: int) -> Tuple[Poly, bool]:
    """
    b(x) = sum_{i<m} x^(i nu) alpha^((m-1-i) nu u), i.e. (x^n - 1)/(x^nu - alpha^(nu u)).
    b lies in the reversed dual code exactly when {u + i m : i < nu} is contained in the zeros.
    """
    if nu * m != c.n:
        raise ParameterError(f"n={c.n} is not nu*m={nu}*{m}", "nu")
    if not 0 <= u < m:
        raise ParameterError(f"u={u} must lie in [0, {m - 1}]", "u")
    f = c.field
    coeffs = np.zeros(c.n, dtype=np.int64)
    exps = [(m - 1 - i) * nu * u for i in range(m)]
    coeffs[np.arange(m) * nu] = c.alpha_powers(exps)
    b = Poly(f, coeffs)
    annihilator = Poly.x_pow_minus(f, nu, int(c.alpha_powers([nu * u])[0]))
    if annihilator * b != Poly.x_pow_minus(f, c.n):
        raise ConstructionError(f"(x^{nu} - alpha^{nu * u}) b(x) != x^{c.n} - 1")
    h, _ = check_and_reversed_dual(c)
    return b, h.divides(b)


def bch_designed_distance(zeros: ZeroSet) -> int:
    """1 + the longest cyclically consecutive run of exponents."""
    s = zeros.as_set
    n = zeros.n
    if not s:
        return 1
    if len(s) == n:
        return n + 1
    best = 0
    for e in s:
        if (e - 1) % n in s:
            continue
        run = 1
        while (e + run) % n in s:
            run += 1
        best = max(best, run)
    return best + 1


def encode(c: CyclicCode, msg: Message) -> np.ndarray:
    if len(msg) != c.k:
        raise ParameterError(f"Message has {len(msg)} symbols, code dimension is {c.k}", "msg")
    for x in msg:
        if isinstance(x, FieldElement) and x.field != c.field:
            raise FieldMismatchError(x.field, c.field)
    coeffs = [int(x) for x in msg]
    bad = [x for x in coeffs if not 0 <= x < c.field.q]
    if bad:
        raise ParameterError(f"Message symbols {bad} are not elements of {c.field}", "msg")
    word = (Poly(c.field, coeffs) * c.g).padded(c.n)
    return word


@dataclass(frozen=True)
class LocalityCertificate:
    m: int
    nu: int
    zloc: ZeroSet
    delta: int
    groups: Tuple[Tuple[int, ...], ...]
    punctured_rank: int
    punctured_designed_distance: int
    exact_dimension: bool
    parity_exponents: Tuple[int, ...] = ()

    @property
    def r(self) -> int:
        return self.m - len(self.zloc)

    @property
    def ok(self) -> bool:
        return self.punctured_rank <= self.r and self.punctured_designed_distance >= self.delta

    def group_of(self, position: int) -> int:
        return position % self.nu

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "nu": self.nu,
            "r": self.r,
            "delta": self.delta,
            "local_zeros": list(self.zloc.exponents),
            "punctured_rank": self.punctured_rank,
            "punctured_designed_distance": self.punctured_designed_distance,
            "exact_dimension": self.exact_dimension,
            "groups": len(self.groups),
        }


def local_structure(c: CyclicCode, m: int, zloc: ZeroSet, delta: int) -> LocalityCertificate:
    """
    Certify (m - |zloc|, delta) locality: the code punctured to {x, x + nu, ..., x + (m-1) nu}
    has dimension at most m - |zloc| and designed distance at least delta.
    """
    if c.n % m != 0:
        raise ParameterError(f"n={c.n} is not a multiple of the local length m={m}", "m")
    if zloc.n != m:
        raise ParameterError(f"Local zero set is defined mod {zloc.n}, expected mod {m}", "zloc")
    nu = c.n // m
    missing = [i for i in range(1, delta) if i not in zloc]
    if missing:
        raise ParameterError(f"{{1..{delta - 1}}} is not contained in the local zero set: missing {missing}", "zloc")
    lifted = zloc.lift(c.n)
    not_zeros = sorted(lifted.as_set - c.zeros.as_set)
    if not_zeros:
        raise ParameterError(f"Shifted local zeros are not zeros of the code: missing {not_zeros}", "zloc")

    groups = tuple(tuple(x + t * nu for t in range(m)) for x in range(nu))
    punctured_rank = linalg.rank(c.field, c.generator_matrix[:, list(groups[0])]) if c.k > 0 else 0

    values = c.g.evaluate(c.alpha_powers(range(c.n)))
    exact = all(any(values[(u + s * m) % c.n] != 0 for s in range(nu)) for u in range(m) if u not in zloc)
    cert = LocalityCertificate(
        m=m,
        nu=nu,
        zloc=zloc,
        delta=delta,
        groups=groups,
        punctured_rank=punctured_rank,
        punctured_designed_distance=bch_designed_distance(zloc),
        exact_dimension=exact,
        parity_exponents=zloc.exponents,
    )
    if exact and punctured_rank != cert.r:
        raise ConstructionError(f"Exact-dimension test passed but the punctured rank is {punctured_rank}, expected {cert.r}")
    log.debug(f"Locality (r={cert.r}, delta={delta}) with {nu} groups of size {m}, punctured rank {punctured_rank}")
    return cert


def local_parity_rows(c: CyclicCode, cert: LocalityCertificate, group: Sequence[int]) -> np.ndarray:
    """sum_{x in group} c_x alpha^(i x) = 0 for every local zero i."""
    i = np.array(cert.parity_exponents, dtype=np.int64)
    x = np.array(group, dtype=np.int64)
    return c.alpha_powers((i[:, None] * x[None, :]).ravel()).reshape(len(i), len(x))


class LocalRepair(NamedTuple):
    word: np.ndarray
    recovered: List[int]
    unresolved: List[int]


def repair_in_group(c: CyclicCode, cert: LocalityCertificate, word: Sequence[int], erased: Iterable[int]) -> LocalRepair:
    """
    Recover erasures group by group from the local parity rows, lowest group first.
    Groups holding more erasures than the local code can fill are left untouched.
    """
    word = np.array(word, dtype=np.int64, copy=True)
    erased_set = sorted(set(erased))
    recovered: List[int] = []
    unresolved: List[int] = []
    by_group: dict = {}
    for e in erased_set:
        by_group.setdefault(cert.group_of(e), []).append(e)
    for gidx in sorted(by_group):
        group = cert.groups[gidx]
        local = [group.index(e) for e in by_group[gidx]]
        h = local_parity_rows(c, cert, group)
        sol = linalg.solve_erasures(c.field, h, word[list(group)], local)
        for pos, val, ok in zip(by_group[gidx], sol.values, sol.determined):
            if ok:
                word[pos] = val
                recovered.append(pos)
            else:
                unresolved.append(pos)
    return LocalRepair(word, recovered, unresolved)
