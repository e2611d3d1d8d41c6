"""
Tailbiting convolutional codes with row locality, obtained from a quasicyclic block code.

Coordinates of the block code B of length n(j+1) are interleaved in time: block
position s = n*tau + l is stream (row) l at time tau. A k-input generator is stored
as ``coeffs[i, l, tau]``, the coefficient of D^tau in g_{i,l}(D); its tailbiting
encoder multiplies modulo D^(j+1) - 1, which makes every (i, l) block a circulant.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from locus._internal.sweep import messages, split_to_chunks
from locus.core import linalg
from locus.core.cyclic import CyclicCode, LocalityCertificate, ZeroSet, bch_designed_distance, generator_from_zeros, local_structure
from locus.core.field import FieldSpec, root_of_unity
from locus.core.oracle import Budget, LinearCode, OracleReport, RepairOutcome, RepairStep, erase_decode, locality_verify
from locus.core.poly import Poly
from locus.errors import ConstructionError, ParameterError, SingularInformationSetError, SingularMatrixError
from locus.types import Outcome

log = logging.getLogger(__name__)


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class QuasiCyclicLrc:
    block: CyclicCode
    n: int
    k: int
    j: int
    r: int
    delta: int
    delta3: int
    locality: LocalityCertificate
    # False when j+1 > n
    in_range: bool = True

    @property
    def length(self) -> int:
        return self.n * (self.j + 1)

    @property
    def local_length(self) -> int:
        return self.r + self.delta - 1

    @property
    def local_stride(self) -> int:
        return (self.j + 1) // self.local_length

    def position(self, l: int, tau: int) -> int:
        return self.n * tau + l

    def row_groups(self) -> Tuple[Tuple[int, ...], ...]:
        """Repair groups of every row, as times."""
        nu = self.local_stride
        return tuple(tuple(rho + t * nu for t in range(self.local_length)) for rho in range(nu))

    def linear_code(self) -> LinearCode:
        return self.block.linear_code()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "j": self.j,
            "r": self.r,
            "delta": self.delta,
            "delta3": self.delta3,
            "block_length": self.length,
            "block_dimension": self.block.k,
            "in_range": self.in_range,
        }


def block_distance_bound(length: int, dim: int, r: int, delta: int) -> int:
    """Singleton-type bound for (r, delta) locality: n - k + delta - ceil(k/r)(delta - 1)."""
    return length - dim + delta - _ceil(dim, r) * (delta - 1)


def build_block_code(n: int, k: int, j: int, r: int, delta: int, f: FieldSpec) -> QuasiCyclicLrc:
    for name, value, low in (("n", n, 1), ("k", k, 1), ("j", j, 0), ("r", r, 1), ("delta", delta, 1)):
        if value < low:
            raise ParameterError(f"{name}={value} must be at least {low}", name)
    if k > j + 1:
        raise ParameterError(f"k={k} exceeds j+1={j + 1}", "k")
    if n % k != 0:
        raise ParameterError(f"k={k} does not divide n={n}", "k")
    m_loc = r + delta - 1
    if (j + 1) % m_loc != 0:
        raise ParameterError(f"r+delta-1={m_loc} does not divide j+1={j + 1}", "j")
    length = n * (j + 1)
    if (f.q - 1) % length != 0:
        raise ParameterError(f"n(j+1)={length} does not divide q-1={f.q - 1}", "n")
    in_range = j + 1 <= n
    if not in_range:
        log.warning(f"j+1={j + 1} exceeds n={n}; the block dimension is checked on the zero set")

    z1 = ZeroSet.interval(m_loc, 1, delta)
    z2 = z1.lift(j + 1)
    l3 = z2.lift(length)
    dim = k * (j + 1)
    delta3 = (n - k) * (j + 1) + delta - _ceil(dim, r) * (delta - 1)
    if delta3 < 1:
        raise ParameterError(f"Designed distance {delta3} is not positive for n={n}, k={k}, j={j}, r={r}, delta={delta}", "delta")
    if length - (delta3 - 1) != dim + (_ceil(dim, r) - 1) * (delta - 1):
        raise ConstructionError(f"Complement of the distance run has {length - delta3 + 1} elements, expected {dim + (_ceil(dim, r) - 1) * (delta - 1)}")
    zeros = l3.union(ZeroSet.interval(length, 1, delta3))
    alpha = root_of_unity(f, length)
    block = generator_from_zeros(f, length, alpha, zeros)
    if block.k != dim:
        raise ConstructionError(f"Block code has dimension {block.k}, expected k(j+1)={dim} for n={n}, k={k}, j={j}, r={r}, delta={delta}")
    locality = local_structure(block, m_loc, z1, delta)
    log.info(f"Built quasicyclic [{length},{dim}] block code over {f}, designed distance {bch_designed_distance(zeros)} (target {delta3})")
    return QuasiCyclicLrc(block, n, k, j, r, delta, delta3, locality, in_range)


@dataclass(eq=False)
class ConvGenerator:
    field: FieldSpec
    n: int
    j: int
    # coeffs[i, l, tau]: coefficient of D^tau in g_{i,l}(D)
    coeffs: np.ndarray
    r: int
    delta: int
    method: str = "information-set"
    # parameters of a singular information-set reduction, empty otherwise
    defect: Dict[str, Any] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return int(self.coeffs.shape[0])

    @property
    def span(self) -> int:
        return self.j + 1

    @property
    def memory(self) -> int:
        nz = np.nonzero(self.coeffs.any(axis=(0, 1)))[0]
        return int(nz[-1]) if len(nz) else 0

    @property
    def polys(self) -> List[List[Poly]]:
        return [[Poly(self.field, self.coeffs[i, l]) for l in range(self.n)] for i in range(self.k)]

    @property
    def g0(self) -> np.ndarray:
        return self.coeffs[:, :, 0]

    @cached_property
    def g0_rank(self) -> int:
        return linalg.rank(self.field, self.g0)

    def circulant(self, i: int, l: int) -> np.ndarray:
        L = self.span
        shift = (np.arange(L)[None, :] - np.arange(L)[:, None]) % L
        return self.coeffs[i, l][shift]

    @cached_property
    def block_generator(self) -> np.ndarray:
        """Rows are inputs (i, sigma), columns block positions n*tau + l."""
        L = self.span
        shift = (np.arange(L)[None, :] - np.arange(L)[:, None]) % L
        g = self.coeffs[:, :, shift]
        return g.transpose(0, 2, 3, 1).reshape(self.k * L, L * self.n)

    def identity_pattern(self) -> bool:
        """G_{i, i n/k} = I and G_{i, p n/k} = 0 for the other p < k."""
        step = self.n // self.k if self.k and self.n % self.k == 0 else 0
        if step == 0:
            return False
        eye = np.eye(self.span, dtype=np.int64)
        for i in range(self.k):
            for p in range(self.k):
                expected = eye if p == i else np.zeros_like(eye)
                if not np.array_equal(self.circulant(i, p * step), expected):
                    return False
        return True

    def linear_code(self) -> LinearCode:
        return LinearCode(self.field, self.block_generator, name=f"tailbiting({self.n},{self.k})")

    def row_positions(self, l: int, times: Iterable[int]) -> List[int]:
        return [self.n * t + l for t in times]

    def row_groups(self) -> Tuple[Tuple[int, ...], ...]:
        m_loc = self.r + self.delta - 1
        nu = self.span // m_loc
        return tuple(tuple(rho + t * nu for t in range(m_loc)) for rho in range(nu))

    def truncated_generator(self, j_trunc: int) -> np.ndarray:
        """
        Semi-infinite column generator: rows (i, sigma), columns (tau, l) for sigma, tau <= j_trunc,
        entry g_{i,l} coefficient of D^(tau - sigma).
        """
        T = j_trunc + 1
        out = np.zeros((self.k * T, self.n * T), dtype=np.int64)
        for i in range(self.k):
            for sigma in range(T):
                for tau in range(sigma, min(T, sigma + self.span)):
                    out[i * T + sigma, tau * self.n : (tau + 1) * self.n] = self.coeffs[i, :, tau - sigma]
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "k": self.k,
            "n": self.n,
            "j": self.j,
            "memory": self.memory,
            "polys": self.coeffs.tolist(),
            "identity_pattern": self.identity_pattern(),
            "g0_rank": self.g0_rank,
            "defect": self.defect,
        }


def _spectral_rows(b: QuasiCyclicLrc, rows: np.ndarray, nonzeros: Sequence[int]) -> np.ndarray:
    """
    Nonzeros t with equal t mod (j+1) share the eigenvalue alpha^(t n) of the time shift;
    block row i sums the i-th Vandermonde row of every class.
    """
    L = b.j + 1
    classes: Dict[int, List[int]] = {}
    for idx, t in enumerate(nonzeros):
        classes.setdefault(t % L, []).append(idx)
    k_eff = max(len(c) for c in classes.values())
    f = b.block.field
    gens = np.zeros((k_eff, b.length), dtype=np.int64)
    for i in range(k_eff):
        for e in sorted(classes):
            if i < len(classes[e]):
                gens[i] = f.add(gens[i], rows[classes[e][i]])
    return gens


def to_convolutional(b: QuasiCyclicLrc, strict: bool = False) -> ConvGenerator:
    """
    Reduce the columns {0, n/k, 2n/k, ...} of the Vandermonde-row generator to the identity
    and read g_{i,l}(D) from the first k rows. When that submatrix is singular the failing
    parameters are logged and recorded; strict mode raises instead of falling back to the
    spectral generator.
    """
    f = b.block.field
    n, k, j = b.n, b.k, b.j
    L = j + 1
    nonzeros = b.block.zeros.complement()
    rows = b.block.nonzero_rows()
    step = n // k
    info = [p * step for p in range(k * L)]
    defect: Dict[str, Any] = {}
    try:
        systematic = linalg.matmul(f, linalg.inverse(f, rows[:, info]), rows)
        for p in range(k * L):
            i, sigma = p % k, p // k
            if not np.array_equal(systematic[p], np.roll(systematic[i], n * sigma)):
                raise ConstructionError(f"Systematic row {p} is not the shift of row {i} by {sigma} time steps")
        gens = systematic[:k]
        method = "information-set"
    except SingularMatrixError:
        params = {"n": n, "k": k, "j": j, "r": b.r, "delta": b.delta, "q": f.q}
        rank = linalg.rank(f, rows[:, info])
        msg = f"Information-set submatrix is singular (rank {rank} of {k * L}) for " + ", ".join(f"{key}={v}" for key, v in params.items())
        if strict:
            raise SingularInformationSetError(msg, params) from None
        log.warning(f"{msg}; using the spectral generator")
        defect = dict(params, rank=rank)
        gens = _spectral_rows(b, rows, nonzeros)
        method = "spectral"

    coeffs = gens.reshape(gens.shape[0], L, n).transpose(0, 2, 1).copy()
    g = ConvGenerator(f, n, j, coeffs, b.r, b.delta, method=method, defect=defect)
    bad = [p for p, row in enumerate(g.block_generator) if not b.block.is_codeword(row)]
    if bad:
        raise ConstructionError(f"Circulant rows {bad} are not codewords of the block code")
    if g.memory > j:
        raise ConstructionError(f"Memory {g.memory} exceeds j={j}")
    log.info(f"Built ({n},{g.k}) tailbiting generator by {method} reduction, memory {g.memory}, rank(G0)={g.g0_rank}")
    return g


@dataclass(eq=False)
class TailbitingWord:
    field: FieldSpec
    # grid[l, tau]
    grid: np.ndarray

    @property
    def n(self) -> int:
        return int(self.grid.shape[0])

    @property
    def span(self) -> int:
        return int(self.grid.shape[1])

    def row(self, l: int) -> np.ndarray:
        return self.grid[l]

    def column(self, tau: int) -> np.ndarray:
        return self.grid[:, tau]

    def to_block(self) -> np.ndarray:
        return self.grid.T.reshape(-1).copy()

    @classmethod
    def from_block(cls, field: FieldSpec, n: int, vec: Sequence[int]) -> "TailbitingWord":
        vec = np.asarray(vec, dtype=np.int64)
        return cls(field, vec.reshape(-1, n).T.copy())

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TailbitingWord):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.grid, other.grid)


@dataclass(frozen=True)
class ErasurePattern:
    positions: FrozenSet[Tuple[int, int]]

    @classmethod
    def of(cls, positions: Iterable[Tuple[int, int]]) -> "ErasurePattern":
        return cls(frozenset((int(a), int(b)) for a, b in positions))

    @classmethod
    def from_block_positions(cls, n: int, positions: Iterable[int]) -> "ErasurePattern":
        return cls.of((s % n, s // n) for s in positions)

    def __len__(self) -> int:
        return len(self.positions)

    def validate(self, n: int, span: int) -> None:
        bad = sorted(p for p in self.positions if not (0 <= p[0] < n and 0 <= p[1] < span))
        if bad:
            raise ParameterError(f"Erasure positions {bad} lie outside the {n}x{span} grid", "pattern")

    def to_block_positions(self, n: int) -> List[int]:
        return sorted(n * t + l for l, t in self.positions)


def wraparound_pattern() -> ErasurePattern:
    """16 erasures on a 4x8 grid: rows 0 and 2 at times 0, 2, 4, 6; rows 1 and 3 at times 0, 2, 5, 6."""
    return ErasurePattern.of([(l, t) for l in (0, 2) for t in (0, 2, 4, 6)] + [(l, t) for l in (1, 3) for t in (0, 2, 5, 6)])


def tailbiting_encode(g: ConvGenerator, u: np.ndarray) -> TailbitingWord:
    u = np.asarray(u, dtype=np.int64)
    if u.shape != (g.k, g.span):
        raise ParameterError(f"Input grid has shape {u.shape}, expected {(g.k, g.span)}", "u")
    vec = linalg.matmul(g.field, u.reshape(-1), g.block_generator)
    return TailbitingWord.from_block(g.field, g.n, vec)


def tailbiting_codeword_check(g: ConvGenerator, b: QuasiCyclicLrc, budget: Budget) -> OracleReport:
    """
    The tailbiting image equals the block code: equal rank plus row membership always,
    and an exhaustive multiset comparison when the input space fits the budget.
    """
    f = g.field
    report = OracleReport(quantity="tailbiting image", claimed_lo=f.q ** b.block.k, claimed_hi=f.q ** b.block.k)
    rank = linalg.rank(f, g.block_generator)
    if rank != b.block.k:
        report.outcome = Outcome.REFUTED
        report.diagnostics.append(f"tailbiting generator has rank {rank}, block dimension is {b.block.k}")
        return report
    K = g.k * g.span
    total = f.q**K
    if total > budget.max_enumerations:
        report.outcome = Outcome.BUDGET_EXCEEDED
        report.diagnostics.append(f"row spaces agree by rank; {f.q}^{K} inputs exceed the budget")
        return report
    counts: Counter = Counter()
    h = b.block.parity_check_matrix
    for chunk in split_to_chunks(total, budget.chunk_size):
        words = linalg.matmul(f, messages(f.q, K, chunk.start, chunk.stop), g.block_generator)
        if len(h) and linalg.matmul(f, h, words.T).any():
            report.outcome = Outcome.REFUTED
            report.diagnostics.append("an encoded word is not a block codeword")
            return report
        counts.update(row.tobytes() for row in words)
    report.enumerations = total
    report.verified = len(counts)
    multiplicities = set(counts.values())
    if len(counts) != f.q ** b.block.k or len(multiplicities) != 1:
        report.outcome = Outcome.REFUTED
        report.diagnostics.append(f"{len(counts)} distinct words with multiplicities {sorted(multiplicities)}")
    else:
        report.diagnostics.append(f"each block codeword is produced {multiplicities.pop()} times")
    return report


def column_distance_bound(n: int, k: int, r: int, delta: int, j: int) -> int:
    return (n - k) * (j + 1) + delta - _ceil(k, r) * (delta - 1)


def propagation_holds(distances: Sequence[int], n: int, k: int, r: int, delta: int) -> bool:
    """If the last column distance meets its bound, all earlier ones must meet theirs."""
    j = len(distances) - 1
    if j < 0 or distances[j] != column_distance_bound(n, k, r, delta, j):
        return True
    return all(distances[i] == column_distance_bound(n, k, r, delta, i) for i in range(j))


@dataclass
class ColumnDistanceReport:
    j: int
    tailbiting: bool
    value: Optional[int]
    lower: int
    upper: int
    enumerations: int
    outcome: Outcome

    @property
    def within_bounds(self) -> bool:
        return self.value is None or self.lower <= self.value <= self.upper

    def to_oracle_report(self, instance_id: str = "") -> OracleReport:
        mode = "tailbiting" if self.tailbiting else "truncated"
        return OracleReport(
            quantity=f"column_distance[{self.j},{mode}]",
            claimed_lo=self.lower,
            claimed_hi=self.upper,
            verified=self.value,
            enumerations=self.enumerations,
            outcome=self.outcome,
            instance_id=instance_id,
        )


def window_generator(g: ConvGenerator, j_trunc: int, tailbiting: bool = True) -> np.ndarray:
    if tailbiting:
        if j_trunc > g.j:
            raise ParameterError(f"Tailbiting windows end at j={g.j}, got j_trunc={j_trunc}", "j_trunc")
        return g.block_generator[:, : g.n * (j_trunc + 1)]
    return g.truncated_generator(j_trunc)


def column_distance(
    g: ConvGenerator,
    j_trunc: int,
    budget: Budget,
    tailbiting: bool = True,
    lower: int = 1,
    k_bound: Optional[int] = None,
) -> ColumnDistanceReport:
    """
    Minimum weight of a window codeword whose leading block is nonzero, enumerating inputs
    of the window generator. Output blocks are weighed one time step at a time and an input
    is dropped once its running weight reaches the best weight found so far. In truncated
    mode with rank(G_0) = k only inputs with u_0 != 0 are enumerated.
    Returns bounds only when the enumeration exceeds the budget.
    """
    f = g.field
    n = g.n
    T = j_trunc + 1
    upper = column_distance_bound(n, g.k if k_bound is None else k_bound, g.r, g.delta, j_trunc)
    gen = window_generator(g, j_trunc, tailbiting)
    K = gen.shape[0]
    if tailbiting or g.g0_rank != g.k:
        first = 1
    else:
        # rows (i, 0) first: the inputs with u_0 != 0 are the tail of the lexicographic order
        lead_rows = [i * T for i in range(g.k)]
        gen = gen[lead_rows + [p for p in range(K) if p not in lead_rows]]
        first = f.q ** (K - g.k)
    total = f.q**K - first
    if f.q**K > budget.max_enumerations:
        log.info(f"column distance {j_trunc}: {f.q}^{K} inputs exceed the budget, reporting bounds only")
        return ColumnDistanceReport(j_trunc, tailbiting, None, lower, upper, 0, Outcome.BUDGET_EXCEEDED)

    none_found = n * T + 1
    # best weight over the chunks finished so far; a stale read only prunes less
    best = [none_found]

    def _chunk(idx: int, rng: range) -> int:
        u = messages(f.q, K, first + rng.start, first + rng.stop)
        alive = np.arange(len(u))
        weight = np.zeros(len(u), dtype=np.int64)
        for tau in range(T):
            if not len(alive):
                break
            w = np.count_nonzero(linalg.matmul(f, u[alive], gen[:, tau * n : (tau + 1) * n]), axis=1)
            if tau == 0:
                alive, w = alive[w > 0], w[w > 0]
            weight[alive] += w
            alive = alive[weight[alive] < best[0]]
        ret = int(weight[alive].min()) if len(alive) else none_found
        best[0] = min(best[0], ret)
        return ret

    results = budget.launcher().launch(_chunk, list(split_to_chunks(total, budget.chunk_size)))
    value = min(results)
    if value == none_found:
        # every window word has a zero leading block
        return ColumnDistanceReport(j_trunc, tailbiting, None, lower, upper, total, Outcome.VERIFIED)
    outcome = Outcome.REFUTED if value < lower else Outcome.VERIFIED
    report = ColumnDistanceReport(j_trunc, tailbiting, value, lower, upper, total, outcome)
    log.info(f"column distance d_{j_trunc}^c = {value} ({'tailbiting' if tailbiting else 'truncated'}), bound {upper}")
    return report


def column_distance_profile(g: ConvGenerator, j_max: int, budget: Budget, tailbiting: bool = False) -> List[ColumnDistanceReport]:
    return [column_distance(g, jt, budget, tailbiting=tailbiting) for jt in range(j_max + 1)]


def _in_span(f: FieldSpec, h: np.ndarray, p: int, others: Sequence[int]) -> bool:
    if not others:
        return not h[:, p].any()
    base = linalg.rank(f, h[:, list(others)])
    return linalg.rank(f, h[:, list(others) + [p]]) == base


def parity_span_oracle(g: ConvGenerator, j: int, d: int, tailbiting: bool = True) -> bool:
    """
    d_j^c = d exactly when no parity-check column of the leading block lies in the span of
    d-2 other columns, and at least one lies in the span of d-1 others.
    """
    if d < 1:
        return False
    f = g.field
    code = LinearCode(f, window_generator(g, j, tailbiting))
    h = code.parity_check
    width = h.shape[1]
    found = False
    for p in range(g.n):
        others = [c for c in range(width) if c != p]
        for size in range(0, d):
            if any(_in_span(f, h, p, combo) for combo in itertools.combinations(others, size)):
                if size < d - 1:
                    return False
                found = True
                break
    return found


def parity_span_check(g: ConvGenerator, cd: ColumnDistanceReport, budget: Budget, instance_id: str = "") -> Optional[OracleReport]:
    """Cross-check a brute-forced column distance with the parity-check span characterization."""
    if cd.value is None:
        return None
    mode = "tailbiting" if cd.tailbiting else "truncated"
    report = OracleReport(quantity=f"parity_span[{cd.j},{mode}]", claimed_lo=cd.value, claimed_hi=cd.value, instance_id=instance_id)
    width = g.n * (cd.j + 1)
    span_tests = g.n * sum(math.comb(width - 1, size) for size in range(cd.value))
    if span_tests > budget.max_enumerations:
        report.outcome = Outcome.BUDGET_EXCEEDED
        report.diagnostics.append(f"{span_tests} span tests exceed the budget of {budget.max_enumerations}")
        return report
    report.enumerations = span_tests
    if parity_span_oracle(g, cd.j, cd.value, tailbiting=cd.tailbiting):
        report.verified = cd.value
    else:
        report.outcome = Outcome.REFUTED
        report.diagnostics.append(f"parity-check columns disagree with the brute-force d_{cd.j}^c={cd.value}")
    return report


@dataclass
class RowLocalityCertificate:
    groups: Tuple[Tuple[int, ...], ...]
    partition_ok: bool
    report: OracleReport

    @property
    def ok(self) -> bool:
        return self.partition_ok and self.report.outcome == Outcome.VERIFIED


def row_locality_verify(g: ConvGenerator, budget: Optional[Budget] = None) -> RowLocalityCertificate:
    """
    Every row is partitioned into repair groups of r+delta-1 times; each group's punctured
    tailbiting code must have rank <= r and distance >= delta.
    """
    budget = budget or Budget()
    groups = g.row_groups()
    times = sorted(t for grp in groups for t in grp)
    partition_ok = times == list(range(g.span))
    block_groups = [g.row_positions(l, grp) for l in range(g.n) for grp in groups]
    report = locality_verify(g.linear_code(), g.r, g.delta, block_groups, budget, instance_id="rows")
    report.quantity = f"row_locality(r={g.r},delta={g.delta})"
    if not partition_ok:
        report.outcome = Outcome.REFUTED
        report.diagnostics.append(f"row groups {groups} do not partition 0..{g.j}")
    return RowLocalityCertificate(groups, partition_ok, report)


class _WindowSolver:
    def __init__(self, g: ConvGenerator, tailbiting: bool, window: int) -> None:
        self.g = g
        self.tailbiting = tailbiting
        self.window = window
        self.code = g.linear_code() if tailbiting else LinearCode(g.field, g.truncated_generator(g.j))
        self._cache: Dict[Any, LinearCode] = {}

    def punctured(self, key: Any, positions: Sequence[int]) -> LinearCode:
        if key not in self._cache:
            self._cache[key] = self.code.puncture(positions)
        return self._cache[key]

    def starts(self) -> Iterable[int]:
        L = self.g.span
        return range(L) if self.tailbiting else range(L - self.window + 1)

    def window_positions(self, t: int) -> List[int]:
        L, n = self.g.span, self.g.n
        return [n * ((t + tau) % L) + l for tau in range(self.window) for l in range(n)]


def sliding_window_repair(
    g: ConvGenerator,
    word: TailbitingWord,
    pattern: ErasurePattern,
    d_window: int,
    window: Optional[int] = None,
    tailbiting: bool = True,
) -> RepairOutcome:
    """
    Alternate row-local repair with window repair until nothing changes. A window starting at
    t is used when it holds fewer than d_window erasures and its leading column has erasures;
    only the leading column is recovered. Windows wrap around for tailbiting words.
    """
    n, L = g.n, g.span
    pattern.validate(n, L)
    w = L if window is None else window
    if not 1 <= w <= L:
        raise ParameterError(f"Window length {w} must lie in [1, {L}]", "window")
    solver = _WindowSolver(g, tailbiting, w)
    erased: Set[int] = set(pattern.to_block_positions(n))
    cur = word.to_block()
    cur[list(erased)] = 0
    steps: List[RepairStep] = []
    groups = g.row_groups()

    def local_pass() -> List[int]:
        recovered = []
        for l in range(n):
            for gi, grp in enumerate(groups):
                pos = g.row_positions(l, grp)
                er = [p for p in pos if p in erased]
                if not er or len(er) > g.delta - 1:
                    continue
                sub = solver.punctured(("row", l, gi), pos)
                res = erase_decode(sub, cur[pos], [pos.index(p) for p in er])
                for p in er:
                    if pos.index(p) not in res.undetermined:
                        cur[p] = res.word[pos.index(p)]
                        recovered.append(p)
        return sorted(recovered)

    def window_pass() -> Tuple[List[int], Optional[int]]:
        for t in solver.starts():
            lead = [n * t + l for l in range(n) if n * t + l in erased]
            if not lead:
                continue
            pos = solver.window_positions(t)
            er = [p for p in pos if p in erased]
            if len(er) >= d_window:
                continue
            sub = solver.punctured(("window", t), pos)
            sol = linalg.solve_erasures(g.field, sub.parity_check, cur[pos], [pos.index(p) for p in er])
            recovered = []
            for p, val, ok in zip(er, sol.values, sol.determined):
                if ok and p in lead:
                    cur[p] = val
                    recovered.append(p)
            if recovered:
                return sorted(recovered), t
        return [], None

    while erased:
        rec = local_pass()
        if rec:
            erased.difference_update(rec)
            steps.append(RepairStep("local", tuple(rec)))
            log.debug(f"local pass recovered {len(rec)} symbols")
        if not erased:
            break
        wrec, start = window_pass()
        if not wrec:
            break
        erased.difference_update(wrec)
        steps.append(RepairStep("window", tuple(wrec), start))
        log.debug(f"window at {start} recovered {len(wrec)} symbols")

    return RepairOutcome(success=not erased, word=cur, steps=steps, residual=sorted(erased))
