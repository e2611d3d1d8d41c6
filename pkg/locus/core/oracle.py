"""
Brute-force verifiers. Every verified value here comes from exhaustive enumeration
or exact elimination; when the enumeration would exceed the budget the report says
so instead of truncating.
"""

import csv
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import IO, Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from locus._internal.sweep import ChunkLauncher, messages, split_to_chunks
from locus.core import linalg
from locus.core.field import FieldSpec
from locus.errors import ParameterError, UnsupportedModeError
from locus.types import Outcome

log = logging.getLogger(__name__)

ORACLE_CSV_FIELDS = ["instance_id", "quantity", "claimed_lo", "claimed_hi", "verified", "enumerations", "outcome"]
SIMULATION_CSV_FIELDS = ["pattern_id", "erasure_count", "recovered", "rounds", "trace_length"]


@dataclass
class Budget:
    # cap on enumerated candidate words, per oracle call
    max_enumerations: int = 10**8
    # cap on simulated erasure patterns
    max_patterns: int = 10**6
    workers: int = 1
    chunk_size: int = 1 << 15

    def __post_init__(self) -> None:
        for name in ("max_enumerations", "max_patterns", "workers", "chunk_size"):
            if int(getattr(self, name)) <= 0:
                raise ParameterError(f"Budget {name} must be positive, got {getattr(self, name)}", name)

    def launcher(self) -> ChunkLauncher:
        return ChunkLauncher(self.workers)


@dataclass
class OracleReport:
    quantity: str
    claimed_lo: Optional[int] = None
    claimed_hi: Optional[int] = None
    verified: Any = None
    enumerations: int = 0
    outcome: Outcome = Outcome.VERIFIED
    elapsed: float = 0.0
    instance_id: str = ""
    diagnostics: List[str] = field(default_factory=list)

    @property
    def budget_exceeded(self) -> bool:
        return self.outcome == Outcome.BUDGET_EXCEEDED

    @property
    def refuted(self) -> bool:
        return self.outcome == Outcome.REFUTED

    def to_row(self) -> Dict[str, Any]:
        verified = "budget-exceeded" if self.budget_exceeded else self.verified
        if isinstance(verified, bool):
            verified = str(verified).lower()
        return {
            "instance_id": self.instance_id,
            "quantity": self.quantity,
            "claimed_lo": "" if self.claimed_lo is None else self.claimed_lo,
            "claimed_hi": "" if self.claimed_hi is None else self.claimed_hi,
            "verified": "" if verified is None else verified,
            "enumerations": self.enumerations,
            "outcome": self.outcome.value,
        }

    def to_dict(self) -> Dict[str, Any]:
        ret = asdict(self)
        ret["outcome"] = self.outcome.value
        ret["elapsed"] = round(self.elapsed, 6)
        return ret


def _judge(value: Optional[int], lo: Optional[int], hi: Optional[int]) -> Outcome:
    if value is None:
        return Outcome.VERIFIED
    if lo is not None and value < lo:
        return Outcome.REFUTED
    if hi is not None and value > hi:
        return Outcome.REFUTED
    return Outcome.VERIFIED


class LinearCode:
    """
    A linear code given by (possibly dependent) generator rows.
    """

    def __init__(self, field: FieldSpec, generator: np.ndarray, name: str = "code") -> None:
        self.field = field
        self.generator = np.atleast_2d(np.asarray(generator, dtype=np.int64))
        self.name = name

    def __repr__(self) -> str:
        return f"LinearCode({self.name}, n={self.length}, k={self.dimension}, {self.field})"

    @property
    def length(self) -> int:
        return int(self.generator.shape[1])

    @cached_property
    def basis(self) -> np.ndarray:
        if self.generator.shape[0] == 0:
            return self.generator
        return linalg.row_basis(self.field, self.generator)

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @cached_property
    def parity_check(self) -> np.ndarray:
        if self.dimension == 0:
            return np.eye(self.length, dtype=np.int64)
        return linalg.nullspace(self.field, self.basis)

    def puncture(self, positions: Sequence[int]) -> "LinearCode":
        return LinearCode(self.field, self.generator[:, list(positions)], name=f"{self.name}|{len(positions)}")

    def encode(self, msg: Sequence[int]) -> np.ndarray:
        return linalg.matmul(self.field, np.asarray(msg, dtype=np.int64), self.basis)

    def contains(self, word: Sequence[int]) -> bool:
        return not linalg.matmul(self.field, self.parity_check, np.asarray(word, dtype=np.int64)).any()

    def random_codeword(self, rng: np.random.Generator) -> np.ndarray:
        if self.dimension == 0:
            return np.zeros(self.length, dtype=np.int64)
        return self.encode(self.field.random(rng, self.dimension))

    def has_unit_vector(self) -> bool:
        """True when some e_p is a codeword, i.e. the code has distance 1 (or is trivial)."""
        full = linalg.rank(self.field, self.generator)
        for p in range(self.length):
            rest = [c for c in range(self.length) if c != p]
            if linalg.rank(self.field, self.generator[:, rest]) < full:
                return True
        return False


def min_distance(
    code: LinearCode,
    budget: Budget,
    claimed: Tuple[Optional[int], Optional[int]] = (None, None),
    instance_id: str = "",
    quantity: str = "min_distance",
) -> OracleReport:
    """
    Exact minimum nonzero weight by enumerating every message in lexicographic order.
    """
    tic = time.perf_counter()
    f = code.field
    k = code.dimension
    lo, hi = claimed
    report = OracleReport(quantity=quantity, claimed_lo=lo, claimed_hi=hi, instance_id=instance_id)
    if k == 0:
        report.verified = code.length + 1
        report.diagnostics.append("zero code")
        report.outcome = _judge(report.verified, lo, hi)
        return report
    total = f.q**k
    if total > budget.max_enumerations:
        report.outcome = Outcome.BUDGET_EXCEEDED
        report.diagnostics.append(f"{f.q}^{k} messages exceed the budget of {budget.max_enumerations}")
        log.info(f"{quantity}: {f.q}^{k} messages exceed the budget, reporting bounds only")
        return report
    basis = code.basis
    n = code.length

    def _chunk(idx: int, rng: range) -> Tuple[int, int]:
        words = linalg.matmul(f, messages(f.q, k, rng.start, rng.stop), basis)
        weights = np.count_nonzero(words, axis=1)
        weights = weights[weights > 0]
        return (int(weights.min()) if len(weights) else n + 1), len(rng)

    chunks = list(split_to_chunks(total, budget.chunk_size))
    results = budget.launcher().launch(_chunk, chunks, stop_when=lambda ret: ret[0] == 1)
    report.verified = min(r[0] for r in results)
    # the zero message is part of the enumeration but never a candidate
    report.enumerations = sum(r[1] for r in results) - 1
    if len(results) < len(chunks):
        report.diagnostics.append(f"stopped at weight 1 after {len(results)} of {len(chunks)} chunks, {report.enumerations} of {total - 1} messages enumerated")
    report.outcome = _judge(report.verified, lo, hi)
    report.elapsed = time.perf_counter() - tic
    log.info(f"{quantity}{f' [{instance_id}]' if instance_id else ''}: d={report.verified} over {report.enumerations} messages ({report.outcome.value})")
    return report


def locality_verify(
    code: LinearCode,
    r: int,
    delta: int,
    groups: Sequence[Sequence[int]],
    budget: Budget,
    instance_id: str = "",
) -> OracleReport:
    """
    Every group must carry a punctured code of rank <= r and distance >= delta.
    Distance 2 is decided by elimination, larger distances by enumeration.
    """
    tic = time.perf_counter()
    report = OracleReport(quantity=f"locality(r={r},delta={delta})", claimed_lo=delta, instance_id=instance_id)
    covered = set()
    for g in groups:
        covered.update(int(x) for x in g)
    uncovered = sorted(set(range(code.length)) - covered)
    if uncovered:
        report.diagnostics.append(f"coordinates not covered by any group: {uncovered}")
    exceeded = False
    worst: Optional[int] = None
    for gi, group in enumerate(groups):
        sub = code.puncture(group)
        rank = sub.dimension
        if rank > r:
            report.diagnostics.append(f"group {gi} {list(group)}: rank {rank} > r={r}")
        if delta <= 2:
            d = 1 if sub.has_unit_vector() else 2
        else:
            sub_report = min_distance(sub, budget, quantity=f"group {gi}")
            report.enumerations += sub_report.enumerations
            if sub_report.budget_exceeded:
                exceeded = True
                continue
            d = int(sub_report.verified)
        worst = d if worst is None else min(worst, d)
        if d < delta:
            report.diagnostics.append(f"group {gi} {list(group)}: punctured distance {d} < delta={delta}")
    report.verified = worst
    if report.diagnostics:
        report.outcome = Outcome.REFUTED
        for msg in report.diagnostics:
            log.warning(f"locality check failed: {msg}")
    elif exceeded:
        report.outcome = Outcome.BUDGET_EXCEEDED
    report.elapsed = time.perf_counter() - tic
    return report


class ErasureResult(NamedTuple):
    success: bool
    word: np.ndarray
    undetermined: List[int]


def erase_decode(code: LinearCode, word: Sequence[int], erased: Iterable[int]) -> ErasureResult:
    """
    Fill the erased coordinates from the parity system; success iff all of them are determined.
    """
    erased = sorted(set(int(e) for e in erased))
    filled = np.array(word, dtype=np.int64, copy=True)
    if not erased:
        return ErasureResult(True, filled, [])
    sol = linalg.solve_erasures(code.field, code.parity_check, filled, erased)
    undetermined = [e for e, ok in zip(erased, sol.determined) if not ok]
    for e, val, ok in zip(erased, sol.values, sol.determined):
        if ok:
            filled[e] = val
    return ErasureResult(sol.consistent and not undetermined, filled, undetermined)


@dataclass(frozen=True)
class RepairStep:
    kind: str
    positions: Tuple[int, ...]
    start: Optional[int] = None


@dataclass
class RepairOutcome:
    success: bool
    word: np.ndarray
    steps: List[RepairStep] = field(default_factory=list)
    residual: List[int] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.steps)

    @property
    def trace_length(self) -> int:
        return sum(len(s.positions) for s in self.steps)

    def trace(self) -> List[str]:
        return [f"{s.kind}{'' if s.start is None else f'@{s.start}'}:{list(s.positions)}" for s in self.steps]


@dataclass(frozen=True)
class PatternSpec:
    kind: str
    count: int = 0
    positions: Tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.kind == "random":
            return f"random:{self.count}"
        if self.kind == "positions":
            return "positions:" + ",".join(str(p) for p in self.positions)
        return self.kind


def parse_pattern(spec: str) -> PatternSpec:
    """
    random:E           E erasures uniformly at random
    local              up to delta-1 erasures in every repair group
    wraparound         the fixed 16-erasure pattern of a 4x8 tailbiting grid
    positions:a,b,...  a fixed pattern
    """
    kind, _, arg = spec.partition(":")
    if kind == "random":
        try:
            count = int(arg)
        except ValueError:
            raise UnsupportedModeError(f"Invalid erasure count in pattern '{spec}'") from None
        if count < 0:
            raise UnsupportedModeError(f"Invalid erasure count in pattern '{spec}'")
        return PatternSpec("random", count=count)
    if kind in ("local", "wraparound") and not arg:
        return PatternSpec(kind)
    if kind == "positions":
        try:
            positions = tuple(int(x) for x in arg.split(",") if x.strip())
        except ValueError:
            raise UnsupportedModeError(f"Invalid positions in pattern '{spec}'") from None
        return PatternSpec("positions", count=len(positions), positions=positions)
    raise UnsupportedModeError(f"Unsupported pattern '{spec}', expected random:E, local, wraparound or positions:...")


class RepairTarget(ABC):
    """A code with a repair procedure, as driven by repair_simulation."""

    name: str = "target"

    @property
    @abstractmethod
    def length(self) -> int: ...

    @abstractmethod
    def random_codeword(self, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def sample_pattern(self, spec: PatternSpec, rng: np.random.Generator) -> List[int]: ...

    @abstractmethod
    def repair(self, word: np.ndarray, erased: Sequence[int]) -> RepairOutcome: ...

    def _sample_common(self, spec: PatternSpec, rng: np.random.Generator) -> Optional[List[int]]:
        if spec.kind == "random":
            if spec.count > self.length:
                raise UnsupportedModeError(f"Cannot erase {spec.count} of {self.length} symbols")
            return sorted(int(x) for x in rng.choice(self.length, size=spec.count, replace=False))
        if spec.kind == "positions":
            bad = [p for p in spec.positions if not 0 <= p < self.length]
            if bad:
                raise UnsupportedModeError(f"Positions {bad} are out of range for length {self.length}")
            return sorted(set(spec.positions))
        return None


@dataclass(frozen=True)
class SimulationRow:
    pattern_id: int
    erasure_count: int
    recovered: bool
    rounds: int
    trace_length: int

    def to_row(self) -> Dict[str, Any]:
        ret = asdict(self)
        ret["recovered"] = str(self.recovered).lower()
        return ret


def repair_simulation(target: RepairTarget, pattern: PatternSpec, trials: int, seed: int, budget: Optional[Budget] = None) -> List[SimulationRow]:
    """
    One row per trial: random codeword, erasure pattern, repair, comparison with the original.
    Reproducible for a fixed seed.
    """
    budget = budget or Budget()
    if trials < 0:
        raise ParameterError(f"trials must be non-negative, got {trials}", "trials")
    if trials > budget.max_patterns:
        raise ParameterError(f"{trials} trials exceed the pattern budget of {budget.max_patterns}", "trials")
    rng = np.random.default_rng(seed)
    rows: List[SimulationRow] = []
    for t in range(trials):
        word = target.random_codeword(rng)
        erased = target.sample_pattern(pattern, rng)
        damaged = word.copy()
        damaged[erased] = 0
        outcome = target.repair(damaged, erased)
        recovered = bool(outcome.success and np.array_equal(outcome.word, word))
        rows.append(SimulationRow(t, len(erased), recovered, outcome.rounds, outcome.trace_length))
    ok = sum(r.recovered for r in rows)
    log.info(f"Simulated {trials} patterns ({pattern}) on {target.name}: {ok} recovered")
    return rows


def write_simulation_csv(rows: Iterable[SimulationRow], stream: IO[str]) -> None:
    w = csv.DictWriter(stream, fieldnames=SIMULATION_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row.to_row())


def write_oracle_csv(reports: Iterable[OracleReport], stream: IO[str]) -> None:
    w = csv.DictWriter(stream, fieldnames=ORACLE_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for report in reports:
        w.writerow(report.to_row())
