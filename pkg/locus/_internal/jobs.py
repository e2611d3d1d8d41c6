"""
Job kinds behind the CLI: config composition, construction, descriptors and certification.
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

import locus.conf  # noqa: F401 registers the job schemas
from locus.core.bicyclic import (
    BicyclicCode,
    availability_certificate,
    build_bicyclic,
    dimension_lower_bound,
    hyperbolic_designed_distance,
    product_baseline,
    product_distance,
    zero_set_counts,
)
from locus.core.certificate import Certificate
from locus.core.config_store import ConfigStore
from locus.core.conv import (
    ColumnDistanceReport,
    ConvGenerator,
    QuasiCyclicLrc,
    block_distance_bound,
    build_block_code,
    column_distance,
    column_distance_bound,
    parity_span_check,
    propagation_holds,
    row_locality_verify,
    tailbiting_codeword_check,
    to_convolutional,
)
from locus.core.cyclic import CyclicCode, bch_designed_distance
from locus.core.field import FieldSpec, field_create
from locus.core.hlrc import HlrcCode, construct, derive_profile, unbounded_construct
from locus.core.oracle import Budget, OracleReport, RepairTarget, locality_verify, min_distance
from locus.core.repair import ConvRepairTarget, bicyclic_target, hlrc_target
from locus.core.utils import load_json
from locus.errors import ConfigValidationError, DescriptorError, MissingConfigException
from locus.types import JobKind, Verdict
from locus.version import check_format_version, format_version

log = logging.getLogger(__name__)

DESCRIPTOR_FILE = "descriptor.json"
CERTIFICATE_FILE = "certificate.json"
CERTIFIED_FILE = "certified.json"
ORACLE_FILE = "oracle.csv"
CONFIG_FILE = "config.yaml"


def compose_job_config(raw: Any, source: str = "<config>") -> DictConfig:
    """Merge a raw config onto the structured schema of its kind."""
    if not isinstance(raw, DictConfig):
        raw = OmegaConf.create(raw)
    kind = raw.get("kind")
    if kind is None:
        raise ConfigValidationError(f"{source}: missing 'kind', expected one of {[k.value for k in JobKind]}", path="kind")
    try:
        schema = ConfigStore.instance().load(f"job/{kind}").node
    except MissingConfigException:
        raise ConfigValidationError(f"{source}: unknown kind '{kind}', expected one of {[k.value for k in JobKind]}", path="kind") from None
    try:
        cfg = OmegaConf.merge(schema, raw)
    except OmegaConfBaseException as e:
        raise ConfigValidationError(f"{source}: {e}", path=getattr(e, "full_key", None)) from e
    assert isinstance(cfg, DictConfig)
    missing = sorted(OmegaConf.missing_keys(cfg))
    if missing:
        raise ConfigValidationError(f"{source}: missing mandatory values {missing}", path=missing[0])
    return cfg


def load_job_config(path: str) -> DictConfig:
    file = Path(path)
    if not file.is_file():
        raise MissingConfigException(f"Config file not found: {path}", missing_cfg_file=path)
    try:
        raw = OmegaConf.load(file)
    except Exception as e:
        raise ConfigValidationError(f"{path}: cannot parse config: {e}") from e
    return compose_job_config(raw, source=path)


def make_budget(cfg: DictConfig, max_enumerations: Optional[int] = None) -> Budget:
    b = cfg.budget
    return Budget(
        max_enumerations=int(b.max_enumerations if max_enumerations is None else max_enumerations),
        max_patterns=int(b.max_patterns),
        workers=int(b.workers),
        chunk_size=int(b.chunk_size),
    )


def cyclic_descriptor(code: CyclicCode, m_ext: int = 1) -> Dict[str, Any]:
    f = code.field
    return {
        "q": f.q,
        "p": f.p,
        "m": f.m,
        "m_ext": m_ext,
        "n": code.n,
        "alpha": int(code.alpha.value),
        "zeros": list(code.zeros.exponents),
        "generator": [int(x) for x in code.g.coeffs],
    }


class Job(ABC):
    kind: JobKind

    def __init__(self, cfg: DictConfig) -> None:
        self.cfg = cfg
        self.field: FieldSpec = field_create(int(cfg.field.p), int(cfg.field.m))
        self.certificate: Optional[Certificate] = None

    @property
    def claims(self) -> Dict[str, int]:
        return {str(k): int(v) for k, v in self.cfg.claims.items()}

    @abstractmethod
    def construct(self) -> Certificate:
        """Build the code and the pre-oracle certificate."""
        ...

    @abstractmethod
    def code_descriptor(self) -> Dict[str, Any]: ...

    @abstractmethod
    def parameters(self) -> Dict[str, Any]: ...

    @abstractmethod
    def run_oracles(self, budget: Budget) -> List[OracleReport]:
        """Brute-force checks, recorded on the certificate."""
        ...

    @abstractmethod
    def repair_target(self) -> RepairTarget: ...

    def descriptor(self) -> Dict[str, Any]:
        assert self.certificate is not None
        return {
            "format_version": format_version(),
            "kind": self.kind.value,
            "name": self.certificate.instance_id,
            "config": OmegaConf.to_container(self.cfg, resolve=True),
            "code": self.code_descriptor(),
            "parameters": self.parameters(),
        }

    def certify(self, budget: Budget) -> Certificate:
        if self.certificate is None:
            self.construct()
        assert self.certificate is not None
        reports = self.run_oracles(budget)
        for report in reports:
            report.instance_id = report.instance_id or self.certificate.instance_id
        return self.certificate

    def _name(self, default: str) -> str:
        return str(self.cfg.name) if self.cfg.name else default


class HlrcJob(Job):
    kind = JobKind.HLRC

    def __init__(self, cfg: DictConfig) -> None:
        super().__init__(cfg)
        self.code: Optional[HlrcCode] = None

    def construct(self) -> Certificate:
        profile = derive_profile(list(self.cfg.r), int(self.cfg.delta1), list(self.cfg.nu))
        self.code, self.certificate = construct(profile, self.field, self.claims)
        self.certificate.instance_id = self._name(self.certificate.instance_id)
        return self.certificate

    def code_descriptor(self) -> Dict[str, Any]:
        assert self.code is not None
        return cyclic_descriptor(self.code.code)

    def parameters(self) -> Dict[str, Any]:
        assert self.code is not None
        return {
            "n": self.code.n,
            "k": self.code.k,
            "designed_distance": bch_designed_distance(self.code.code.zeros),
            "profile": self.code.profile.to_dict(),
            "locality": [lc.to_dict() for lc in self.code.locality],
        }

    def run_oracles(self, budget: Budget) -> List[OracleReport]:
        assert self.code is not None and self.certificate is not None
        cert = self.certificate
        linear = self.code.code.linear_code()
        reports = []
        lo, hi = cert.distance["lower"], cert.distance["upper"]
        reports.append(min_distance(linear, budget, claimed=(lo, hi), instance_id=cert.instance_id))
        for i, lc in enumerate(self.code.locality, start=1):
            report = locality_verify(linear, lc.r, lc.delta, lc.groups, budget, instance_id=cert.instance_id)
            report.quantity = f"locality level {i} (r={lc.r},delta={lc.delta})"
            reports.append(report)
        for report in reports:
            cert.add_oracle(report)
        return reports

    def repair_target(self) -> RepairTarget:
        assert self.code is not None
        return hlrc_target(self.code)


class HlrcUnboundedJob(HlrcJob):
    kind = JobKind.HLRC_UNBOUNDED

    def construct(self) -> Certificate:
        profile = derive_profile(list(self.cfg.r), int(self.cfg.delta1), list(self.cfg.nu))
        self.code, self.certificate = unbounded_construct(profile, self.field, int(self.cfg.m_ext), self.claims)
        self.certificate.instance_id = self._name(self.certificate.instance_id)
        return self.certificate

    def code_descriptor(self) -> Dict[str, Any]:
        assert self.code is not None
        return cyclic_descriptor(self.code.code, m_ext=int(self.cfg.m_ext))

    def parameters(self) -> Dict[str, Any]:
        ret = super().parameters()
        ret["base_q"] = self.code.base_q if self.code is not None else None
        return ret


class ConvJob(Job):
    kind = JobKind.CONV

    def __init__(self, cfg: DictConfig) -> None:
        super().__init__(cfg)
        self.block: Optional[QuasiCyclicLrc] = None
        self.generator: Optional[ConvGenerator] = None

    @property
    def j_max(self) -> int:
        return int(self.cfg.j) if self.cfg.j_max is None else int(self.cfg.j_max)

    def construct(self) -> Certificate:
        c = self.cfg
        b = build_block_code(int(c.n), int(c.k), int(c.j), int(c.r), int(c.delta), self.field)
        g = to_convolutional(b, strict=bool(c.strict_information_set))
        self.block, self.generator = b, g
        cert = Certificate(kind=self.kind.value, instance_id=self._name(f"conv-{b.n}-{b.k}-j{b.j}-q{self.field.q}"))
        K = b.k * (b.j + 1)
        cert.add("block dimension", claimed=K, verified=b.block.k, verdict=Verdict.CONSISTENT if b.block.k == K else Verdict.REFUTED)
        cert.set_distance(bch_designed_distance(b.block.zeros), block_distance_bound(b.length, K, b.r, b.delta), claimed=b.delta3)
        cert.add(
            "row locality",
            claimed={"r": b.r, "delta": b.delta},
            verified={"rank": b.locality.punctured_rank, "designed_distance": b.locality.punctured_designed_distance},
            verdict=Verdict.CONSISTENT if b.locality.ok else Verdict.REFUTED,
        )
        cert.add("generator", claimed="information-set", verified=g.method, verdict=Verdict.CONSISTENT if g.method == "information-set" else Verdict.FLAGGED, note=f"{g.k} block rows, memory {g.memory}")
        if g.defect:
            cert.flag(f"information-set submatrix is singular (rank {g.defect['rank']}); spectral generator with {g.k} block rows")
        if not b.in_range:
            cert.flag(f"j+1={b.j + 1} exceeds n={b.n}")
        cert.details["block"] = b.to_dict()
        cert.details["generator"] = g.to_dict()
        cert.details["column_distance_bounds"] = [column_distance_bound(b.n, b.k, b.r, b.delta, i) for i in range(self.j_max + 1)]
        cert.compare_claims({"n": b.n, "k": b.k, "K": K, "d": bch_designed_distance(b.block.zeros)}, self.claims)
        self.certificate = cert
        log.info(cert.summary())
        return cert

    def code_descriptor(self) -> Dict[str, Any]:
        assert self.block is not None and self.generator is not None
        ret = cyclic_descriptor(self.block.block)
        ret["circulants"] = self.generator.coeffs.tolist()
        return ret

    def parameters(self) -> Dict[str, Any]:
        assert self.block is not None and self.generator is not None
        return {"block": self.block.to_dict(), "generator": self.generator.to_dict(), "locality": self.block.locality.to_dict()}

    @property
    def d_window(self) -> int:
        assert self.block is not None
        return bch_designed_distance(self.block.block.zeros)

    def run_oracles(self, budget: Budget) -> List[OracleReport]:
        assert self.block is not None and self.generator is not None and self.certificate is not None
        b, g, cert = self.block, self.generator, self.certificate
        reports = [tailbiting_codeword_check(g, b, budget), row_locality_verify(g, budget).report]
        lo, hi = cert.distance["lower"], cert.distance["upper"]
        reports.append(min_distance(b.linear_code(), budget, claimed=(lo, hi), instance_id=cert.instance_id))
        tailbiting = bool(self.cfg.tailbiting)
        windows: List[ColumnDistanceReport] = []
        for jt in range(min(self.j_max, b.j) + 1 if tailbiting else self.j_max + 1):
            # only the full tailbiting window carries the block distance
            lower = self.d_window if tailbiting and jt == b.j else 1
            cd = column_distance(g, jt, budget, tailbiting=tailbiting, lower=lower, k_bound=b.k)
            reports.append(cd.to_oracle_report(cert.instance_id))
            span = parity_span_check(g, cd, budget, cert.instance_id)
            if span is not None:
                reports.append(span)
            windows.append(cd)
        for report in reports:
            cert.add_oracle(report)

        if g.g0_rank == g.k:
            truncated = [column_distance(g, jt, budget, tailbiting=False, k_bound=b.k) for jt in range(self.j_max + 1)]
            windows.extend(t for t in truncated if not tailbiting)
            if all(t.value is not None for t in truncated):
                values = [int(t.value) for t in truncated]
                ok = propagation_holds(values, b.n, b.k, b.r, b.delta)
                cert.add("column distance propagation", claimed=True, verified=values, verdict=Verdict.CONSISTENT if ok else Verdict.REFUTED)
        self._flag_truncated_below_block(windows)
        return reports

    def _flag_truncated_below_block(self, reports: List[ColumnDistanceReport]) -> None:
        assert self.block is not None and self.certificate is not None
        seen = set()
        for cd in reports:
            if cd.tailbiting or cd.value is None or cd.j < self.block.j or cd.value >= self.d_window or cd.j in seen:
                continue
            seen.add(cd.j)
            self.certificate.flag(f"truncated d_{cd.j}^c={cd.value} is below the block designed distance {self.d_window}")

    def repair_target(self) -> RepairTarget:
        assert self.generator is not None
        window = None if self.cfg.window is None else int(self.cfg.window)
        return ConvRepairTarget(self.generator, self.d_window, window=window, tailbiting=bool(self.cfg.tailbiting))


class BicyclicJob(Job):
    kind = JobKind.BICYCLIC

    def __init__(self, cfg: DictConfig) -> None:
        super().__init__(cfg)
        self.code: Optional[BicyclicCode] = None

    def construct(self) -> Certificate:
        c = self.cfg
        if len(c.r) != 2:
            raise ConfigValidationError(f"bicyclic r must hold two localities, got {list(c.r)}", path="r")
        r1, r2 = int(c.r[0]), int(c.r[1])
        code = build_bicyclic(int(c.n), r1, r2, int(c.delta), self.field)
        self.code = code
        cert = Certificate(kind=self.kind.value, instance_id=self._name(f"bicyclic-{code.n}-r{r1}x{r2}-q{self.field.q}"))
        counts = zero_set_counts(code)
        cert.details["zero_set_counts"] = counts
        cert.add(
            "zero-set size",
            claimed=counts["Z_inclusion_exclusion"],
            verified=counts["Z"],
            verdict=Verdict.CONSISTENT if counts["Z"] == counts["Z_inclusion_exclusion"] else Verdict.REFUTED,
            note="inclusion-exclusion against direct union",
        )
        bound = dimension_lower_bound(code.n, r1, r2, code.delta)
        cert.add("dimension lower bound", claimed=round(bound, 3), verified=code.k, verdict=Verdict.CONSISTENT if code.k >= bound else Verdict.REFUTED)
        baseline = product_baseline(code.n, (r1, r2), product_distance(code.delta))
        cert.details["product_baseline"] = {"k1": baseline.k1, "k2": baseline.k2, "k": baseline.k, "distance": baseline.distance}
        cert.add("product baseline", claimed=baseline.k, verified=code.k, verdict=Verdict.CONSISTENT if code.k >= baseline.k else Verdict.FLAGGED)
        designed = hyperbolic_designed_distance(code.zeros)
        cert.set_distance(designed, code.length - code.k + 1, claimed=code.delta)
        cert.compare_claims({"n": code.length, "k": code.k, "d": designed}, self.claims)
        self.certificate = cert
        log.info(cert.summary())
        return cert

    def code_descriptor(self) -> Dict[str, Any]:
        assert self.code is not None
        f = self.code.field
        return {
            "q": f.q,
            "p": f.p,
            "m": f.m,
            "n": self.code.n,
            "alpha": int(self.code.alpha.value),
            "zeros": [list(p) for p in self.code.zeros],
            "generator": None,
        }

    def parameters(self) -> Dict[str, Any]:
        assert self.code is not None
        return self.code.to_dict()

    def run_oracles(self, budget: Budget) -> List[OracleReport]:
        assert self.code is not None and self.certificate is not None
        cert = self.certificate
        avail = availability_certificate(self.code, budget)
        cert.details["availability"] = avail.to_dict()
        cert.add(
            "availability",
            claimed=2,
            verified={"coordinates": avail.coordinates, "disjoint": avail.disjoint, "parity_sums": avail.parity_sums},
            verdict=Verdict.CONSISTENT if avail.disjoint and avail.parity_sums else Verdict.REFUTED,
        )
        lo, hi = cert.distance["lower"], cert.distance["upper"]
        reports = [avail.vertical, avail.horizontal, min_distance(self.code.linear_code(), budget, claimed=(lo, hi), instance_id=cert.instance_id)]
        for report in reports:
            cert.add_oracle(report)
        return reports

    def repair_target(self) -> RepairTarget:
        assert self.code is not None
        return bicyclic_target(self.code)


JOBS: Dict[JobKind, Type[Job]] = {
    JobKind.HLRC: HlrcJob,
    JobKind.HLRC_UNBOUNDED: HlrcUnboundedJob,
    JobKind.CONV: ConvJob,
    JobKind.BICYCLIC: BicyclicJob,
}


def create_job(cfg: DictConfig) -> Job:
    return JOBS[JobKind(cfg.kind)](cfg)


def load_descriptor(directory: Path) -> Dict[str, Any]:
    path = directory / DESCRIPTOR_FILE
    if not path.is_file():
        raise DescriptorError(f"No {DESCRIPTOR_FILE} in {directory}, run 'locus construct' first")
    try:
        descriptor = load_json(path)
    except ValueError as e:
        raise DescriptorError(f"Cannot parse {path}: {e}") from e
    for key in ("format_version", "kind", "config", "code"):
        if key not in descriptor:
            raise DescriptorError(f"{path} has no '{key}' entry")
    check_format_version(descriptor["format_version"])
    return descriptor


def job_from_descriptor(descriptor: Dict[str, Any]) -> Job:
    """Rebuild the job from the stored config and check that it reproduces the stored code."""
    cfg = compose_job_config(descriptor["config"], source=DESCRIPTOR_FILE)
    if cfg.kind != descriptor["kind"]:
        raise DescriptorError(f"Descriptor kind '{descriptor['kind']}' does not match its config kind '{cfg.kind}'")
    job = create_job(cfg)
    job.construct()
    rebuilt = job.code_descriptor()
    stored = descriptor["code"]
    diff = sorted(k for k in set(rebuilt) | set(stored) if rebuilt.get(k) != stored.get(k))
    if diff:
        raise DescriptorError(f"Descriptor does not match the code rebuilt from its config, differing entries: {diff}")
    return job
