from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from omegaconf import MISSING

from locus.core.config_store import ConfigStore


@dataclass
class FieldConf:
    # characteristic
    p: int = MISSING
    # extension degree, q = p^m
    m: int = 1


@dataclass
class BudgetConf:
    max_enumerations: int = 10**8
    max_patterns: int = 10**6
    # > 1 runs enumeration chunks on a thread pool
    workers: int = 1
    chunk_size: int = 1 << 15


@dataclass
class JobConf:
    kind: str = MISSING
    # used in instance ids and file names, derived from the parameters when empty
    name: str = ""
    field: FieldConf = dc_field(default_factory=FieldConf)
    budget: BudgetConf = dc_field(default_factory=BudgetConf)
    # stated parameter values to compare against the computed ones, e.g. {k: 36}
    claims: Dict[str, int] = dc_field(default_factory=dict)


@dataclass
class HlrcJobConf(JobConf):
    kind: str = "hlrc"
    # localities r_1 < r_2 < ... < r_h, the last one is the dimension
    r: List[int] = MISSING
    delta1: int = 2
    # nu_1 .. nu_(h-1), local length n_(i+1) = nu_i n_i
    nu: List[int] = dc_field(default_factory=list)


@dataclass
class HlrcUnboundedJobConf(HlrcJobConf):
    kind: str = "hlrc-unbounded"
    # the code lives over GF(q^m_ext) with length q^m_ext - 1
    m_ext: int = 1


@dataclass
class ConvJobConf(JobConf):
    kind: str = "conv"
    n: int = MISSING
    k: int = MISSING
    j: int = MISSING
    r: int = MISSING
    delta: int = 2
    # raise instead of falling back to the spectral generator
    strict_information_set: bool = False
    # column distances are computed for 0..j_max, defaults to j
    j_max: Optional[int] = None
    tailbiting: bool = True
    # sliding window length, defaults to j+1
    window: Optional[int] = None


@dataclass
class BicyclicJobConf(JobConf):
    kind: str = "bicyclic"
    n: int = MISSING
    # [r1, r2]
    r: List[int] = MISSING
    delta: int = MISSING


cs = ConfigStore.instance()
cs.store(group="job", name="hlrc", node=HlrcJobConf, provider="locus")
cs.store(group="job", name="hlrc-unbounded", node=HlrcUnboundedJobConf, provider="locus")
cs.store(group="job", name="conv", node=ConvJobConf, provider="locus")
cs.store(group="job", name="bicyclic", node=BicyclicJobConf, provider="locus")
