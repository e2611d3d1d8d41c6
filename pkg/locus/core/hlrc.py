"""
Cyclic hierarchical LRC codes.

Level i (1-based) has locality (r_i, delta_i) with local length n_i; the zero set of
level i+1 is the union of the nu_i shifts of level i's zero set together with the
run {1, ..., delta_{i+1} - 1}. Python sequences in this module are 0-based, so
``r[i - 1]`` is r_i, ``nlen[i - 1]`` is n_i and ``nu[i - 1]`` is nu_i, while
``delta[i]`` is delta_i (``delta[0]`` is the conventional delta_0 = 1).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from locus.core.certificate import Certificate
from locus.core.cyclic import (
    CyclicCode,
    LocalityCertificate,
    ZeroSet,
    bch_designed_distance,
    generator_from_zeros,
    local_structure,
)
from locus.core.field import FieldSpec, field_create, root_of_unity
from locus.errors import ConstructionError, ParameterError, ProfileError
from locus.types import Verdict

log = logging.getLogger(__name__)


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class HlrcProfile:
    r: Tuple[int, ...]
    delta: Tuple[int, ...]
    nlen: Tuple[int, ...]
    nu: Tuple[int, ...]
    a: Tuple[int, ...]
    b: Tuple[int, ...]
    # utab[i - 1][j] = u^(i)_j for j = 0..i-1
    utab: Tuple[Tuple[int, ...], ...]
    # b0tab[i] = b^(i)_0, with b^(0)_0 = 0
    b0tab: Tuple[int, ...]
    # bcascade[i - 1][j - 1] = b^(i)_j for j = 1..i
    bcascade: Tuple[Tuple[int, ...], ...]

    @property
    def levels(self) -> int:
        return len(self.r)

    @property
    def h(self) -> int:
        return self.levels - 1

    @property
    def n(self) -> int:
        return self.nlen[-1]

    @property
    def k(self) -> int:
        return self.r[-1]

    @property
    def distance(self) -> int:
        return self.delta[-1]

    def u(self, i: int, j: int) -> int:
        return self.utab[i - 1][j]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "h": self.h,
            "r": list(self.r),
            "delta": list(self.delta[1:]),
            "n": list(self.nlen),
            "nu": list(self.nu),
            "a": list(self.a),
            "b": list(self.b),
            "u": [list(row) for row in self.utab],
            "b0": list(self.b0tab),
        }


def derive_profile(r: Sequence[int], delta1: int, nu: Sequence[int]) -> HlrcProfile:
    r = tuple(int(x) for x in r)
    nu = tuple(int(x) for x in nu)
    if not r:
        raise ProfileError("At least one locality level is required")
    if len(nu) != len(r) - 1:
        raise ProfileError(f"Expected {len(r) - 1} nu values for r={list(r)}, got {list(nu)}")
    if r[0] < 1:
        raise ProfileError(f"r_1 must be positive, got {r[0]}", level=1)
    for i in range(len(r) - 1):
        if r[i + 1] <= r[i]:
            raise ProfileError(f"r must be strictly increasing, r_{i + 1}={r[i]} >= r_{i + 2}={r[i + 1]}", level=i + 1)
        if nu[i] < _ceil(r[i + 1], r[i]):
            raise ProfileError(f"nu_{i + 1}={nu[i]} is smaller than ceil(r_{i + 2}/r_{i + 1})={_ceil(r[i + 1], r[i])}", level=i + 1)
    if delta1 < 2:
        raise ProfileError(f"delta_1 must be at least 2, got {delta1}", level=1)

    levels = len(r)
    R = (None,) + r  # 1-based view
    nlen = [r[0] + delta1 - 1]
    for i in range(levels - 1):
        nlen.append(nu[i] * nlen[i])
    N = [None] + nlen

    a: List[int] = []
    b: List[int] = []
    utab: List[Tuple[int, ...]] = []
    bcascade: List[Tuple[int, ...]] = []
    b0 = [0]
    delta = [1, delta1]
    for i in range(1, levels):
        ai = _ceil(R[i + 1], R[i])
        bi = ai * R[i] - R[i + 1]
        a.append(ai)
        b.append(bi)
        bc = [0] * (i + 1)
        u = [0] * i
        bc[i] = bi
        for j in range(i, 1, -1):
            u[j - 1] = bc[j] // R[j - 1]
            bc[j - 1] = bc[j] % R[j - 1]
        total = bc[1] + b0[i - 1]
        b0.append(total % R[1])
        u[0] = total // R[1]
        utab.append(tuple(u))
        bcascade.append(tuple(bc[1:]))
        nxt = (nu[i - 1] - ai) * N[i] + delta[i] + sum(u[j] * N[j] for j in range(1, i)) + u[0] * N[1] + b0[i] - b0[i - 1]
        if nxt < delta[i]:
            raise ProfileError(f"delta_{i + 1}={nxt} would be smaller than delta_{i}={delta[i]}", level=i + 1)
        if nxt > N[i + 1]:
            raise ProfileError(f"delta_{i + 1}={nxt} exceeds n_{i + 1}={N[i + 1]}", level=i + 1)
        delta.append(nxt)

    profile = HlrcProfile(
        r=r,
        delta=tuple(delta),
        nlen=tuple(nlen),
        nu=nu,
        a=tuple(a),
        b=tuple(b),
        utab=tuple(utab),
        b0tab=tuple(b0),
        bcascade=tuple(bcascade),
    )
    log.debug(f"Derived profile r={list(r)} delta={list(delta[1:])} n={nlen}")
    return profile


def closed_form_delta(p: HlrcProfile, i: int) -> int:
    """delta_{i+1} = n_{i+1} - r_{i+1} + delta_i - sum_{l<=i} ceil(r_{i+1}/r_l)(delta_l - delta_{l-1})"""
    r = (None,) + p.r
    n = (None,) + p.nlen
    d = p.delta
    return n[i + 1] - r[i + 1] + d[i] - sum(_ceil(r[i + 1], r[l]) * (d[l] - d[l - 1]) for l in range(1, i + 1))


def build_zero_sets(p: HlrcProfile) -> List[ZeroSet]:
    sets = [ZeroSet.interval(p.nlen[0], 1, p.delta[1])]
    for i in range(1, p.levels):
        n_next = p.nlen[i]
        lifted = sets[-1].lift(n_next)
        sets.append(lifted.union(ZeroSet.interval(n_next, 1, p.delta[i + 1])))
    return sets


class LevelCheck(NamedTuple):
    level: int
    size: int
    expected: int
    congruence: Optional[bool]

    @property
    def ok(self) -> bool:
        return self.size == self.expected and self.congruence is not False


@dataclass
class CardinalityReport:
    levels: List[LevelCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.levels)

    @property
    def failures(self) -> List[int]:
        return [c.level for c in self.levels if not c.ok]


def cardinality_and_congruence_check(sets: Sequence[ZeroSet], p: HlrcProfile) -> CardinalityReport:
    report = CardinalityReport()
    n1 = p.nlen[0]
    for i, z in enumerate(sets, start=1):
        congruence = None if i == 1 else p.delta[1] % n1 == (p.delta[i] - p.b0tab[i - 1]) % n1
        report.levels.append(LevelCheck(i, len(z), p.nlen[i - 1] - p.r[i - 1], congruence))
    for level in report.failures:
        log.warning(f"Zero set of level {level} fails the cardinality or congruence identity")
    return report


class OptCondition(NamedTuple):
    s: int
    l: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class OptimalityReport:
    conditions: List[OptCondition]
    # level_optimal[i - 1]: delta_i is certified by the closed form (level 1 and 2 always are)
    level_optimal: List[bool]
    recursion: List[int]
    closed_form: List[int]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.conditions)

    @property
    def cross_check(self) -> bool:
        """The recursion agrees with the closed form on every level where the conditions hold."""
        return all(rec == cf for ok, rec, cf in zip(self.level_optimal[1:], self.recursion, self.closed_form) if ok)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "conditions": [{"s": c.s, "l": c.l, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds} for c in self.conditions],
            "level_optimal": self.level_optimal,
            "recursion": self.recursion,
            "closed_form": self.closed_form,
        }


def optimality_conditions(p: HlrcProfile, s: int) -> List[OptCondition]:
    """Both families of the optimality conditions for one s in 2..h."""
    r = (None,) + p.r
    ret = []
    lhs = _ceil(r[s + 1], r[s]) * _ceil(r[s], r[1]) - _ceil(r[s + 1], r[1])
    rhs = p.u(s, 0) + p.u(s, 1) + sum(p.u(s, j) * _ceil(r[j], r[1]) for j in range(2, s))
    ret.append(OptCondition(s, 1, lhs, rhs))
    for l in range(2, s):
        lhs = _ceil(r[s + 1], r[s]) * _ceil(r[s], r[l]) - _ceil(r[s + 1], r[l])
        rhs = p.u(s, l) + sum(p.u(s, j) * _ceil(r[j], r[l]) for j in range(l + 1, s))
        ret.append(OptCondition(s, l, lhs, rhs))
    return ret


def optimality_check(p: HlrcProfile) -> OptimalityReport:
    conditions: List[OptCondition] = []
    level_optimal = [True] * min(p.levels, 2)
    holds_so_far = True
    for s in range(2, p.levels):
        cs = optimality_conditions(p, s)
        conditions.extend(cs)
        holds_so_far = holds_so_far and all(c.holds for c in cs)
        level_optimal.append(holds_so_far)
    recursion = [p.delta[i + 1] for i in range(1, p.levels)]
    closed = [closed_form_delta(p, i) for i in range(1, p.levels)]
    report = OptimalityReport(conditions, level_optimal, recursion, closed)
    for c in conditions:
        if not c.holds:
            log.info(f"Optimality condition s={c.s}, l={c.l} fails: {c.lhs} != {c.rhs}")
    if not report.cross_check:
        log.warning(f"Distance recursion {recursion} disagrees with the closed form {closed}")
    return report


class SingletonBounds(NamedTuple):
    single: int
    local: int
    hierarchical: int

    @property
    def best(self) -> int:
        return min(self)


def singleton_bounds(n: int, k: int, r: Sequence[int], delta: Sequence[int]) -> SingletonBounds:
    """
    :param r: r_1..r_h
    :param delta: delta_1..delta_h
    :return: the (r_1, 2), (r_1, delta_1) and hierarchical generalized Singleton bounds
    """
    if k < 1:
        return SingletonBounds(n + 1, n + 1, n + 1)
    d = [1] + list(delta)
    single = n - k - _ceil(k, r[0]) + 2
    local = n - k + d[1] - _ceil(k, r[0]) * (d[1] - 1)
    hier = n - k + d[len(r)] - sum(_ceil(k, r[i - 1]) * (d[i] - d[i - 1]) for i in range(1, len(r) + 1))
    return SingletonBounds(single, local, hier)


def strong_optimality_sets(p: HlrcProfile) -> List[Tuple[int, ...]]:
    """
    For every level i <= h the exponents n - n_i + t mod n, t in {n_i} u ({1..n_i - 1} minus Z_i),
    that must be nonzeros of the code.
    """
    sets = build_zero_sets(p)
    n = p.n
    ret = []
    for i in range(1, p.levels):
        ni = p.nlen[i - 1]
        ts = [ni] + [t for t in range(1, ni) if t not in sets[i - 1]]
        ret.append(tuple(sorted({(n - ni + t) % n for t in ts})))
    return ret


@dataclass(frozen=True)
class HlrcCode:
    profile: HlrcProfile
    zero_sets: Tuple[ZeroSet, ...]
    code: CyclicCode
    locality: Tuple[LocalityCertificate, ...]
    base_q: Optional[int] = None

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k


def _local_chain(code: CyclicCode, p: HlrcProfile, sets: Sequence[ZeroSet], levels: int, cert: Certificate) -> List[LocalityCertificate]:
    chain = []
    for i in range(1, levels + 1):
        lc = local_structure(code, p.nlen[i - 1], sets[i - 1], p.delta[i])
        verdict = Verdict.CONSISTENT if lc.ok and lc.r == p.r[i - 1] else Verdict.REFUTED
        cert.add(
            f"locality level {i}",
            claimed={"r": p.r[i - 1], "delta": p.delta[i]},
            verified={"rank": lc.punctured_rank, "designed_distance": lc.punctured_designed_distance, "exact_dimension": lc.exact_dimension},
            verdict=verdict,
        )
        chain.append(lc)
    return chain


def construct(p: HlrcProfile, f: FieldSpec, claims: Optional[Dict[str, int]] = None) -> Tuple[HlrcCode, Certificate]:
    n = p.n
    if (f.q - 1) % n != 0:
        raise ParameterError(f"n={n} does not divide q-1={f.q - 1}", "n")
    sets = build_zero_sets(p)
    alpha = root_of_unity(f, n)
    code = generator_from_zeros(f, n, alpha, sets[-1])
    cert = Certificate(kind="hlrc", instance_id=f"hlrc-{n}-{code.k}-q{f.q}")

    card = cardinality_and_congruence_check(sets, p)
    cert.add("zero-set sizes", claimed=[p.nlen[i] - p.r[i] for i in range(p.levels)], verified=[c.size for c in card.levels], verdict=Verdict.CONSISTENT if card.ok else Verdict.REFUTED)
    cert.add("dimension", claimed=p.k, verified=code.dimension, verdict=Verdict.CONSISTENT if code.dimension == p.k else Verdict.REFUTED)

    opt = optimality_check(p)
    cert.add("optimality conditions", claimed=True, verified=opt.all_hold, verdict=Verdict.CONSISTENT if opt.all_hold else Verdict.NOT_CERTIFIED)
    cert.add("closed-form distances", claimed=opt.recursion, verified=opt.closed_form, verdict=Verdict.CONSISTENT if opt.cross_check else Verdict.REFUTED)
    cert.details["optimality"] = opt.to_dict()

    designed = bch_designed_distance(code.zeros)
    bounds = singleton_bounds(n, code.k, p.r[:-1], p.delta[1:-1]) if p.levels > 1 else SingletonBounds(n - code.k + 1, n - code.k + 1, n - code.k + 1)
    upper = bounds.best
    if designed < p.distance:
        raise ConstructionError(f"BCH designed distance {designed} is below delta_{p.levels}={p.distance}")
    cert.set_distance(designed, upper, claimed=p.distance)
    cert.details["bounds"] = bounds._asdict()

    chain = _local_chain(code, p, sets, p.h, cert)

    strong = strong_optimality_sets(p)
    values = code.g.evaluate(code.alpha_powers(range(n)))
    strong_ok = all(values[e] != 0 for exps in strong for e in exps)
    cert.details["strong_optimality_exponents"] = [list(s) for s in strong]
    cert.add("strong optimality", claimed=True, verified=strong_ok, verdict=Verdict.CONSISTENT if strong_ok else Verdict.NOT_CERTIFIED)
    if cert.distance_verdict == Verdict.OPTIMAL and strong_ok and opt.all_hold:
        cert.overall = Verdict.STRONGLY_OPTIMAL

    cert.compare_claims({"n": n, "k": code.k, "d": designed}, claims)
    hl = HlrcCode(p, tuple(sets), code, tuple(chain))
    log.info(f"Constructed [{n},{code.k}] H-LRC code over {f}: delta={list(p.delta[1:])}, d in [{designed}, {upper}] ({cert.verdict.value})")
    return hl, cert


def unbounded_construct(p: HlrcProfile, f_base: FieldSpec, m_ext: int, claims: Optional[Dict[str, int]] = None) -> Tuple[HlrcCode, Certificate]:
    """
    Length q^m_ext - 1 code over GF(q^m_ext) whose generator lies in GF(q): zeros are
    all shifts of the top-level zero set together with 0.
    """
    if m_ext < 1:
        raise ParameterError(f"m_ext must be positive, got {m_ext}", "m_ext")
    q = f_base.q
    nh = p.n
    if (q - 1) % nh != 0:
        raise ParameterError(f"n_h={nh} does not divide q-1={q - 1}", "n")
    f = f_base if m_ext == 1 else field_create(f_base.p, f_base.m * m_ext)
    n = f.q - 1
    sets = build_zero_sets(p)
    zeros = sets[-1].lift(n).union(ZeroSet(n, (0,)))
    alpha = root_of_unity(f, n)
    code = generator_from_zeros(f, n, alpha, zeros)
    outside = [i for i, ok in enumerate(f.in_subfield(code.g.coeffs, q)) if not ok]
    if outside:
        raise ConstructionError(f"Generator coefficients {outside} do not lie in GF({q})")

    cert = Certificate(kind="hlrc-unbounded", instance_id=f"hlrc-unbounded-{n}-q{q}")
    expected_k = n * p.k // nh - 1
    cert.add("dimension", claimed=expected_k, verified=code.dimension, verdict=Verdict.CONSISTENT if code.dimension == expected_k else Verdict.REFUTED)
    cert.add("generator in base field", claimed=f"GF({q})", verified=True, verdict=Verdict.CONSISTENT)

    k = code.k
    designed = bch_designed_distance(code.zeros)
    if designed < p.distance + 1:
        raise ConstructionError(f"BCH designed distance {designed} is below delta_h + 1={p.distance + 1}")
    bounds = singleton_bounds(n, k, p.r, p.delta[1:])
    d1 = [(l, (n // nh) * _ceil(p.k, p.r[l - 1]), _ceil(k, p.r[l - 1])) for l in range(1, p.levels + 1)]
    d1_ok = all(lhs == rhs for _, lhs, rhs in d1)
    cert.details["length_conditions"] = [{"l": l, "lhs": lhs, "rhs": rhs, "holds": lhs == rhs} for l, lhs, rhs in d1]
    cert.add("length optimality conditions", claimed=True, verified=d1_ok, verdict=Verdict.CONSISTENT if d1_ok else Verdict.NOT_CERTIFIED)
    opt = optimality_check(p)
    cert.details["optimality"] = opt.to_dict()
    cert.set_distance(designed, bounds.best, claimed=p.distance + 1)
    cert.details["bounds"] = bounds._asdict()
    if cert.distance_verdict != Verdict.OPTIMAL:
        cert.overall = Verdict.NOT_CERTIFIED if not d1_ok else Verdict.INTERVAL

    chain = _local_chain(code, p, sets, p.levels, cert)
    cert.compare_claims({"n": n, "k": k, "d": designed}, claims)
    hl = HlrcCode(p, tuple(sets) + (zeros,), code, tuple(chain), base_q=q)
    log.info(f"Constructed unbounded [{n},{k}] code over {f} with coefficients in GF({q}): d in [{designed}, {bounds.best}] ({cert.verdict.value})")
    return hl, cert
