import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from locus.core.oracle import OracleReport
from locus.types import Outcome, Verdict

log = logging.getLogger(__name__)

_OUTCOME_VERDICT = {
    Outcome.VERIFIED: Verdict.CONSISTENT,
    Outcome.REFUTED: Verdict.REFUTED,
    Outcome.BUDGET_EXCEEDED: Verdict.BUDGET_EXCEEDED,
}


def jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (Verdict, Outcome)):
        return obj.value
    return obj


@dataclass
class Claim:
    quantity: str
    claimed: Any
    verified: Any
    verdict: Verdict
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        ret = {"quantity": self.quantity, "claimed": jsonable(self.claimed), "verified": jsonable(self.verified), "verdict": self.verdict.value}
        if self.note:
            ret["note"] = self.note
        return ret


@dataclass
class Certificate:
    """
    Claimed versus verified parameters of one constructed code.
    """

    kind: str
    instance_id: str
    claims: List[Claim] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    oracles: List[OracleReport] = field(default_factory=list)
    distance: Optional[Dict[str, Any]] = None
    overall: Optional[Verdict] = None

    def add(self, quantity: str, claimed: Any, verified: Any, verdict: Verdict, note: str = "") -> Claim:
        claim = Claim(quantity, claimed, verified, verdict, note)
        self.claims.append(claim)
        if verdict == Verdict.REFUTED:
            log.warning(f"[{self.instance_id}] {quantity}: claimed {claimed}, found {verified}")
        return claim

    def flag(self, message: str) -> None:
        self.flags.append(message)
        log.warning(f"[{self.instance_id}] {message}")

    def set_distance(self, lower: int, upper: int, claimed: Optional[int] = None) -> None:
        """Distance is exact only when the designed lower bound meets an upper bound."""
        if lower > upper:
            verdict = Verdict.REFUTED
        elif lower == upper:
            verdict = Verdict.OPTIMAL
        else:
            verdict = Verdict.INTERVAL
        self.distance = {"lower": int(lower), "upper": int(upper), "verdict": verdict}
        if claimed is not None:
            self.distance["claimed"] = int(claimed)
            if claimed > upper:
                verdict = Verdict.REFUTED
        self.add("distance", claimed=claimed, verified=[int(lower), int(upper)], verdict=verdict, note="optimal by bound equality" if verdict == Verdict.OPTIMAL else "")

    def compare_claims(self, values: Dict[str, Any], claims: Optional[Dict[str, Any]]) -> None:
        """Stated values, e.g. from a config, are flagged when they disagree with the computed ones."""
        for name, stated in (claims or {}).items():
            if name not in values:
                self.flag(f"stated {name}={stated} has no computed counterpart")
                continue
            if int(stated) != int(values[name]):
                self.add(f"stated {name}", claimed=int(stated), verified=values[name], verdict=Verdict.FLAGGED, note=f"computed {name}={values[name]}")
                self.flag(f"stated {name}={stated} is inconsistent with the computed {name}={values[name]}")

    @property
    def distance_verdict(self) -> Optional[Verdict]:
        return None if self.distance is None else self.distance["verdict"]

    def add_oracle(self, report: OracleReport) -> None:
        self.oracles.append(report)
        if self.distance is not None and report.quantity == "min_distance" and not report.budget_exceeded and report.verified is not None:
            lo, hi = self.distance["lower"], self.distance["upper"]
            if not lo <= int(report.verified) <= hi:
                self.add("distance", claimed=[lo, hi], verified=int(report.verified), verdict=Verdict.REFUTED, note="brute force outside the certified interval")
                return
        self.add(report.quantity, claimed=[report.claimed_lo, report.claimed_hi], verified=report.verified, verdict=_OUTCOME_VERDICT[report.outcome], note="; ".join(report.diagnostics))

    @property
    def refuted(self) -> bool:
        return any(c.verdict == Verdict.REFUTED for c in self.claims)

    @property
    def verdict(self) -> Verdict:
        if self.refuted:
            return Verdict.REFUTED
        if self.overall is not None:
            return self.overall
        if self.distance_verdict is not None:
            return self.distance_verdict
        return Verdict.CONSISTENT

    def claim(self, quantity: str) -> Optional[Claim]:
        for c in reversed(self.claims):
            if c.quantity == quantity:
                return c
        return None

    def summary(self) -> str:
        parts = [f"{self.kind} {self.instance_id}: {self.verdict.value}"]
        if self.distance is not None:
            lo, hi = self.distance["lower"], self.distance["upper"]
            parts.append(f"d={lo}" if lo == hi else f"d in [{lo}, {hi}]")
        parts.extend(self.flags)
        return "; ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return jsonable(
            {
                "kind": self.kind,
                "instance_id": self.instance_id,
                "verdict": self.verdict,
                "summary": self.summary(),
                "distance": self.distance,
                "claims": [c.to_dict() for c in self.claims],
                "flags": self.flags,
                "details": self.details,
                "oracles": [r.to_dict() for r in self.oracles],
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
