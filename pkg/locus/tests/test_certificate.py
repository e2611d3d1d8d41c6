import json

import numpy as np
from pytest import mark, param

from locus.core.certificate import Certificate, jsonable
from locus.core.oracle import OracleReport
from locus.types import Outcome, Verdict


def _cert() -> Certificate:
    return Certificate(kind="hlrc", instance_id="x")


@mark.parametrize(
    "lower,upper,claimed,verdict",
    [
        param(8, 8, None, Verdict.OPTIMAL, id="optimal"),
        param(18, 29, None, Verdict.INTERVAL, id="interval"),
        param(9, 8, None, Verdict.REFUTED, id="crossed"),
        param(8, 8, 9, Verdict.REFUTED, id="claim_above_upper"),
        param(4, 13, 4, Verdict.INTERVAL, id="claim_inside"),
    ],
)
def test_set_distance(lower: int, upper: int, claimed: int, verdict: Verdict) -> None:
    cert = _cert()
    cert.set_distance(lower, upper, claimed=claimed)
    assert cert.claim("distance").verdict == verdict
    assert cert.refuted == (verdict == Verdict.REFUTED)


def test_summary_and_verdict() -> None:
    cert = _cert()
    assert cert.verdict == Verdict.CONSISTENT
    cert.set_distance(18, 29)
    cert.flag("first")
    assert cert.summary() == "hlrc x: interval; d in [18, 29]; first"
    cert.overall = Verdict.NOT_CERTIFIED
    assert cert.verdict == Verdict.NOT_CERTIFIED
    cert.add("dimension", claimed=36, verified=29, verdict=Verdict.REFUTED)
    assert cert.verdict == Verdict.REFUTED


def test_compare_claims() -> None:
    cert = _cert()
    cert.compare_claims({"n": 162, "k": 29}, {"n": 162, "k": 36, "d": 20})
    assert cert.claim("stated n") is None
    assert cert.claim("stated k").verdict == Verdict.FLAGGED
    assert cert.flags == ["stated k=36 is inconsistent with the computed k=29", "stated d=20 has no computed counterpart"]
    assert not cert.refuted
    cert.compare_claims({"k": 29}, None)
    assert len(cert.claims) == 1


def test_brute_force_outside_interval_refutes() -> None:
    cert = _cert()
    cert.set_distance(6, 8)
    cert.add_oracle(OracleReport("min_distance", verified=5))
    assert cert.claim("distance").note == "brute force outside the certified interval"
    assert cert.refuted


@mark.parametrize(
    "outcome,verdict",
    [
        param(Outcome.VERIFIED, Verdict.CONSISTENT, id="verified"),
        param(Outcome.REFUTED, Verdict.REFUTED, id="refuted"),
        param(Outcome.BUDGET_EXCEEDED, Verdict.BUDGET_EXCEEDED, id="budget"),
    ],
)
def test_add_oracle(outcome: Outcome, verdict: Verdict) -> None:
    cert = _cert()
    cert.add_oracle(OracleReport("locality(r=2,delta=2)", claimed_lo=2, verified=2, outcome=outcome, diagnostics=["a", "b"]))
    claim = cert.claim("locality(r=2,delta=2)")
    assert claim.verdict == verdict
    assert claim.note == "a; b"
    assert len(cert.oracles) == 1


def test_to_json() -> None:
    cert = _cert()
    cert.details["array"] = np.array([1, 2])
    cert.details["flag"] = np.bool_(True)
    cert.set_distance(8, 8)
    d = json.loads(cert.to_json())
    assert d["details"] == {"array": [1, 2], "flag": True}
    assert d["distance"]["verdict"] == "optimal"
    assert d["verdict"] == "optimal"
    assert jsonable({1: (np.int64(3), Outcome.REFUTED)}) == {"1": [3, "refuted"]}
