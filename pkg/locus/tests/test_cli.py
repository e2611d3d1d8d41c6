import csv
import json
import os
from pathlib import Path
from typing import Any, Dict, List

from pytest import fixture, mark, param

from locus._internal.jobs import HlrcJob
from locus.core.oracle import Budget, OracleReport
from locus.main import main
from locus.test_utils.test_utils import assert_regex_match, config_path, run_locus, run_with_error
from locus.types import Verdict


def _construct(config: str, out: Path) -> str:
    stdout, _ = run_locus(["-q", "construct", "--config", config_path(config), "--out", str(out)])
    return stdout


def _read_json(path: Path) -> Dict[str, Any]:
    return json.loads(path.read_text(encoding="utf-8"))


def _read_csv(path: Path) -> List[Dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


@fixture
def hlrc_dir(tmp_path: Path) -> Path:
    out = tmp_path / "hlrc"
    _construct("hlrc_12_4.json", out)
    return out


def test_construct_writes_descriptor(tmp_path: Path) -> None:
    out = tmp_path / "out"
    stdout = _construct("hlrc_12_4.json", out)
    assert_regex_match("hlrc hlrc-12-4-q13: (strongly-)?optimal; d=8", stdout)
    assert sorted(p.name for p in out.iterdir()) == ["certificate.json", "config.yaml", "descriptor.json"]
    descriptor = _read_json(out / "descriptor.json")
    assert descriptor["format_version"] == "1.0"
    assert descriptor["kind"] == "hlrc"
    assert descriptor["name"] == "hlrc-12-4-q13"
    assert descriptor["code"]["zeros"] == [1, 2, 3, 4, 5, 6, 7, 10]
    assert descriptor["code"]["q"] == 13
    assert descriptor["parameters"]["k"] == 4
    cert = _read_json(out / "certificate.json")
    assert cert["distance"]["lower"] == cert["distance"]["upper"] == 8
    assert cert["oracles"] == []


@mark.parametrize(
    "config,expected",
    [
        param("hlrc_81_7.json", "hlrc hlrc-81-7-q163: strongly-optimal; d=53", id="hlrc_81"),
        param(
            "unbounded_162.json",
            "hlrc-unbounded hlrc-unbounded-162-q163: not-certified; d in \\[18, 29\\]; .*stated k=36 is inconsistent with the computed k=29",
            id="unbounded_162",
        ),
        param("unbounded_q4.json", "hlrc-unbounded hlrc-unbounded-15-q4: optimal; d=3", id="unbounded_q4"),
        param("bicyclic_21.json", ".*stated k=246 is inconsistent with the computed k=248", id="bicyclic_21"),
        param("conv_wraparound.json", "conv conv-4-1-j7-q97: .*j\\+1=8 exceeds n=4", id="conv_wraparound"),
        param("conv_gf9.yaml", "conv conv-4-1-j1-q9: .*information-set submatrix is singular", id="conv_singular"),
    ],
)
def test_construct_summaries(tmp_path: Path, config: str, expected: str) -> None:
    assert_regex_match(expected, _construct(config, tmp_path / "out"))


def test_certify(hlrc_dir: Path) -> None:
    stdout, _ = run_locus(["-q", "certify", "--in", str(hlrc_dir)])
    assert stdout.startswith("hlrc hlrc-12-4-q13:")
    certified = _read_json(hlrc_dir / "certified.json")
    assert [o["quantity"] for o in certified["oracles"]] == ["min_distance", "locality level 1 (r=2,delta=2)"]
    rows = _read_csv(hlrc_dir / "oracle.csv")
    assert rows[0] == {
        "instance_id": "hlrc-12-4-q13",
        "quantity": "min_distance",
        "claimed_lo": "8",
        "claimed_hi": "8",
        "verified": "8",
        "enumerations": str(13**4 - 1),
        "outcome": "verified",
    }
    assert rows[1]["verified"] == "2"


def test_certify_budget_flag(hlrc_dir: Path) -> None:
    run_locus(["-q", "certify", "--in", str(hlrc_dir), "--max-enum", "100"])
    rows = _read_csv(hlrc_dir / "oracle.csv")
    assert (rows[0]["verified"], rows[0]["outcome"]) == ("budget-exceeded", "budget-exceeded")


def test_certify_budget_env(hlrc_dir: Path) -> None:
    env = dict(os.environ, LOCUS_MAX_ENUM="100")
    run_locus(["-q", "certify", "--in", str(hlrc_dir)], env=env)
    assert _read_csv(hlrc_dir / "oracle.csv")[0]["outcome"] == "budget-exceeded"
    # the flag wins over the environment
    run_locus(["-q", "certify", "--in", str(hlrc_dir), "--max-enum", "100000"], env=env)
    assert _read_csv(hlrc_dir / "oracle.csv")[0]["verified"] == "8"


def test_certify_bicyclic(tmp_path: Path) -> None:
    out = tmp_path / "bi"
    _construct("bicyclic_tiny.json", out)
    run_locus(["-q", "certify", "--in", str(out)])
    certified = _read_json(out / "certified.json")
    assert certified["details"]["availability"]["ok"]
    assert certified["details"]["zero_set_counts"]["Z"] == 12
    assert [r["verified"] for r in _read_csv(out / "oracle.csv")] == ["2", "2", "4"]


def test_simulate_stdout_is_reproducible(tmp_path: Path) -> None:
    out = tmp_path / "bi"
    _construct("bicyclic_tiny.json", out)
    args = ["-q", "simulate", "--in", str(out), "--pattern", "random:3", "--trials", "4", "--seed", "3"]
    first, _ = run_locus(args)
    second, _ = run_locus(args)
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "pattern_id,erasure_count,recovered,rounds,trace_length"
    assert len(lines) == 5
    assert all(line.split(",")[1:3] == ["3", "true"] for line in lines[1:])


def test_simulate_zero_trials_prints_header(tmp_path: Path) -> None:
    out = tmp_path / "bi"
    _construct("bicyclic_tiny.json", out)
    stdout, _ = run_locus(["-q", "simulate", "--in", str(out), "--pattern", "random:3", "--trials", "0"])
    assert stdout == "pattern_id,erasure_count,recovered,rounds,trace_length\n"


def test_simulate_to_file(tmp_path: Path) -> None:
    out = tmp_path / "conv"
    _construct("conv_wraparound.json", out)
    target = tmp_path / "sim.csv"
    stdout, _ = run_locus(["-q", "simulate", "--in", str(out), "--pattern", "wraparound", "--trials", "2", "--out", str(target)])
    assert stdout == ""
    rows = _read_csv(target)
    assert [(r["recovered"], r["rounds"], r["trace_length"]) for r in rows] == [("true", "5", "16")] * 2


def test_refuted_certificate_exits_with_one(hlrc_dir: Path, monkeypatch: Any) -> None:
    def refuting_oracles(self: HlrcJob, budget: Budget) -> List[OracleReport]:
        assert self.certificate is not None
        self.certificate.add("distance", claimed=9, verified=8, verdict=Verdict.REFUTED)
        return []

    monkeypatch.setattr(HlrcJob, "run_oracles", refuting_oracles)
    assert main(["-q", "certify", "--in", str(hlrc_dir)]) == 1
    assert _read_json(hlrc_dir / "certified.json")["verdict"] == "refuted"


def test_main_in_process(tmp_path: Path, capsys: Any) -> None:
    out = tmp_path / "q4"
    assert main(["-q", "construct", "--config", config_path("unbounded_q4.json"), "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("hlrc-unbounded hlrc-unbounded-15-q4: optimal")
    assert main(["-q", "certify", "--in", str(out)]) == 0


def test_no_command_exits_with_two() -> None:
    code, stderr = run_with_error([])
    assert code == 2
    assert "usage: locus" in stderr


def test_unknown_command_exits_with_two() -> None:
    code, stderr = run_with_error(["decode"])
    assert code == 2
    assert "invalid choice: 'decode'" in stderr
