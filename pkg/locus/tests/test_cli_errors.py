import json
import os
from pathlib import Path
from typing import Any, Callable, Dict, List

from pytest import mark, param

from locus.test_utils.test_utils import config_path, run_locus, run_with_error

TRACE_HINT = "Set the environment variable LOCUS_FULL_ERROR=1 for a complete stack trace."


def _constructed(tmp_path: Path) -> Path:
    out = tmp_path / "code"
    run_locus(["-q", "construct", "--config", config_path("hlrc_12_4.json"), "--out", str(out)])
    return out


def _edit_descriptor(directory: Path, edit: Callable[[Dict[str, Any]], None]) -> None:
    path = directory / "descriptor.json"
    descriptor = json.loads(path.read_text(encoding="utf-8"))
    edit(descriptor)
    path.write_text(json.dumps(descriptor), encoding="utf-8")


@mark.parametrize(
    "config,expected",
    [
        param("bad_length.json", "n=12 does not divide q-1=6", id="length"),
        param("bad_schema.json", "Key 'locality' not in 'HlrcJobConf'", id="unknown_key"),
        param("missing_value.json", "missing mandatory values ['j']", id="missing_value"),
        param("not_there.json", "Config file not found", id="missing_file"),
    ],
)
def test_construct_errors(tmp_path: Path, config: str, expected: str) -> None:
    code, stderr = run_with_error(["-q", "construct", "--config", config_path(config), "--out", str(tmp_path / "out")])
    assert code == 1
    assert expected in stderr
    # compact errors come without a stack trace
    assert "Traceback" not in stderr
    assert not (tmp_path / "out").exists()


def test_certify_without_descriptor(tmp_path: Path) -> None:
    code, stderr = run_with_error(["certify", "--in", str(tmp_path)])
    assert code == 1
    assert f"No descriptor.json in {tmp_path}, run 'locus construct' first" in stderr


def test_unparsable_descriptor(tmp_path: Path) -> None:
    (tmp_path / "descriptor.json").write_text("{", encoding="utf-8")
    code, stderr = run_with_error(["certify", "--in", str(tmp_path)])
    assert code == 1
    assert "Cannot parse" in stderr


@mark.parametrize(
    "edit,expected",
    [
        param(lambda d: d.update(format_version="2.0"), "Descriptor format_version 2.0 is not supported", id="newer_major"),
        param(lambda d: d.update(format_version="1.5"), "Descriptor format_version 1.5 is not supported", id="newer_minor"),
        param(lambda d: d.update(format_version="one"), "Invalid descriptor format_version : 'one'", id="invalid_version"),
        param(lambda d: d.pop("code"), "has no 'code' entry", id="no_code"),
        param(lambda d: d.update(kind="conv"), "Descriptor kind 'conv' does not match its config kind 'hlrc'", id="kind"),
        param(lambda d: d["code"].update(zeros=[1, 2, 3]), "differing entries: ['zeros']", id="zeros"),
        param(lambda d: d["config"]["field"].update(p=7), "n=12 does not divide q-1=6", id="config"),
    ],
)
def test_descriptor_errors(tmp_path: Path, edit: Callable[[Dict[str, Any]], None], expected: str) -> None:
    directory = _constructed(tmp_path)
    _edit_descriptor(directory, edit)
    code, stderr = run_with_error(["certify", "--in", str(directory)])
    assert code == 1
    assert expected in stderr


@mark.parametrize(
    "args,expected",
    [
        param(["--pattern", "burst:3"], "Unsupported pattern 'burst:3'", id="pattern"),
        param(["--pattern", "random:13"], "Cannot erase 13 of 12 symbols", id="too_many"),
        param(["--pattern", "wraparound"], "Pattern 'wraparound' is not supported by hlrc[12,4]", id="wraparound_on_hlrc"),
        param(["--pattern", "random:1", "--trials", "-2"], "trials must be non-negative", id="trials"),
    ],
)
def test_simulate_errors(tmp_path: Path, args: List[str], expected: str) -> None:
    directory = _constructed(tmp_path)
    code, stderr = run_with_error(["simulate", "--in", str(directory)] + args)
    assert code == 1
    assert expected in stderr


@mark.parametrize(
    "value,expected",
    [
        param("lots", "LOCUS_MAX_ENUM='lots' is not an integer", id="not_int"),
        param("0", "LOCUS_MAX_ENUM=0 must be positive", id="zero"),
    ],
)
def test_bad_max_enum_env(tmp_path: Path, value: str, expected: str) -> None:
    directory = _constructed(tmp_path)
    code, stderr = run_with_error(["certify", "--in", str(directory)], env=dict(os.environ, LOCUS_MAX_ENUM=value))
    assert code == 1
    assert expected in stderr


def test_full_error(tmp_path: Path) -> None:
    env = dict(os.environ, LOCUS_FULL_ERROR="1")
    code, stderr = run_with_error(["certify", "--in", str(tmp_path)], env=env)
    assert code == 1
    assert "Traceback" in stderr
    assert "DescriptorError" in stderr
    assert TRACE_HINT not in stderr
