from typing import Any, Dict

from omegaconf import OmegaConf
from pytest import mark, param, raises

from locus._internal.jobs import compose_job_config, create_job, load_job_config, make_budget
from locus.conf import ConvJobConf
from locus.core.config_store import ConfigStore
from locus.errors import ConfigValidationError, MissingConfigException
from locus.test_utils.test_utils import config_path


def test_hlrc_defaults() -> None:
    cfg = load_job_config(config_path("hlrc_12_4.json"))
    assert cfg.kind == "hlrc"
    assert cfg.field.p == 13
    assert cfg.field.m == 1
    assert cfg.delta1 == 2
    assert list(cfg.r) == [2, 4]
    assert cfg.name == ""
    assert cfg.claims == {}
    assert cfg.budget.max_enumerations == 10**8
    assert cfg.budget.workers == 1


def test_yaml_config() -> None:
    cfg = load_job_config(config_path("conv_gf9.yaml"))
    assert cfg.kind == "conv"
    assert (cfg.field.p, cfg.field.m) == (3, 2)
    assert cfg.j_max is None
    assert cfg.window is None
    assert cfg.tailbiting
    assert not cfg.strict_information_set


@mark.parametrize(
    "name,kind",
    [
        param("hlrc_81_7.json", "HlrcJob", id="hlrc"),
        param("unbounded_q4.json", "HlrcUnboundedJob", id="unbounded"),
        param("conv_wraparound.json", "ConvJob", id="conv"),
        param("bicyclic_tiny.json", "BicyclicJob", id="bicyclic"),
    ],
)
def test_create_job(name: str, kind: str) -> None:
    job = create_job(load_job_config(config_path(name)))
    assert type(job).__name__ == kind
    assert job.certificate is None


@mark.parametrize(
    "raw,match",
    [
        param({"field": {"p": 13}}, "missing 'kind'", id="no_kind"),
        param({"kind": "reed-solomon"}, "unknown kind 'reed-solomon'", id="unknown_kind"),
        param({"kind": "conv", "field": {"p": 97}, "n": "four", "k": 1, "j": 7, "r": 1}, "four", id="wrong_type"),
        param({"kind": "bicyclic", "n": 4, "r": [1, 1], "delta": 4}, "field.p", id="missing_field"),
    ],
)
def test_compose_errors(raw: Dict[str, Any], match: str) -> None:
    with raises(ConfigValidationError, match=match):
        compose_job_config(raw)


def test_unknown_key() -> None:
    with raises(ConfigValidationError, match="locality"):
        load_job_config(config_path("bad_schema.json"))


def test_missing_value() -> None:
    with raises(ConfigValidationError, match=r"missing mandatory values \['j'\]") as e:
        load_job_config(config_path("missing_value.json"))
    assert e.value.path == "j"


def test_missing_file(tmp_path: Any) -> None:
    path = str(tmp_path / "nope.json")
    with raises(MissingConfigException, match="Config file not found") as e:
        load_job_config(path)
    assert e.value.missing_cfg_file == path


def test_unparsable_file(tmp_path: Any) -> None:
    path = tmp_path / "broken.yaml"
    path.write_text("kind: [conv\n", encoding="utf-8")
    with raises(ConfigValidationError, match="cannot parse config"):
        load_job_config(str(path))


def test_make_budget() -> None:
    cfg = load_job_config(config_path("hlrc_81_7.json"))
    budget = make_budget(cfg)
    assert budget.max_enumerations == 100000
    assert budget.max_patterns == 10**6
    assert make_budget(cfg, 42).max_enumerations == 42


def test_compose_accepts_dict_config() -> None:
    raw = OmegaConf.create({"kind": "hlrc", "field": {"p": 13}, "r": [2, 4], "nu": [4]})
    cfg = compose_job_config(raw)
    assert cfg.delta1 == 2
    assert cfg.nu == [4]


def test_config_store_lists_job_kinds() -> None:
    assert ConfigStore.instance().list("job") == ["bicyclic", "conv", "hlrc", "hlrc-unbounded"]


def test_config_store_load_is_a_copy() -> None:
    cs = ConfigStore.instance()
    node = cs.load("job/conv")
    assert node.schema is ConvJobConf
    assert node.provider == "locus"
    node.node.delta = 5
    assert cs.load("job/conv").node.delta == 2


def test_config_store_missing() -> None:
    with raises(MissingConfigException, match="Structured config not found job/rs"):
        ConfigStore.instance().load("job/rs")
    with raises(OSError, match="Path not found"):
        ConfigStore.instance().list("nope")


def test_config_store_store() -> None:
    ConfigStore.instance().store(group="job", name="extra", node=ConvJobConf, provider="test")
    assert "extra" in ConfigStore.instance().list("job")
