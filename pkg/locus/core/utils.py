import json
import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

from omegaconf import DictConfig, OmegaConf

log = logging.getLogger(__name__)

_LOGGING_DIR = Path(__file__).parent.parent / "conf" / "logging"


def load_log_config(name: str = "default") -> DictConfig:
    cfg = OmegaConf.load(_LOGGING_DIR / f"{name}.yaml")
    assert isinstance(cfg, DictConfig)
    return cfg


def configure_log(
    log_config: Optional[DictConfig],
    verbose_config: Union[bool, str, Sequence[str]] = False,
) -> None:
    assert isinstance(verbose_config, (bool, str)) or OmegaConf.is_list(verbose_config) or isinstance(verbose_config, (list, tuple))
    if log_config is not None:
        conf: Dict[str, Any] = OmegaConf.to_container(  # type: ignore
            log_config, resolve=True
        )
        if conf["root"] is not None:
            logging.config.dictConfig(conf)
    else:
        # default logging to stderr, stdout is reserved for csv streams
        root = logging.getLogger()
        root.setLevel(logging.INFO)
        handler = logging.StreamHandler(sys.stderr)
        formatter = logging.Formatter("[%(asctime)s][%(name)s][%(levelname)s] - %(message)s")
        handler.setFormatter(formatter)
        root.addHandler(handler)
    if isinstance(verbose_config, bool):
        if verbose_config:
            logging.getLogger().setLevel(logging.DEBUG)
    else:
        verbose_list = [verbose_config] if isinstance(verbose_config, str) else list(verbose_config)
        for logger in verbose_list:
            logging.getLogger(logger).setLevel(logging.DEBUG)


def save_config(cfg: DictConfig, filename: str, output_dir: Path) -> None:
    output_dir.mkdir(parents=True, exist_ok=True)
    with open(str(output_dir / filename), "w", encoding="utf-8") as file:
        file.write(OmegaConf.to_yaml(cfg))


def save_json(obj: Any, filename: str, output_dir: Path) -> Path:
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / filename
    path.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    log.debug(f"Wrote {path}")
    return path


def load_json(path: Path) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)
