import copy
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from omegaconf import DictConfig, OmegaConf

from locus.core.singleton import Singleton
from locus.errors import MissingConfigException


@dataclass
class ConfigNode:
    name: str
    node: DictConfig
    group: Optional[str]
    schema: Any
    provider: Optional[str]


class ConfigStore(metaclass=Singleton):
    @staticmethod
    def instance(*args: Any, **kwargs: Any) -> "ConfigStore":
        return Singleton.instance(ConfigStore, *args, **kwargs)  # type: ignore

    repo: Dict[str, Any]

    def __init__(self) -> None:
        self.repo = {}

    def store(
        self,
        name: str,
        node: Any,
        group: Optional[str] = None,
        provider: Optional[str] = None,
    ) -> None:
        """
        Stores a config node into the repository
        :param name: config name, for job schemas this is the job kind
        :param node: structured config class (or instance)
        :param group: config group, subgroup separator is '/'
        :param provider: the name of the module providing this config.
            Helps debugging.
        """
        cfg = OmegaConf.structured(node)
        cur = self.repo
        if group is not None:
            for d in group.split("/"):
                if d not in cur:
                    cur[d] = {}
                cur = cur[d]
        assert isinstance(cur, dict)
        cur[name] = ConfigNode(name=name, node=cfg, group=group, schema=node, provider=provider)

    def load(self, config_path: str) -> ConfigNode:
        idx = config_path.rfind("/")
        path, name = (config_path[0:idx], config_path[idx + 1 :]) if idx != -1 else ("", config_path)
        d = self._open(path)
        if d is None or not isinstance(d, dict) or name not in d:
            options = self.list(path) if isinstance(d, dict) else []
            raise MissingConfigException(f"Structured config not found {config_path}, options : {options}", missing_cfg_file=config_path)
        ret = copy.copy(d[name])
        assert isinstance(ret, ConfigNode)
        # copy to avoid mutations to config effecting subsequent calls
        ret.node = copy.deepcopy(ret.node)
        return ret

    def list(self, path: str) -> List[str]:
        d = self._open(path)
        if d is None:
            raise OSError(f"Path not found {path}")

        if not isinstance(d, dict):
            raise OSError(f"Path points to a file : {path}")

        return sorted(d.keys())

    def _open(self, path: str) -> Any:
        d: Any = self.repo
        for frag in path.split("/"):
            if frag == "":
                continue
            if frag in d:
                d = d[frag]
            else:
                return None
        return d
