import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

load_dotenv()

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config.yaml"


class Config:
    def __init__(self, config_path: Optional[str] = None):
        self.path = Path(config_path or os.getenv("MOEBIUS_CONFIG") or DEFAULT_CONFIG_PATH)
        with open(self.path, 'r') as f:
            self.config = yaml.safe_load(f)

        self._resolve_env_vars(self.config)

    def _resolve_env_vars(self, d: Dict[str, Any]) -> None:
        for key, value in d.items():
            if isinstance(value, dict):
                self._resolve_env_vars(value)
            elif isinstance(value, str) and value.startswith("${") and value.endswith("}"):
                env_var = value[2:-1]
                d[key] = os.getenv(env_var, "")

    def get(self, *keys):
        result = self.config
        for key in keys:
            result = result[key]
        return result

    def get_or(self, default, *keys):
        try:
            value = self.get(*keys)
        except (KeyError, TypeError):
            return default
        return default if value in (None, "") else value

    def set(self, value, *keys) -> None:
        node = self.config
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value

    def reload(self, config_path: Optional[str] = None) -> None:
        self.__init__(config_path or str(self.path))

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.config)

    def threads(self) -> int:
        raw = self.get_or(1, "runtime", "threads")
        try:
            return max(1, int(raw))
        except (TypeError, ValueError):
            return 1


config = Config()
