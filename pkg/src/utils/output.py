import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from .config import config
from .logger import logger


def _version() -> str:
    from .. import __version__
    return __version__


def run_metadata(command: Optional[List[str]] = None) -> Dict[str, Any]:
    return {
        "version": _version(),
        "config": config.as_dict(),
        "command": command or [],
    }


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True)


def write_json(path, payload: Dict[str, Any], command: Optional[List[str]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = dict(payload)
    body.setdefault("meta", run_metadata(command))
    path.write_text(dumps(body) + "\n")
    logger.info(f"Wrote {path}")
    return path


def write_csv(path, frame: pd.DataFrame, command: Optional[List[str]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    sidecar = path.with_suffix(".meta.json")
    sidecar.write_text(dumps({"columns": list(frame.columns), "rows": len(frame),
                              "meta": run_metadata(command)}) + "\n")
    logger.info(f"Wrote {path} ({len(frame)} rows)")
    return path
