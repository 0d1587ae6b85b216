import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..utils.config import config
from ..utils.errors import InputError, InvariantError
from ..utils.logger import logger
from ..utils.output import dumps, run_metadata
from .fourier_curve import FourierCurve


def curve_to_dict(curve: FourierCurve) -> Dict[str, Any]:
    entries = []
    for k in range(-curve.max_freq, curve.max_freq + 1):
        c = curve.coefficient(k)
        entries.append({"k": k, "re": c.real.tolist(), "im": c.imag.tolist()})
    return {"dimension": curve.dim, "max_freq": curve.max_freq, "coefficients": entries}


def curve_from_dict(payload: Dict[str, Any]) -> FourierCurve:
    try:
        dim = int(payload["dimension"])
        max_freq = int(payload["max_freq"])
        entries = payload["coefficients"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed curve document: {e}")
    if dim < 1 or max_freq < 1:
        raise InputError(f"dimension and max_freq must be >= 1, got {dim}, {max_freq}")

    coeffs = np.zeros((2 * max_freq + 1, dim), dtype=complex)
    seen = set()
    for entry in entries:
        k = int(entry["k"])
        if abs(k) > max_freq:
            raise InputError(f"coefficient k={k} outside band {max_freq}")
        if k in seen:
            raise InputError(f"duplicate coefficient k={k}")
        re, im = np.asarray(entry["re"], dtype=float), np.asarray(entry["im"], dtype=float)
        if re.shape != (dim,) or im.shape != (dim,):
            raise InputError(f"coefficient k={k} has wrong length (expected {dim})")
        coeffs[k + max_freq] = re + 1j * im
        seen.add(k)
    missing = sorted(set(range(-max_freq, max_freq + 1)) - seen)
    if missing:
        raise InputError(f"missing coefficients for k={missing}")

    tol = config.get_or(1e-12, "curves", "reality_tol")
    residue = float(np.max(np.abs(coeffs[::-1] - np.conj(coeffs))))
    if residue > tol:
        raise InvariantError("reality constraint violated in curve file", {"residue": residue, "tolerance": tol})
    return FourierCurve(coeffs)


def read_curve(path) -> FourierCurve:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read curve file {path}: {e}")
    curve = curve_from_dict(payload)
    logger.debug(f"Loaded {curve} from {path}")
    return curve


def write_curve(curve: FourierCurve, path, command: Optional[List[str]] = None) -> Path:
    """Coefficient table plus the run metadata; readers ignore the meta block."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = curve_to_dict(curve)
    payload["meta"] = run_metadata(command)
    path.write_text(dumps(payload) + "\n")
    return path
