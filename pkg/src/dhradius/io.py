"""JSON serialization of systems and results, run manifests and atomic file output."""

from __future__ import annotations

import json
import os
import platform
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import scipy

from .system import DHSystem, PerturbationPair, RadiusResult

SCHEMA = "dhradius/1"


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_json(obj, name="matrix") -> np.ndarray:
    """Accept ``{"re": [[...]], "im": [[...]]}`` (``im`` optional) or a plain nested list."""
    if isinstance(obj, dict):
        if "re" not in obj:
            raise ValueError(f"{name}: missing 're' entry")
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValueError(f"{name}: 're' has shape {re.shape}, 'im' has shape {im.shape}")
        return re + 1j * im
    return np.asarray(obj, dtype=complex)


def system_to_dict(sys: DHSystem) -> dict:
    return {"n": sys.n, "J": matrix_to_json(sys.J), "R": matrix_to_json(sys.R), "Q": matrix_to_json(sys.Q)}


def system_from_dict(d: dict) -> DHSystem:
    if not isinstance(d, dict):
        raise ValueError("system file must hold a JSON object")
    for key in ("J", "R"):
        if key not in d:
            raise ValueError(f"system is missing '{key}'")
    J = matrix_from_json(d["J"], "J")
    R = matrix_from_json(d["R"], "R")
    Q = matrix_from_json(d["Q"], "Q") if d.get("Q") is not None else None
    sys = DHSystem(J, R, Q)
    if "n" in d and int(d["n"]) != sys.n:
        raise ValueError(f"declared n = {d['n']} but matrices are {sys.n}x{sys.n}")
    return sys


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_system(path) -> DHSystem:
    return system_from_dict(read_json(path))


def load_matrix(path, key="A") -> np.ndarray:
    """Matrix stored either bare or under `key`."""
    d = read_json(path)
    if isinstance(d, dict) and key in d:
        d = d[key]
    return matrix_from_json(d, key)


def atomic_write_text(path, text: str) -> None:
    """Write `text` to `path` through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_system(sys: DHSystem, path) -> None:
    atomic_write_text(path, json.dumps(system_to_dict(sys), indent=1))


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, enums and complex numbers."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return matrix_to_json(obj) if obj.ndim == 2 else {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def pair_to_dict(p: PerturbationPair) -> dict:
    return {"deltaJ": matrix_to_json(p.deltaJ), "deltaR": matrix_to_json(p.deltaR), "joint_norm": p.joint_norm}


def pair_from_dict(d: dict) -> PerturbationPair:
    return PerturbationPair(matrix_from_json(d["deltaJ"], "deltaJ"), matrix_from_json(d["deltaR"], "deltaR"))


def result_to_dict(res: RadiusResult) -> dict:
    out = {
        "class": res.kind.value,
        "value": res.value,
        "omega_star": res.omega_star,
        "is_exact": res.is_exact,
        "diagnostics": res.diagnostics,
    }
    if res.x_star is not None:
        out["x_star"] = {"re": res.x_star.real.tolist(), "im": res.x_star.imag.tolist()}
    if res.certificate is not None:
        out["certificate"] = pair_to_dict(res.certificate)
    return to_jsonable(out)


@dataclass
class RunManifest:
    command: str
    input_path: Optional[str] = None
    options: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    created: str = field(default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%S%z"))

    def as_dict(self) -> dict:
        from . import __version__

        d = asdict(self)
        d["schema"] = SCHEMA
        d["versions"] = {
            "dhradius": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        }
        return to_jsonable(d)


def dump_payload(payload: dict, manifest: RunManifest) -> str:
    body: dict[str, Any] = {"schema": SCHEMA}
    body.update(to_jsonable(payload))
    body["manifest"] = manifest.as_dict()
    return json.dumps(body, indent=1)
