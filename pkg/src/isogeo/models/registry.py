"""Model registry: built-in and user-supplied isoparametric hypersurface models."""
from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

from ..errors import InputError, ModelConsistencyError, ModelLookupError

DATA_DIR = Path(__file__).resolve().parent
MODEL_DIR_ENV = "ISOGEO_MODEL_DIR"
KINDS = ("explicit", "level-set", "tabulated")


@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: int
    g: int
    multiplicities: tuple[int, ...]
    kind: str
    params: dict = field(default_factory=dict, compare=False, hash=False)
    source: str | None = None
    digest: str | None = None

    def __post_init__(self):
        validate_spec(self)

    @property
    def has_geometry(self) -> bool:
        return self.kind != "tabulated"

    @cached_property
    def surface(self):
        from .geometry import build_surface

        return build_surface(self)

    def summary(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "n": self.n,
            "g": self.g,
            "multiplicities": list(self.multiplicities),
        }
        if self.source:
            out["source"] = Path(self.source).name
        return out


def validate_spec(spec: ModelSpec) -> None:
    if spec.kind not in KINDS:
        raise ModelConsistencyError(f"{spec.name}: unknown kind {spec.kind!r}")
    if spec.g not in (1, 2, 3, 4, 6):
        raise ModelConsistencyError(f"{spec.name}: g={spec.g} is not a possible number of principal curvatures")
    m = spec.multiplicities
    if len(m) != spec.g or any(k < 1 for k in m):
        raise ModelConsistencyError(f"{spec.name}: need {spec.g} positive multiplicities, got {m}")
    if sum(m) != spec.n:
        raise ModelConsistencyError(f"{spec.name}: multiplicities {m} do not sum to n={spec.n}")
    if any(m[i] != m[(i + 2) % spec.g] for i in range(spec.g)):
        raise ModelConsistencyError(f"{spec.name}: multiplicities {m} violate m_i = m_(i+2)")
    if spec.kind == "tabulated" and (spec.g != 6 or len(set(m)) != 1 or m[0] not in (1, 2)):
        raise ModelConsistencyError(f"{spec.name}: tabulated models need g=6 and m in {{1, 2}}")


# -- built-in explicit models --------------------------------------------------

def _sphere(n: int = 2, theta: float = math.pi / 2) -> ModelSpec:
    n, theta = int(n), float(theta)
    if n < 1 or not 0 < theta < math.pi:
        raise InputError(f"g1-sphere needs n >= 1 and 0 < theta < pi, got n={n}, theta={theta}")
    return ModelSpec("g1-sphere", n, 1, (n,), "explicit", {"theta": theta})


def _product(d1: int = 1, d2: int = 1, theta: float = math.pi / 4) -> ModelSpec:
    d1, d2, theta = int(d1), int(d2), float(theta)
    if d1 < 1 or d2 < 1 or not 0 < theta < math.pi / 2:
        raise InputError(f"g2-product needs d1, d2 >= 1 and 0 < theta < pi/2, got {d1}, {d2}, {theta}")
    # distributions ordered by descending principal curvature: the d2-sphere factor first
    return ModelSpec("g2-product", d1 + d2, 2, (d2, d1), "explicit", {"d1": d1, "d2": d2, "theta": theta})


_EXPLICIT = {"g1-sphere": _sphere, "g2-product": _product}


# -- data files ----------------------------------------------------------------

def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_model_file(path: str | os.PathLike) -> ModelSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelConsistencyError(f"cannot read model file {path}: {exc}") from exc
    try:
        name, n, g = data["name"], int(data["n"]), int(data["g"])
        mult = tuple(int(k) for k in data["multiplicities"])
        kind = data["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelConsistencyError(f"model file {path} lacks required field: {exc}") from exc
    params: dict[str, Any]
    if kind == "level-set":
        if "poly" not in data:
            raise ModelConsistencyError(f"level-set model file {path} has no 'poly'")
        level = float(data.get("level", 0.0))
        if not -1 < level < 1:
            raise ModelConsistencyError(f"{name}: level {level} outside (-1, 1)")
        params = {"poly": data["poly"], "level": level}
    elif kind == "tabulated":
        if "alpha_components" not in data:
            raise ModelConsistencyError(f"tabulated model file {path} has no 'alpha_components'")
        params = {"alpha_components": data["alpha_components"], "m": int(data.get("m", mult[0]))}
    else:
        raise ModelConsistencyError(f"model file {path}: kind {kind!r} cannot be loaded from data")
    return ModelSpec(name, n, g, mult, kind, params, source=str(path), digest=_digest(path))


def _builtin_files() -> dict[str, Path]:
    out = {}
    for path in sorted(DATA_DIR.glob("*.json")):
        out[json.loads(path.read_text())["name"]] = path
    return out


def _user_files() -> dict[str, Path]:
    root = os.environ.get(MODEL_DIR_ENV)
    if not root or not Path(root).is_dir():
        return {}
    out = {}
    for path in sorted(Path(root).glob("*.json")):
        try:
            out[json.loads(path.read_text())["name"]] = path
        except (OSError, json.JSONDecodeError, KeyError, TypeError):
            continue  # unreadable files are reported when requested by path, not listed
    return out


def _all_files() -> dict[str, Path]:
    files = _builtin_files()
    for name, path in _user_files().items():
        files.setdefault(name, path)
    return files


def list_models() -> list[ModelSpec]:
    names = sorted(set(_EXPLICIT) | set(_all_files()))
    return [registry_get(name) for name in names]


def model_names() -> list[str]:
    return sorted(set(_EXPLICIT) | set(_all_files()))


_CACHE: dict[tuple, ModelSpec] = {}


def registry_get(name: str, **params) -> ModelSpec:
    if name in _EXPLICIT:
        key = (name, tuple(sorted(params.items())))
        if key not in _CACHE:
            _CACHE[key] = _EXPLICIT[name](**params)
        return _CACHE[key]
    files = _all_files()
    if name not in files:
        raise ModelLookupError(name, model_names())
    if params:
        raise InputError(f"model {name!r} takes no parameters")
    path = files[name]
    key = (name, str(path), _digest(path))
    if key not in _CACHE:
        _CACHE[key] = load_model_file(path)
    return _CACHE[key]


def data_hashes() -> dict[str, str]:
    return {path.name: _digest(path) for path in sorted(_builtin_files().values())}
