"""Experiment configuration: JSON text, validation, and the live objects it describes.

Exact numbers stay strings from end to end ("2/3", "1/4+2θ").
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from typing import Any, Dict, List

from ..exact import parse_rotation
from ..symbolic.shifts import shift_from_dict, transitive_stream
from ..symbolic.streams import (ExplicitPrefix, LadderStream, SubstitutionFixedPoint, periodic,
                                shift_stream)
from ..symbolic.words import Alphabet, AlphabetError, as_word
from ..systems.family import FunctionFamily, GeneralizedIFS
from ..systems.maps import map_from_dict
from ..systems.spaces import space_from_dict

SCHEMA = "ifsbench/1"
TOP_KEYS = {"schema", "name", "alphabet", "subshift", "space", "maps", "streams", "points",
            "seed", "tasks"}


class ConfigError(ValueError):
    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ExperimentConfig:
    data: Dict[str, Any]

    @property
    def name(self) -> str:
        return self.data.get("name", "experiment")

    @property
    def seed(self) -> int:
        return int(self.data.get("seed", 0))

    @property
    def tasks(self) -> List[dict]:
        return self.data.get("tasks", [])

    def __eq__(self, other):
        return isinstance(other, ExperimentConfig) and self.data == other.data

    def with_seed(self, seed: int) -> "ExperimentConfig":
        d = copy.deepcopy(self.data)
        d["seed"] = int(seed)
        return ExperimentConfig(d)


def serialize_config(config: ExperimentConfig) -> str:
    return json.dumps(config.data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"not valid JSON: {exc}"]) from None
    return config_from_dict(data)


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError(["config must be a JSON object"])
    data = copy.deepcopy(data)
    data.setdefault("schema", SCHEMA)
    data.setdefault("seed", 0)
    data.setdefault("streams", {})
    data.setdefault("points", {})
    data.setdefault("tasks", [])
    errors = validate_config(data)
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(data)


# -- building blocks -----------------------------------------------------------

def build_stream(spec: dict, alphabet: Alphabet, shift_spec: dict = None):
    kind = spec.get("type")
    if kind == "periodic":
        return periodic(alphabet.check(as_word(spec["period"])),
                        alphabet.check(as_word(spec.get("preperiod", ""))))
    if kind == "explicit":
        return ExplicitPrefix(alphabet.check(as_word(spec["word"])), spec.get("horizon"))
    if kind == "ladder":
        pattern = [(int(a), int(r)) for a, r in spec["pattern"]]
        alphabet.check([a for a, _ in pattern])
        return LadderStream(pattern)
    if kind in ("substitution", "morse"):
        rules = spec.get("rules", {"0": "01", "1": "10"})
        rules = {int(a): alphabet.check(as_word(w)) for a, w in rules.items()}
        alphabet.check(list(rules))
        return SubstitutionFixedPoint(rules, int(spec.get("seed", 0)))
    if kind == "transitive":
        shift = shift_from_dict(spec.get("subshift", shift_spec))
        return transitive_stream(shift)
    if kind == "shifted":
        return shift_stream(build_stream(spec["base"], alphabet, shift_spec), int(spec["by"]))
    raise ValueError(f"unknown stream type {kind!r}")


def _shift_spec(data: dict, override: dict = None) -> dict:
    spec = dict(override or data.get("subshift") or {"type": "full"})
    if spec.get("type") != "morse-cover":
        spec.setdefault("alphabet", data.get("alphabet"))
    return spec


def validate_config(data: dict) -> List[str]:
    errors = []
    if data.get("schema") != SCHEMA:
        errors.append(f"schema: expected {SCHEMA!r}, got {data.get('schema')!r}")
    for key in data:
        if key not in TOP_KEYS:
            errors.append(f"{key}: unknown top-level field")
    k = data.get("alphabet")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        errors.append("alphabet: must be a positive integer")
        return errors
    alphabet = Alphabet(k)
    try:
        shift = shift_from_dict(_shift_spec(data))
        if getattr(shift, "alphabet", alphabet).size != k:
            errors.append("subshift.alphabet: differs from the config alphabet")
    except (ValueError, KeyError, TypeError, AlphabetError) as exc:
        errors.append(f"subshift: {exc}")
    try:
        space = space_from_dict(data.get("space", {}))
    except (ValueError, KeyError, TypeError) as exc:
        errors.append(f"space: {exc}")
        space = None
    maps = data.get("maps", {})
    if not isinstance(maps, dict):
        errors.append("maps: must map symbols to map specs")
        maps = {}
    for a, m in maps.items():
        try:
            if not a.isdigit() or int(a) not in alphabet:
                errors.append(f"maps.{a}: symbol {a} is outside the alphabet of size {k}")
                continue
            map_from_dict(m)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(f"maps.{a}: {exc}")
    missing = [a for a in alphabet.symbols if str(a) not in maps]
    if missing:
        errors.append(f"maps: no map for symbols {missing}")
    if not errors and space is not None:
        try:
            fam = FunctionFamily.from_dict({"alphabet": k, "maps": maps})
            GeneralizedIFS(space, fam, shift)
        except (ValueError, TypeError) as exc:
            errors.append(f"maps: {exc}")
    for name, spec in data.get("streams", {}).items():
        try:
            _check_stream_spec(spec, alphabet)
        except AlphabetError as exc:
            errors.append(f"streams.{name}: symbol out of alphabet ({exc})")
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(f"streams.{name}: {exc}")
    if space is not None:
        for name, text in data.get("points", {}).items():
            try:
                space.parse_point(str(text))
            except (ValueError, TypeError) as exc:
                errors.append(f"points.{name}: malformed point {text!r} ({exc})")
    from .ops import OPS

    for i, task in enumerate(data.get("tasks", [])):
        if not isinstance(task, dict) or task.get("op") not in OPS:
            errors.append(f"tasks[{i}].op: unknown operation {task.get('op') if isinstance(task, dict) else task!r}")
            continue
        for ref in ("stream", "t", "sigma"):
            val = task.get("params", {}).get(ref)
            if isinstance(val, str) and val not in data.get("streams", {}):
                errors.append(f"tasks[{i}].params.{ref}: unknown stream {val!r}")
        exp = task.get("expect")
        if exp is not None and exp not in ("pass", "fail", "inconclusive", "error"):
            errors.append(f"tasks[{i}].expect: must be pass, fail, inconclusive or error")
    return errors


def _check_stream_spec(spec: dict, alphabet: Alphabet):
    kind = spec.get("type")
    if kind == "periodic":
        alphabet.check(as_word(spec["period"]))
        alphabet.check(as_word(spec.get("preperiod", "")))
        if not as_word(spec["period"]):
            raise ValueError("period must be non-empty")
    elif kind == "explicit":
        alphabet.check(as_word(spec["word"]))
    elif kind == "ladder":
        alphabet.check([int(a) for a, _ in spec["pattern"]])
    elif kind in ("substitution", "morse"):
        for a, w in spec.get("rules", {"0": "01", "1": "10"}).items():
            alphabet.check([int(a)])
            alphabet.check(as_word(w))
    elif kind == "shifted":
        _check_stream_spec(spec["base"], alphabet)
        if int(spec["by"]) < 0:
            raise ValueError("shift must be non-negative")
    elif kind != "transitive":
        raise ValueError(f"unknown stream type {kind!r}")


class Context:
    """Live objects for one task; task-level ``subshift``/``maps`` override the config's."""

    def __init__(self, config: ExperimentConfig, task: dict = None):
        data = config.data
        task = task or {}
        self.data = data
        self.alphabet = Alphabet(int(task.get("alphabet", data["alphabet"])))
        self.shift_spec = _shift_spec(dict(data, alphabet=self.alphabet.size), task.get("subshift"))
        self.shift = shift_from_dict(self.shift_spec)
        self.space = space_from_dict(data.get("space", {}))
        maps = task.get("maps", data["maps"])
        self.family = FunctionFamily.from_dict({"alphabet": self.alphabet.size, "maps": maps})
        self.ifs = GeneralizedIFS(self.space, self.family, self.shift)
        self._streams = {}

    def stream(self, ref):
        if isinstance(ref, dict):
            return build_stream(ref, self.alphabet, self.shift_spec)
        if ref not in self._streams:
            self._streams[ref] = build_stream(self.data["streams"][ref], self.alphabet, self.shift_spec)
        return self._streams[ref]

    def point(self, ref):
        text = self.data.get("points", {}).get(ref, ref)
        return self.space.parse_point(str(text))
