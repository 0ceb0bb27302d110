"""Verdict reports shared by every checker and transfer algorithm."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..exact import RotationCoordinate, as_fraction, format_rotation

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
VERDICTS = (PASS, FAIL, INCONCLUSIVE)


def as_tolerance(eps) -> Fraction:
    """Tolerances are exact; floats are read through their shortest repr (0.011 -> 11/1000)."""
    if isinstance(eps, float):
        return Fraction(repr(eps))
    return as_fraction(eps)


def jsonable(value: Any):
    if isinstance(value, RotationCoordinate):
        return format_rotation(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, float):
        return value if value == value and abs(value) != float("inf") else str(value)
    return value


@dataclass
class PropertyReport:
    name: str
    verdict: str
    witness: Optional[Dict[str, Any]] = None
    parameters: Dict[str, Any] = field(default_factory=dict)
    horizon_limited: bool = False
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "witness": jsonable(self.witness),
                "parameters": jsonable(self.parameters), "horizon_limited": self.horizon_limited,
                "notes": list(self.notes)}

    @classmethod
    def from_dict(cls, data: dict) -> "PropertyReport":
        return cls(data["name"], data["verdict"], data.get("witness"), dict(data.get("parameters", {})),
                   bool(data.get("horizon_limited", False)), list(data.get("notes", [])))

    def summary(self) -> str:
        tag = " [horizon-limited]" if self.horizon_limited else ""
        return f"{self.verdict.upper()} {self.name}{tag}"
