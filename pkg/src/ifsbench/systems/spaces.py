"""Compact phase spaces: the unit interval, the circle and finite metric spaces.

Each space knows three representations of its points: the exact one used
for verdicts (Fraction, RotationCoordinate or a label), a float array used
by vectorized grid searches, and a string form used in configs and reports.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Sequence, Union

import numpy as np

from ..exact import DEFAULT_THETA, RotationCoordinate, as_fraction, format_rotation, parse_rotation


class PhaseSpace:
    diameter: Fraction
    name = "space"

    def distance(self, x, y):
        raise NotImplementedError

    def grid(self, resolution: int) -> List:
        raise NotImplementedError

    def to_float(self, x) -> float:
        raise NotImplementedError

    def float_distance(self, a: np.ndarray, b) -> np.ndarray:
        raise NotImplementedError

    def parse_point(self, text):
        raise NotImplementedError

    def format_point(self, x) -> str:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def grid_spacing(self, resolution: int) -> Fraction:
        """Largest distance from a space point to the nearest grid point."""
        return Fraction(1, 2 * resolution)

    def describe(self) -> dict:
        raise NotImplementedError


class Interval(PhaseSpace):
    """``[0, 1]`` with ``|x - y|``; points are Fractions."""

    name = "interval"
    diameter = Fraction(1)

    def distance(self, x, y):
        return abs(as_fraction(x) - as_fraction(y))

    def grid(self, resolution):
        return [Fraction(k, resolution) for k in range(resolution + 1)]

    def grid_array(self, resolution):
        return np.arange(resolution + 1, dtype=float) / resolution

    def to_float(self, x):
        return float(x)

    def float_distance(self, a, b):
        return np.abs(a - b)

    def parse_point(self, text):
        x = as_fraction(text) if not isinstance(text, (int, Fraction)) else Fraction(text)
        if not 0 <= x <= 1:
            raise ValueError(f"{text} is outside [0, 1]")
        return x

    def format_point(self, x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def contains(self, x):
        return isinstance(x, (int, Fraction)) and 0 <= x <= 1

    def describe(self):
        return {"type": "interval"}


class Circle(PhaseSpace):
    """``R/Z`` with the arc metric; points are RotationCoordinates.

    ``theta`` is only the numeric stand-in for the symbolic irrational.
    """

    name = "circle"
    diameter = Fraction(1, 2)

    def __init__(self, theta: float = DEFAULT_THETA):
        self.theta = float(theta)

    def point(self, x) -> RotationCoordinate:
        if isinstance(x, RotationCoordinate):
            return x
        if isinstance(x, str):
            return parse_rotation(x)
        return RotationCoordinate.rational(x)

    def distance(self, x, y):
        x, y = self.point(x), self.point(y)
        if x.c == y.c:
            d = abs(x.q - y.q)
            return min(d, 1 - d)
        d = abs(x.to_float(self.theta) - y.to_float(self.theta))
        return min(d, 1.0 - d)

    def grid(self, resolution):
        return [RotationCoordinate(Fraction(k, resolution)) for k in range(resolution)]

    def grid_array(self, resolution):
        return np.arange(resolution, dtype=float) / resolution

    def to_float(self, x):
        return self.point(x).to_float(self.theta)

    def float_distance(self, a, b):
        d = np.abs(a - b) % 1.0
        return np.minimum(d, 1.0 - d)

    def parse_point(self, text):
        return self.point(text)

    def format_point(self, x):
        return format_rotation(self.point(x))

    def contains(self, x):
        return isinstance(x, RotationCoordinate)

    def describe(self):
        return {"type": "circle", "theta": repr(self.theta)}


class FiniteDiscrete(PhaseSpace):
    """Finitely many labeled points with a metric table (default: discrete metric)."""

    name = "finite"

    def __init__(self, labels: Sequence[str], metric=None):
        self.labels = tuple(str(a) for a in labels)
        if len(set(self.labels)) != len(self.labels) or not self.labels:
            raise ValueError("labels must be distinct and non-empty")
        self.index: Dict[str, int] = {a: i for i, a in enumerate(self.labels)}
        n = len(self.labels)
        if metric is None:
            metric = [[0 if i == j else 1 for j in range(n)] for i in range(n)]
        self.metric = [[as_fraction(v) if not isinstance(v, Fraction) else v for v in row]
                       for row in metric]
        self._check_metric()
        self.diameter = max(max(row) for row in self.metric)
        self._table = np.array([[float(v) for v in row] for row in self.metric])

    def _check_metric(self):
        n = len(self.labels)
        m = self.metric
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError("metric table must be square and match the labels")
        for i, j in itertools.product(range(n), repeat=2):
            if m[i][j] != m[j][i] or m[i][j] < 0 or (m[i][j] == 0) != (i == j):
                raise ValueError("metric table violates symmetry or identity")
        for i, j, k in itertools.product(range(n), repeat=3):
            if m[i][k] > m[i][j] + m[j][k]:
                raise ValueError("metric table violates the triangle inequality")

    def distance(self, x, y):
        return self.metric[self.index[x]][self.index[y]]

    def grid(self, resolution=None):
        return list(self.labels)

    def grid_array(self, resolution=None):
        return np.arange(len(self.labels), dtype=float)

    def grid_spacing(self, resolution=None):
        return Fraction(0)

    def to_float(self, x):
        return float(self.index[x])

    def float_distance(self, a, b):
        a = np.asarray(a, dtype=int)
        b = np.asarray(b, dtype=int)
        return self._table[a, b]

    def parse_point(self, text):
        if text not in self.index:
            raise ValueError(f"{text!r} is not a point of the space")
        return text

    def format_point(self, x):
        return str(x)

    def contains(self, x):
        return x in self.index

    def describe(self):
        return {"type": "finite", "points": list(self.labels),
                "metric": [[str(v) for v in row] for row in self.metric]}


Space = Union[Interval, Circle, FiniteDiscrete]


def space_from_dict(data: dict) -> PhaseSpace:
    kind = data.get("type")
    if kind == "interval":
        return Interval()
    if kind == "circle":
        return Circle(float(data.get("theta", DEFAULT_THETA)))
    if kind == "finite":
        return FiniteDiscrete(data["points"], data.get("metric"))
    raise ValueError(f"unknown phase space type {kind!r}")

