"""Exact self-maps of the phase spaces.

Three families are supported: affine circle maps ``x -> n*x + alpha``
(rotations when ``n = 1``, the doubling map / ``z -> z^2`` in angle
coordinates when ``n = 2``), piecewise affine maps of ``[0, 1]`` and
arbitrary maps of a finite space.  Every map evaluates exactly on exact
points, vectorized on float arrays, and can list preimages and push
interval unions forward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exact import DEFAULT_THETA, RotationCoordinate, as_fraction, format_rotation, parse_rotation
from .intervals import IntervalUnion, Piece, _make


class NotSurjectiveError(ValueError):
    pass


class MapSpec:
    space_kind = "any"

    def __call__(self, x):
        raise NotImplementedError

    def apply_array(self, values: np.ndarray, theta: float = DEFAULT_THETA) -> np.ndarray:
        raise NotImplementedError

    def preimages(self, y) -> list:
        raise NotImplementedError

    def image(self, u: IntervalUnion, theta: float = DEFAULT_THETA) -> IntervalUnion:
        raise TypeError(f"{type(self).__name__} does not act on intervals")

    @property
    def surjective(self) -> bool:
        raise NotImplementedError

    @property
    def injective(self) -> bool:
        raise NotImplementedError

    @property
    def lipschitz(self) -> float:
        return math.inf

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class CircleAffine(MapSpec):
    """``x -> multiplier * x + rotation (mod 1)`` on the circle."""

    multiplier: int
    rotation: RotationCoordinate = RotationCoordinate(Fraction(0))
    space_kind = "circle"

    def __post_init__(self):
        if not isinstance(self.multiplier, int) or isinstance(self.multiplier, bool):
            raise TypeError("multiplier must be an integer")
        rot = self.rotation
        if isinstance(rot, str):
            rot = parse_rotation(rot)
        elif not isinstance(rot, RotationCoordinate):
            rot = RotationCoordinate.rational(rot)
        object.__setattr__(self, "rotation", rot)

    def __call__(self, x):
        if not isinstance(x, RotationCoordinate):
            x = RotationCoordinate.rational(x)
        return x.scale(self.multiplier) + self.rotation

    def apply_array(self, values, theta=DEFAULT_THETA):
        return (self.multiplier * values + self.rotation.to_float(theta)) % 1.0

    def preimages(self, y):
        n = self.multiplier
        if n == 0:
            raise NotSurjectiveError("a constant circle map has no finite preimage sets")
        if not isinstance(y, RotationCoordinate):
            y = RotationCoordinate.rational(y)
        d = y - self.rotation
        m = abs(n)
        pts = [RotationCoordinate((d.q + k) / n, d.c / n) for k in range(m)]
        return sorted(set(pts))

    def image(self, u, theta=DEFAULT_THETA):
        if not u.circle:
            raise TypeError("circle maps act on circle interval unions")
        n = self.multiplier
        exact = u.exact and self.rotation.is_rational
        alpha = self.rotation.q if self.rotation.is_rational else Fraction(self.rotation.to_float(theta))
        parts = []
        for p in u.pieces:
            if n == 0:
                parts.append(IntervalUnion.of_arc(alpha, Fraction(0), True, True, exact))
                continue
            if n > 0:
                start, lc, hc = n * p.lo + alpha, p.lo_closed, p.hi_closed
            else:
                start, lc, hc = n * p.hi + alpha, p.hi_closed, p.lo_closed
            parts.append(IntervalUnion.of_arc(start, abs(n) * p.length, lc, hc, exact))
        if not parts:
            return IntervalUnion([], circle=True, exact=exact)
        out = IntervalUnion.union_all(parts)
        out.exact = exact
        return out

    @property
    def surjective(self):
        return self.multiplier != 0

    @property
    def injective(self):
        return abs(self.multiplier) == 1

    @property
    def lipschitz(self):
        return float(abs(self.multiplier))

    def describe(self):
        return {"type": "circle-affine", "multiplier": self.multiplier,
                "rotation": format_rotation(self.rotation)}


def rotation(alpha) -> CircleAffine:
    return CircleAffine(1, alpha)


def doubling() -> CircleAffine:
    return CircleAffine(2)


@dataclass(frozen=True)
class PiecewiseAffine(MapSpec):
    """Affine on each ``[b_i, b_{i+1})`` (last piece closed), optionally reduced mod 1."""

    breakpoints: Tuple[Fraction, ...]
    slopes: Tuple[Fraction, ...]
    offsets: Tuple[Fraction, ...]
    mod1: bool = False
    space_kind = "interval"

    def __post_init__(self):
        b = tuple(as_fraction(v) for v in self.breakpoints)
        s = tuple(as_fraction(v) for v in self.slopes)
        o = tuple(as_fraction(v) for v in self.offsets)
        if len(b) < 2 or b[0] != 0 or b[-1] != 1 or any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("breakpoints must increase from 0 to 1")
        if len(s) != len(b) - 1 or len(o) != len(b) - 1:
            raise ValueError("one slope and one offset per piece")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "slopes", s)
        object.__setattr__(self, "offsets", o)
        if not self.mod1:
            for i in range(len(s)):
                v = s[i] * b[i] + o[i]
                w = s[i] * b[i + 1] + o[i]
                if not (0 <= v <= 1 and 0 <= w <= 1):
                    raise ValueError("piece leaves [0, 1]; set mod1 or fix the offsets")
                if i + 1 < len(s) and w != s[i + 1] * b[i + 1] + o[i + 1]:
                    raise ValueError("piecewise affine map must be continuous unless mod1")

    def _piece(self, x: Fraction) -> int:
        b = self.breakpoints
        for i in range(len(b) - 1):
            if x < b[i + 1]:
                return i
        return len(b) - 2

    def _reduce(self, v):
        return v - math.floor(v) if self.mod1 else v

    def __call__(self, x):
        x = as_fraction(x)
        i = self._piece(x)
        return self._reduce(self.slopes[i] * x + self.offsets[i])

    def apply_array(self, values, theta=DEFAULT_THETA):
        b = np.array([float(v) for v in self.breakpoints[1:-1]])
        idx = np.searchsorted(b, values, side="right")
        s = np.array([float(v) for v in self.slopes])[idx]
        o = np.array([float(v) for v in self.offsets])[idx]
        out = s * values + o
        return out % 1.0 if self.mod1 else out

    def preimages(self, y):
        y = as_fraction(y)
        out = set()
        b = self.breakpoints
        for i, (s, o) in enumerate(zip(self.slopes, self.offsets)):
            lo, hi = b[i], b[i + 1]
            last = i == len(self.slopes) - 1
            if s == 0:
                if self._reduce(o) == y:
                    raise ValueError("flat piece: infinitely many preimages")
                continue
            vals = sorted([s * lo + o, s * hi + o])
            ks = range(math.floor(vals[0]) - 1, math.ceil(vals[1]) + 1) if self.mod1 else [0]
            for k in ks:
                x = (y + k - o) / s
                if lo <= x < hi or (last and x == hi):
                    if self(x) == y:
                        out.add(x)
        if not out:
            raise NotSurjectiveError(f"{y} is not in the image")
        return sorted(out)

    def image(self, u, theta=DEFAULT_THETA):
        if u.circle:
            raise TypeError("piecewise affine maps act on [0, 1]")
        b = self.breakpoints
        parts: List[Piece] = []
        for i, (s, o) in enumerate(zip(self.slopes, self.offsets)):
            dom = Piece(b[i], b[i + 1], True, i == len(self.slopes) - 1)
            for p in u.pieces:
                lo = max(p.lo, dom.lo)
                hi = min(p.hi, dom.hi)
                lc = (p.lo_closed if p.lo >= dom.lo else True) and (dom.lo_closed if dom.lo >= p.lo else True)
                hc = (p.hi_closed if p.hi <= dom.hi else True) and (dom.hi_closed if dom.hi <= p.hi else True)
                q = _make(lo, hi, lc, hc)
                if q is None:
                    continue
                a, c = s * q.lo + o, s * q.hi + o
                fa, fc = q.lo_closed, q.hi_closed
                if s < 0:
                    a, c, fa, fc = c, a, fc, fa
                if not self.mod1:
                    parts.append(_make(a, c, fa, fc))
                    continue
                for k in range(math.floor(a), math.floor(c) + 1):
                    lo2, hi2 = max(a, Fraction(k)), min(c, Fraction(k + 1))
                    lc2 = fa if lo2 == a else True
                    hc2 = (fc if hi2 == c else False) and hi2 < k + 1
                    piece = _make(lo2 - k, hi2 - k, lc2, hc2)
                    if piece is not None:
                        parts.append(piece)
        return IntervalUnion([p for p in parts if p is not None], circle=False, exact=u.exact)

    @property
    def surjective(self):
        return self.image(IntervalUnion.full(circle=False)).is_full()

    @property
    def injective(self):
        if any(s == 0 for s in self.slopes):
            return False
        images = [self.image(IntervalUnion([Piece(self.breakpoints[i], self.breakpoints[i + 1], True,
                                                  i == len(self.slopes) - 1)]))
                  for i in range(len(self.slopes))]
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                if images[i].intersects(images[j]):
                    return False
        return True

    @property
    def lipschitz(self):
        if self.mod1:
            return math.inf
        return float(max(abs(s) for s in self.slopes))

    def describe(self):
        return {"type": "piecewise-affine", "breakpoints": [str(v) for v in self.breakpoints],
                "slopes": [str(v) for v in self.slopes], "offsets": [str(v) for v in self.offsets],
                "mod1": self.mod1}


@dataclass(frozen=True)
class FiniteMap(MapSpec):
    """A total map of a finite space given by its table."""

    table: Tuple[Tuple[str, str], ...]
    space_kind = "finite"

    def __post_init__(self):
        table = self.table
        if isinstance(table, dict):
            table = tuple(sorted(table.items()))
        object.__setattr__(self, "table", tuple((str(a), str(b)) for a, b in table))

    @property
    def mapping(self) -> Dict[str, str]:
        return dict(self.table)

    def __call__(self, x):
        return self.mapping[x]

    def apply_array(self, values, theta=DEFAULT_THETA, labels: Sequence[str] = None):
        raise TypeError("finite maps are evaluated through FiniteDiscrete.index tables")

    def index_table(self, labels: Sequence[str]) -> np.ndarray:
        idx = {a: i for i, a in enumerate(labels)}
        m = self.mapping
        return np.array([idx[m[a]] for a in labels], dtype=int)

    def preimages(self, y):
        pre = sorted(a for a, b in self.table if b == y)
        if not pre:
            raise NotSurjectiveError(f"{y} is not in the image")
        return pre

    @property
    def surjective(self):
        m = self.mapping
        return set(m.values()) == set(m)

    @property
    def injective(self):
        m = self.mapping
        return len(set(m.values())) == len(m)

    def describe(self):
        return {"type": "finite-map", "table": dict(self.table)}


def map_from_dict(data: dict) -> MapSpec:
    kind = data.get("type")
    if kind == "circle-affine":
        return CircleAffine(int(data["multiplier"]), parse_rotation(str(data.get("rotation", "0"))))
    if kind == "piecewise-affine":
        return PiecewiseAffine(tuple(data["breakpoints"]), tuple(data["slopes"]),
                               tuple(data["offsets"]), bool(data.get("mod1", False)))
    if kind == "finite-map":
        return FiniteMap(tuple(sorted(data["table"].items())))
    raise ValueError(f"unknown map type {kind!r}")
