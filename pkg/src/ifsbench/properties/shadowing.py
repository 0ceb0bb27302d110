"""Pseudo-orbits along a stream and their shadowing."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from ..exact import RotationCoordinate
from ..systems.maps import CircleAffine
from ..systems.spaces import Circle, FiniteDiscrete, Interval
from . import validate
from .reports import FAIL, INCONCLUSIVE, PASS, PropertyReport, as_tolerance
from .search import pull_back, trace_search

DEFAULT_GRID = 4096


class PseudoOrbitError(ValueError):
    pass


class NotExpandingError(ValueError):
    pass


@dataclass
class PseudoOrbit:
    points: List
    delta: Fraction
    stream: object

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    def to_csv(self, space) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "exact", "float"])
        for i, p in enumerate(self.points):
            w.writerow([i, space.format_point(p), repr(space.to_float(p))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, space, delta, stream) -> "PseudoOrbit":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([space.parse_point(r["exact"]) for r in rows], as_tolerance(delta), stream)


def _perturb(space, y, offset: Fraction):
    if isinstance(space, Circle):
        return y + offset
    if isinstance(space, Interval):
        return min(max(y + offset, Fraction(0)), Fraction(1))
    raise TypeError(space)


def gen_pseudo_orbit(I, sigma, x0, delta, length: int, seed: int = 0) -> PseudoOrbit:
    """Random delta-pseudo-orbit with ``length`` steps; steps move by at most 0.999 delta."""
    delta = as_tolerance(delta)
    if delta < 0:
        raise PseudoOrbitError("delta must be non-negative")
    word = sigma.prefix(length)
    I.require_admissible(word)
    rng = random.Random(seed)
    pts = [I.point(x0)]
    for a in word:
        y = I.family.apply(a, pts[-1])
        if delta > 0:
            if isinstance(I.space, FiniteDiscrete):
                near = [z for z in I.space.labels if I.space.distance(y, z) < delta]
                y = rng.choice(near)
            else:
                y = _perturb(I.space, y, Fraction(rng.randint(-999, 999), 1000) * delta)
        pts.append(y)
    return PseudoOrbit(pts, delta, sigma)


def drift_pseudo_orbit(I, sigma, step, length: int, delta=None) -> PseudoOrbit:
    """``x_i = i * step`` (mod 1 on the circle); a delta-pseudo-orbit for isometric steps."""
    step = as_tolerance(step)
    pts = [I.point(i * step) if isinstance(I.space, Circle) else min(i * step, Fraction(1))
           for i in range(length + 1)]
    delta = as_tolerance(delta) if delta is not None else 2 * step
    p = PseudoOrbit(pts, delta, sigma)
    ok, bad = validate.validate_pseudo_orbit(I, sigma, pts, delta)
    if not ok:
        raise PseudoOrbitError(f"drift breaks the delta condition at step {bad}")
    return p


def _expansion(I, word) -> int:
    lam = None
    for a in set(word):
        m = I.family.maps[a]
        if not isinstance(m, CircleAffine) or abs(m.multiplier) < 2:
            raise NotExpandingError(f"map {a} is not expanding; backward shadowing needs |n| >= 2")
        lam = abs(m.multiplier) if lam is None else min(lam, abs(m.multiplier))
    return lam or 2


def backward_shadow(I, sigma, p: PseudoOrbit) -> Tuple[object, Fraction]:
    """Pull the last point back through nearest preimages; error <= delta / (lambda - 1)."""
    word = sigma.prefix(p.steps)
    lam = _expansion(I, word)
    y = pull_back(I, word, p.points[-1], p.points)
    return y, p.delta / (lam - 1)


def check_shadowing(I, sigma, p: PseudoOrbit, eps, method: str = "grid",
                    grid: int = DEFAULT_GRID) -> PropertyReport:
    eps = as_tolerance(eps)
    ok, bad = validate.validate_pseudo_orbit(I, sigma, p.points, p.delta)
    if not ok:
        raise PseudoOrbitError(f"not a delta-pseudo-orbit at step {bad}")
    params = {"eps": eps, "delta": p.delta, "steps": p.steps, "method": method}
    if method == "backward":
        y, bound = backward_shadow(I, sigma, p)
        params["bound"] = bound
        good, where = validate.validate_shadowing(I, sigma, p.points, eps, y)
        if good:
            return PropertyReport("shadowing", PASS, {"y": I.space.format_point(y), "source": "backward"},
                                  params)
        return PropertyReport("shadowing", INCONCLUSIVE, None, params,
                              notes=[f"backward tracer misses at step {where['index']}"])
    if method != "grid":
        raise ValueError(f"unknown shadowing method {method!r}")
    params["grid"] = grid
    word = sigma.prefix(p.steps)
    res = trace_search(I, word, dict(enumerate(p.points)), eps, grid, p.points, [p.points[0]])
    if res.witness is not None:
        return PropertyReport("shadowing", PASS, {"y": I.space.format_point(res.witness),
                                                  "source": res.source}, params)
    verdict = FAIL if res.rigorous_fail else INCONCLUSIVE
    return PropertyReport("shadowing", verdict, None, params, notes=res.notes)
