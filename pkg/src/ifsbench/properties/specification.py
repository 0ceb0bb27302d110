"""Specification along an orbit: SP, its periodic (strong) form and LWS."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..exact import RotationCoordinate
from ..systems.maps import CircleAffine
from ..systems.spaces import Circle, FiniteDiscrete, Interval
from . import validate
from .reports import FAIL, INCONCLUSIVE, PASS, PropertyReport, as_tolerance
from .search import trace_search

DEFAULT_GRID = 4096


class SegmentSpecError(ValueError):
    pass


@dataclass(frozen=True)
class SegmentSpec:
    """Points ``x_1..x_s`` and windows ``[j_m, k_m]`` separated by gaps of at least ``gap``."""

    points: Tuple
    pairs: Tuple[Tuple[int, int], ...]
    gap: int = 1

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "pairs", tuple((int(j), int(k)) for j, k in self.pairs))
        s = len(self.points)
        if s < 2:
            raise SegmentSpecError("need at least two points")
        if len(self.pairs) != s:
            raise SegmentSpecError("one index window per point")
        if self.pairs[0][0] != 0:
            raise SegmentSpecError("the first window must start at 0")
        for m, (j, k) in enumerate(self.pairs):
            if j > k:
                raise SegmentSpecError(f"window {m + 1} has j > k")
            if m + 1 < s:
                j2 = self.pairs[m + 1][0]
                if j2 <= k:
                    raise SegmentSpecError(f"windows {m + 1} and {m + 2} overlap")
                if j2 - k < self.gap:
                    raise SegmentSpecError(f"gap between windows {m + 1} and {m + 2} is below {self.gap}")

    @property
    def end(self) -> int:
        return self.pairs[-1][1]

    def gaps(self) -> List[int]:
        return [self.pairs[m + 1][0] - self.pairs[m][1] for m in range(len(self.pairs) - 1)]

    def shifted(self, offset: int, first_start: int = 0) -> "SegmentSpec":
        """Windows moved by ``offset``; the first window then starts at ``first_start``."""
        pairs = [(j + offset, k + offset) for j, k in self.pairs]
        pairs[0] = (first_start, pairs[0][1])
        return SegmentSpec(self.points, tuple(pairs), self.gap)

    def to_dict(self, space) -> dict:
        return {"points": [space.format_point(p) for p in self.points],
                "pairs": [list(p) for p in self.pairs], "gap": self.gap}


def _targets(I, word, spec: SegmentSpec):
    targets, reference = {}, [None] * (len(word) + 1)
    for m, (xm, (j, k)) in enumerate(zip(spec.points, spec.pairs)):
        x = I.point(xm)
        nxt = spec.pairs[m + 1][0] if m + 1 < len(spec.pairs) else k + 1
        # orbit of x_m through its window and the following gap (gap = reference only)
        for i in range(0, min(nxt, len(word) + 1)):
            if i >= j:
                if i <= k:
                    targets[i] = x
                reference[i] = x
            if i < len(word):
                x = I.family.apply(word[i], x)
    targets[0] = I.point(spec.points[0])
    return targets, reference


def _require_prefix(I, sigma, n):
    word = sigma.prefix(n)
    I.require_admissible(word)
    return word


def check_specification(I, sigma, eps, spec: SegmentSpec, grid: int = DEFAULT_GRID,
                        extra: Sequence = ()) -> PropertyReport:
    if grid is not None and grid <= 0:
        raise ValueError("grid resolution must be positive")
    eps = as_tolerance(eps)
    word = _require_prefix(I, sigma, spec.end)
    targets, reference = _targets(I, word, spec)
    res = trace_search(I, word, targets, eps, grid, reference, extra)
    params = {"eps": eps, "grid": grid, "spec": spec.to_dict(I.space)}
    if res.witness is not None:
        return PropertyReport("specification", PASS,
                              {"x": I.space.format_point(res.witness), "source": res.source}, params)
    verdict = FAIL if res.rigorous_fail else INCONCLUSIVE
    return PropertyReport("specification", verdict, None, params, notes=res.notes)


def _affine_power(I, word):
    """``f_word(x) = N x + A`` for circle-affine families, else None."""
    N, A = 1, RotationCoordinate(Fraction(0))
    for a in word:
        m = I.family.maps[a]
        if not isinstance(m, CircleAffine):
            return None
        N, A = m.multiplier * N, A.scale(m.multiplier) + m.rotation
    return N, A


def _fixed_points(N: int, A: RotationCoordinate, limit: int):
    """Solutions of ``(N - 1) x = -A`` on the circle; None means every point."""
    if N == 1:
        return None if A == RotationCoordinate(Fraction(0)) else []
    D = N - 1
    m = abs(D)
    if m > limit:
        return "too-many"
    return [RotationCoordinate((k - A.q) / D, -A.c / D) for k in range(m)]


def check_ssp(I, sigma, eps, spec: SegmentSpec, grid: int = DEFAULT_GRID, period_horizon: int = 16,
              periodic_horizon: int = 256, candidate_limit: int = 1 << 16) -> PropertyReport:
    """SP with a tracer that is periodic along ``sigma`` for some ``p <= period_horizon``."""
    eps = as_tolerance(eps)
    end = max(spec.end, periodic_horizon)
    word = _require_prefix(I, sigma, end)
    short = word[:spec.end]
    targets, _ = _targets(I, short, spec)
    params = {"eps": eps, "grid": grid, "spec": spec.to_dict(I.space),
              "period_horizon": period_horizon, "periodic_horizon": periodic_horizon}
    notes = []

    def traces(x):
        return validate.check_targets(I.space, I.family, short, x, targets, eps)[0]

    def periodic(x, p):
        return validate.validate_periodic(I, sigma, x, p, periodic_horizon)[0]

    if isinstance(I.space, FiniteDiscrete):
        for p in range(1, period_horizon + 1):
            for x in I.space.labels:
                if periodic(x, p) and traces(x):
                    return PropertyReport("strong-specification", PASS,
                                          {"x": x, "period": p}, params)
        return PropertyReport("strong-specification", FAIL, None, params, horizon_limited=True,
                              notes=["exhaustive over the finite space and periods up to the horizon"])

    exhaustive = isinstance(I.space, Circle)
    theta_signs = set()
    for p in range(1, period_horizon + 1):
        aff = _affine_power(I, word[:p]) if isinstance(I.space, Circle) else None
        if aff is None:
            exhaustive = False
            cands = I.space.grid(grid)
        else:
            fixed = _fixed_points(*aff, candidate_limit)
            if fixed == "too-many":
                exhaustive = False
                notes.append(f"p={p}: too many fixed points to enumerate")
                continue
            if fixed is None:
                exhaustive = False
                cands = I.space.grid(grid)
            else:
                cands = fixed
                if aff[0] == 1:
                    theta_signs.add(aff[1].c > 0)
        for x in cands:
            if traces(x) and periodic(x, p):
                return PropertyReport("strong-specification", PASS,
                                      {"x": I.space.format_point(x), "period": p}, params)
    if exhaustive:
        global_arg = _rotation_only_sign(I)
        if global_arg:
            notes.append("every map is a rotation with theta-coefficients of one sign: "
                         "no point is periodic for any p")
        else:
            notes.append("all periodic candidates up to the period horizon enumerated exactly")
        return PropertyReport("strong-specification", FAIL, None, params,
                              horizon_limited=not global_arg, notes=notes)
    return PropertyReport("strong-specification", INCONCLUSIVE, None, params, notes=notes)


def _rotation_only_sign(I) -> bool:
    maps = list(I.family.maps.values())
    if not all(isinstance(m, CircleAffine) and m.multiplier == 1 for m in maps):
        return False
    cs = [m.rotation.c for m in maps]
    return all(c > 0 for c in cs) or all(c < 0 for c in cs)


def check_lws(I, sigma, eps, N: int, delta, chain: Sequence, n: int,
              grid: int = DEFAULT_GRID) -> PropertyReport:
    """Local weak specification with one gap ``n >= N`` for the whole chain."""
    eps, delta = as_tolerance(eps), as_tolerance(delta)
    if n < N:
        raise ValueError(f"n={n} is below N={N}")
    chain = [I.point(x) for x in chain]
    word = _require_prefix(I, sigma, len(chain) * n)
    head = word[:n]
    for k in range(len(chain) - 1):
        image = I.family.apply_word(head, chain[k])
        if not I.space.distance(image, chain[k + 1]) < delta:
            raise ValueError(f"chain link {k + 1} violates the delta condition")
    targets, reference = {}, []
    for k, xk in enumerate(chain):
        y = xk
        for j in range(n):
            targets[k * n + j] = y
            reference.append(y)
            y = I.family.apply(head[j], y)
    reference.append(y)
    res = trace_search(I, word, targets, eps, grid, reference, [chain[0]])
    params = {"eps": eps, "delta": delta, "N": N, "n": n, "grid": grid,
              "chain": [I.space.format_point(x) for x in chain]}
    notes = ["one gap n is used for every link of the chain"] + res.notes
    if res.witness is not None:
        return PropertyReport("local-weak-specification", PASS,
                              {"x": I.space.format_point(res.witness), "source": res.source},
                              params, notes=notes)
    verdict = FAIL if res.rigorous_fail else INCONCLUSIVE
    return PropertyReport("local-weak-specification", verdict, None, params, notes=notes)


def random_point(space, rng: random.Random, denominator: int = 997):
    if isinstance(space, FiniteDiscrete):
        return rng.choice(space.labels)
    q = Fraction(rng.randrange(denominator + (1 if isinstance(space, Interval) else 0)), denominator)
    return RotationCoordinate(q) if isinstance(space, Circle) else q


def random_segment_spec(space, rng: random.Random, gap: int, max_points: int = 3,
                        max_window: int = 3) -> SegmentSpec:
    s = rng.randint(2, max_points)
    pairs, start = [], 0
    for m in range(s):
        k = start + rng.randint(0, max_window - 1)
        pairs.append((start, k))
        start = k + gap
    return SegmentSpec(tuple(random_point(space, rng) for _ in range(s)), tuple(pairs), gap)


def estimate_spec_constant(I, sigma, eps, trials: int = 100, cap: int = 12, seed: int = 0,
                           grid: int = DEFAULT_GRID) -> Optional[int]:
    """Smallest gap N <= cap for which ``trials`` random specs with gaps exactly N all pass."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for N in range(1, cap + 1):
        rng = random.Random(f"{seed}:{N}")
        if all(check_specification(I, sigma, eps, random_segment_spec(I.space, rng, N), grid).passed
               for _ in range(trials)):
            return N
    return None
