"""Mixing, exactness and transitivity probes by exact interval images."""

from __future__ import annotations

from ..systems.intervals import IntervalUnion
from ..systems.spaces import Circle, FiniteDiscrete
from .reports import FAIL, PASS, PropertyReport

MODES = ("mixing", "exact", "transitive")


def image_sequence(I, sigma, U: IntervalUnion, horizon: int):
    """``[U, f_{s1}(U), f_{s1 s2}(U), ...]`` up to ``horizon``."""
    if isinstance(I.space, FiniteDiscrete):
        raise TypeError("interval probes need the interval or the circle")
    word = sigma.prefix(horizon)
    I.require_admissible(word)
    theta = getattr(I.space, "theta", None)
    out = [U]
    for a in word:
        m = I.family.maps[a]
        out.append(m.image(out[-1]) if theta is None else m.image(out[-1], theta))
    return out


def probe_mixing_exact(I, sigma, U: IntervalUnion, V: IntervalUnion = None, N: int = 1,
                       horizon: int = 64, mode: str = "mixing") -> PropertyReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if horizon < N:
        raise ValueError("horizon must be at least N")
    if U.circle != isinstance(I.space, Circle):
        raise TypeError("interval union does not live on this space")
    images = image_sequence(I, sigma, U, horizon)
    if mode == "exact":
        holds = [im.is_full() for im in images]
    else:
        if V is None:
            raise ValueError(f"{mode} needs a target set V")
        holds = [im.intersects(V) for im in images]
    exact = all(im.exact for im in images)
    # smallest n0 with the property on all of [n0, horizon]
    n0 = horizon + 1
    while n0 > 0 and holds[n0 - 1]:
        n0 -= 1
    params = {"mode": mode, "N": N, "horizon": horizon, "U": U.to_list(),
              "V": V.to_list() if V is not None else None, "threshold": n0 if n0 <= horizon else None,
              "exact_arithmetic": exact}
    notes = [] if exact else ["irrational rotation endpoints were rounded to floats"]
    name = f"{mode}-probe"
    if mode == "transitive":
        hits = [n for n in range(N, horizon + 1) if holds[n]]
        if hits:
            return PropertyReport(name, PASS, {"n": hits[0]}, params, True, notes)
        return PropertyReport(name, FAIL, None, params, True, notes)
    bad = [n for n in range(N, horizon + 1) if not holds[n]]
    if not bad:
        return PropertyReport(name, PASS, {"range": [N, horizon]}, params, True, notes)
    return PropertyReport(name, FAIL, {"n": bad[0], "image": images[bad[0]].to_list()},
                          params, True, notes)
