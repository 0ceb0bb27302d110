"""Periodicity grades along a stream, decided by exact orbit arithmetic.

Grades, from strongest to weakest: orbitally(p), regularly(p),
periodic(p), weakly.  "Infinitely many returns" is read as at least
``threshold`` returns within the horizon.
"""

from __future__ import annotations

import bisect
import math
import re
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..exact import RotationCoordinate
from ..systems.maps import CircleAffine
from .reports import FAIL, PASS, PropertyReport

KINDS = ("periodic", "weakly", "regularly", "orbitally", "eventually")
GRADES = ("orbitally", "regularly", "periodic", "weakly")
DEFAULT_HORIZON = 1024
DEFAULT_THRESHOLD = 3
_KIND_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def parse_kind(text: str) -> Tuple[str, Optional[int], Optional[str]]:
    """``"regularly(2)"`` -> ``("regularly", 2, None)``; ``"eventually(periodic(3))"`` nests."""
    m = _KIND_RE.match(text)
    if not m or m.group(1) not in KINDS:
        raise ValueError(f"unknown periodicity kind {text!r}")
    kind, arg = m.group(1), m.group(2)
    if kind == "eventually":
        if not arg:
            raise ValueError("eventually needs a sub-kind")
        sub, p, _ = parse_kind(arg)
        if sub == "eventually":
            raise ValueError("eventually cannot nest")
        return kind, p, sub
    if kind == "weakly":
        return kind, None, None
    if not arg or not arg.strip().lstrip("-").isdigit():
        raise ValueError(f"{kind} needs an integer period")
    return kind, int(arg), None


class _LatticeOrbit:
    """Orbit of a circle-affine family as integer pairs over a common denominator.

    ``(q, c)`` stands for ``q / L + (c / L) theta``; equality of pairs is
    equality of RotationCoordinates, and the arithmetic stays in machine-size
    integers for the common case of small denominators.
    """

    def __init__(self, x: RotationCoordinate, maps, word):
        dens = [x.q.denominator, x.c.denominator]
        for m in maps.values():
            dens += [m.rotation.q.denominator, m.rotation.c.denominator]
        L = math.lcm(*dens)
        self.L = L
        step = {a: (m.multiplier, int(m.rotation.q * L), int(m.rotation.c * L)) for a, m in maps.items()}
        q, c = int(x.q * L) % L, int(x.c * L)
        keys = [(q, c)]
        for a in word:
            n, rq, rc = step[a]
            q, c = (n * q + rq) % L, n * c + rc
            keys.append((q, c))
        self.keys = keys

    def __getitem__(self, i):
        q, c = self.keys[i]
        return RotationCoordinate(Fraction(q, self.L), Fraction(c, self.L))


def _orbit_points(I, sigma, x, horizon):
    """``(keys, word, decode)``: hashable orbit keys whose equality is exact point equality."""
    word = sigma.prefix(horizon)
    I.require_admissible(word)
    x = I.point(x)
    maps = I.family.maps
    if isinstance(x, RotationCoordinate) and all(isinstance(m, CircleAffine) for m in maps.values()):
        orb = _LatticeOrbit(x, maps, word)
        return orb.keys, word, orb.__getitem__
    pts = [x]
    for a in word:
        pts.append(I.family.apply(a, pts[-1]))
    return pts, word, pts.__getitem__


class _Tables:
    """Per-orbit tables shared by the grade tests and their eventual forms."""

    def __init__(self, pts, word, p):
        self.pts, self.word, self.p = pts, word, p
        H = len(word)
        self.H = H
        if p:
            self.bad = [pts[i] != pts[i + p] for i in range(H - p + 1)]
            self.badw = [word[i] != word[i + p] for i in range(max(H - p, 0))]
        self.positions: Dict[object, List[int]] = defaultdict(list)
        for i, y in enumerate(pts):
            self.positions[y].append(i)

    def returns(self, i=0) -> List[int]:
        pos = self.positions[self.pts[i]]
        return [j - i for j in pos[bisect.bisect_right(pos, i):]]

    def periodic_from(self) -> List[bool]:
        """``ok[i]``: ``pts[i + l p] == pts[i]`` for every ``l`` in range."""
        H, p = self.H, self.p
        ok = [True] * (H + 1)
        for i in range(H - p, -1, -1):
            ok[i] = (not self.bad[i]) and ok[i + p]
        return ok

    def suffix_clean(self, flags) -> List[bool]:
        ok = [True] * (self.H + 2)
        for i in range(len(flags) - 1, -1, -1):
            ok[i] = ok[i + 1] and not flags[i]
        return ok


def _grade_at(kind, t: _Tables, i, threshold):
    """Test ``kind`` for the point ``pts[i]`` along the shifted stream; returns (ok, witness)."""
    p, H = t.p, t.H
    if kind == "weakly":
        r = t.returns(i)
        return len(r) >= threshold, {"returns": r[:64], "count": len(r)}
    if kind == "periodic":
        for ell in range(1, (H - i) // p + 1):
            if t.pts[i + ell * p] != t.pts[i]:
                return False, {"ell": ell, "time": ell * p}
        r = t.returns(i)
        return True, {"first_return": r[0] if r else None}
    if kind in ("regularly", "orbitally"):
        if kind == "orbitally":
            for j in range(i, H - p):
                if t.badw[j]:
                    return False, {"stream_mismatch": j - i + p}
        for j in range(i, H - p + 1):
            if t.bad[j]:
                return False, {"i": j - i}
        return True, {}
    raise ValueError(kind)


def detect_periodicity(I, sigma, x, kind: str, p: Optional[int] = None,
                       horizon: int = DEFAULT_HORIZON, threshold: int = DEFAULT_THRESHOLD,
                       sub: Optional[str] = None) -> PropertyReport:
    if "(" in kind:
        kind, p, sub = parse_kind(kind)
    if kind not in KINDS:
        raise ValueError(f"unknown periodicity kind {kind!r}")
    inner = sub if kind == "eventually" else kind
    if inner not in GRADES:
        raise ValueError(f"unknown sub-kind {inner!r}")
    if inner != "weakly":
        if p is None or p <= 0:
            raise ValueError(f"{inner} needs a positive period")
        if horizon < p:
            raise ValueError("horizon must be at least the period")
    pts, word, point = _orbit_points(I, sigma, x, horizon)
    t = _Tables(pts, word, p if inner != "weakly" else None)
    params = {"kind": kind, "p": p, "horizon": horizon, "x": I.space.format_point(point(0))}
    if inner == "weakly":
        params["threshold"] = threshold
    name = f"{kind}({sub})" if kind == "eventually" else kind

    if kind != "eventually":
        ok, wit = _grade_at(kind, t, 0, threshold)
        # fails of exact grades are counterexamples; weak fails and all passes rest on the horizon
        limited = ok or kind == "weakly"
        return PropertyReport(name, PASS if ok else FAIL, wit, params, limited)

    last = horizon - (p or 1)
    if sub == "weakly":
        for i in range(0, horizon + 1):
            if len(t.returns(i)) >= threshold:
                return PropertyReport(name, PASS, {"i": i, "point": I.space.format_point(point(i)),
                                                   "returns": t.returns(i)[:64]}, params, True)
        return PropertyReport(name, FAIL, None, params, True)
    if sub == "periodic":
        good = t.periodic_from()
    else:
        good = t.suffix_clean(t.bad)
        if sub == "orbitally":
            clean_w = t.suffix_clean(t.badw)
            good = [good[i] and clean_w[i] for i in range(len(good))]
    for i in range(0, last + 1):
        if good[i]:
            return PropertyReport(name, PASS, {"i": i, "point": I.space.format_point(point(i))},
                                  params, True)
    return PropertyReport(name, FAIL, None, params, True)


def periodicity_audit(I, sigma, x, p: int, horizon: int = DEFAULT_HORIZON,
                      threshold: int = DEFAULT_THRESHOLD) -> Tuple[Dict[str, str], List[str]]:
    """Verdicts of the four grades and any break of orbital => regular => periodic => weak."""
    weak_threshold = max(1, min(threshold, horizon // p))
    verdicts = {}
    for kind in GRADES:
        rep = detect_periodicity(I, sigma, x, kind, None if kind == "weakly" else p, horizon,
                                 weak_threshold)
        verdicts[kind] = rep.verdict
    violations = []
    for strong, weak in zip(GRADES, GRADES[1:]):
        if verdicts[strong] == PASS and verdicts[weak] != PASS:
            violations.append(f"{strong} passes but {weak} does not")
    return verdicts, violations
