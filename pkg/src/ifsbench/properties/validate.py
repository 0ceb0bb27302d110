"""Independent exact re-checks of the defining inequalities.

Nothing here calls the search code: orbits are recomputed point by point
with the maps themselves and distances come straight from the space, so a
pass verdict is only as trustworthy as these few loops.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from ..symbolic.shifts import is_admissible
from ..symbolic.words import as_word


def _orbit(family, word, x):
    pts = [x]
    for a in word:
        x = family.maps[a](x)
        pts.append(x)
    return pts


def check_targets(space, family, word, x, targets: Dict[int, object], eps) -> Tuple[bool, Optional[dict]]:
    """``d(f_{w[:i]}(x), targets[i]) < eps`` for every constrained ``i``."""
    pts = _orbit(family, word, x)
    for i in sorted(targets):
        d = space.distance(pts[i], targets[i])
        if not d < eps:
            return False, {"index": i, "distance": float(d)}
    return True, None


def validate_specification(I, sigma, eps, points: Sequence, pairs: Sequence[Tuple[int, int]], x):
    word = sigma.prefix(pairs[-1][1])
    targets = {}
    for xm, (j, k) in zip(points, pairs):
        orb = _orbit(I.family, word[:k], I.point(xm))
        for i in range(j, k + 1):
            targets[i] = orb[i]
    # d(x, x_1) < eps is the i = 0 constraint of the first segment
    targets[0] = I.point(points[0])
    return check_targets(I.space, I.family, word, I.point(x), targets, eps)


def validate_shadowing(I, sigma, points: Sequence, eps, y):
    word = sigma.prefix(len(points) - 1)
    return check_targets(I.space, I.family, word, I.point(y), dict(enumerate(points)), eps)


def validate_lws(I, sigma, eps, n: int, chain: Sequence, x):
    s = len(chain)
    word = sigma.prefix(s * n)
    targets = {}
    for k, xk in enumerate(chain):
        orb = _orbit(I.family, word[:n], I.point(xk))
        for j in range(k * n, (k + 1) * n):
            targets[j] = orb[j - k * n]
    targets[0] = I.point(chain[0])
    return check_targets(I.space, I.family, word, I.point(x), targets, eps)


def validate_pseudo_orbit(I, sigma, points: Sequence, delta) -> Tuple[bool, Optional[int]]:
    word = sigma.prefix(len(points) - 1)
    for i in range(1, len(points)):
        image = I.family.maps[word[i - 1]](points[i - 1])
        d = I.space.distance(image, points[i])
        if not (d < delta or (delta == 0 and d == 0)):
            return False, i
    return True, None


def validate_periodic(I, sigma, x, p: int, horizon: int) -> Tuple[bool, Optional[int]]:
    pts = _orbit(I.family, sigma.prefix(horizon), I.point(x))
    for ell in range(1, horizon // p + 1):
        if pts[ell * p] != pts[0]:
            return False, ell
    return True, None


def validate_certificate(shift, family, x, u, w, M: int) -> Tuple[bool, list]:
    """Exact check of ``f_{uw}(x) = x``, admissibility and ``|u| >= M``."""
    u, w = as_word(u), as_word(w)
    uw = u + w
    problems = []
    if not uw:
        return False, ["empty period word"]
    y = x
    for a in uw:
        y = family.maps[a](y)
    if y != x:
        problems.append("f_uw(x) != x")
    reps = -(-(M + 1) // len(uw)) + 2
    if not is_admissible(shift, uw * reps):
        problems.append(f"(uw)^{reps} is not admissible")
    if not is_admissible(shift, uw + uw + u):
        problems.append("(uw)^2 u is not admissible")
    if len(u) < M:
        problems.append(f"|u| = {len(u)} < M = {M}")
    return not problems, problems
