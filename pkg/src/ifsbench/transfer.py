"""Constructive transfers between orbits of a generalized IFS.

* specification and shadowing along a transitive point are carried to an
  arbitrary orbit by locating the orbit's prefix inside the transitive point
  and pulling the data back through the block that precedes it;
* a periodic point along an orbit of an SFT or sofic shift is promoted to an
  orbitally periodic one along a periodic sequence ``(uw)^infinity``;
* a periodic point along a transitive point is realigned along any orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .properties import validate
from .properties.periodicity import detect_periodicity
from .properties.reports import FAIL, PASS, PropertyReport, as_tolerance
from .properties.search import pull_back, trace_search
from .properties.shadowing import PseudoOrbit
from .properties.specification import (DEFAULT_GRID, SegmentSpec, check_specification,
                                       estimate_spec_constant)
from .symbolic.covers import NotSoficError, ReducibleShiftError, edge_shift, fischer_cover
from .symbolic.graphs import SubsetAutomaton, has_periodic_walk, prune_sinks
from .symbolic.shifts import SFT, CoverWalkShift, GraphBacked, Subshift, is_admissible
from .symbolic.streams import ExplicitPrefix, HorizonError, periodic, shift_stream
from .symbolic.words import Word, as_word, word_str
from .systems.family import FunctionFamily, GeneralizedIFS, lift_family
from .systems.maps import NotSurjectiveError


class TransferError(RuntimeError):
    pass


class NotPeriodicError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class OccurrenceIndex:
    """``t[position + j] == pattern[j]`` for ``0 <= j < length`` (0-based)."""

    position: int
    length: int

    def verify(self, t, sigma) -> bool:
        return t.window(self.position, self.length) == sigma.prefix(self.length)


def find_occurrence(t, sigma, length: int, min_position: int = 0, horizon: int = 1 << 16) -> OccurrenceIndex:
    pattern = sigma.prefix(length)
    if length == 0:
        return OccurrenceIndex(min_position, 0)
    text = t.prefix(horizon)
    first = pattern[0]
    for pos in range(min_position, horizon - length + 1):
        if text[pos] == first and text[pos:pos + length] == pattern:
            occ = OccurrenceIndex(pos, length)
            assert occ.verify(t, sigma)
            return occ
    raise TransferError(f"pattern {word_str(pattern)} not found in t within {horizon} symbols")


def _require_surjective(I):
    bad = [a for a, ok in I.family.surjective.items() if not ok]
    if bad:
        raise NotSurjectiveError(f"the family is not surjective (maps {bad}); transfer needs surjectivity")


def _nearest_preimage_chain(I, word, target):
    """A point y with ``f_word(y) = target``, branches nearest the target."""
    y = pull_back(I, word, target, [target] * (len(word) + 1))
    if y is None:
        raise NotSurjectiveError("no preimage chain exists")
    return y


def transfer_specification(I, t, sigma, eps, spec: SegmentSpec, search_horizon: int = 1 << 16,
                           N: Optional[int] = None, trials: int = 20, cap: int = 12, seed: int = 0,
                           grid: int = DEFAULT_GRID) -> PropertyReport:
    """Trace ``spec`` along ``sigma`` using specification along the transitive ``t``."""
    _require_surjective(I)
    eps = as_tolerance(eps)
    if N is None:
        N = estimate_spec_constant(I, t, eps, trials, cap, seed, grid)
        if N is None:
            raise TransferError("specification along t was not confirmed up to the gap cap")
    ks = spec.end
    occ = find_occurrence(t, sigma, ks, min_position=N, horizon=search_horizon)
    ell = occ.position
    u = t.prefix(ell)
    ys = [_nearest_preimage_chain(I, u, I.point(x)) for x in spec.points]
    points = (ys[0],) + tuple(ys)
    pairs = ((0, ell - N),) + tuple((j + ell, k + ell) for j, k in spec.pairs)
    spec_t = SegmentSpec(points, pairs, N)
    along_t = check_specification(I, t, eps, spec_t, grid)
    if not along_t.passed:
        raise TransferError(f"specification along t returned {along_t.verdict}")
    x_prime = I.point(along_t.witness["x"])
    x = I.family.apply_word(u, x_prime)
    ok, where = validate.validate_specification(I, sigma, eps, spec.points, spec.pairs, x)
    params = {"eps": eps, "N": N, "ell": ell, "spec": spec.to_dict(I.space), "grid": grid}
    wit = {"x": I.space.format_point(x), "x_prime": I.space.format_point(x_prime),
           "u_length": len(u)}
    if ok:
        return PropertyReport("transfer-specification", PASS, wit, params)
    return PropertyReport("transfer-specification", FAIL, wit, params,
                          notes=[f"pushed-forward tracer misses at index {where['index']}"])


def _generalized_pull_shadow(I, word, gamma, eps):
    """Tracer of a pseudo-orbit along ``word``: exact pull first, grid search second."""
    z = pull_back(I, word, gamma[-1], gamma)
    targets = dict(enumerate(gamma))
    if z is not None and validate.check_targets(I.space, I.family, word, z, targets, eps)[0]:
        return z
    res = trace_search(I, word, targets, eps, DEFAULT_GRID, None, [gamma[0]])
    return res.witness


def transfer_shadowing(I, t, sigma, alpha: PseudoOrbit, eps, ladder: Sequence[int] = (),
                       tail: int = 8, search_horizon: int = 1 << 16) -> PropertyReport:
    """Shadow ``alpha`` along ``sigma`` through shadowing along the transitive ``t``.

    For each ladder length n the orbit prefix of length n is located in t,
    the pseudo-orbit is embedded between a true-orbit head and tail, traced
    along t at eps/2 and pushed forward.  The deepest rung is returned.
    """
    _require_surjective(I)
    eps = as_tolerance(eps)
    ok, bad = validate.validate_pseudo_orbit(I, sigma, alpha.points, alpha.delta)
    if not ok:
        raise ValueError(f"alpha is not a delta-pseudo-orbit at step {bad}")
    steps = alpha.steps
    ladder = sorted(set(ladder)) or [steps]
    if ladder[-1] > steps:
        raise ValueError("ladder rungs cannot exceed the pseudo-orbit length")
    half = eps / 2
    rungs = []
    y = None
    for n in ladder:
        occ = find_occurrence(t, sigma, n, horizon=search_horizon)
        ell = occ.position
        head_word = t.prefix(ell)
        x_head = _nearest_preimage_chain(I, head_word, alpha.points[0])
        gamma = [x_head]
        for a in head_word:
            gamma.append(I.family.apply(a, gamma[-1]))
        gamma[-1] = alpha.points[0]
        gamma.extend(alpha.points[1:n + 1])
        tail_word = t.window(ell + n, tail)
        for a in tail_word:
            gamma.append(I.family.apply(a, gamma[-1]))
        word = t.prefix(ell + n + tail)
        z = _generalized_pull_shadow(I, word, gamma, half)
        if z is None:
            raise TransferError(f"shadowing along t failed at ladder rung n={n}")
        y = I.family.apply_word(head_word, z)
        good, where = validate.validate_shadowing(I, sigma, alpha.points[:n + 1], half, y)
        pts = [y]
        for a in sigma.prefix(n):
            pts.append(I.family.apply(a, pts[-1]))
        residual = max(float(I.space.distance(p, q)) for p, q in zip(pts, alpha.points))
        rungs.append({"n": n, "ell": ell, "y": I.space.format_point(y), "residual": residual,
                      "within_half_eps": good})
    final_n = ladder[-1]
    ok, where = validate.validate_shadowing(I, sigma, alpha.points[:final_n + 1], eps, y)
    params = {"eps": eps, "delta": alpha.delta, "ladder": ladder, "tail": tail}
    wit = {"y": I.space.format_point(y), "rungs": rungs}
    notes = ["the deepest rung stands in for the limit point"]
    if final_n < steps:
        notes.append(f"verified on the first {final_n} steps of alpha")
    if ok:
        return PropertyReport("transfer-shadowing", PASS, wit, params, final_n < steps, notes)
    notes.append(f"final tracer misses at step {where['index']}")
    return PropertyReport("transfer-shadowing", FAIL, wit, params, True, notes)


@dataclass
class PromotionCertificate:
    u: Word
    w: Word
    x: object
    p: int
    M: int
    inflation: int
    log: List[str] = field(default_factory=list)
    verified: bool = False

    @property
    def word(self) -> Word:
        return self.u + self.w

    @property
    def period(self) -> int:
        return len(self.u) + len(self.w)

    @property
    def stream(self):
        return periodic(self.word)

    def to_dict(self, space=None) -> dict:
        return {"u": word_str(self.u), "w": word_str(self.w), "period": self.period,
                "p": self.p, "M": self.M, "inflation": self.inflation,
                "x": space.format_point(self.x) if space is not None else str(self.x),
                "verified": self.verified, "log": list(self.log)}


def _check_periodic(I, sigma, x, p, horizon):
    if p <= 0:
        raise ValueError("period must be positive")
    ok, ell = validate.validate_periodic(I, sigma, x, p, horizon)
    if not ok:
        raise NotPeriodicError(f"x is not periodic of period {p} along sigma (fails at l={ell})")


def promote_periodic_sft(shift: SFT, sigma, F: FunctionFamily, x, p: int, horizon: int = 1024,
                         space=None) -> PromotionCertificate:
    """Cut sigma into consecutive blocks of length ``a p >= M`` and close up at the first repeat."""
    I = GeneralizedIFS(space if space is not None else _default_space(F), F, shift)
    x = I.point(x)
    _check_periodic(I, sigma, x, p, horizon)
    M = shift.step
    a = max(1, -(-M // p))
    L = a * p
    log = [f"M={M}, p={p}, a={a}, block length {L}"]
    seen = {}
    n_blocks = horizon // L
    for j in range(n_blocks):
        block = sigma.window(j * L, L)
        if block in seen:
            i = seen[block]
            u = block
            w = sigma.window((i + 1) * L, (j - i - 1) * L)
            log.append(f"blocks {i} and {j} agree")
            cert = PromotionCertificate(u, w, x, p, M, a, log)
            ok, problems = validate.validate_certificate(shift, F, x, u, w, M)
            cert.log.extend(problems or ["f_uw(x) = x, admissibility and |u| >= M verified"])
            orb = detect_periodicity(GeneralizedIFS(I.space, F, shift), cert.stream, x,
                                     "orbitally", cert.period, max(cert.period, 4 * cert.period))
            cert.verified = ok and orb.passed
            if not orb.passed:
                cert.log.append("orbital periodicity along (uw)^inf failed")
            return cert
        seen[block] = j
    raise HorizonError(f"no repeated block of length {L} among {n_blocks} blocks; raise the horizon")


def _default_space(F):
    from .systems.spaces import Circle, Interval

    if F.space_kind == "circle":
        return Circle()
    if F.space_kind == "interval":
        return Interval()
    raise ValueError("pass the finite space explicitly")


def _cover_size(graph) -> int:
    g = prune_sinks(graph)
    aut = SubsetAutomaton(g)
    return len(set(aut.classes()))


def assert_sofic(shift: Subshift, start: int = 16, doublings: int = 2):
    """Reject lazily generated covers whose minimal cover keeps growing with the cut."""
    if not isinstance(shift, CoverWalkShift):
        return
    sizes = []
    h = start
    for _ in range(doublings + 1):
        sizes.append(_cover_size(shift.generator(h)))
        h *= 2
    if all(b > a for a, b in zip(sizes, sizes[1:])):
        raise NotSoficError("not sofic: infinite Fischer cover horizon exceeded "
                            f"(minimal cover sizes {sizes} at cuts {start}..{h // 2})")


def promote_periodic_sofic(shift: Subshift, sigma, F: FunctionFamily, x, p: int, horizon: int = 1024,
                           space=None) -> Tuple[PromotionCertificate, dict]:
    """Lift sigma to the edge shift of the Fischer cover, promote there, project back."""
    assert_sofic(shift)
    if not isinstance(shift, GraphBacked):
        raise ReducibleShiftError("promotion needs a graph presentation")
    space = space if space is not None else _default_space(F)
    I = GeneralizedIFS(space, F, shift)
    x = I.point(x)
    _check_periodic(I, sigma, x, p, horizon)
    cover = fischer_cover(shift.presentation)
    word = sigma.prefix(horizon)
    path = None
    for v in cover.vertices:
        path = cover.walk(v, word)
        if path is not None:
            start = v
            break
    if path is None:
        raise TransferError("sigma's prefix has no lift to the Fischer cover")
    E = edge_shift(cover)
    lifted = lift_family(F, cover)
    cert_e = promote_periodic_sft(E, ExplicitPrefix(tuple(path)), lifted, x, p, horizon, space)
    label = cover.edges
    u = tuple(label[e][2] for e in cert_e.u)
    w = tuple(label[e][2] for e in cert_e.w)
    cert = PromotionCertificate(u, w, x, p, shift.step if isinstance(shift, SFT) else 1,
                                cert_e.inflation, [f"lift starts at cover vertex {start}"] + cert_e.log)
    ok, problems = validate.validate_certificate(shift, F, x, u, w, 0)
    cyc = has_periodic_walk(cover, u + w)
    if not cyc:
        problems.append("(uw)^inf labels no cycle of the cover")
    cert.log.extend(problems or ["projected certificate verified in the sofic shift"])
    cert.verified = ok and cyc and cert_e.verified
    info = {"cover": cover.to_dict(), "edge_u": list(cert_e.u), "edge_w": list(cert_e.w),
            "start_vertex": start}
    return cert, info


def transfer_periodic_transitive(I, t, sigma, x, p: int, horizon: int = 256):
    """Least k < p with x periodic of period p along the k-th shift of sigma.

    Returns ``(k, report)`` or ``(None, per_k_reports)``.
    """
    x = I.point(x)
    ok, ell = validate.validate_periodic(I, t, x, p, horizon)
    if not ok:
        raise PreconditionError(f"x is not periodic of period {p} along t (fails at l={ell})")
    reports = []
    for k in range(p):
        rep = detect_periodicity(I, shift_stream(sigma, k), x, "periodic", p, horizon)
        rep.parameters["k"] = k
        if rep.passed:
            if k == 0:
                rep.notes.append("alignment k=0: sigma itself works")
            return k, rep
        reports.append(rep)
    return None, reports
