"""One-sided subshifts in five presentations and the language-level operations.

Full shifts, SFTs and sofic shifts are *decidable* presentations: each
compiles to a finite labeled graph and every question is answered exactly
on its subset automaton.  Substitution shifts and cover-walk shifts are
horizon-based; their answers carry a ``horizon_limited`` marker when the
truncation may have decided the outcome.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set

from .graphs import (LabeledGraph, SubsetAutomaton, has_periodic_walk, prune_sinks,
                     same_followers)
from .streams import GeneratedStream, HorizonError, SubstitutionFixedPoint, SymbolStream
from .words import EMPTY, Alphabet, Word, WordLike, as_word, word_str


class NotIrreducibleError(ValueError):
    pass


class UnsupportedPresentationError(TypeError):
    pass


@dataclass(frozen=True)
class Admissibility:
    """Outcome of an admissibility query; truthy when admissible."""

    admissible: bool
    horizon_limited: bool = False

    def __bool__(self):
        return self.admissible


class Subshift:
    alphabet: Alphabet
    decidable = False

    def is_admissible(self, w: WordLike) -> Admissibility:
        raise NotImplementedError

    def language(self, n: int) -> Set[Word]:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class GraphBacked(Subshift):
    """Presentations that compile to a finite labeled graph."""

    decidable = True

    def graph(self) -> LabeledGraph:
        raise NotImplementedError

    @cached_property
    def presentation(self) -> LabeledGraph:
        return prune_sinks(self.graph())

    @cached_property
    def automaton(self) -> SubsetAutomaton:
        return SubsetAutomaton(self.presentation)

    def is_admissible(self, w: WordLike) -> Admissibility:
        w = self.alphabet.check(w)
        if not self.presentation.vertices:
            return Admissibility(False)
        return Admissibility(self.automaton.read(0, w) is not None)

    def language(self, n: int) -> Set[Word]:
        if n < 0:
            raise ValueError("length must be non-negative")
        aut = self.automaton
        if not self.presentation.vertices:
            return set() if n else {EMPTY}
        out = set()
        frontier = [(EMPTY, 0)]
        for _ in range(n):
            frontier = [(w + (a,), j) for w, i in frontier
                        for a, j in sorted(aut.delta[i].items()) if j is not None]
        out.update(w for w, _ in frontier)
        return out


class FullShift(GraphBacked):
    def __init__(self, k: int):
        self.alphabet = Alphabet(k)
        self.k = k

    def graph(self):
        return LabeledGraph(("*",), tuple(("*", "*", a) for a in range(self.k)))

    def is_admissible(self, w):
        self.alphabet.check(w)
        return Admissibility(True)

    def language(self, n):
        return set(itertools.product(range(self.k), repeat=n))

    def describe(self):
        return {"type": "full", "alphabet": self.k}


def normalize_forbidden(forbidden: Iterable[WordLike]) -> FrozenSet[Word]:
    """Remove forbidden words that contain a shorter forbidden word."""
    words = sorted({as_word(f) for f in forbidden}, key=lambda w: (len(w), w))
    if any(not w for w in words):
        raise ValueError("the empty word cannot be forbidden")
    kept: List[Word] = []
    for w in words:
        if not any(_contains(w, f) for f in kept):
            kept.append(w)
    return frozenset(kept)


def _contains(w: Word, f: Word) -> bool:
    n = len(f)
    return any(w[i:i + n] == f for i in range(len(w) - n + 1))


class SFT(GraphBacked):
    """Shift of finite type given by forbidden words; ``step`` is M."""

    def __init__(self, k: int, forbidden: Iterable[WordLike]):
        self.alphabet = Alphabet(k)
        self.forbidden = normalize_forbidden(forbidden)
        for f in self.forbidden:
            self.alphabet.check(f)
        self.step = max((len(f) for f in self.forbidden), default=1) - 1

    def _clean(self, w: Word) -> bool:
        return not any(_contains(w, f) for f in self.forbidden)

    def graph(self):
        # vertices are the clean words of length <= M (the recent past); the
        # short ones are the start-up states of sequences with no left context
        m = self.step
        verts = [w for n in range(m + 1) for w in itertools.product(range(self.alphabet.size), repeat=n)
                 if self._clean(w)]
        vset = set(verts)
        edges = []
        for v in verts:
            for a in self.alphabet.symbols:
                ext = v + (a,)
                if not self._clean(ext[-(m + 1):] if m else (a,)) or not self._clean(ext):
                    continue
                nxt = ext if len(ext) <= m else ext[1:]
                if nxt in vset:
                    edges.append((v, nxt, a))
        return LabeledGraph(tuple(verts), tuple(edges))

    def describe(self):
        return {"type": "sft", "alphabet": self.alphabet.size,
                "forbidden": sorted(word_str(f) for f in self.forbidden)}


class SoficShift(GraphBacked):
    def __init__(self, cover: LabeledGraph, k: Optional[int] = None):
        self.cover = cover
        self.alphabet = Alphabet(k if k is not None else max(cover.labels, default=0) + 1)
        for lab in cover.labels:
            if lab not in self.alphabet:
                raise ValueError(f"label {lab} is outside the alphabet")

    def graph(self):
        return self.cover

    def describe(self):
        return {"type": "sofic", "alphabet": self.alphabet.size, "graph": self.cover.to_dict()}


class SubstitutionShift(Subshift):
    """Orbit closure of a substitution fixed point, known through a finite prefix."""

    def __init__(self, rules: Dict[int, WordLike], seed: int, factor_horizon: int = 4096,
                 k: Optional[int] = None):
        self.point = SubstitutionFixedPoint(rules, seed)
        self.factor_horizon = factor_horizon
        self.alphabet = Alphabet(k if k is not None else max(self.point.rules) + 1)
        self._factors: Dict[tuple, Set[Word]] = {}

    def _factor_set(self, n: int, horizon: int) -> Set[Word]:
        key = (n, horizon)
        if key not in self._factors:
            pre = self.point.prefix(horizon)
            self._factors[key] = {pre[i:i + n] for i in range(horizon - n + 1)}
        return self._factors[key]

    def _stable(self, n: int) -> bool:
        return self._factor_set(n, self.factor_horizon // 2) == self._factor_set(n, self.factor_horizon)

    def is_admissible(self, w):
        w = self.alphabet.check(w)
        if w in self._factor_set(len(w), self.factor_horizon):
            return Admissibility(True)
        return Admissibility(False, horizon_limited=not self._stable(len(w)))

    def language(self, n):
        if not self._stable(n):
            raise HorizonError(f"factor horizon {self.factor_horizon} is too short for length {n}")
        return set(self._factor_set(n, self.factor_horizon))

    def describe(self):
        d = self.point.describe()
        return {"type": "substitution", "alphabet": self.alphabet.size, "rules": d["rules"],
                "seed": d["seed"], "factor_horizon": self.factor_horizon}


class CoverWalkShift(Subshift):
    """Labels of walks on a lazily generated, possibly infinite, cover.

    ``generator(n)`` returns the cover truncated to its first ``n`` vertices;
    the truncation must be a subgraph of every longer truncation.  Walks may
    start at any generated vertex.
    """

    def __init__(self, generator: Callable[[int], LabeledGraph], vertex_horizon: int,
                 k: Optional[int] = None, name: str = "cover-walk"):
        self.generator = generator
        self.vertex_horizon = vertex_horizon
        self.cover = generator(vertex_horizon)
        self.alphabet = Alphabet(k if k is not None else max(self.cover.labels, default=0) + 1)
        self.name = name

    def is_admissible(self, w):
        # a walk in the truncation is a walk in the full cover, so positive
        # answers are exact; negative ones may be an artefact of the cut
        w = self.alphabet.check(w)
        current = set(self.cover.vertices)
        for a in w:
            current = {t for v in current for b, t, _ in self.cover.out_edges(v) if b == a}
            if not current:
                return Admissibility(False, horizon_limited=True)
        return Admissibility(True)

    def language(self, n):
        if n >= self.vertex_horizon // 2:
            raise HorizonError(f"vertex horizon {self.vertex_horizon} is too short for length {n}")
        out = set()
        frontier = {(EMPTY, v) for v in self.cover.vertices}
        for _ in range(n):
            frontier = {(w + (a,), t) for w, v in frontier for a, t, _ in self.cover.out_edges(v)}
        out.update(w for w, _ in frontier)
        return out

    def describe(self):
        return {"type": self.name, "alphabet": self.alphabet.size,
                "vertex_horizon": self.vertex_horizon}


def morse_cover_shift(vertex_horizon: int = 64) -> CoverWalkShift:
    from .graphs import morse_cover

    return CoverWalkShift(morse_cover, vertex_horizon, k=3, name="morse-cover")


# -- language-level operations -------------------------------------------------

def is_admissible(shift: Subshift, w: WordLike) -> Admissibility:
    return shift.is_admissible(w)


def language(shift: Subshift, n: int) -> Set[Word]:
    return shift.language(n)


def _require_graph(shift: Subshift) -> GraphBacked:
    if not isinstance(shift, GraphBacked):
        raise UnsupportedPresentationError(
            f"{type(shift).__name__} is not a decidable presentation")
    return shift


def is_irreducible(shift: Subshift) -> bool:
    """Decide irreducibility of a full, SFT or sofic shift.

    Every terminal strongly connected component of the subset automaton must
    read, collectively, the whole language.  From any reachable state one can
    walk into a terminal component, so this is equivalent to every ordered
    pair of words admitting a connector.
    """
    shift = _require_graph(shift)
    g = shift.presentation
    if not g.vertices:
        return False
    aut = shift.automaton
    everything = aut.states[0]
    for comp in aut.terminal_components():
        union = frozenset().union(*(aut.states[i] for i in comp))
        if not same_followers(g, union, everything):
            return False
    return True


def glue(shift: Subshift, u: WordLike, v: WordLike) -> Word:
    """Shortest, then lexicographically least, ``w`` with ``u w v`` admissible."""
    u, v = as_word(u), as_word(v)
    for word in (u, v):
        if not shift.is_admissible(word):
            raise ValueError(f"{word_str(word)} is not admissible")
    if isinstance(shift, GraphBacked):
        aut = shift.automaton
        start = aut.read(0, u)
        w = aut.shortest_path_to(start, lambda i: aut.read(i, v) is not None)
        if w is None:
            raise NotIrreducibleError(f"no connector from {word_str(u)} to {word_str(v)}")
        return w
    for n in itertools.count():
        try:
            candidates = sorted(shift.language(n))
        except HorizonError:
            break
        for w in candidates:
            if shift.is_admissible(u + w + v):
                return w
    raise NotIrreducibleError(f"no connector from {word_str(u)} to {word_str(v)} within the horizon")


def transitive_stream(shift: Subshift) -> SymbolStream:
    """A transitive point: every admissible word, by length then lexicographically, glued."""
    shift = _require_graph(shift)
    if not is_irreducible(shift):
        raise NotIrreducibleError("only irreducible shifts have transitive points")
    aut = shift.automaton

    def chunks():
        state = 0
        for n in itertools.count(1):
            for v in sorted(shift.language(n)):
                w = aut.shortest_path_to(state, lambda i: aut.read(i, v) is not None)
                block = w + v
                state = aut.read(state, block)
                yield block

    return GeneratedStream(chunks, {"type": "transitive", "subshift": shift.describe()})


def is_synchronizing(shift: Subshift, w: WordLike) -> bool:
    shift = _require_graph(shift)
    w = as_word(w)
    if not shift.is_admissible(w):
        raise ValueError(f"{word_str(w)} is not admissible")
    if isinstance(shift, SFT) and len(w) >= shift.step:
        return True
    if isinstance(shift, FullShift):
        return True
    aut = shift.automaton
    cls = aut.classes()
    target = cls[aut.read(0, w)]
    for i in range(len(aut.states)):
        j = aut.read(i, w)
        if j is not None and cls[j] != target:
            return False
    return True


def subshift_periodic_points(shift: Subshift, p: int) -> Set[Word]:
    """Words ``u`` of length ``p`` whose infinite repetition lies in the shift."""
    if p < 1:
        raise ValueError("period must be positive")
    if isinstance(shift, FullShift):
        return shift.language(p)
    if isinstance(shift, SFT):
        reps = math.ceil((shift.step + 1) / p) + 1
        return {u for u in shift.language(p) if shift.is_admissible(u * reps)}
    if isinstance(shift, SoficShift):
        g = shift.presentation
        return {u for u in shift.language(p) if has_periodic_walk(g, u)}
    raise UnsupportedPresentationError(f"{type(shift).__name__} has no decidable periodic points")


def shift_from_dict(data: dict) -> Subshift:
    kind = data.get("type")
    if kind == "full":
        return FullShift(int(data["alphabet"]))
    if kind == "sft":
        return SFT(int(data["alphabet"]), [as_word(f) for f in data.get("forbidden", [])])
    if kind == "sofic":
        return SoficShift(LabeledGraph.from_dict(data["graph"]), int(data["alphabet"]))
    if kind == "substitution":
        rules = {int(a): as_word(w) for a, w in data["rules"].items()}
        return SubstitutionShift(rules, int(data.get("seed", 0)),
                                 int(data.get("factor_horizon", 4096)), int(data["alphabet"]))
    if kind == "morse-cover":
        return morse_cover_shift(int(data.get("vertex_horizon", 64)))
    raise ValueError(f"unknown subshift type {kind!r}")
