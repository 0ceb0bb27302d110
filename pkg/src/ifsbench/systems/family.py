"""Map families, generalized IFS triples, orbits and the metric on NDS space."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..symbolic.covers import BlockMap, BlockMapError
from ..symbolic.graphs import LabeledGraph
from ..symbolic.shifts import Subshift, is_admissible
from ..symbolic.streams import SymbolStream, shift_stream
from ..symbolic.words import Alphabet, Word, WordLike, as_word, word_str
from .intervals import IntervalUnion
from .maps import CircleAffine, FiniteMap, MapSpec, PiecewiseAffine, map_from_dict
from .spaces import Circle, FiniteDiscrete, Interval, PhaseSpace


class InadmissibleError(ValueError):
    pass


class CompatibilityError(ValueError):
    pass


_KIND_OF_SPACE = {Interval: "interval", Circle: "circle", FiniteDiscrete: "finite"}


def space_kind(space: PhaseSpace) -> str:
    return _KIND_OF_SPACE[type(space)]


class FunctionFamily:
    """One map per alphabet symbol; ``f_u`` applies ``u[0]`` first."""

    def __init__(self, maps: Dict[int, MapSpec] | Sequence[MapSpec], alphabet: Optional[Alphabet] = None):
        if not isinstance(maps, dict):
            maps = dict(enumerate(maps))
        if alphabet is None:
            alphabet = Alphabet(max(maps) + 1 if maps else 0)
        missing = [a for a in alphabet.symbols if a not in maps]
        if missing:
            raise CompatibilityError(f"no map for symbols {missing}")
        extra = [a for a in maps if a not in alphabet]
        if extra:
            raise CompatibilityError(f"maps given for symbols {extra} outside the alphabet")
        kinds = {m.space_kind for m in maps.values()}
        if len(kinds) > 1:
            raise CompatibilityError(f"maps act on different spaces: {sorted(kinds)}")
        self.alphabet = alphabet
        self.maps: Dict[int, MapSpec] = dict(sorted(maps.items()))
        self.space_kind = kinds.pop() if kinds else "any"
        self.surjective = {a: m.surjective for a, m in self.maps.items()}
        self.injective = {a: m.injective for a, m in self.maps.items()}
        self._tables: Dict[Tuple[str, ...], Dict[int, np.ndarray]] = {}

    def __getitem__(self, a: int) -> MapSpec:
        return self.maps[a]

    def __len__(self):
        return len(self.maps)

    @property
    def all_surjective(self) -> bool:
        return all(self.surjective.values())

    def apply(self, a: int, x):
        return self.maps[a](x)

    def apply_word(self, u: WordLike, x):
        for a in as_word(u):
            x = self.maps[a](x)
        return x

    def lipschitz_word(self, u: WordLike) -> float:
        out = 1.0
        for a in as_word(u):
            out *= self.maps[a].lipschitz
        return out

    def step_array(self, a: int, values: np.ndarray, space: PhaseSpace) -> np.ndarray:
        """Vectorized ``f_a`` on the float representation of ``space``."""
        m = self.maps[a]
        if isinstance(space, FiniteDiscrete):
            tables = self._tables.setdefault(space.labels, {})
            if a not in tables:
                tables[a] = m.index_table(space.labels)
            return tables[a][np.asarray(values, dtype=int)]
        theta = getattr(space, "theta", 0.0)
        return m.apply_array(values, theta)

    def word_array(self, u: WordLike, values: np.ndarray, space: PhaseSpace) -> np.ndarray:
        for a in as_word(u):
            values = self.step_array(a, values, space)
        return values

    def describe(self) -> dict:
        return {"alphabet": self.alphabet.size,
                "maps": {str(a): m.describe() for a, m in self.maps.items()}}

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionFamily":
        maps = {int(a): map_from_dict(m) for a, m in data["maps"].items()}
        return cls(maps, Alphabet(int(data.get("alphabet", len(maps)))))

    def __eq__(self, other):
        return isinstance(other, FunctionFamily) and self.describe() == other.describe()


def apply_word(F: FunctionFamily, u: WordLike, x):
    return F.apply_word(u, x)


def _check_point_space(space: PhaseSpace, F: FunctionFamily):
    kind = space_kind(space)
    if F.space_kind not in ("any", kind):
        raise CompatibilityError(f"{F.space_kind} maps cannot act on the {kind} space")
    if kind == "finite":
        for a, m in F.maps.items():
            if set(m.mapping) != set(space.labels) or not set(m.mapping.values()) <= set(space.labels):
                raise CompatibilityError(f"map {a} is not a total self-map of the finite space")


@dataclass
class GeneralizedIFS:
    """The triple (X, F, Sigma)."""

    space: PhaseSpace
    family: FunctionFamily
    shift: Subshift

    def __post_init__(self):
        _check_point_space(self.space, self.family)
        k = getattr(self.shift, "k", None)
        if k is not None and k != self.family.alphabet.size:
            raise CompatibilityError(
                f"family alphabet has {self.family.alphabet.size} symbols, shift has {k}")

    def point(self, x):
        if isinstance(self.space, Circle):
            return self.space.point(x)
        if isinstance(self.space, Interval):
            return self.space.parse_point(x)
        return self.space.parse_point(x)

    def require_admissible(self, w: WordLike):
        verdict = is_admissible(self.shift, w)
        if not verdict:
            tag = " (within the search horizon)" if verdict.horizon_limited else ""
            raise InadmissibleError(f"word {word_str(as_word(w))} is not admissible{tag}")


@dataclass
class OrbitSegment:
    base: object
    stream: SymbolStream
    points: List = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def rows(self, space: PhaseSpace) -> List[Tuple[int, str, float]]:
        return [(i, space.format_point(p), space.to_float(p)) for i, p in enumerate(self.points)]

    def to_csv(self, space: PhaseSpace) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "exact", "float"])
        for r in self.rows(space):
            w.writerow([r[0], r[1], repr(r[2])])
        return buf.getvalue()


def orbit(I: GeneralizedIFS, x, sigma: SymbolStream, n: int, check: bool = True) -> OrbitSegment:
    """Points ``x, f_{s1}(x), f_{s1 s2}(x), ...`` (``n + 1`` of them)."""
    word = sigma.prefix(n)
    if check:
        I.require_admissible(word)
    x = I.point(x)
    pts = [x]
    for a in word:
        x = I.family.apply(a, x)
        pts.append(x)
    return OrbitSegment(pts[0], sigma, pts)


def preimages(m: MapSpec, y) -> list:
    return m.preimages(y)


def image_of_intervals(m: MapSpec, U: IntervalUnion, theta: Optional[float] = None) -> IntervalUnion:
    if isinstance(m, FiniteMap):
        raise TypeError("finite maps do not act on interval unions")
    return m.image(U) if theta is None else m.image(U, theta)


def _grid_values(space: PhaseSpace, grid: int) -> np.ndarray:
    return space.grid_array(grid)


def nds_distance(F: FunctionFamily, t: SymbolStream, t2: SymbolStream, terms: int, grid: int = 1024,
                 space: Optional[PhaseSpace] = None) -> Tuple[float, float]:
    """Truncated grid value of the metric between the NDS along ``t`` and ``t2``.

    Returns ``(value, bound)``; the true distance lies within ``bound`` of
    ``value``.  The bound is the series tail ``diam * 2**(1 - terms)`` plus,
    per term, the worst grid miss ``(Lip_t + Lip_t2) * h`` capped at ``diam``.
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    if grid < 2:
        raise ValueError("need at least 2 grid points")
    if space is None:
        space = {"circle": Circle(), "interval": Interval()}.get(F.space_kind)
        if space is None:
            raise ValueError("pass the finite space explicitly")
    diam = float(space.diameter)
    h = float(space.grid_spacing(grid))
    xs = _grid_values(space, grid)
    a, b = xs.copy(), xs.copy()
    value = 0.0
    grid_term = 0.0
    la = lb = 1.0
    for n in range(1, terms + 1):
        s, s2 = t.symbol_at(n - 1), t2.symbol_at(n - 1)
        a = F.step_array(s, a, space)
        b = F.step_array(s2, b, space)
        la *= F[s].lipschitz
        lb *= F[s2].lipschitz
        d = float(np.max(space.float_distance(a, b)))
        w = 2.0 ** (n - 1)
        value += d / w
        if h > 0:
            miss = (la + lb) * h if math.isfinite(la + lb) else diam
            grid_term += min(miss, diam) / w
    return value, diam * 2.0 ** (1 - terms) + grid_term


def shifted_family(t: SymbolStream, count: int) -> List[SymbolStream]:
    return [shift_stream(t, k) for k in range(count)]


def is_surjective(F: FunctionFamily) -> Dict[int, bool]:
    return dict(F.surjective)


def lift_family(F: FunctionFamily, graph: LabeledGraph) -> FunctionFamily:
    """Edge-indexed family ``e -> f_{label(e)}`` for the edge shift of a cover."""
    return FunctionFamily({i: F[e[2]] for i, e in enumerate(graph.edges)})


@dataclass
class FactorReport:
    ok: bool
    checked: int
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


def verify_ifs_factor(I: GeneralizedIFS, J: GeneralizedIFS, phi: Callable, psi: BlockMap,
                      samples: Iterable[Tuple[SymbolStream, object, int]]) -> FactorReport:
    """Check ``phi(f_{s[i-m..i+n]}(x)) == g_{psi(s[i-m..i+n])}(phi(x))`` on samples.

    ``samples`` holds triples ``(stream, x, i)`` with 0-based ``i >= memory``.
    """
    m, n = psi.memory, psi.anticipation
    checked = 0
    for stream, x, i in samples:
        if i < m:
            raise ValueError("sample position must be at least the block memory")
        block = stream.window(i - m, m + n + 1)
        x = I.point(x)
        try:
            sym = psi(block)
        except BlockMapError:
            raise
        left = phi(I.family.apply_word(block, x))
        right = J.family.apply(sym, phi(x))
        checked += 1
        if left != right:
            return FactorReport(False, checked, {
                "block": word_str(block), "x": I.space.format_point(x), "position": i,
                "left": J.space.format_point(left), "right": J.space.format_point(right)})
    return FactorReport(True, checked)
