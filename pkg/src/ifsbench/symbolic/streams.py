"""Lazily evaluated one-sided symbol sequences.

Indexing is 0-based: ``symbol_at(0)`` is the first symbol of the sequence.
All streams are immutable from the outside; the ones that memoize a growing
prefix guard the cache with a lock so a stream may be shared between
threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional, Sequence

from .words import Word, WordLike, as_word, word_str


class HorizonError(LookupError):
    """A finite-horizon object was asked about something beyond its horizon."""


class SymbolStream:
    """Base class.  Subclasses implement ``_symbol`` and may set ``horizon``."""

    horizon: Optional[int] = None

    def symbol_at(self, i: int) -> int:
        if i < 0:
            raise IndexError("stream positions are non-negative")
        if self.horizon is not None and i >= self.horizon:
            raise HorizonError(f"position {i} is beyond the declared horizon {self.horizon}")
        return self._symbol(i)

    def _symbol(self, i: int) -> int:
        raise NotImplementedError

    def prefix(self, n: int) -> Word:
        return tuple(self.symbol_at(i) for i in range(n))

    def window(self, start: int, length: int) -> Word:
        return tuple(self.symbol_at(start + i) for i in range(length))

    def __getitem__(self, i):
        if isinstance(i, slice):
            if i.stop is None:
                raise ValueError("streams are infinite; slice with an explicit stop")
            return tuple(self.symbol_at(j) for j in range(*i.indices(i.stop)))
        return self.symbol_at(i)

    def describe(self) -> dict:
        raise NotImplementedError


class _MemoPrefix:
    """Thread-safe growing list fed by a generator of chunks."""

    def __init__(self, chunks: Iterator[Sequence[int]]):
        self._chunks = chunks
        self._data: list = []
        self._lock = threading.RLock()

    def get(self, i: int) -> int:
        if i < len(self._data):
            return self._data[i]
        with self._lock:
            while len(self._data) <= i:
                try:
                    self._data.extend(next(self._chunks))
                except StopIteration:
                    raise HorizonError(f"stream generator exhausted before position {i}") from None
            return self._data[i]


def _primitive_root(w: Word) -> Word:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


@dataclass(frozen=True, eq=True)
class EventuallyPeriodic(SymbolStream):
    """``preperiod`` followed by ``period`` repeated forever; stored canonically."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        pre = as_word(self.preperiod)
        per = as_word(self.period)
        if not per:
            raise ValueError("period must be non-empty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def _symbol(self, i):
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def shifted(self, k: int) -> "EventuallyPeriodic":
        if k <= len(self.preperiod):
            return EventuallyPeriodic(self.preperiod[k:], self.period)
        r = (k - len(self.preperiod)) % len(self.period)
        return EventuallyPeriodic((), self.period[r:] + self.period[:r])

    def describe(self):
        return {"type": "periodic", "preperiod": word_str(self.preperiod),
                "period": word_str(self.period)}

    def __hash__(self):
        return hash((self.preperiod, self.period))


def periodic(period: WordLike, preperiod: WordLike = ()) -> EventuallyPeriodic:
    return EventuallyPeriodic(as_word(preperiod), as_word(period))


class SubstitutionFixedPoint(SymbolStream):
    """The fixed point of a prolongable substitution starting with ``seed``.

    >>> SubstitutionFixedPoint({0: (0, 1), 1: (1, 0)}, 0).prefix(8)
    (0, 1, 1, 0, 1, 0, 0, 1)
    """

    def __init__(self, rules: Dict[int, WordLike], seed: int):
        self.rules = {int(a): as_word(w) for a, w in rules.items()}
        self.seed = int(seed)
        image = self.rules.get(self.seed)
        if not image or image[0] != self.seed:
            raise ValueError(f"substitution is not prolongable on {self.seed}")
        if len(image) < 2:
            raise ValueError("seed image must be longer than one symbol")
        for w in self.rules.values():
            if not w:
                raise ValueError("erasing substitutions are not supported")
            for a in w:
                if a not in self.rules:
                    raise ValueError(f"symbol {a} has no substitution rule")
        self._memo = _MemoPrefix(self._expand())

    def _expand(self):
        # position j of the fixed point expands to rules[s[j]]; the seed's
        # image covers s[0:len], so the expansion always runs ahead of itself
        first = self.rules[self.seed]
        yield first
        j = 1
        while True:
            yield self.rules[self._memo.get(j)]
            j += 1

    def _symbol(self, i):
        return self._memo.get(i)

    def expand(self, w: WordLike) -> Word:
        out = []
        for a in as_word(w):
            out.extend(self.rules[a])
        return tuple(out)

    def describe(self):
        return {"type": "substitution",
                "rules": {str(a): word_str(w) for a, w in sorted(self.rules.items())},
                "seed": self.seed}


MORSE_RULES = {0: (0, 1), 1: (1, 0)}


def morse(seed: int = 0) -> SubstitutionFixedPoint:
    return SubstitutionFixedPoint(MORSE_RULES, seed)


class ExplicitPrefix(SymbolStream):
    """A finite word standing in for a stream up to ``horizon`` symbols."""

    def __init__(self, word: WordLike, horizon: Optional[int] = None):
        self.word = as_word(word)
        self.horizon = len(self.word) if horizon is None else min(horizon, len(self.word))

    def _symbol(self, i):
        return self.word[i]

    def describe(self):
        return {"type": "explicit", "word": word_str(self.word), "horizon": self.horizon}


class LadderStream(SymbolStream):
    """Blocks ``a_1^{r_1 n} a_2^{r_2 n} ...`` for n = 1, 2, 3, ...

    ``LadderStream([(0, 1), (1, 2)])`` is ``011 001111 000111111 ...``,
    i.e. ``0^n 1^{2n}`` for growing n.
    """

    def __init__(self, pattern: Sequence[tuple]):
        self.pattern = tuple((int(a), int(r)) for a, r in pattern)
        if not self.pattern or any(r < 1 for _, r in self.pattern):
            raise ValueError("ladder pattern needs positive repetition rates")
        self._memo = _MemoPrefix(self._blocks())

    def _blocks(self):
        n = 1
        while True:
            block = []
            for a, r in self.pattern:
                block.extend([a] * (r * n))
            yield block
            n += 1

    def block_boundaries(self, limit: int):
        """Cumulative block end positions (prefix lengths) not exceeding ``limit``."""
        total, n, out = 0, 1, []
        rate = sum(r for _, r in self.pattern)
        while total + rate * n <= limit:
            total += rate * n
            out.append(total)
            n += 1
        return out

    def _symbol(self, i):
        return self._memo.get(i)

    def describe(self):
        return {"type": "ladder", "pattern": [list(p) for p in self.pattern]}


class ShiftedStream(SymbolStream):
    def __init__(self, base: SymbolStream, k: int):
        self.base = base
        self.k = k
        self.horizon = None if base.horizon is None else max(base.horizon - k, 0)

    def _symbol(self, i):
        return self.base.symbol_at(i + self.k)

    def describe(self):
        return {"type": "shifted", "base": self.base.describe(), "by": self.k}


class GeneratedStream(SymbolStream):
    """Stream produced by a chunk generator; used for transitive enumerations."""

    def __init__(self, chunks: Callable[[], Iterator[Sequence[int]]], description: dict):
        self._memo = _MemoPrefix(chunks())
        self._description = description

    def _symbol(self, i):
        return self._memo.get(i)

    def describe(self):
        return dict(self._description)


def shift_stream(s: SymbolStream, k: int) -> SymbolStream:
    """The shift map applied ``k`` times."""
    if k < 0:
        raise ValueError("shift amount must be non-negative")
    if k == 0:
        return s
    if isinstance(s, EventuallyPeriodic):
        return s.shifted(k)
    if isinstance(s, ShiftedStream):
        return ShiftedStream(s.base, s.k + k)
    if s.horizon is not None and k > s.horizon:
        raise HorizonError("shift exceeds the stream's horizon")
    return ShiftedStream(s, k)
