"""Alphabets, words and cylinders.

Words are plain tuples of ints.  Symbols are ``0..k-1``; strings such as
``"0110"`` are accepted wherever a word is expected as long as every symbol
is a single digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

Word = Tuple[int, ...]
WordLike = Union[Word, Sequence[int], str]

EMPTY: Word = ()


class AlphabetError(ValueError):
    """A symbol outside the alphabet was used."""


def as_word(w: WordLike) -> Word:
    if isinstance(w, str):
        try:
            return tuple(int(ch) for ch in w)
        except ValueError as exc:
            raise AlphabetError(f"cannot read {w!r} as a word of digits") from exc
    return tuple(int(a) for a in w)


def word_str(w: Iterable[int]) -> str:
    """Digits for single-digit alphabets, dot separated otherwise."""
    w = tuple(w)
    if all(0 <= a < 10 for a in w):
        return "".join(str(a) for a in w)
    return ".".join(str(a) for a in w)


def parse_word(text: str) -> Word:
    """Inverse of :func:`word_str`."""
    if "." in text:
        return tuple(int(a) for a in text.split("."))
    return as_word(text)


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("an alphabet needs at least one symbol")

    @property
    def symbols(self) -> range:
        return range(self.size)

    def check(self, w: WordLike) -> Word:
        w = as_word(w)
        for a in w:
            if not 0 <= a < self.size:
                raise AlphabetError(f"symbol {a} is outside the alphabet 0..{self.size - 1}")
        return w

    def __contains__(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.size


@dataclass(frozen=True)
class Cylinder:
    """Sequences whose symbols at positions ``offset, offset+1, ...`` spell ``base``."""

    offset: int
    base: Word

    def __post_init__(self):
        object.__setattr__(self, "base", as_word(self.base))
        if self.offset < 0:
            raise ValueError("cylinder offset must be non-negative")
        if not self.base:
            raise ValueError("cylinder base must be non-empty")

    def contains(self, stream) -> bool:
        return all(stream.symbol_at(self.offset + i) == a for i, a in enumerate(self.base))


def subwords(w: Word, n: int):
    """All length-``n`` factors of ``w`` in order of position."""
    return (w[i:i + n] for i in range(len(w) - n + 1))


def occurrences(haystack: Word, needle: Word, start: int = 0):
    """Positions where ``needle`` occurs in ``haystack`` (naive scan)."""
    n = len(needle)
    for i in range(start, len(haystack) - n + 1):
        if haystack[i:i + n] == needle:
            yield i
