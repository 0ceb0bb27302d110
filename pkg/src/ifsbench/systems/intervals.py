"""Finite unions of intervals in [0, 1] or on the circle, with exact endpoints.

Endpoints are Fractions and each end carries its own open/closed flag, so
the difference between an open arc of length one (the circle minus a point)
and the whole circle is kept.  On the circle the point 1 is identified with
0; canonical unions live in ``[0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..exact import as_fraction


@dataclass(frozen=True, order=True)
class Piece:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.hi < self.lo or (self.hi == self.lo and not (self.lo_closed and self.hi_closed)):
            raise ValueError("empty piece")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return ((self.lo < x or (self.lo_closed and x == self.lo))
                and (x < self.hi or (self.hi_closed and x == self.hi)))


def _make(lo, hi, lc, hc):
    if hi < lo or (hi == lo and not (lc and hc)):
        return None
    return Piece(lo, hi, lc, hc)


def _overlaps_or_touches(a: Piece, b: Piece) -> bool:
    # a.lo <= b.lo assumed
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (a.hi_closed or b.lo_closed)


def _merge(pieces: Iterable[Piece]) -> List[Piece]:
    ps = sorted(pieces, key=lambda p: (p.lo, not p.lo_closed))
    out: List[Piece] = []
    for p in ps:
        if out and _overlaps_or_touches(out[-1], p):
            last = out[-1]
            if p.hi > last.hi:
                hi, hc = p.hi, p.hi_closed
            elif p.hi == last.hi:
                hi, hc = last.hi, last.hi_closed or p.hi_closed
            else:
                hi, hc = last.hi, last.hi_closed
            out[-1] = Piece(last.lo, hi, last.lo_closed, hc)
        else:
            out.append(p)
    return out


class IntervalUnion:
    """Normalized union; ``exact`` is False when an endpoint was rounded."""

    def __init__(self, pieces: Iterable[Piece] = (), circle: bool = False, exact: bool = True):
        self.circle = circle
        self.exact = exact
        ps = list(pieces)
        if circle:
            fixed = []
            for p in ps:
                if p.lo < 0 or p.hi > 1:
                    raise ValueError("circle pieces must lie in [0, 1]")
                if p.hi == 1 and p.hi_closed:
                    fixed.append(Piece(Fraction(0), Fraction(0)))
                    q = _make(p.lo, p.hi, p.lo_closed, False)
                    if q is not None:
                        fixed.append(q)
                else:
                    fixed.append(p)
            ps = fixed
        else:
            for p in ps:
                if p.lo < 0 or p.hi > 1:
                    raise ValueError("interval pieces must lie in [0, 1]")
        self.pieces: Tuple[Piece, ...] = tuple(_merge(ps))

    @classmethod
    def of(cls, intervals: Sequence[Sequence], closed: bool = True, circle: bool = False):
        """``IntervalUnion.of([("0", "1/4")], closed=False, circle=True)``."""
        pieces = []
        for lo, hi in intervals:
            lo, hi = as_fraction(lo), as_fraction(hi)
            if circle and hi - lo >= 1:
                return cls.full(circle=True) if closed or hi - lo > 1 else cls.of_arc(lo, Fraction(1), False, False)
            if circle and (lo < 0 or hi > 1):
                return cls.union_all([cls.of_arc(lo, hi - lo, closed, closed)])
            p = _make(lo, hi, closed, closed)
            if p is not None:
                pieces.append(p)
        return cls(pieces, circle=circle)

    @classmethod
    def full(cls, circle: bool) -> "IntervalUnion":
        if circle:
            return cls([Piece(Fraction(0), Fraction(1), True, False)], circle=True)
        return cls([Piece(Fraction(0), Fraction(1))], circle=False)

    @classmethod
    def of_arc(cls, start: Fraction, length: Fraction, lc: bool, hc: bool, exact: bool = True):
        """Arc from ``start`` of the given length on the circle, wrapping through 0."""
        if length > 1 or (length == 1 and (lc or hc)):
            return cls.full(circle=True)
        a = start - (start.numerator // start.denominator)
        b = a + length
        if b <= 1:
            p = _make(a, b, lc, hc)
            return cls([] if p is None else [p], circle=True, exact=exact)
        pieces = [p for p in (_make(a, Fraction(1), lc, False), _make(Fraction(0), b - 1, True, hc))
                  if p is not None]
        return cls(pieces, circle=True, exact=exact)

    @classmethod
    def union_all(cls, unions: Sequence["IntervalUnion"]) -> "IntervalUnion":
        circle = unions[0].circle if unions else False
        pieces = [p for u in unions for p in u.pieces]
        return cls(pieces, circle=circle, exact=all(u.exact for u in unions))

    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def measure(self) -> Fraction:
        return sum((p.length for p in self.pieces), Fraction(0))

    def is_full(self) -> bool:
        return self == IntervalUnion.full(self.circle)

    def intersects(self, other: "IntervalUnion") -> bool:
        for p in self.pieces:
            for q in other.pieces:
                a, b = (p, q) if (p.lo, not p.lo_closed) <= (q.lo, not q.lo_closed) else (q, p)
                if b.lo < a.hi or (b.lo == a.hi and a.hi_closed and b.lo_closed):
                    return True
        return False

    def contains(self, x) -> bool:
        x = as_fraction(x)
        if self.circle:
            x = x - (x.numerator // x.denominator)
        return any(p.contains(x) for p in self.pieces)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.circle == other.circle and self.pieces == other.pieces

    def __repr__(self):
        parts = []
        for p in self.pieces:
            parts.append(f"{'[' if p.lo_closed else '('}{p.lo}, {p.hi}{']' if p.hi_closed else ')'}")
        body = " ∪ ".join(parts) if parts else "∅"
        return f"IntervalUnion({body}{', circle' if self.circle else ''})"

    def to_list(self) -> list:
        return [[str(p.lo), str(p.hi), p.lo_closed, p.hi_closed] for p in self.pieces]
