"""Exact numbers for circle dynamics: elements of Q + Q*theta modulo 1.

A point on the circle is stored as ``q + c*theta (mod 1)`` where ``q`` and
``c`` are rationals and ``theta`` is one fixed irrational.  Because 1 and
theta are linearly independent over Q, the pair ``(q mod 1, c)`` is a unique
representation, so equality is decided exactly.  The numeric value of theta
only matters when a float is needed (distances between points with
different theta coefficients, plotting).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_THETA = (math.sqrt(5.0) - 1.0) / 2.0
THETA_SYMBOL = "θ"

Rational = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and exact decimal/ratio strings to Fraction.

    Floats are refused: an exact pipeline must never be fed a binary float
    by accident.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed exact number {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


@dataclass(frozen=True, order=True)
class RotationCoordinate:
    """The circle point ``q + c*theta mod 1`` with rational ``q`` and ``c``."""

    q: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self):
        q = as_fraction(self.q)
        object.__setattr__(self, "q", q - math.floor(q))
        object.__setattr__(self, "c", as_fraction(self.c))

    @classmethod
    def rational(cls, q) -> "RotationCoordinate":
        return cls(as_fraction(q), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.c == 0

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return RotationCoordinate(self.q + other.q, self.c + other.c)

    __radd__ = __add__

    def __neg__(self):
        return RotationCoordinate(-self.q, -self.c)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def scale(self, n: int) -> "RotationCoordinate":
        """Multiply by an integer; well defined on the circle only for ints."""
        if not isinstance(n, int):
            raise TypeError("circle points can only be scaled by integers")
        return RotationCoordinate(self.q * n, self.c * n)

    def to_float(self, theta: float = DEFAULT_THETA) -> float:
        value = float(self.q) + float(self.c) * theta
        return value - math.floor(value)

    def __str__(self):
        return format_rotation(self)

    def __repr__(self):
        return f"RotationCoordinate({format_rotation(self)!r})"


def _coerce(value):
    if isinstance(value, RotationCoordinate):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return RotationCoordinate(Fraction(value))
    return NotImplemented


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_rotation(x: RotationCoordinate) -> str:
    """Render as ``"1/4+2θ"``, ``"-θ"``, ``"1/3"``; parse_rotation inverts it."""
    if x.c == 0:
        return _format_fraction(x.q)
    if x.c == 1:
        theta_part = THETA_SYMBOL
    elif x.c == -1:
        theta_part = "-" + THETA_SYMBOL
    else:
        theta_part = _format_fraction(x.c) + THETA_SYMBOL
    if x.q == 0:
        return theta_part
    if theta_part.startswith("-"):
        return _format_fraction(x.q) + theta_part
    return _format_fraction(x.q) + "+" + theta_part


_TERM = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(θ|theta)?")


def parse_rotation(text: str) -> RotationCoordinate:
    """Parse ``"1/4+2θ"`` style strings (``theta`` is accepted for ``θ``)."""
    if not isinstance(text, str):
        raise TypeError("expected a string")
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty exact number")
    q = Fraction(0)
    c = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"malformed exact number {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and not m.group(1):
            raise ValueError(f"malformed exact number {text!r}")
        try:
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None
        if m.group(3):
            c += sign * coeff
        else:
            q += sign * coeff
        pos = m.end()
    return RotationCoordinate(q, c)
