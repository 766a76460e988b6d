"""Exact number types: rationals, half-log coordinates and lattice points.

Every abscissa and ordinate of a combined graph is a real number of the form
``0.5 * log(r)`` with ``r`` a positive rational.  :class:`LogCoord` stores
``r`` and nothing else, so sums, differences and comparisons of graph
coordinates are decided with integer arithmetic only.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIO_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")
_INT_RE = re.compile(r"^\s*[+-]?\d+\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+)\s*$")


class ParseError(ValueError):
    pass


def rational_parse(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer literal or a finite decimal literal exactly.

    >>> rational_parse("6/14")
    Fraction(3, 7)
    >>> rational_parse("0.5")
    Fraction(1, 2)
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    m = _RATIO_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    if _INT_RE.match(text) or _DECIMAL_RE.match(text):
        return Fraction(text.strip())
    raise ParseError(f"not an exact rational literal: {text!r}")


def rational_format(x: Fraction) -> str:
    """Canonical text form, always ``p/q`` (``q`` may be 1)."""
    return f"{x.numerator}/{x.denominator}"


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, str):
        return rational_parse(x)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an exact rational")


@dataclass(frozen=True)
class LogCoord:
    """The real number ``0.5 * log(ratio)`` for a positive rational ``ratio``."""

    ratio: Fraction

    def __post_init__(self):
        r = self.ratio
        if not isinstance(r, Fraction):
            r = as_rational(r)
            object.__setattr__(self, "ratio", r)
        if r <= 0:
            raise ValueError(f"LogCoord ratio must be positive, got {r}")

    @classmethod
    def of(cls, ratio: RationalLike) -> "LogCoord":
        return cls(as_rational(ratio))

    @classmethod
    def log_of(cls, x: RationalLike) -> "LogCoord":
        """``log|x|`` as a half-log coordinate (ratio ``x**2``)."""
        x = as_rational(x)
        return cls(x * x)

    # ordering: log is increasing, so compare ratios
    def __lt__(self, other: "LogCoord") -> bool:
        return self.ratio < other.ratio

    def __le__(self, other: "LogCoord") -> bool:
        return self.ratio <= other.ratio

    def __gt__(self, other: "LogCoord") -> bool:
        return self.ratio > other.ratio

    def __ge__(self, other: "LogCoord") -> bool:
        return self.ratio >= other.ratio

    def __add__(self, other: "LogCoord") -> "LogCoord":
        return LogCoord(self.ratio * other.ratio)

    def __sub__(self, other: "LogCoord") -> "LogCoord":
        return LogCoord(self.ratio / other.ratio)

    def __neg__(self) -> "LogCoord":
        return LogCoord(1 / self.ratio)

    def is_zero(self) -> bool:
        return self.ratio == 1

    def to_float(self) -> float:
        return logcoord_to_float(self)

    def to_json(self) -> dict:
        return {
            "num": str(self.ratio.numerator),
            "den": str(self.ratio.denominator),
            "approx": round(self.to_float(), 12),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LogCoord":
        return cls(Fraction(int(obj["num"]), int(obj["den"])))

    def __repr__(self) -> str:
        return f"LogCoord({rational_format(self.ratio)})"


ZERO = LogCoord(Fraction(1))


def logcoord_compare(a: LogCoord, b: LogCoord) -> int:
    """Return -1, 0 or 1 as ``a < b``, ``a == b``, ``a > b``.

    Decided by cross-multiplying the ratios' numerators and denominators.
    """
    lhs = a.ratio.numerator * b.ratio.denominator
    rhs = b.ratio.numerator * a.ratio.denominator
    return (lhs > rhs) - (lhs < rhs)


def logcoord_add(a: LogCoord, b: LogCoord) -> LogCoord:
    return a + b


def logcoord_to_float(a: LogCoord) -> float:
    # math.log accepts arbitrarily large ints, so huge ratios never overflow
    r = a.ratio
    return 0.5 * (math.log(r.numerator) - math.log(r.denominator))


def logcoord_midpoint(a: LogCoord, b: LogCoord) -> LogCoord:
    """A coordinate strictly between ``a`` and ``b`` (assumes ``a != b``).

    The true midpoint needs a square root of the ratio product, so the
    arithmetic mean of the ratios is used instead; it still lies strictly
    between the two coordinates.
    """
    return LogCoord((a.ratio + b.ratio) / 2)


def exact_sqrt(x: Fraction) -> Fraction:
    """Square root of a rational that is a perfect square; raises otherwise."""
    if x < 0:
        raise ValueError("negative")
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(rn, rd)


@dataclass(frozen=True, order=True)
class LatticePoint:
    Q: int
    P: int

    def is_zero(self) -> bool:
        return self.Q == 0 and self.P == 0

    def det(self, other: "LatticePoint") -> int:
        """``Q*P' - Q'*P``; zero iff the two points are linearly dependent."""
        return self.Q * other.P - other.Q * self.P

    def error(self, xi: Fraction) -> Fraction:
        """``|Q*xi - P|``."""
        return abs(self.Q * xi - self.P)

    def normalized(self) -> "LatticePoint":
        """Representative of ``{x, -x}`` with ``Q >= 0`` (and ``P > 0`` if ``Q == 0``)."""
        if self.Q < 0 or (self.Q == 0 and self.P < 0):
            return LatticePoint(-self.Q, -self.P)
        return self

    def to_json(self) -> dict:
        return {"Q": str(self.Q), "P": str(self.P)}

    def __iter__(self):
        yield self.Q
        yield self.P
