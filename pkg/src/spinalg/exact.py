"""Exact half-integers and signed square roots of rationals."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError

_HALF_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*2\s*$")


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-odd-integer, stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value: HalfInt | int | float | str | Fraction) -> HalfInt:
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise DomainError(f"not a half-integer: {value!r}")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            text = value.strip()
            m = _HALF_RE.match(text)
            if m:
                return cls(int(m.group(1)))
            try:
                value = Fraction(text)
            except (ValueError, ZeroDivisionError):
                raise DomainError(f"not a half-integer: {value!r}") from None
        if isinstance(value, float):
            if not math.isfinite(value):
                raise DomainError(f"not a half-integer: {value!r}")
            value = Fraction(value)
        if isinstance(value, Rational):
            doubled = Fraction(value) * 2
            if doubled.denominator != 1:
                raise DomainError(f"not a half-integer: {value!r}")
            return cls(int(doubled))
        raise DomainError(f"not a half-integer: {value!r}")

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.twice)

    def __abs__(self) -> HalfInt:
        return HalfInt(abs(self.twice))

    def __float__(self) -> float:
        return self.twice / 2

    def __int__(self) -> int:
        if not self.is_integer:
            raise DomainError(f"{self} is not an integer")
        return self.twice // 2

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _sign(x: int | Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SqrtRational:
    """The exact number ``sign * sqrt(radicand)``.

    The radicand is a reduced non-negative :class:`fractions.Fraction`;
    the value is zero iff ``sign == 0`` (and then the radicand is 0).
    """

    sign: int
    radicand: Fraction

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or 1, got {self.sign}")
        rad = Fraction(self.radicand)
        if rad < 0:
            raise DomainError("radicand must be non-negative")
        if self.sign == 0 or rad == 0:
            object.__setattr__(self, "sign", 0)
            rad = Fraction(0)
        object.__setattr__(self, "radicand", rad)

    @classmethod
    def zero(cls) -> SqrtRational:
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, value: int | Fraction) -> SqrtRational:
        value = Fraction(value)
        return cls(_sign(value), value * value)

    @classmethod
    def from_parts(cls, sign: int, radicand: int | Fraction,
                   factor: int | Fraction = 1) -> SqrtRational:
        """``sign * sqrt(radicand) * factor`` with a rational ``factor``."""
        factor = Fraction(factor)
        return cls(sign * _sign(factor), Fraction(radicand) * factor * factor)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: SqrtRational | int | Fraction) -> SqrtRational:
        if not isinstance(other, SqrtRational):
            other = SqrtRational.from_rational(other)
        return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __neg__(self) -> SqrtRational:
        return SqrtRational(-self.sign, self.radicand)

    def square(self) -> Fraction:
        """The signed square ``sign * radicand``."""
        return self.sign * self.radicand

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        # int / int is correctly rounded for arbitrary sizes
        return self.sign * math.sqrt(self.radicand.numerator / self.radicand.denominator)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        s = "+" if self.sign > 0 else "-"
        return f"{s}sqrt({self.radicand.numerator}/{self.radicand.denominator})"
