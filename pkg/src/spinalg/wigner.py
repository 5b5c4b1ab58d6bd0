"""Exact Wigner 3jm and 6j symbols.

Both symbols are evaluated with Racah's single-sum formulas. The alternating
sum is accumulated as an exact :class:`~fractions.Fraction` and only then
combined with the square-rooted factorial prefactor, so every result is an
exact :class:`~spinalg.exact.SqrtRational`.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .exact import HalfInt, SqrtRational

__all__ = ["triangle_satisfied", "three_jm", "six_j", "factorial"]

_fact = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    """Memoized exact factorial, safe to call from several threads."""
    if n < 0:
        raise DomainError(f"factorial of negative number {n}")
    if n >= len(_fact):
        with _fact_lock:
            table = _fact
            while len(table) <= n:
                table.append(table[-1] * len(table))
    return _fact[n]


def _triangle2(a: int, b: int, c: int) -> bool:
    # arguments are twice the angular momenta
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def _check_nonneg(*twice: int) -> None:
    if any(t < 0 for t in twice):
        raise DomainError("angular momenta must be non-negative")


def triangle_satisfied(j1, j2, j3) -> bool:
    """True iff |j1-j2| <= j3 <= j1+j2 and j1+j2+j3 is an integer."""
    a, b, c = (HalfInt.of(j).twice for j in (j1, j2, j3))
    _check_nonneg(a, b, c)
    return _triangle2(a, b, c)


def _delta_sq(a: int, b: int, c: int) -> Fraction:
    # triangle coefficient squared, arguments twice-valued and triangle-valid
    f = factorial
    return Fraction(
        f((a + b - c) // 2) * f((a - b + c) // 2) * f((-a + b + c) // 2),
        f((a + b + c) // 2 + 1),
    )


@lru_cache(maxsize=None)
def _three_jm2(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> SqrtRational:
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if j < 0:
            raise DomainError("angular momenta must be non-negative")
        if abs(m) > j or (j - m) % 2:
            raise DomainError(
                f"projection {HalfInt(m)} invalid for angular momentum {HalfInt(j)}")
    if m1 + m2 + m3 != 0 or not _triangle2(j1, j2, j3):
        return SqrtRational.zero()

    f = factorial
    # integer-valued combinations
    k1 = (j3 - j2 + m1) // 2
    k2 = (j3 - j1 - m2) // 2
    k3 = (j1 + j2 - j3) // 2
    k4 = (j1 - m1) // 2
    k5 = (j2 + m2) // 2
    tmin = max(0, -k1, -k2)
    tmax = min(k3, k4, k5)
    total = Fraction(0)
    for t in range(tmin, tmax + 1):
        term = Fraction(1, f(t) * f(k1 + t) * f(k2 + t) * f(k3 - t) * f(k4 - t) * f(k5 - t))
        total += -term if t % 2 else term
    if total == 0:
        return SqrtRational.zero()

    prefactor = _delta_sq(j1, j2, j3) * (
        f((j1 + m1) // 2) * f((j1 - m1) // 2)
        * f((j2 + m2) // 2) * f((j2 - m2) // 2)
        * f((j3 + m3) // 2) * f((j3 - m3) // 2)
    )
    phase = -1 if ((j1 - j2 - m3) // 2) % 2 else 1
    return SqrtRational.from_parts(phase, prefactor, total)


def three_jm(j1, j2, j3, m1, m2, m3) -> SqrtRational:
    """Wigner 3jm symbol ``(j1 j2 j3; m1 m2 m3)`` as an exact value.

    Returns zero when the projections do not sum to zero or the triangle
    rule fails. Raises :class:`DomainError` when some ``|m| > j`` or
    ``j - m`` is not an integer.
    """
    return _three_jm2(*(HalfInt.of(x).twice for x in (j1, j2, j3, m1, m2, m3)))


@lru_cache(maxsize=None)
def _six_j2(a: int, b: int, c: int, d: int, e: int, f_: int) -> SqrtRational:
    _check_nonneg(a, b, c, d, e, f_)
    triads = ((a, b, c), (a, e, f_), (d, b, f_), (d, e, c))
    if not all(_triangle2(*t) for t in triads):
        return SqrtRational.zero()

    f = factorial
    lows = [sum(t) // 2 for t in triads]
    highs = [(a + b + d + e) // 2, (b + c + e + f_) // 2, (c + a + f_ + d) // 2]
    total = Fraction(0)
    for t in range(max(lows), min(highs) + 1):
        den = 1
        for lo in lows:
            den *= f(t - lo)
        for hi in highs:
            den *= f(hi - t)
        term = Fraction(f(t + 1), den)
        total += -term if t % 2 else term
    if total == 0:
        return SqrtRational.zero()

    prefactor = Fraction(1)
    for t in triads:
        prefactor *= _delta_sq(*t)
    return SqrtRational.from_parts(1, prefactor, total)


def six_j(j1, j2, j3, j4, j5, j6) -> SqrtRational:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}`` as an exact value.

    Zero whenever one of the triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6),
    (j4 j5 j3) violates the triangle rule.
    """
    return _six_j2(*(HalfInt.of(x).twice for x in (j1, j2, j3, j4, j5, j6)))
