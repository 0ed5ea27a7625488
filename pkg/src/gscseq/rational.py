"""Exact rational helpers shared by the construction and planning code.

All exact quantities are :class:`fractions.Fraction` instances; Python integers
are unbounded so no overflow handling is needed.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction without ever going through a float.

    Accepts ints, Fractions and ``"p/q"`` / ``"p"`` strings. Floats and
    decimal strings are rejected so exactness is never silently lost.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise ValueError(f"not a rational of the form p/q: {value!r}")
        num, den = match.groups()
        den = int(den) if den is not None else 1
        if den == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(int(num), den)
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def mod1(x: Fraction) -> Fraction:
    """Reduce into [0, 1)."""
    return x - math.floor(x)


def wrap_u(x: Fraction) -> Fraction:
    """Reduce into [-1, 1) by subtracting the unique even integer."""
    return x - 2 * math.floor((x + 1) / 2)


def fmt(x: Fraction) -> str:
    """Canonical ``"num/den"`` text (den always written)."""
    return f"{x.numerator}/{x.denominator}"


def lcm_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


def is_square_free(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def square_free_split(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n == s * m**2`` and ``s`` square-free."""
    if n < 1:
        raise ValueError("n must be positive")
    s, m = 1, 1
    d = 2
    rest = n
    while d * d <= rest:
        e = 0
        while rest % d == 0:
            rest //= d
            e += 1
        m *= d ** (e // 2)
        s *= d ** (e % 2)
        d += 1
    s *= rest
    return s, m


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def units(n: int) -> list[int]:
    """Residues in 1..n-1 coprime to n (``[1]`` for n == 1)."""
    if n == 1:
        return [1]
    return [x for x in range(1, n) if math.gcd(x, n) == 1]
