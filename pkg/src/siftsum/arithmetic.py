"""Exact and fixed-point scalar arithmetic for angles and unit-circle phases.

An :class:`Angle` is either a reduced rational ``a/q`` in ``[0, 1)`` or a
128-bit fixed-point fraction ``frac / 2**128``.  Every exponential sum in
the package takes its argument as an ``Angle``; the fractional parts
``{n^2 alpha}`` are formed with integer arithmetic and only converted to
floating point right before ``cos``/``sin`` are evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

FRAC_BITS = 128
ONE = 1 << FRAC_BITS
MASK128 = ONE - 1
MASK64 = (1 << 64) - 1

Real = Union[int, float, Fraction]

RATIONAL = "rational"
FIXED = "fixed"


@dataclass(frozen=True)
class Angle:
    """Argument of an exponential sum, modulo 1.

    Attributes:
        kind: ``"rational"`` or ``"fixed"``.
        a, q: numerator and denominator (rational kind); ``gcd(a, q) = 1``
            and ``0 <= a < q``.
        frac: fixed-point numerator over ``2**128`` (fixed kind).
        input_error: documented absolute error of the fixed-point value
            with respect to the real number it stands for, in units of
            ``2**-128``.  Zero for rational angles.
    """

    kind: str
    a: int = 0
    q: int = 1
    frac: int = 0
    input_error: int = 0

    @classmethod
    def rational(cls, a: int, q: int) -> "Angle":
        return reduce_rational(a, q)

    @classmethod
    def fixed(cls, frac: int, input_error: int = 1) -> "Angle":
        return cls(FIXED, frac=frac & MASK128, input_error=max(int(input_error), 1))

    @classmethod
    def from_real(cls, x: Real, input_error: int = 1) -> "Angle":
        """Fixed-point angle nearest below ``x mod 1``."""
        fx = Fraction(x)
        fx -= math.floor(fx)
        return cls.fixed(math.floor(fx * ONE), input_error)

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONAL

    @property
    def frac_hi(self) -> int:
        return self.frac >> 64

    @property
    def frac_lo(self) -> int:
        return self.frac & MASK64

    def as_fraction(self) -> Fraction:
        if self.is_rational:
            return Fraction(self.a, self.q)
        return Fraction(self.frac, ONE)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def scale(self, h: int) -> "Angle":
        """The angle ``h * alpha``: exact for rationals, 128-bit wraparound otherwise."""
        if self.is_rational:
            return reduce_rational(h * self.a, self.q)
        return Angle(FIXED, frac=(h * self.frac) & MASK128,
                     input_error=abs(h) * self.input_error)

    def __neg__(self) -> "Angle":
        return self.scale(-1)

    def shift(self, k: int) -> "Angle":
        """``alpha + k`` for an integer ``k``; the same point on the circle."""
        if self.is_rational:
            return reduce_rational(self.a + k * self.q, self.q)
        return self

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.a}/{self.q}"
        return f"fixed:{self.frac:#034x}"


@dataclass(frozen=True)
class Phase:
    """A point ``e(x) = exp(2 pi i x)`` on the unit circle."""

    re: float
    im: float

    def __post_init__(self):
        if abs(self.re * self.re + self.im * self.im - 1.0) > 2.0**-45:
            raise DomainError(f"({self.re}, {self.im}) is not on the unit circle")

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


def reduce_rational(a: int, q: int) -> Angle:
    if q == 0:
        raise DomainError("denominator must be nonzero")
    if q < 0:
        a, q = -a, -q
    a %= q
    g = math.gcd(a, q)
    return Angle(RATIONAL, a=a // g, q=q // g)


def nsq_residue(alpha: Angle, n: int) -> int:
    """Integer numerator of ``{n^2 alpha}``.

    Over ``q`` for rational angles (exact), over ``2**64`` for fixed-point
    angles (top 64 bits of ``n^2 * frac mod 2**128``).
    """
    if alpha.is_rational:
        r = n % alpha.q
        return (r * r % alpha.q) * alpha.a % alpha.q
    return ((n * n * alpha.frac) & MASK128) >> 64


def frac_nsq(alpha: Angle, n: int) -> float:
    """Fractional part ``{n^2 alpha}`` as a float in ``[0, 1)``.

    Rational angles are exact up to the final division; fixed-point angles
    carry an error of at most ``n^2 * 2**-128 + 2**-64`` from the truncation
    of the product, on top of the angle's own ``input_error``.
    """
    if n < 0:
        n = -n
    r = nsq_residue(alpha, n)
    if alpha.is_rational:
        return r / alpha.q
    # top 53 bits, so the result is strictly below 1
    return (r >> 11) * 2.0**-53


def nearest_int_distance(x: Real) -> Real:
    """``||x||``, the distance from ``x`` to the nearest integer."""
    f = x - math.floor(x)
    return min(f, 1 - f)


def phase(x: Real) -> Phase:
    """``e(x)`` evaluated from the reduced fractional part of ``x``."""
    f = x - math.floor(x)
    if f >= 0.5:
        f -= 1
    t = 2.0 * math.pi * float(f)
    return Phase(math.cos(t), math.sin(t))


def nsq_phase(alpha: Angle, n: int) -> Phase:
    return phase(frac_nsq(alpha, n))
