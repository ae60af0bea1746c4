"""Continued fractions, rational approximation and Vinogradov's min-sum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _backend
from .arithmetic import ONE, Angle
from .errors import DomainError

# fixed-point expansions stop once q_k exceeds this, i.e. when the
# 2**-128 resolution is no longer 2**-32 below 1/q_k^2
FIXED_Q_CAP = 1 << 48


@dataclass(frozen=True)
class ApproxResult:
    a: int
    q: int
    err: float
    quality: float

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.a, self.q)


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: tuple
    convergents: tuple  # of (a_k, q_k)
    exact: bool  # True when the expansion terminated (rational input)


def _cf_quotients(x: Fraction, max_terms: int):
    out = []
    while len(out) < max_terms:
        a = math.floor(x)
        out.append(a)
        x -= a
        if x == 0:
            return out, True
        x = 1 / x
    return out, False


def _convergents(quotients):
    p0, q0, p1, q1 = 0, 1, 1, 0
    out = []
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def continued_fraction(alpha: Angle, max_terms: int = 64) -> ContinuedFraction:
    """Partial quotients and convergents of ``alpha`` in ``[0, 1)``.

    Rational angles expand exactly.  A fixed-point angle only determines
    its real number to within ``input_error * 2**-128``, so quotients are
    emitted only while both ends of that interval agree on them, and never
    past a denominator of ``2**48``.
    """
    if not 1 <= max_terms <= 64:
        raise DomainError("max_terms must lie in [1, 64]")
    if alpha.is_rational:
        qs, exact = _cf_quotients(Fraction(alpha.a, alpha.q), max_terms)
        return ContinuedFraction(tuple(qs), tuple(_convergents(qs)), exact)

    e = alpha.input_error
    lo = Fraction(max(alpha.frac - e, 0), ONE)
    hi = Fraction(alpha.frac + e, ONE)
    qlo, _ = _cf_quotients(lo, max_terms)
    qhi, _ = _cf_quotients(hi, max_terms)
    # numbers sharing a quotient prefix form an interval, so a prefix common
    # to both ends holds for every point in between
    qs = []
    for a, b in zip(qlo, qhi):
        if a != b:
            break
        qs.append(a)
    convs = []
    for k, c in enumerate(_convergents(qs)):
        if c[1] > FIXED_Q_CAP:
            qs = qs[:k]
            break
        convs.append(c)
    return ContinuedFraction(tuple(qs), tuple(convs), False)


def best_approximation(alpha: Angle, Q: int) -> ApproxResult:
    """The last convergent ``a/q`` of ``alpha`` with ``q <= Q``.

    It satisfies ``|alpha - a/q| < 1/(qQ) <= 1/q^2`` whenever the expansion
    reaches a denominator above ``Q``.
    """
    if Q < 1:
        raise DomainError("Q must be at least 1")
    cf = continued_fraction(alpha, 64)
    a, q = 0, 1
    for p, d in cf.convergents:
        if d > Q:
            break
        a, q = p, d
    x = alpha.as_fraction()
    err = abs(x - Fraction(a, q))
    return ApproxResult(a=a, q=q, err=float(err), quality=float(q * q * err))


def vinogradov_sum(alpha: Angle, X: float, Y: float, threads: int | None = None) -> float:
    """``sum_{n <= X} min(Y, 1/||alpha n||)``; terms with ``||alpha n|| = 0`` count ``Y``."""
    if X < 1 or Y < 1:
        raise DomainError("X and Y must be at least 1")
    if X > 1e9:
        raise DomainError("X above 1e9 is outside the direct-loop range")
    return float(_backend.vinogradov_total(alpha, X, Y, threads))


def vinogradov_bound_rhs(X: float, Y: float, q: int) -> float:
    return X * Y / q + (X + q) * math.log(2 * q)
