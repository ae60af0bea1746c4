"""Shared grids and independent oracles for the test suite."""

import math
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np

from siftsum.arithmetic import ONE, Angle
from siftsum.diophantine import continued_fraction

getcontext().prec = 80


def quad_irrational(k: int) -> Angle:
    """Fixed-point fractional part of ``sqrt(k)`` for non-square ``k``."""
    r = math.isqrt(k << 256)
    return Angle.fixed(r - (math.isqrt(k) << 128))


QUAD_KS = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21)
CONV_KS = (2, 3, 5, 7)
CONV_DEPTHS = (5, 10, 15)


def vino_angles():
    """13 quadratic irrationals plus 12 convergents of four of them."""
    out = [(f"sqrt{k}", quad_irrational(k)) for k in QUAD_KS]
    for k in CONV_KS:
        cf = continued_fraction(quad_irrational(k), 64)
        for depth in CONV_DEPTHS:
            a, q = cf.convergents[depth]
            out.append((f"conv{k}_{depth}", Angle.rational(a, q)))
    return out


VINO_X = (10**3, 10**4, 10**5, 10**6)


def vino_grid():
    for name, alpha in vino_angles():
        for X in VINO_X:
            for Y in (10, X):
                yield name, alpha, X, Y


def exact_square_sum(ns, alpha: Angle, weights=None) -> complex:
    """``sum w_n e(n^2 alpha)`` with exact integer phase reduction and fsum."""
    x = alpha.as_fraction()
    re, im = [], []
    for i, n in enumerate(ns):
        f = Fraction(int(n) ** 2) * x
        f -= math.floor(f)
        t = 2 * math.pi * float(f)
        w = 1 if weights is None else weights[i]
        z = w * complex(math.cos(t), math.sin(t))
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def kernel_closed_form(x, T, beta):
    """``int_{-T}^{T} e^{i beta t} (sin xt - sin(xt/2)) / (pi t) dt`` via the sine integral."""
    from scipy.special import sici

    def si(y):
        return sici(y)[0]

    return (si((x + beta) * T) + si((x - beta) * T)
            - si((x / 2 + beta) * T) - si((x / 2 - beta) * T)) / math.pi


def decimal_sqrt(k: int) -> Decimal:
    return Decimal(k).sqrt()


def random_quadratic_phase(rng):
    """A seeded ``f(n) = a n^2 + b n + c`` with float coefficients."""
    a, b, c = rng.random(3)
    return lambda n: a * n * n + b * n + c


def brute_m3(H, P, coprime):
    """Straight 8-fold loop, only for very small boxes."""
    import itertools

    hs = range(-H, H + 1)
    ms = range(-P, P + 1)
    count = 0
    for h1, h2, h3, h4 in itertools.product(hs, repeat=4):
        for m1, m2, m3, m4 in itertools.product(ms, repeat=4):
            if h1 * m1 * m1 + h2 * m2 * m2 == h3 * m3 * m3 + h4 * m4 * m4:
                if not coprime or math.gcd(math.gcd(m1, m2), math.gcd(m3, m4)) == 1:
                    count += 1
    return count


def rng(seed):
    return np.random.default_rng(seed)
