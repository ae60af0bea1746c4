"""Pure NumPy versions of the compiled inner loops in ``_kernels.pyx``.

Chunks are summed with :func:`math.fsum`; results agree with the compiled
kernels to a few ulps but are not bit-identical to them.  Each backend is
deterministic on its own.
"""

import math

import numpy as np

NAME = "python"

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_TWO64 = 18446744073709551616.0


def _hi64(x, y):
    """High 64 bits of the 128-bit product of two uint64 arrays/scalars."""
    x0 = x & _M32
    x1 = x >> _S32
    y0 = y & _M32
    y1 = y >> _S32
    p00 = x0 * y0
    p01 = x0 * y1
    p10 = x1 * y0
    p11 = x1 * y1
    mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
    return p11 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)


def _top64_times_frac(m, frac_hi, frac_lo):
    """Top 64 bits of ``m * frac mod 2**128`` for uint64 ``m``."""
    with np.errstate(over="ignore"):
        return _hi64(m, np.uint64(frac_lo)) + m * np.uint64(frac_hi)


def _chunk_fsum(terms, chunk):
    n = len(terms)
    return np.array([math.fsum(terms[s:s + chunk]) for s in range(0, n, chunk)], dtype=float)


def _phase_chunks(x, weights, chunk):
    x = np.where(x >= 0.5, x - 1.0, x)
    ph = 2.0 * np.pi * x
    c = np.cos(ph)
    s = np.sin(ph)
    if weights is not None:
        w = np.asarray(weights, dtype=np.complex128)
        c, s = w.real * c - w.imag * s, w.real * s + w.imag * c
    return _chunk_fsum(c, chunk), _chunk_fsum(s, chunk)


def square_phase_chunks_rational(values, weights, a, q, chunk):
    v = np.abs(np.asarray(values, dtype=np.int64))
    if q < (1 << 31):
        r = v % q
        t = (r * r % q) * a % q
        x = t / float(q)
    else:
        x = np.array([((int(n) % q) ** 2 % q) * a % q / q for n in v], dtype=float)
    return _phase_chunks(x, weights, chunk)


def square_phase_chunks_fixed(values, weights, frac_hi, frac_lo, chunk):
    v = np.abs(np.asarray(values, dtype=np.int64))
    if len(v) == 0 or int(v.max()) < (1 << 32):
        m = v.astype(np.uint64)
        m = m * m
        t = _top64_times_frac(m, frac_hi, frac_lo)
        x = (t >> _S11).astype(float) * 2.0**-53
    else:
        frac = (frac_hi << 64) | frac_lo
        mask = (1 << 128) - 1
        x = np.array([((((int(n) * int(n) * frac) & mask) >> 64) >> 11) * 2.0**-53 for n in v],
                     dtype=float)
    return _phase_chunks(x, weights, chunk)


def _vino_terms(d, scale, Y):
    with np.errstate(divide="ignore"):
        inv = np.where(d == 0, np.inf, scale / np.where(d == 0, 1.0, d.astype(float)))
    return np.minimum(inv, Y)


def vinogradov_chunks_rational(n_lo, n_hi, a, q, Y, chunk):
    out = []
    for s in range(n_lo, n_hi, chunk):
        n = np.arange(s, min(s + chunk, n_hi), dtype=np.int64)
        if q < (1 << 31):
            r = (n % q) * a % q
        else:
            r = np.array([int(k) * a % q for k in n], dtype=object)
        d = np.minimum(r, q - r)
        if d.dtype == object:
            terms = [Y if int(k) == 0 else min(Y, q / int(k)) for k in d]
        else:
            terms = _vino_terms(d, float(q), Y)
        out.append(math.fsum(terms))
    return np.array(out, dtype=float)


def vinogradov_chunks_fixed(n_lo, n_hi, frac_hi, frac_lo, Y, chunk):
    out = []
    for s in range(n_lo, n_hi, chunk):
        n = np.arange(s, min(s + chunk, n_hi), dtype=np.uint64)
        t = _top64_times_frac(n, frac_hi, frac_lo)
        with np.errstate(over="ignore"):
            neg = np.uint64(0) - t
        d = np.minimum(t, neg)
        out.append(math.fsum(_vino_terms(d, _TWO64, Y)))
    return np.array(out, dtype=float)


def m3_bruteforce(H, P, coprime):
    """Count ``h1 m1^2 + h2 m2^2 = h3 m3^2 + h4 m4^2`` by comparing every
    left 4-tuple against every right 4-tuple; gcd checked per matching tuple."""
    h = np.arange(-H, H + 1, dtype=np.int64)
    m = np.arange(-P, P + 1, dtype=np.int64)
    h1, m1, h2, m2 = (g.ravel() for g in np.meshgrid(h, m, h, m, indexing="ij"))
    side = h1 * m1 * m1 + h2 * m2 * m2
    gside = np.gcd(m1, m2)
    A = len(side)
    step = max(1, 10_000_000 // A)
    count = 0
    for s in range(0, A, step):
        eq = side[s:s + step, None] == side[None, :]
        if coprime:
            ii, jj = np.nonzero(eq)
            count += int(np.count_nonzero(np.gcd(gside[s + ii], gside[jj]) == 1))
        else:
            count += int(np.count_nonzero(eq))
    return count
