# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Every function mirrors one in ``_pykernels`` with the same signature and
semantics.  Sums are returned per fixed-size chunk, each chunk accumulated
with Neumaier compensation, so the caller can combine them in a fixed order
no matter how the chunks were distributed over threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs, M_PI

cnp.import_array()

ctypedef unsigned long long u64
ctypedef long long i64
cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

NAME = "cython"


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef inline double _x_rational(u64 v, u64 a, u64 q) noexcept nogil:
    cdef u64 r = v % q
    cdef u64 r2 = <u64>((<u128>r * r) % q)
    cdef u64 t = <u64>((<u128>r2 * a) % q)
    return <double>t / <double>q


cdef inline double _x_fixed(u64 v, u128 frac) noexcept nogil:
    cdef u128 m = <u128>v * v
    cdef u64 t = <u64>((m * frac) >> 64)
    return <double>(t >> 11) * 1.1102230246251565e-16  # 2**-53


cdef void _phase_chunks(const i64[::1] values, const double complex[::1] weights,
                        int weighted, int kind, u64 a, u64 q, u128 frac,
                        Py_ssize_t chunk, double[::1] out_re,
                        double[::1] out_im) noexcept nogil:
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i, k = 0, start
    cdef double x, ph, cr, ci, wr, wi, sr, cr_, si, ci_
    cdef u64 v
    start = 0
    while start < n:
        sr = 0.0
        cr_ = 0.0
        si = 0.0
        ci_ = 0.0
        for i in range(start, min(start + chunk, n)):
            v = <u64>(values[i] if values[i] >= 0 else -values[i])
            if kind == 0:
                x = _x_rational(v, a, q)
            else:
                x = _x_fixed(v, frac)
            if x >= 0.5:
                x -= 1.0
            ph = 2.0 * M_PI * x
            cr = cos(ph)
            ci = sin(ph)
            if weighted:
                wr = weights[i].real
                wi = weights[i].imag
                _neumaier(&sr, &cr_, wr * cr - wi * ci)
                _neumaier(&si, &ci_, wr * ci + wi * cr)
            else:
                _neumaier(&sr, &cr_, cr)
                _neumaier(&si, &ci_, ci)
        out_re[k] = sr + cr_
        out_im[k] = si + ci_
        k += 1
        start += chunk


def _nchunks(Py_ssize_t n, Py_ssize_t chunk):
    return (n + chunk - 1) // chunk


def square_phase_chunks_rational(values, weights, a, q, Py_ssize_t chunk):
    """Per-chunk sums of ``w_i * e(v_i^2 * a/q)``; requires ``q < 2**63``."""
    cdef const i64[::1] vv = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t nc = _nchunks(vv.shape[0], chunk)
    out_re = np.zeros(nc)
    out_im = np.zeros(nc)
    cdef double[::1] ore = out_re
    cdef double[::1] oim = out_im
    cdef int weighted = weights is not None
    cdef const double complex[::1] ww = (np.ascontiguousarray(weights, dtype=np.complex128)
                                         if weighted else np.zeros(1, np.complex128))
    cdef u64 ua = <u64>a
    cdef u64 uq = <u64>q
    with nogil:
        _phase_chunks(vv, ww, weighted, 0, ua, uq, 0, chunk, ore, oim)
    return out_re, out_im


def square_phase_chunks_fixed(values, weights, frac_hi, frac_lo, Py_ssize_t chunk):
    """Per-chunk sums of ``w_i * e(v_i^2 * frac / 2**128)``; ``|v_i| < 2**63``."""
    cdef const i64[::1] vv = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t nc = _nchunks(vv.shape[0], chunk)
    out_re = np.zeros(nc)
    out_im = np.zeros(nc)
    cdef double[::1] ore = out_re
    cdef double[::1] oim = out_im
    cdef int weighted = weights is not None
    cdef const double complex[::1] ww = (np.ascontiguousarray(weights, dtype=np.complex128)
                                         if weighted else np.zeros(1, np.complex128))
    cdef u128 frac = ((<u128>(<u64>frac_hi)) << 64) | (<u64>frac_lo)
    with nogil:
        _phase_chunks(vv, ww, weighted, 1, 0, 1, frac, chunk, ore, oim)
    return out_re, out_im


def vinogradov_chunks_rational(i64 n_lo, i64 n_hi, a, q, double Y, Py_ssize_t chunk):
    """Per-chunk sums of ``min(Y, 1/||n a/q||)`` for ``n_lo <= n < n_hi``."""
    cdef Py_ssize_t nc = _nchunks(max(n_hi - n_lo, 0), chunk)
    out = np.zeros(nc)
    cdef double[::1] o = out
    cdef u64 ua = <u64>a
    cdef u64 uq = <u64>q
    cdef i64 n, start = n_lo
    cdef Py_ssize_t k = 0
    cdef u64 r, d
    cdef double s, c, term
    with nogil:
        while start < n_hi:
            s = 0.0
            c = 0.0
            for n in range(start, min(start + chunk, n_hi)):
                r = <u64>((<u128>(<u64>n % uq) * ua) % uq)
                d = r if r <= uq - r else uq - r
                if d == 0:
                    term = Y
                else:
                    term = <double>uq / <double>d
                    if term > Y:
                        term = Y
                _neumaier(&s, &c, term)
            o[k] = s + c
            k += 1
            start += chunk
    return out


def vinogradov_chunks_fixed(i64 n_lo, i64 n_hi, frac_hi, frac_lo, double Y, Py_ssize_t chunk):
    """Per-chunk sums of ``min(Y, 1/||n frac / 2**128||)`` for ``n_lo <= n < n_hi``."""
    cdef Py_ssize_t nc = _nchunks(max(n_hi - n_lo, 0), chunk)
    out = np.zeros(nc)
    cdef double[::1] o = out
    cdef u128 frac = ((<u128>(<u64>frac_hi)) << 64) | (<u64>frac_lo)
    cdef i64 n, start = n_lo
    cdef Py_ssize_t k = 0
    cdef u64 t, d
    cdef double s, c, term
    with nogil:
        while start < n_hi:
            s = 0.0
            c = 0.0
            for n in range(start, min(start + chunk, n_hi)):
                t = <u64>((<u128>(<u64>n) * frac) >> 64)
                d = t if t <= (<u64>0) - t else (<u64>0) - t
                if d == 0:
                    term = Y
                else:
                    term = 18446744073709551616.0 / <double>d
                    if term > Y:
                        term = Y
                _neumaier(&s, &c, term)
            o[k] = s + c
            k += 1
            start += chunk
    return out


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def m3_bruteforce(int H, int P, bint coprime):
    """Count ``h1 m1^2 + h2 m2^2 = h3 m3^2 + h4 m4^2`` over the full box by
    visiting every 8-tuple; coprimality checked per tuple with ``gcd``."""
    cdef i64 h1, h2, h3, h4, m1, m2, m3, m4, lhs, g
    cdef i64 count = 0
    with nogil:
        for m1 in range(-P, P + 1):
            for m2 in range(-P, P + 1):
                for m3 in range(-P, P + 1):
                    for m4 in range(-P, P + 1):
                        if coprime:
                            g = _gcd(_gcd(m1, m2), _gcd(m3, m4))
                            if g != 1:
                                continue
                        for h1 in range(-H, H + 1):
                            for h2 in range(-H, H + 1):
                                lhs = h1 * m1 * m1 + h2 * m2 * m2
                                for h3 in range(-H, H + 1):
                                    for h4 in range(-H, H + 1):
                                        if lhs == h3 * m3 * m3 + h4 * m4 * m4:
                                            count += 1
    return count
