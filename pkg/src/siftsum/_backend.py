"""Kernel backend selection and the deterministic chunked reduction.

The compiled extension ``siftsum._kernels`` is used when it imports;
otherwise the NumPy fallback ``siftsum._pykernels`` is.  Setting
``SIFTSUM_BACKEND=python`` forces the fallback.

All sums are cut into chunks of ``CHUNK`` terms.  Chunks are handed out to
worker threads in contiguous blocks, and the per-chunk partial sums are
combined with a pairwise tree whose shape depends only on the number of
chunks, so the result is bit-identical for every thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

CHUNK = 1 << 16

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled


def available():
    return sorted(_BACKENDS)


def _initial():
    want = os.environ.get("SIFTSUM_BACKEND", "").strip().lower()
    if want:
        if want not in _BACKENDS:
            raise ImportError(f"SIFTSUM_BACKEND={want!r} is not available; have {available()}")
        return _BACKENDS[want]
    return _compiled if _compiled is not None else _pykernels


_active = _initial()


def active():
    return _active


def set_backend(name):
    """Switch the kernel backend; returns the previous backend name."""
    global _active
    prev = _active.NAME
    _active = _BACKENDS[name]
    return prev


def resolve_threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("SIFTSUM_THREADS", "1") or 1)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def pairwise_sum(parts):
    """Sum a 1-d float array with a fixed pairwise tree."""
    parts = list(parts)
    if not parts:
        return 0.0
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def _blocks(n, threads):
    """Split ``range(n)`` into at most ``threads`` chunk-aligned blocks."""
    nchunks = (n + CHUNK - 1) // CHUNK
    per = max(1, (nchunks + threads - 1) // threads)
    return [(s * CHUNK, min(n, (s + per) * CHUNK)) for s in range(0, nchunks, per)]


def _run(fn, blocks, threads):
    if threads == 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def square_phase_sum(values, alpha, weights=None, threads=None):
    """``sum_i w_i e(alpha v_i^2)`` with the deterministic chunked reduction."""
    values = np.ascontiguousarray(values, dtype=np.int64)
    if weights is not None:
        weights = np.ascontiguousarray(weights, dtype=np.complex128)
    threads = resolve_threads(threads)
    k = _active
    if alpha.is_rational:
        if alpha.q >= (1 << 63):
            k = _pykernels

        def fn(b):
            w = None if weights is None else weights[b[0]:b[1]]
            return k.square_phase_chunks_rational(values[b[0]:b[1]], w, alpha.a, alpha.q, CHUNK)
    else:
        def fn(b):
            w = None if weights is None else weights[b[0]:b[1]]
            return k.square_phase_chunks_fixed(values[b[0]:b[1]], w, alpha.frac_hi,
                                               alpha.frac_lo, CHUNK)
    parts = _run(fn, _blocks(len(values), threads), threads)
    re = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    im = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0)
    return complex(pairwise_sum(re), pairwise_sum(im))


def vinogradov_total(alpha, X, Y, threads=None):
    """``sum_{1 <= n <= X} min(Y, 1/||alpha n||)``, with ``min(Y, 1/0) = Y``."""
    n_max = int(np.floor(X))
    threads = resolve_threads(threads)
    k = _active
    if alpha.is_rational:
        if alpha.q >= (1 << 63):
            k = _pykernels

        def fn(b):
            return k.vinogradov_chunks_rational(b[0] + 1, b[1] + 1, alpha.a, alpha.q,
                                                float(Y), CHUNK)
    else:
        def fn(b):
            return k.vinogradov_chunks_fixed(b[0] + 1, b[1] + 1, alpha.frac_hi,
                                             alpha.frac_lo, float(Y), CHUNK)
    parts = _run(fn, _blocks(max(n_max, 0), threads), threads)
    return pairwise_sum(np.concatenate(parts)) if parts else 0.0


def m3_bruteforce(H, P, coprime):
    return int(_active.m3_bruteforce(H, P, coprime))
