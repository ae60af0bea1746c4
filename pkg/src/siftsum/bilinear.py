"""Sieve decomposition pieces, type-I/type-II sums and their bound shapes.

The functions here evaluate the concrete sums that appear when the
exponential sum over a sifted sequence is split into linear and bilinear
parts: the Legendre (Moebius-over-divisors) identity, the three terms of
the truncated decomposition for caller-supplied coefficients, linear sums
over boxes ``V < m <= V'``, ``W < n <= W'`` with ``N/2 < mn <= N``, the
bilinear sums with the ``mn = 1 mod 4`` condition, the additive form of the
characters mod 4, the Weyl differencing identity and the smoothed cutoff
kernel for the condition ``x/2 < beta <= x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _backend
from .arithmetic import Angle, phase
from .errors import DomainError
from .sequences import CLASS_3MOD4, prime_product

COEFF_SLACK = 1e-12
# sup_y y |Si(y) - pi/2| = 1 and four Si terms enter the cutoff error, so
# 4/pi suffices; the margin covers the quadrature tolerance
C_KERNEL = 1.3
# max of kernel_l1(x, T) / (x + log max(1, T)) over x in {0.25, 0.5, 1, 2,
# 5, 10, 20}, T in {1e-2, ..., 1e4} is 0.4771 (x = 1, T = 1e4)
C_L1 = 0.5
QUAD_TOL = 1e-8


@dataclass(frozen=True)
class CoeffSeq:
    """Complex coefficients on the consecutive indices ``start, start+1, ...``.

    Indices outside the stored range read as 0.
    """

    start: int
    values: np.ndarray = field(repr=False)
    sup_bound: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", vals)
        if len(vals) and np.abs(vals).max() > self.sup_bound + COEFF_SLACK:
            raise DomainError(f"coefficient exceeds its documented bound {self.sup_bound}")

    @property
    def stop(self) -> int:
        return self.start + len(self.values)

    def at(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = np.zeros(idx.shape, dtype=np.complex128)
        ok = (idx >= self.start) & (idx < self.stop)
        out[ok] = self.values[idx[ok] - self.start]
        return out

    @classmethod
    def constant(cls, c, lo: int, hi: int, sup_bound: float | None = None) -> "CoeffSeq":
        """``c`` on ``lo <= i <= hi``."""
        n = max(hi - lo + 1, 0)
        return cls(lo, np.full(n, c, dtype=np.complex128),
                   abs(c) if sup_bound is None else sup_bound)

    @classmethod
    def from_function(cls, f, lo: int, hi: int, sup_bound: float = 1.0) -> "CoeffSeq":
        return cls(lo, np.array([f(i) for i in range(lo, hi + 1)], dtype=np.complex128),
                   sup_bound)

    @classmethod
    def random_unimodular(cls, rng, lo: int, hi: int) -> "CoeffSeq":
        n = max(hi - lo + 1, 0)
        return cls(lo, np.exp(2j * np.pi * rng.random(n)), 1.0)


def _csum(z) -> complex:
    z = np.asarray(z, dtype=np.complex128)
    return complex(math.fsum(z.real), math.fsum(z.imag))


# -- Legendre identity --------------------------------------------------------

def legendre_identity_check(u: CoeffSeq, z: float, residue_class: str = CLASS_3MOD4):
    """Both sides of ``sum_{(n, P(z)) = 1} u_n = sum_{d | P(z)} mu(d) sum_{d | n} u_n``.

    ``u`` lives on ``[1, N]``.  The left side sieves the coprime ``n``
    directly; the right side enumerates all squarefree divisors (at most
    ``2**20`` of them).
    """
    if u.start != 1:
        raise DomainError("u must be indexed from 1")
    N = len(u.values)
    pp = prime_product(z, residue_class)
    divisors = pp.divisors(cap=20)

    coprime = np.ones(N, dtype=bool)
    for p in pp.primes:
        coprime[p - 1::p] = False
    lhs = _csum(u.values[coprime])

    parts = [mu * _csum(u.values[d - 1::d]) for d, mu in divisors if d <= N]
    rhs = complex(math.fsum(c.real for c in parts), math.fsum(c.imag for c in parts))
    return lhs, rhs


# -- decomposition terms ----------------------------------------------------

@dataclass(frozen=True)
class DecompositionParams:
    N: int
    M: int
    z: float
    Z: float | None = None
    M0: int | None = None

    def __post_init__(self):
        if self.Z is None:
            object.__setattr__(self, "Z", float(min(self.N, max(2.0, self.z, math.isqrt(self.N)))))
        if self.M0 is None:
            object.__setattr__(self, "M0", self.M)
        if not max(2.0, self.z) <= self.Z <= self.N:
            raise DomainError(f"need max(2, z) <= Z <= N, got z={self.z}, Z={self.Z}, N={self.N}")
        if not 2 <= self.M0 <= self.M:
            raise DomainError(f"need 2 <= M0 <= M, got M0={self.M0}, M={self.M}")


@dataclass(frozen=True)
class DecompositionTerms:
    s1: complex
    s2: complex
    s3: complex
    trivial: tuple  # sum of |weights| of each term

    def __iter__(self):
        return iter((self.s1, self.s2, self.s3))


def _mobius_on_product(ell: np.ndarray, primes) -> np.ndarray:
    """``mu(l) [l | prod(primes)]`` for an array of ``l``."""
    rem = ell.copy()
    sign = np.ones(len(ell), dtype=np.int64)
    for p in primes:
        hit = rem % p == 0
        rem[hit] //= p
        sign[hit] = -sign[hit]
    return np.where(rem == 1, sign, 0)


def _small_divisors(primes, bound):
    """Squarefree ``(d, mu(d))`` with ``d < bound`` built from ``primes``."""
    out = [(1, 1)] if bound > 1 else []
    for p in primes:
        out += [(d * p, -mu) for d, mu in out if d * p < bound]
    return sorted(out)


def eval_decomposition_terms(params: DecompositionParams, alpha: Angle,
                             rho: CoeffSeq | None = None,
                             coeffs: tuple | None = None,
                             threads: int | None = None) -> DecompositionTerms:
    """The three sums of the truncated decomposition over ``N/2 < n <= N``.

    ``s1``: ``sum_{d < M, d | P(z)} mu(d) sum_{d | n, n = 1 [4]} e(alpha n^2)``.
    ``s2``: ``sum_{z <= p <= sqrt N, p = 3 [4]} sum_{mp = 1 [4]} rho(m) e(alpha (mp)^2)``.
    ``s3``: ``sum_{M <= l <= Mz, kl >= M, kl = 1 [4]} a_l b_k e(alpha (kl)^2)``
    for one fixed slice of the coefficient sequences.

    Defaults: ``rho = 1``, ``a_l = mu(l) [l | P(z)]``, ``b_k = 1``.
    """
    N, M, z = params.N, params.M, params.z
    lo = N // 2 + 1
    pp = prime_product(z, CLASS_3MOD4)

    vals, wts = [], []
    for d, mu in _small_divisors(pp.primes, M):
        n = np.arange(-(-lo // d) * d, N + 1, d, dtype=np.int64)
        n = n[n % 4 == 1]
        vals.append(n)
        wts.append(np.full(len(n), mu, dtype=np.complex128))
    s1, t1 = _weighted(vals, wts, alpha, threads)

    big = prime_product(math.isqrt(N) + 1, CLASS_3MOD4).primes
    vals, wts = [], []
    for p in big:
        if p < z:
            continue
        m = np.arange(-(-lo // p), N // p + 1, dtype=np.int64)
        m = m[(m * p) % 4 == 1]
        w = np.ones(len(m), dtype=np.complex128) if rho is None else rho.at(m)
        vals.append(m * p)
        wts.append(w)
    s2, t2 = _weighted(vals, wts, alpha, threads)

    ell = np.arange(M, int(math.floor(M * z)) + 1, dtype=np.int64)
    if coeffs is None:
        a_l = _mobius_on_product(ell, pp.primes).astype(np.complex128)
        b_seq = None
    else:
        a_seq, b_seq = coeffs
        a_l = a_seq.at(ell)
    vals, wts = [], []
    for l, al in zip(ell, a_l):
        if al == 0:
            continue
        k = np.arange((lo + l - 1) // l, N // l + 1, dtype=np.int64)
        k = k[(k * l >= M) & ((k * l) % 4 == 1)]
        bk = np.ones(len(k), dtype=np.complex128) if b_seq is None else b_seq.at(k)
        vals.append(k * l)
        wts.append(al * bk)
    s3, t3 = _weighted(vals, wts, alpha, threads)
    return DecompositionTerms(s1, s2, s3, (t1, t2, t3))


def _weighted(vals, wts, alpha, threads):
    if not vals:
        return 0j, 0.0
    v = np.concatenate(vals)
    w = np.concatenate(wts)
    return (_backend.square_phase_sum(v, alpha, weights=w, threads=threads),
            math.fsum(np.abs(w)))


# -- characters mod 4 in additive form --------------------------------------

def char4_expansion(n: int):
    """``((1 - e(n/2)) / 2, (e(n/4) - e(3n/4)) / 2i)``: the principal and the
    non-principal character mod 4 written with additive characters."""
    e2 = complex(phase(Fraction(n, 2)))
    e4 = complex(phase(Fraction(n, 4)))
    e34 = complex(phase(Fraction(3 * n, 4)))
    return (1 - e2) / 2, (e4 - e34) / 2j


# -- type-I sums --------------------------------------------------------------

def _windows(V, W, N):
    if not (0 < V <= N and 0 < W <= N):
        raise DomainError(f"need 0 < V, W <= N, got V={V}, W={W}, N={N}")
    return min(2 * V, N), min(2 * W, N)


def box_pairs(V, W, N, congruence: bool = False):
    """All ``(m, n)`` with ``V < m <= V'``, ``W < n <= W'``, ``N/2 < mn <= N``
    (and ``mn = 1 mod 4`` if asked), with ``V' = min(2V, N)``, ``W' = min(2W, N)``."""
    Vp, Wp = _windows(V, W, N)
    m = np.arange(math.floor(V) + 1, math.floor(Vp) + 1, dtype=np.int64)
    n = np.arange(math.floor(W) + 1, math.floor(Wp) + 1, dtype=np.int64)
    mm, nn = np.meshgrid(m, n, indexing="ij")
    prod = mm * nn
    ok = (2 * prod > N) & (prod <= N)
    if congruence:
        ok &= prod % 4 == 1
    return mm[ok], nn[ok]


def type_I_sum(a: CoeffSeq, alpha: Angle, V, W, N, congruence: bool = False,
               threads: int | None = None) -> complex:
    """``sum_m a_m sum_n e(alpha (mn)^2)`` over the box (see :func:`box_pairs`)."""
    m, n = box_pairs(V, W, N, congruence)
    return _backend.square_phase_sum(m * n, alpha, weights=a.at(m), threads=threads)


def type_I_via_characters(a: CoeffSeq, alpha: Angle, V, W, N,
                          threads: int | None = None) -> complex:
    """The ``mn = 1 mod 4`` linear sum rebuilt from the additive character forms,
    ``[mn = 1 (4)] = (w0(m) w0(n) + w1(m) w1(n)) / 2``."""
    m, n = box_pairs(V, W, N, congruence=False)
    tab = [char4_expansion(r) for r in range(4)]
    w0 = np.array([t[0] for t in tab])
    w1 = np.array([t[1] for t in tab])
    am = a.at(m)
    total = 0j
    for w in (w0, w1):
        total += _backend.square_phase_sum(m * n, alpha, weights=am * w[m % 4] * w[n % 4],
                                           threads=threads)
    return total / 2


def type_I_h_avg(a: CoeffSeq, alpha: Angle, V, W, N, H: int, congruence: bool = False,
                 threads: int | None = None):
    """``(sum_{h <= H} |S_h|, [S_1, ..., S_H])`` for the h-averaged linear sum."""
    if H < 1:
        raise DomainError("H must be at least 1")
    m, n = box_pairs(V, W, N, congruence)
    w = a.at(m)
    per_h = np.array([_backend.square_phase_sum(m * n, alpha.scale(h), weights=w,
                                                 threads=threads)
                      for h in range(1, H + 1)])
    return math.fsum(np.abs(per_h)), per_h


def linear_rhs(N, V, q, eps=0.0):
    return (N * q)**eps * (N * V**0.5 / q**0.5 + N**0.5 * V + math.sqrt(V * q))


def hlinear_rhs(N, V, q, H, eps=0.0):
    return (N * q)**eps * (H * N * V**0.5 * q**-0.5 + H * N**0.5 * V + math.sqrt(H * V * q))


# -- type-II sums --------------------------------------------------------------

@dataclass(frozen=True)
class TypeIIResult:
    hs: np.ndarray = field(repr=False)
    per_h: np.ndarray = field(repr=False)
    total: float
    pairs: int


def h_range(H: int, h_window: str = "full"):
    """``1..H`` (``full``) or ``H < h <= 2H`` (``dyadic``)."""
    if H < 1:
        raise DomainError("H must be at least 1")
    if h_window == "full":
        return range(1, H + 1)
    if h_window == "dyadic":
        return range(H + 1, 2 * H + 1)
    raise DomainError(f"unknown h window {h_window!r}")


def type_II_sum(a: CoeffSeq, b: CoeffSeq, alpha: Angle, V, W, N, H: int = 1,
                h_window: str = "full", threads: int | None = None) -> TypeIIResult:
    """``sum_h |sum_{m, n; mn = 1 [4]} a_m b_n e(h alpha (mn)^2)|`` over the box."""
    m, n = box_pairs(V, W, N, congruence=True)
    w = a.at(m) * b.at(n)
    hs = np.array(list(h_range(H, h_window)))
    per_h = np.array([_backend.square_phase_sum(m * n, alpha.scale(int(h)), weights=w,
                                                 threads=threads) for h in hs])
    return TypeIIResult(hs, per_h, math.fsum(np.abs(per_h)), len(m))


def bilinear_rhs(which: int, N, W, H, q, eps=0.0) -> float:
    """One of the three upper bounds for the h-averaged bilinear sum."""
    f = (N * q)**eps
    tail = H**0.75 * N**0.5 * q**0.25
    if which == 1:
        return f * (H * N / q**0.25 + H * N / W**0.5 + H * N**0.75 * W**0.25 + tail)
    if which == 2:
        return f * (H * N / q**0.25 + H * (N * W)**0.5 + H * N / W**0.25 + tail)
    if which == 3:
        core = H * N / q**0.25 + H**0.75 * (N * W)**0.5 + H * N / W**0.25 + tail
        return f * core * (1 + H**0.5 * W**(1 / 3) / N**(1 / 3))
    raise DomainError("which must be 1, 2 or 3")


def bilinear_rhs_min(N, W, H, q, eps=0.0) -> float:
    return min(bilinear_rhs(k, N, W, H, q, eps) for k in (1, 2, 3))


def bilinear1_rhs(N, W, q, eps=0.0) -> float:
    return (N * q)**eps * (N / q**0.25 + (N * W)**0.5 + N / W**0.25 + N**0.5 * q**0.25)


def choose_bilinear_bound(V, W, H, N) -> int:
    """Which bilinear bound the size conditions single out.

    ``W >= V`` makes the second bound beat the first; if moreover
    ``H <= (N/W)^(2/3)`` the third is the smallest.  Without ``W >= V``
    neither simplification applies and the general first bound is returned.
    """
    if W >= V:
        return 3 if H <= (N / W)**(2 / 3) else 2
    return 1


# -- Weyl differencing ------------------------------------------------------

def _reduced_phases(f, ns):
    out = np.empty(len(ns))
    for i, n in enumerate(ns):
        v = f(n)
        if isinstance(v, (int, Fraction)):
            v = Fraction(v)
            out[i] = float(v - math.floor(v))
        else:
            out[i] = v - math.floor(v)
    return out


def weyl_difference_check(f, n_range):
    """``|sum_n e(f(n))|^2`` computed directly and as
    ``sum_k sum_{n, n+k in range} e(f(n+k) - f(n))``.

    ``f`` maps an integer to a real phase (int, float or Fraction; exact
    types are reduced mod 1 before rounding).
    """
    ns = list(n_range)
    L = len(ns)
    if L > 10_000:
        raise DomainError("range length above 1e4")
    if L == 0:
        return 0.0, 0.0
    x = _reduced_phases(f, ns)
    tau = 2.0 * math.pi
    re = math.fsum(np.cos(tau * x))
    im = math.fsum(np.sin(tau * x))
    direct = re * re + im * im

    # lag k collects the pairs (n, n + k); lags k and -k give conjugate
    # sums, so only the real parts of k >= 0 are formed
    by_k = [float(L)]
    for k in range(1, L):
        by_k.append(2.0 * math.fsum(np.cos(tau * (x[k:] - x[:-k]))))
    expanded = math.fsum(by_k)
    return direct, expanded


# -- smoothed cutoff -------------------------------------------------------

@dataclass(frozen=True)
class KernelEstimate:
    estimate: float
    indicator: bool
    err_allowance: float


def cutoff_kernel(t, x):
    """``(sin(xt) - sin(xt/2)) / (pi t)``, with its limit ``x / (2 pi)`` at 0."""
    t = np.asarray(t, dtype=float)
    safe = np.where(t == 0, 1.0, t)
    return np.where(t == 0, x / (2 * math.pi),
                    (np.sin(x * safe) - np.sin(0.5 * x * safe)) / (math.pi * safe))


def adaptive_simpson(f, a, b, tol=QUAD_TOL, panels=None):
    """Vectorised adaptive Simpson rule on ``[a, b]``.

    ``panels`` gives the initial partition (array of edges); each panel is
    halved until the Richardson error estimate falls below its share of
    ``tol``.
    """
    edges = np.linspace(a, b, 9) if panels is None else np.asarray(panels, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    width = b - a
    accepted = []
    for _ in range(60):
        if lo.size == 0:
            break
        mid = 0.5 * (lo + hi)
        fl, fm, fh = f(lo), f(mid), f(hi)
        fq1, fq3 = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        h = hi - lo
        whole = h / 6 * (fl + 4 * fm + fh)
        halves = h / 12 * (fl + 4 * fq1 + 2 * fm + 4 * fq3 + fh)
        err = np.abs(halves - whole) / 15
        ok = (err <= tol * h / width) | (h < 1e-12 * width)
        accepted.append(halves[ok] + (halves[ok] - whole[ok]) / 15)
        keep = ~ok
        lo, hi = np.concatenate([lo[keep], mid[keep]]), np.concatenate([mid[keep], hi[keep]])
    if lo.size:
        raise RuntimeError("adaptive Simpson did not converge")
    return math.fsum(np.concatenate(accepted)) if accepted else 0.0


def _panels(T, freq):
    """Dyadic split of ``[0, T]`` refined to quarter periods of ``freq``."""
    t0 = min(T, 1.0)
    pts = [0.0, t0]
    while pts[-1] < T:
        pts.append(min(2 * pts[-1], T))
    step = 0.25 / max(freq, 1e-9)
    edges = [0.0]
    for l, r in zip(pts[:-1], pts[1:]):
        k = max(1, math.ceil((r - l) / step))
        edges.extend(np.linspace(l, r, k + 1)[1:])
    return np.array(edges)


def fourier_cutoff_kernel(x: float, T: float, beta: float) -> KernelEstimate:
    """Smoothed approximation of ``[x/2 < beta <= x]``.

    ``estimate`` is ``int_{-T}^{T} e^{i beta t} K(t) dt`` for the cutoff
    kernel ``K``; since ``K`` is even only the cosine part survives and the
    integral is taken as twice the one over ``[0, T]``.
    """
    if x <= 0 or T <= 0 or beta <= 0:
        raise DomainError("x, T and beta must be positive")
    d = min(abs(beta - x), abs(beta - x / 2))
    if d < 1e-6 * x:
        raise DomainError("beta too close to a breakpoint")
    panels = _panels(T, (x + beta) / (2 * math.pi))
    est = 2 * adaptive_simpson(lambda t: np.cos(beta * t) * cutoff_kernel(t, x), 0.0, T,
                               panels=panels)
    return KernelEstimate(est, x / 2 < beta <= x, C_KERNEL / (T * d))


def kernel_l1(x: float, T: float) -> float:
    """``int_{-T}^{T} |K(t)| dt``."""
    if x <= 0 or T <= 0:
        raise DomainError("x and T must be positive")
    panels = _panels(T, x / (2 * math.pi))
    return 2 * adaptive_simpson(lambda t: np.abs(cutoff_kernel(t, x)), 0.0, T, panels=panels)


def kernel_l1_rhs(x: float, T: float) -> float:
    return x + math.log(max(1.0, T))

