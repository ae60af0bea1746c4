"""Exact solution counts for diagonal quadratic-form equations.

Each counter has a brute-force route (visit every tuple) and a hashed route
(tabulate the values of one side, pair equal values).  Coprimality of the
``m``-vector in ``M_3`` is handled per tuple by brute force and by Moebius
inversion over the common divisor in the hashed route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CapError, DomainError
from .expsum import BoundReport

HASHED = "hashed"
BRUTEFORCE = "bruteforce"
M3_TABLE_CAP = 50_000_000


@dataclass(frozen=True)
class FormCountResult:
    count: int
    box: tuple
    coprimality: bool
    method: str


def _isqrt_array(t: np.ndarray) -> np.ndarray:
    r = np.floor(np.sqrt(np.maximum(t, 0).astype(float))).astype(np.int64)
    r -= (r * r > t)
    r += ((r + 1) * (r + 1) <= t)
    return r


def count_binary(a: int, b: int, c: int, P: int, method: str = HASHED) -> FormCountResult:
    """Number of ``(x, y)`` in ``[1, P]^2`` with ``a x^2 + b y^2 = c``."""
    if a * b * c == 0:
        raise DomainError("a, b and c must be nonzero")
    x = np.arange(1, P + 1, dtype=np.int64)
    if method == BRUTEFORCE:
        X, Y = np.meshgrid(x, x, indexing="ij")
        count = int(np.count_nonzero(a * X * X + b * Y * Y == c))
    elif method == HASHED:
        rem = c - a * x * x
        ok = rem % b == 0
        t = rem[ok] // b
        t = t[t >= 1]
        y = _isqrt_array(t)
        count = int(np.count_nonzero((y * y == t) & (y <= P)))
    else:
        raise DomainError(f"unknown method {method!r}")
    return FormCountResult(count, (a, b, c, P), False, method)


def max_binary_count(a: int, b: int, C: int, P: int) -> int:
    """``max_{0 < |c| <= C}`` of :func:`count_binary` ``(a, b, c, P)``."""
    x = np.arange(1, P + 1, dtype=np.int64)
    X, Y = np.meshgrid(x, x, indexing="ij")
    v = (a * X * X + b * Y * Y).ravel()
    v = v[(v != 0) & (np.abs(v) <= C)]
    if len(v) == 0:
        return 0
    return int(np.bincount(v + C).max())


def _window_values(H: float, V: float) -> np.ndarray:
    """``h m^2`` for ``H < h <= 2H``, ``V < m <= 2V``."""
    h = np.arange(math.floor(H) + 1, math.floor(2 * H) + 1, dtype=np.int64)
    m = np.arange(math.floor(V) + 1, math.floor(2 * V) + 1, dtype=np.int64)
    return (h[:, None] * (m * m)[None, :]).ravel()


def count_R(j: int, H: float, V: float, method: str = HASHED) -> FormCountResult:
    """Number of ``(h1, m1, h2, m2)`` in the windows with ``h1 m1^2 - h2 m2^2 = j``."""
    vals = _window_values(H, V)
    if method == BRUTEFORCE:
        count = int(np.count_nonzero(vals[:, None] - vals[None, :] == j))
    elif method == HASHED:
        u, c = np.unique(vals, return_counts=True)
        idx = np.searchsorted(u, u - j)
        idx = np.minimum(idx, len(u) - 1)
        hit = u[idx] == u - j if len(u) else np.zeros(0, bool)
        count = int(np.sum(c[hit] * c[idx[hit]]))
    else:
        raise DomainError(f"unknown method {method!r}")
    return FormCountResult(count, (j, H, V), False, method)


def R_table(H: float, V: float) -> dict:
    """``{j: R(j; H)}`` for every ``j`` with a nonzero count."""
    vals = _window_values(H, V)
    if len(vals) == 0:
        return {}
    u, c = np.unique(vals, return_counts=True)
    diff = (u[:, None] - u[None, :]).ravel()
    w = (c[:, None] * c[None, :]).ravel()
    off = int(u.max() - u.min())
    R = np.bincount(diff + off, weights=w, minlength=2 * off + 1).astype(np.int64)
    nz = np.flatnonzero(R)
    return {int(k - off): int(R[k]) for k in nz}


def _pair_sum_square_count(h: np.ndarray, m: np.ndarray) -> int:
    """``#{h1 m1^2 + h2 m2^2 = h3 m3^2 + h4 m4^2}`` over the given value ranges."""
    v = (h[:, None] * (m * m)[None, :]).ravel()
    s = (v[:, None] + v[None, :]).ravel()
    _, c = np.unique(s, return_counts=True)
    return int(np.sum(c * c))


def _mobius_upto(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if not is_comp[p]:
            is_comp[p * p::p] = True
            is_comp[2 * p::p] = True
            mu[p::p] *= -1
            mu[p * p::p * p] = 0
    return mu


def m3_mobius_terms(H: int, P: int):
    """``[(d, mu(d), count_d)]`` for ``1 <= d <= P`` where ``count_d`` counts the
    solutions whose ``m``-vector is nonzero and divisible by ``d``."""
    h = np.arange(-H, H + 1, dtype=np.int64)
    mu = _mobius_upto(P)
    zero = (2 * H + 1)**4
    out = []
    for d in range(1, P + 1):
        if mu[d] == 0:
            continue
        m = np.arange(-(P // d), P // d + 1, dtype=np.int64) * d
        out.append((d, int(mu[d]), _pair_sum_square_count(h, m) - zero))
    return out


def count_M3(H: int, P: int, coprime: bool = True, method: str = HASHED) -> FormCountResult:
    """Solutions of ``h1 m1^2 + h2 m2^2 = h3 m3^2 + h4 m4^2`` with
    ``h_i in [-H, H]`` (0 included) and ``m_i in [-P, P]``.

    With ``coprime`` the ``m``-vector must have ``gcd = 1``; the all-zero
    vector (``gcd = 0``) is excluded.
    """
    if H < 0 or P < 0:
        raise DomainError("H and P must be nonnegative")
    if method == BRUTEFORCE:
        count = _backend.m3_bruteforce(H, P, coprime)
    elif method == HASHED:
        if ((2 * H + 1) * (2 * P + 1))**2 > M3_TABLE_CAP:
            raise CapError("pair-sum table exceeds the memory cap")
        if coprime:
            count = sum(mu * c for _, mu, c in m3_mobius_terms(H, P))
        else:
            count = _pair_sum_square_count(np.arange(-H, H + 1, dtype=np.int64),
                                           np.arange(-P, P + 1, dtype=np.int64))
    else:
        raise DomainError(f"unknown method {method!r}")
    return FormCountResult(int(count), (H, P), coprime, method)


def m3_bound_rhs(H: float, P: float, eps: float = 0.0) -> float:
    return H**3 * P**2 + H**5 * P**(2 / 3) + (H * P)**(2 + eps)


def _factor(n: int) -> dict:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class BHBBound:
    rhs: float
    delta_q: int
    norm_q: int
    delta_bad: int
    hypothesis_ok: bool


def bhb_bound_rhs(h1: int, h2: int, h3: int, h4: int, P: float, eps: float = 0.0) -> BHBBound:
    """Upper bound for the coprime solution count of a diagonal quaternary form.

    ``hypothesis_ok`` is False when ``Delta_bad^20 > P``, where the bound is
    not claimed to hold.
    """
    hs = (h1, h2, h3, h4)
    if min(hs) < 1:
        raise DomainError("coefficients must be positive")
    exps: dict = {}
    for h in hs:
        for p, e in _factor(h).items():
            exps[p] = exps.get(p, 0) + e
    delta_q = math.prod(hs)
    norm_q = max(hs)
    delta_bad = math.prod(p**e for p, e in exps.items() if e >= 2)
    rhs = (delta_bad**0.25 * (norm_q**4 / delta_q)**(5 / 8)
           * (P**2 / delta_q**0.25 + P**(4 / 3))
           * math.log(2 * P) * math.log(2 * delta_q) * delta_bad**eps)
    return BHBBound(rhs, delta_q, norm_q, delta_bad, delta_bad**20 <= P)


def bound4_windows(N: float, W: float, H: float):
    """``(V, L, L')``: ``m`` runs over ``(V, 2V]`` with ``V = N/(2W)`` so that
    ``h m^2`` lies in ``(L, 8L]``, ``L = H N^2 / (4 W^2)``, ``L' = 8L``."""
    V = N / (2 * W)
    L = H * N * N / (4 * W * W)
    return V, L, 8 * L


def bound4_lhs(N: float, W: float, H: float, method: str = HASHED) -> int:
    """``sum_{0 < |j| <= L'} R(j; H)^2``."""
    V, _, Lp = bound4_windows(N, W, H)
    if method == HASHED:
        return sum(r * r for j, r in R_table(H, V).items() if 0 < abs(j) <= Lp)
    if method == BRUTEFORCE:
        v = _window_values(H, V)
        d = (v[:, None] - v[None, :]).ravel()
        d = d[(d != 0) & (np.abs(d) <= Lp)]
        # every ordered pair of differences with equal value is one solution
        return int(np.count_nonzero(d[:, None] == d[None, :]))
    raise DomainError(f"unknown method {method!r}")


def bound4_check(N: float, W: float, H: float, eps: float = 0.0) -> BoundReport:
    V, L, Lp = bound4_windows(N, W, H)
    lhs = bound4_lhs(N, W, H)
    rhs = H**3 * (N / W)**(2 + eps) + H**5 * (N / W)**(2 / 3)
    return BoundReport.make("bound4", lhs, rhs, N=N, W=W, H=H, eps=eps, V=V, L=L)
