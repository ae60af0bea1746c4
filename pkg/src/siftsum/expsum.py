"""Evaluation of S(alpha; N) = sum_{n <= N} b(n) e(n^2 alpha) and its h-averages.

Also hosts the right-hand sides of the two main bounds and the driver that
turns evaluations into :class:`BoundReport` rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .arithmetic import Angle
from .diophantine import best_approximation
from .errors import DomainError, InvariantError
from .sequences import SievedSequence

FULL = "full"
DYADIC = "dyadic"

# per-term rounding allowance of one cos/sin evaluation plus the reduction
TERM_ERR = 2.0**-47


@dataclass(frozen=True)
class SumResult:
    value: complex
    n_limit: int
    angle: Angle
    window: str
    terms: int
    err_bound: float

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class HAverage:
    """``sum_{h <= H} |S(h alpha; N)|`` together with the individual ``|S|``."""

    total: float
    per_h: np.ndarray = field(repr=False)
    err_bound: float


@dataclass
class BoundReport:
    lemma_id: str
    lhs: float
    rhs: float
    ratio: float
    params: dict

    def __post_init__(self):
        if not self.rhs > 0:
            raise DomainError(f"{self.lemma_id}: bound must be positive, got {self.rhs}")

    @classmethod
    def make(cls, lemma_id, lhs, rhs, **params):
        lhs, rhs = float(lhs), float(rhs)
        return cls(lemma_id, lhs, rhs, lhs / rhs if rhs > 0 else math.nan, params)

    def as_dict(self):
        return {"lemma_id": self.lemma_id, "lhs": self.lhs, "rhs": self.rhs,
                "ratio": self.ratio, "params": dict(self.params)}


def window_members(seq: SievedSequence, N: int, window: str = FULL) -> np.ndarray:
    if N > seq.limit:
        raise DomainError(f"N={N} exceeds the sieve limit {seq.limit}")
    if window == FULL:
        return seq.members(1, N)
    if window == DYADIC:
        return seq.members(N // 2 + 1, N)
    raise DomainError(f"unknown window {window!r}")


def eval_S(seq: SievedSequence, alpha: Angle, N: int | None = None, window: str = FULL,
           threads: int | None = None) -> SumResult:
    """Sum ``e(n^2 alpha)`` over the members of ``seq`` in the window."""
    N = seq.limit if N is None else N
    n = window_members(seq, N, window)
    value = _backend.square_phase_sum(n, alpha, threads=threads)
    terms = len(n)
    err = terms * TERM_ERR
    if abs(value) > terms + err:
        raise InvariantError(f"|S| = {abs(value)} exceeds the number of terms {terms}")
    return SumResult(value, N, alpha, window, terms, err)


def eval_S_h_avg(seq: SievedSequence, alpha: Angle, H: int, N: int | None = None,
                 window: str = FULL, threads: int | None = None) -> HAverage:
    if H < 1:
        raise DomainError("H must be at least 1")
    N = seq.limit if N is None else N
    n = window_members(seq, N, window)
    per_h = np.array([abs(_backend.square_phase_sum(n, alpha.scale(h), threads=threads))
                      for h in range(1, H + 1)])
    err = H * len(n) * TERM_ERR
    total = math.fsum(per_h)
    if total > H * len(n) + err:
        raise InvariantError(f"sum of |S(h alpha)| = {total} exceeds H * terms")
    return HAverage(total, per_h, err)


def _check_args(N, q, H=1, eps=0.0):
    if N <= 1:
        raise DomainError("N must exceed 1 (log N must be positive)")
    if q < 1 or H < 1 or eps < 0:
        raise DomainError("need q >= 1, H >= 1, eps >= 0")


def theorem1_rhs(N: float, q: float, eps: float = 0.0) -> float:
    """``(N / sqrt(log N)) N^eps (q^-1/4 + N^-1/2 q^1/4 + N^-1/8)``."""
    _check_args(N, q, 1, eps)
    shape = q**-0.25 + N**-0.5 * q**0.25 + N**-0.125
    return N / math.sqrt(math.log(N)) * N**eps * shape


def theorem2_rhs(N: float, q: float, H: int, eps: float = 0.0) -> float:
    """``(N / sqrt(log N)) H (Nq)^eps (q^-1/4 + N^-1/8 + H^-1/4 N^-1/2 q^1/4)``."""
    _check_args(N, q, H, eps)
    shape = q**-0.25 + N**-0.125 + H**-0.25 * N**-0.5 * q**0.25
    return N / math.sqrt(math.log(N)) * H * (N * q)**eps * shape


def run_theorem_experiment(kind: str, seq: SievedSequence, alpha: Angle, N_list,
                           H_list=(1,), eps: float = 0.0,
                           threads: int | None = None) -> list[BoundReport]:
    """One report per ``N`` (``thm1``) or per ``(N, H)`` (``thm2``).

    The rational approximation is the last convergent with denominator at
    most ``N``, so ``|alpha - a/q| < 1/(qN)``.
    """
    if kind not in ("thm1", "thm2"):
        raise DomainError(f"unknown theorem kind {kind!r}")
    rows = []
    for N in N_list:
        N = int(N)
        approx = best_approximation(alpha, N)
        B = seq.count(N)
        if kind == "thm1":
            res = eval_S(seq, alpha, N, threads=threads)
            if abs(res.value) > B + res.err_bound:
                raise InvariantError(f"|S| exceeds B(N) at N={N}")
            rows.append(BoundReport.make(
                "thm1", abs(res.value), theorem1_rhs(N, approx.q, eps),
                N=N, q=approx.q, a=approx.a, H=1, eps=eps, B=B,
                re=res.value.real, im=res.value.imag))
        else:
            for H in H_list:
                H = int(H)
                avg = eval_S_h_avg(seq, alpha, H, N, threads=threads)
                if avg.total > H * B + avg.err_bound:
                    raise InvariantError(f"h-average exceeds H B(N) at N={N}, H={H}")
                rows.append(BoundReport.make(
                    "thm2", avg.total, theorem2_rhs(N, approx.q, H, eps),
                    N=N, q=approx.q, a=approx.a, H=H, eps=eps, B=B))
    return rows
