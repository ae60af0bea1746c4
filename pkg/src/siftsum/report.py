"""Experiment configuration, suite driver and JSON/CSV report emission."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import bilinear as bl
from . import quadforms as qf
from ._backend import resolve_threads
from .arithmetic import ONE, Angle
from .diophantine import best_approximation, vinogradov_bound_rhs, vinogradov_sum
from .errors import DomainError, InvariantError
from .expsum import BoundReport, run_theorem_experiment
from .sequences import sieve_gaussian

SUITES = ("theorem1", "theorem2", "lemmas", "quadforms", "all")

# 128-bit fractional parts: sqrt(2) - 1 and (sqrt(5) - 1) / 2, both rounded down
SQRT2 = Angle.fixed(math.isqrt(2 << 256) - ONE)
GOLDEN = Angle.fixed((math.isqrt(5 << 256) - ONE) // 2)
QUAD_CONSTANTS = {"sqrt2": SQRT2, "golden": GOLDEN}


class UsageError(ValueError):
    """Malformed user input; maps to exit code 1."""


def parse_alpha_spec(s: str) -> Angle:
    """``rat:a/q``, ``dec:<decimal>`` or ``quad:sqrt2|golden``.

    Decimal input is taken as exact up to half a unit in its last digit,
    and that half-unit becomes the angle's ``input_error``.
    """
    kind, _, body = s.partition(":")
    if kind == "rat":
        num, slash, den = body.partition("/")
        try:
            a, q = int(num), int(den)
        except ValueError:
            raise UsageError(f"malformed rational angle {s!r}") from None
        if not slash or q == 0:
            raise UsageError(f"malformed rational angle {s!r}")
        return Angle.rational(a, q)
    if kind == "dec":
        try:
            d = Decimal(body)
        except InvalidOperation:
            raise UsageError(f"malformed decimal angle {s!r}") from None
        if not d.is_finite():
            raise UsageError(f"malformed decimal angle {s!r}")
        exp = d.as_tuple().exponent
        half_ulp = Fraction(1, 2) * Fraction(10)**exp
        return Angle.from_real(Fraction(d), input_error=math.ceil(half_ulp * ONE) + 1)
    if kind == "quad":
        if body not in QUAD_CONSTANTS:
            raise UsageError(f"unknown constant {body!r}; expected sqrt2 or golden")
        return QUAD_CONSTANTS[body]
    raise UsageError(f"malformed angle spec {s!r}")


@dataclass
class ExperimentConfig:
    suite: str
    alpha_specs: list
    N_list: list
    H_list: list = field(default_factory=lambda: [1])
    eps: float = 0.0
    seed: int = 0
    out_path: str = "report.json"
    threads: int = 0

    def validate(self):
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}")
        if not self.alpha_specs or not self.N_list or not self.H_list:
            raise UsageError("alpha_specs, N_list and H_list must be non-empty")
        for s in self.alpha_specs:
            parse_alpha_spec(s)
        if any(int(N) < 2 for N in self.N_list) or any(int(H) < 1 for H in self.H_list):
            raise UsageError("need N >= 2 and H >= 1")
        if self.eps < 0:
            raise UsageError("eps must be nonnegative")
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _rng(seed, *key):
    return np.random.default_rng([seed, *[int(k) & 0xFFFFFFFF for k in key]])


# -- single lemma rows ------------------------------------------------------

def lemma_report(lemma_id: str, params: dict, seed: int = 0,
                 threads: int | None = None) -> BoundReport:
    """Evaluate one finite lemma instance as a :class:`BoundReport`.

    Coefficients of the linear and bilinear sums are seeded random unit
    complex numbers; the box defaults to ``V = W = sqrt(N/2)`` so that
    ``mn`` fills ``(N/2, N]``.  ``alpha`` is an angle spec; ``q`` is taken from the
    last convergent with denominator at most ``N`` (``X`` for ``vino``).
    """
    p = dict(params)
    if lemma_id == "kernel":
        x, T, beta = float(p["x"]), float(p["T"]), float(p["beta"])
        k = bl.fourier_cutoff_kernel(x, T, beta)
        return BoundReport.make("kernel", abs(k.estimate - k.indicator), k.err_allowance,
                                x=x, T=T, beta=beta, estimate=k.estimate)
    alpha = parse_alpha_spec(str(p.get("alpha", "quad:golden")))
    eps = float(p.get("eps", 0.0))
    if lemma_id == "vino":
        X, Y = float(p["X"]), float(p["Y"])
        q = best_approximation(alpha, int(X)).q
        return BoundReport.make("vino", vinogradov_sum(alpha, X, Y, threads),
                                vinogradov_bound_rhs(X, Y, q),
                                alpha=str(p.get("alpha", "quad:golden")), X=X, Y=Y, q=q)

    N = int(p["N"])
    H = int(p.get("H", 1))
    approx = best_approximation(alpha, N)
    q = approx.q
    rng = _rng(seed, N, H, q)
    if lemma_id in ("linear", "hlinear"):
        V = float(p.get("V", math.sqrt(N / 2)))
        W = N / (2 * V)
        a = bl.CoeffSeq.random_unimodular(rng, math.floor(V) + 1, math.floor(min(2 * V, N)))
        cong = bool(int(p.get("congruence", 1)))
        if lemma_id == "linear":
            lhs = abs(bl.type_I_sum(a, alpha, V, W, N, cong, threads))
            rhs = bl.linear_rhs(N, V, q, eps)
        else:
            lhs = bl.type_I_h_avg(a, alpha, V, W, N, H, cong, threads)[0]
            rhs = bl.hlinear_rhs(N, V, q, H, eps)
        return BoundReport.make(lemma_id, lhs, rhs, N=N, V=V, W=W, H=H, q=q, a=approx.a,
                                eps=eps, congruence=cong)
    if lemma_id in ("bilinear1", "hbilinear"):
        W = float(p.get("W", math.sqrt(N / 2)))
        V = N / (2 * W)
        a = bl.CoeffSeq.random_unimodular(rng, math.floor(V) + 1, math.floor(min(2 * V, N)))
        b = bl.CoeffSeq.random_unimodular(rng, math.floor(W) + 1, math.floor(min(2 * W, N)))
        if lemma_id == "bilinear1":
            res = bl.type_II_sum(a, b, alpha, V, W, N, 1, threads=threads)
            return BoundReport.make("bilinear1", res.total, bl.bilinear1_rhs(N, W, q, eps),
                                    N=N, V=V, W=W, H=1, q=q, a=approx.a, eps=eps)
        res = bl.type_II_sum(a, b, alpha, V, W, N, H, threads=threads)
        which = bl.choose_bilinear_bound(V, W, H, N)
        return BoundReport.make("hbilinear", res.total, bl.bilinear_rhs(which, N, W, H, q, eps),
                                N=N, V=V, W=W, H=H, q=q, a=approx.a, eps=eps, bound=which)
    raise UsageError(f"unknown lemma id {lemma_id!r}")


def quadform_row(op: str, params: dict) -> dict:
    """Counts and bound components of one quadratic-form query as a flat dict."""
    p = {k: v for k, v in params.items()}
    method = str(p.pop("method", qf.HASHED))
    eps = float(p.pop("eps", 0.0))
    if op == "binary":
        r = qf.count_binary(int(p["a"]), int(p["b"]), int(p["c"]), int(p["P"]), method)
        return {"op": op, "count": r.count, "method": r.method}
    if op == "R":
        r = qf.count_R(int(p["j"]), float(p["H"]), float(p["V"]), method)
        return {"op": op, "count": r.count, "method": r.method}
    if op == "M3":
        H, P = int(p["H"]), int(p["P"])
        r = qf.count_M3(H, P, bool(int(p.get("coprime", 1))), method)
        rhs = qf.m3_bound_rhs(H, P, eps)
        return {"op": op, "count": r.count, "method": r.method, "rhs": rhs,
                "ratio": r.count / rhs if rhs > 0 else float("nan")}
    if op == "bound4":
        rep = qf.bound4_check(float(p["N"]), float(p["W"]), float(p["H"]), eps)
        return {"op": op, "lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio}
    if op == "bhb":
        b = qf.bhb_bound_rhs(int(p["h1"]), int(p["h2"]), int(p["h3"]), int(p["h4"]),
                             float(p["P"]), eps)
        return {"op": op, "rhs": b.rhs, "delta_q": b.delta_q, "norm_q": b.norm_q,
                "delta_bad": b.delta_bad, "hypothesis_ok": b.hypothesis_ok}
    raise UsageError(f"unknown quadform op {op!r}")


# -- suites -------------------------------------------------------------------

KERNEL_GRID = [(1.0, 100.0, 0.3), (1.0, 100.0, 0.75), (1.0, 1000.0, 1.4),
               (2.0, 1000.0, 1.5)]


def _theorem_rows(kind, cfg, threads):
    Ns = sorted(int(N) for N in cfg.N_list)
    seq = sieve_gaussian(Ns[-1], threads=threads)
    rows = []
    for spec in cfg.alpha_specs:
        part = run_theorem_experiment(kind, seq, parse_alpha_spec(spec), Ns,
                                      [int(H) for H in cfg.H_list], cfg.eps, threads)
        for r in part:
            r.params["alpha"] = spec
        rows += part
    return rows


def _lemma_rows(cfg, threads):
    rows = []
    for spec in cfg.alpha_specs:
        for N in cfg.N_list:
            N = int(N)
            base = {"alpha": spec, "N": N, "eps": cfg.eps}
            rows.append(lemma_report("linear", base, cfg.seed, threads))
            rows.append(lemma_report("bilinear1", base, cfg.seed, threads))
            rows.append(lemma_report("vino", {"alpha": spec, "X": N, "Y": N},
                                     cfg.seed, threads))
            for H in cfg.H_list:
                rows.append(lemma_report("hlinear", {**base, "H": int(H)}, cfg.seed, threads))
                rows.append(lemma_report("hbilinear", {**base, "H": int(H)}, cfg.seed, threads))
    for x, T, beta in KERNEL_GRID:
        rows.append(lemma_report("kernel", {"x": x, "T": T, "beta": beta}))
    return rows


def _quadform_rows(cfg):
    rows = []
    for H in cfg.H_list:
        H = int(H)
        for N in cfg.N_list:
            rows.append(qf.bound4_check(float(N), float(N) / 10, H, cfg.eps))
        if H <= 8:
            r = qf.count_M3(H, 4, True)
            rows.append(BoundReport.make("M3", r.count, qf.m3_bound_rhs(H, 4, cfg.eps),
                                         H=H, P=4, eps=cfg.eps))
    return rows


def collect_rows(cfg: ExperimentConfig, threads: int | None = None) -> list:
    rows = []
    if cfg.suite in ("theorem1", "all"):
        rows += _theorem_rows("thm1", cfg, threads)
    if cfg.suite in ("theorem2", "all"):
        rows += _theorem_rows("thm2", cfg, threads)
    if cfg.suite in ("lemmas", "all"):
        rows += _lemma_rows(cfg, threads)
    if cfg.suite in ("quadforms", "all"):
        rows += _quadform_rows(cfg)
    return sort_rows(rows)


def _key(row: BoundReport):
    p = row.params
    return (row.lemma_id, float(p.get("N", p.get("X", 0)) or 0), int(p.get("q", 0) or 0),
            float(p.get("H", 0) or 0), json.dumps(p, sort_keys=True, default=str))


def sort_rows(rows):
    return sorted(rows, key=_key)


def rows_json(rows) -> str:
    """Canonical serialisation of report rows (the deterministic report body)."""
    return json.dumps([r.as_dict() for r in rows], sort_keys=True, default=str)


def rows_csv(rows) -> str:
    keys = sorted({k for r in rows for k in r.params})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lemma_id", "lhs", "rhs", "ratio", *keys])
    for r in rows:
        w.writerow([r.lemma_id, repr(r.lhs), repr(r.rhs), repr(r.ratio),
                    *[r.params.get(k, "") for k in keys]])
    return buf.getvalue()


def write_report(rows, cfg: ExperimentConfig, threads: int, path: str | Path):
    path = Path(path)
    doc = {"meta": {"version": __version__, "seed": cfg.seed, "threads": threads,
                    "config": cfg.to_dict()},
           "rows": [r.as_dict() for r in rows]}
    path.write_text(json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n")
    path.with_suffix(".csv").write_text(rows_csv(rows))
    return path


def run_suite(cfg: ExperimentConfig) -> int:
    """Run a suite and write its JSON report and CSV twin.

    Returns 0 on success, 2 when an invariant check fails, 1 on usage or
    I/O errors.
    """
    try:
        cfg.validate()
        threads = resolve_threads(cfg.threads)
        rows = collect_rows(cfg, threads)
        write_report(rows, cfg, threads, cfg.out_path)
    except InvariantError as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 2
    except (UsageError, DomainError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0
