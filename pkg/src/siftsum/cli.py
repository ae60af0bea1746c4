"""``siftsum`` command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from . import bilinear as bl
from . import report
from .diophantine import best_approximation
from .errors import CapError, DomainError, InvariantError
from .expsum import DYADIC, FULL, eval_S, run_theorem_experiment
from .sequences import KINDS, sieve


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(s: str):
    """Integer if it looks like one (``1e5`` included), otherwise float or string."""
    for conv in (int, float):
        try:
            v = conv(s)
        except ValueError:
            continue
        if conv is float and v.is_integer() and "e" in s.lower():
            return int(v)
        return v
    return s


def _num_list(s: str) -> list:
    return [_num(x) for x in s.split(",") if x.strip()]


def _params(s: str) -> dict:
    out = {}
    for item in filter(None, (x.strip() for x in s.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise report.UsageError(f"expected k=v, got {item!r}")
        out[key.strip()] = _num(val.strip()) if key.strip() != "alpha" else val.strip()
    return out


def _emit(args, rows: list, header: list | None = None):
    """Write dict rows as CSV (default) or JSON to ``--out`` or stdout."""
    if args.format == "json":
        text = json.dumps(rows, sort_keys=True, indent=1, default=str) + "\n"
    else:
        header = header or (list(rows[0]) if rows else [])
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _bound_row(r) -> dict:
    return {"lemma_id": r.lemma_id, "lhs": r.lhs, "rhs": r.rhs, "ratio": r.ratio, **r.params}


# -- subcommands ------------------------------------------------------------

def cmd_sieve(args):
    seq = sieve(args.kind, args.limit, args.z, args.threads)
    if args.format == "csv":
        text = "".join(f"{n}\n" for n in seq.members())
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    if not args.out:
        raise report.UsageError("the binary bitmap needs --out")
    Path(args.out).write_bytes(seq.to_bytes())
    return 0


def cmd_sum(args):
    alpha = report.parse_alpha_spec(args.alpha)
    seq = sieve(args.kind, args.N, threads=args.threads)
    r = eval_S(seq, alpha, args.N, args.window, args.threads)
    _emit(args, [{"re": r.value.real, "im": r.value.imag, "abs": abs(r.value),
                  "terms": r.terms}])
    return 0


def cmd_approx(args):
    r = best_approximation(report.parse_alpha_spec(args.alpha), args.Q)
    _emit(args, [{"a": r.a, "q": r.q, "err": r.err, "quality": r.quality}])
    return 0


def cmd_verify(args):
    alpha = report.parse_alpha_spec(args.alpha)
    Ns = sorted(int(N) for N in args.N_list)
    if not Ns:
        raise report.UsageError("--N-list is empty")
    seq = sieve("gaussian", Ns[-1], threads=args.threads)
    kind = "thm1" if args.theorem == 1 else "thm2"
    rows = report.sort_rows(run_theorem_experiment(kind, seq, alpha, Ns, args.H, args.eps,
                                                   args.threads))
    text = json.dumps([r.as_dict() for r in rows], sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_decompose(args):
    alpha = report.parse_alpha_spec(args.alpha)
    terms = bl.eval_decomposition_terms(bl.DecompositionParams(args.N, args.M, args.z),
                                        alpha, threads=args.threads)
    rows = [{"term": name, "re": v.real, "im": v.imag, "abs": abs(v), "trivial": t}
            for name, v, t in zip(("S1", "S2", "S3"), terms, terms.trivial)]
    _emit(args, rows)
    return 0


def cmd_lemma(args):
    r = report.lemma_report(args.id, _params(args.params), args.seed, args.threads)
    _emit(args, [_bound_row(r)])
    return 0


def cmd_quadform(args):
    _emit(args, [report.quadform_row(args.op, _params(args.params))])
    return 0


def cmd_suite(args):
    cfg = report.ExperimentConfig(
        suite=args.suite, alpha_specs=args.alpha, N_list=args.N_list, H_list=args.H,
        eps=args.eps, seed=args.seed, out_path=args.out or "report.json",
        threads=args.threads if args.threads is not None else 0)
    return report.run_suite(cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (0 = all cores; default $SIFTSUM_THREADS or 1)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)

    p = _Parser(prog="siftsum", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="table format (default csv; sieve defaults to a binary bitmap)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sieve", parents=[common], help="write a membership bitmap")
    s.add_argument("--kind", choices=KINDS, default="gaussian")
    s.add_argument("--limit", type=_num, required=True)
    s.add_argument("--z", type=float, default=None)
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("sum", parents=[common], help="evaluate S(alpha; N)")
    s.add_argument("--kind", choices=KINDS, default="gaussian")
    s.add_argument("--alpha", required=True)
    s.add_argument("--N", type=_num, required=True)
    s.add_argument("--window", choices=(FULL, DYADIC), default=FULL)
    s.set_defaults(func=cmd_sum)

    s = sub.add_parser("approx", parents=[common], help="best rational approximation")
    s.add_argument("--alpha", required=True)
    s.add_argument("--Q", type=_num, required=True)
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("verify", parents=[common], help="theorem ratio rows as JSON")
    s.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--N-list", dest="N_list", type=_num_list, required=True)
    s.add_argument("--H", type=_num_list, default=[1])
    s.add_argument("--eps", type=float, default=0.0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("decompose", parents=[common], help="the three decomposition terms")
    s.add_argument("--alpha", required=True)
    s.add_argument("--N", type=_num, required=True)
    s.add_argument("--M", type=_num, required=True)
    s.add_argument("--z", type=float, required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("lemma", parents=[common], help="one lemma bound report")
    s.add_argument("--id", required=True,
                   choices=("linear", "hlinear", "bilinear1", "hbilinear", "vino", "kernel"))
    s.add_argument("--params", default="")
    s.set_defaults(func=cmd_lemma)

    s = sub.add_parser("quadform", parents=[common], help="quadratic-form counts and bounds")
    s.add_argument("--op", required=True, choices=("binary", "R", "M3", "bound4", "bhb"))
    s.add_argument("--params", default="")
    s.set_defaults(func=cmd_quadform)

    s = sub.add_parser("suite", parents=[common], help="run an experiment suite")
    s.add_argument("--suite", choices=report.SUITES, default="all")
    s.add_argument("--alpha", action="append", default=None)
    s.add_argument("--N-list", dest="N_list", type=_num_list, default=[10**4])
    s.add_argument("--H", type=_num_list, default=[1])
    s.add_argument("--eps", type=float, default=0.0)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is None and os.environ.get("SIFTSUM_THREADS"):
        args.threads = int(os.environ["SIFTSUM_THREADS"])
    if getattr(args, "alpha", "") is None:
        args.alpha = ["quad:golden"]
    try:
        return args.func(args)
    except InvariantError as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 2
    except (report.UsageError, DomainError, CapError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
