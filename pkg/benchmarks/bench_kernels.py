"""Compare the compiled and NumPy kernel backends on the hot loops.

    python benchmarks/bench_kernels.py [--repeat 3] [--N 1000000]
"""

import argparse
import time

import numpy as np

from siftsum import _backend
from siftsum.arithmetic import Angle
from siftsum.report import GOLDEN
from siftsum.sequences import sieve_gaussian


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--N", type=int, default=10**6)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    members = sieve_gaussian(args.N).members()
    cases = {
        "S(golden; N)  fixed-point": lambda: _backend.square_phase_sum(members, GOLDEN,
                                                                       threads=args.threads),
        "S(a/q; N)     rational": lambda: _backend.square_phase_sum(
            members, Angle.rational(46368, 75025), threads=args.threads),
        "vinogradov    X = N, Y = N": lambda: _backend.vinogradov_total(GOLDEN, args.N, args.N,
                                                                        args.threads),
        "M3 brute      H = P = 3": lambda: _backend.m3_bruteforce(3, 3, True),
    }
    names = _backend.available()
    print(f"N = {args.N}, {len(members)} sequence members, threads = {args.threads}")
    print(f"{'kernel':30s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, fn in cases.items():
        row, vals = [], []
        for name in names:
            prev = _backend.set_backend(name)
            t, v = best_of(fn, args.repeat)
            _backend.set_backend(prev)
            row.append(t)
            vals.append(v)
        if len(vals) == 2 and not np.isclose(vals[0], vals[1], rtol=1e-9, atol=1e-6):
            raise SystemExit(f"backends disagree on {label}: {vals}")
        if "cython" in names:
            speed = f"{row[names.index('python')] / row[names.index('cython')]:9.1f}x"
        else:
            speed = "      n/a"
        print(f"{label:30s}" + "".join(f"{t * 1e3:10.1f}ms" for t in row) + speed)


if __name__ == "__main__":
    main()
