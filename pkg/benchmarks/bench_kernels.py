"""Compare the compiled and pure-Python plane-key kernels.

    python3 benchmarks/bench_kernels.py [--q 4 8 16] [--repeat 3] [--threads 1]

The pure-Python backend is skipped when the triple count exceeds
``--python-limit`` (q = 16 has ~2.8M triples and takes minutes there).
"""

import argparse
import time
from math import comb

import numpy as np

from transoval import kernels
from transoval.field import standard_config
from transoval.ovals import OvalSpec, forward_construct

H_OF_Q = {4: 2, 8: 3, 16: 4}


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=[4, 8, 16], choices=sorted(H_OF_Q))
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--python-limit", type=int, default=200_000,
                    help="largest triple count timed with the Python backend")
    args = ap.parse_args(argv)

    have = kernels.available_backends()
    print(f"backends available: {', '.join(have)}")
    print(f"{'q':>3} {'triples':>9} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for q in args.q:
        c = forward_construct(OvalSpec(standard_config(H_OF_Q[q]), 1))
        F, pts = c.F, list(c.c_points)
        ntrip = comb(len(pts), 3)
        tc = tp = None
        if "cython" in have:
            tc, kc = best_of(lambda: kernels.triple_plane_keys(
                F, pts, threads=args.threads, backend="cython"), args.repeat)
        if ntrip <= args.python_limit:
            tp, kp = best_of(lambda: kernels.triple_plane_keys(F, pts, backend="python"),
                             1 if ntrip > 20_000 else args.repeat)
            if tc is not None and not np.array_equal(kc, kp):
                raise SystemExit(f"q={q}: backends disagree")
        fmt = lambda t: f"{t:10.4f}" if t is not None else f"{'-':>10}"  # noqa: E731
        speed = f"{tp / tc:7.1f}x" if tc and tp else f"{'-':>8}"
        print(f"{q:>3} {ntrip:>9} {fmt(tc)} {fmt(tp)} {speed}")


if __name__ == "__main__":
    main()
