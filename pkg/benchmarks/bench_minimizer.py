"""Time the minimiser sweeps with the numba and numpy backends.

    python3 benchmarks/bench_minimizer.py --n 17 33 --repeat 3

The case is the trivial-potential model on [1,2]^2 with boundary data 2xy,
started from a perturbed field so that many sweeps are needed.
"""
import argparse
import math
import time

import numpy as np

from gradshape import _accel
from gradshape.oracle import minimize_variational
from gradshape.tensions import make_builtin


def start(x, y):
    return 2 * x * y + 0.05 * np.sin(math.pi * (x - 1)) * np.sin(math.pi * (y - 1))


def run(n, backend, tol):
    t0 = time.perf_counter()
    g = minimize_variational(make_builtin("trivial_example"), (1, 2, 1, 2), lambda x, y: 2 * x * y,
                             n, tol=tol, backend=backend, initial=start)
    dt = time.perf_counter() - t0
    xx, yy = g.coords()
    return dt, g.meta["sweeps"], float(np.abs(g.values - 2 * xx * yy).max())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[17, 33])
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = [b for b in _accel.BACKENDS if b != "numba" or _accel.HAVE_NUMBA]
    if "numba" in backends:
        run(5, "numba", args.tol)  # compile outside the timed runs
    print(f"{'n':>4} {'backend':>8} {'best s':>9} {'sweeps':>7} {'max err':>10}")
    for n in args.n:
        best = {}
        for b in backends:
            times = []
            for _ in range(args.repeat):
                dt, sweeps, err = run(n, b, args.tol)
                times.append(dt)
            best[b] = min(times)
            print(f"{n:>4} {b:>8} {best[b]:>9.3f} {sweeps:>7} {err:>10.3g}")
        if len(best) == 2:
            print(f"{n:>4} speedup {best['numpy'] / best['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
