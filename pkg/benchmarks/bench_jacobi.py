"""Time the numba and numpy Jacobi backends on random symmetric matrices.

    python3 benchmarks/bench_jacobi.py [--sizes 16 32 64 128] [--repeats 3]
"""
import argparse
import time

import numpy as np

from tightproj import SymMatrix, jacobi_eigh
from tightproj._accel import HAS_NUMBA


def best_time(s, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        e = jacobi_eigh(s, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, e.sweeps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["numba", "numpy"] if HAS_NUMBA else ["numpy"]
    rng = np.random.default_rng(args.seed)
    # compile outside the timed region
    for b in backends:
        jacobi_eigh(np.array([[2.0, 1.0], [1.0, 3.0]]), backend=b)

    print(f"{'d':>5} {'sweeps':>7} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f" {'speedup':>8}")
    for d in args.sizes:
        a = rng.standard_normal((d, d))
        s = SymMatrix(a + a.T)
        times = {}
        for b in backends:
            times[b], sweeps = best_time(s, b, args.repeats)
        row = f"{d:>5} {sweeps:>7} " + " ".join(f"{times[b]:>12.4f}" for b in backends)
        if len(backends) == 2:
            row += f" {times['numpy'] / times['numba']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
