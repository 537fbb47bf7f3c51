"""Time the compiled eta/theta kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --sizes 100,200,400,800 --repeat 3
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from orthopmat import kernels
from orthopmat.families import Family, recurrence_arrays


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(n, repeat, family):
    a, b, g = recurrence_arrays(family, n + 1)
    rows = []
    results = {}
    for backend in ("python", "ext"):
        if backend == "ext" and not kernels.HAVE_EXTENSION:
            continue
        te, eta = best_of(lambda: kernels.eta_matrix(a, b, g, n + 1, backend=backend), repeat)
        tt, th = best_of(lambda: kernels.theta_matrix(a, eta, n, backend=backend), repeat)
        results[backend] = (eta, th)
        rows.append((n, backend, te, tt))
    diff = ""
    if len(results) == 2:
        diff = max(float(np.max(np.abs(results["ext"][0] - results["python"][0]))),
                   float(np.max(np.abs(results["ext"][1] - results["python"][1]))))
    return rows, diff


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,200,400,800")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    family = Family.jacobi(2, 3)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "backend", "eta_s", "theta_s", "speedup", "max_abs_diff"])
    for n in (int(s) for s in args.sizes.split(",")):
        rows, diff = bench(n, args.repeat, family)
        base = rows[0][2] + rows[0][3]
        for n_, backend, te, tt in rows:
            w.writerow([n_, backend, f"{te:.4g}", f"{tt:.4g}", f"{base / (te + tt):.1f}",
                        diff if backend == "ext" else ""])
    if not kernels.HAVE_EXTENSION:
        print("# compiled kernels unavailable; only the fallback was timed", file=sys.stderr)


if __name__ == "__main__":
    main()
