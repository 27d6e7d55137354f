#!/usr/bin/env python3
"""Compare the compiled expression kernel against the pure-numpy fallback.

Three measurements: raw batch-evaluation throughput per catalog entry, a
batch-size sweep showing where the per-point compiled interpreter beats
numpy's whole-array passes (small batches) and where it loses (the large
chunks used by the Monte Carlo driver), and one end-to-end ellipsoid mean
at a realistic budget.  The two backends execute the same stack program
but not the same instruction implementations, so values agree to a few
ulps rather than bitwise; the script reports the largest difference seen.

Usage:
    python3 benchmarks/bench_backends.py [--points 200000] [--repeats 5]
"""

import argparse
import json
import sys
import time

import numpy as np

from pshcheck.catalog import lookup
from pshcheck.geometry import Ellipsoid, UnitaryFrame
from pshcheck.integrate import mean_over_ellipsoid
from pshcheck.vm import available_backends, compile_expression

ENTRIES = (
    "ball-quadratic",
    "log-quadric",
    "max-log",
    "exp-re",
    "radial-square",
    "quartic-x1",
    "neg-norm",
)
SWEEP_SIZES = (64, 512, 4096, 65536)


def sample_points(entry, n, rng):
    if entry.family == "x":
        return rng.uniform(-0.5, 0.5, size=(n, entry.dim))
    re = rng.uniform(-0.5, 0.5, size=(n, entry.dim))
    im = rng.uniform(-0.5, 0.5, size=(n, entry.dim))
    return re + 1j * im


def best_rate(u, pts, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        u(pts)
        best = min(best, time.perf_counter() - t0)
    return len(pts) / best / 1e6  # Meval/s


def bench_throughput(n_points, repeats):
    rng = np.random.default_rng(42)
    rows = []
    for name in ENTRIES:
        entry = lookup(name)
        compiled = {b: compile_expression(entry.text, backend=b) for b in available_backends()}
        pts = sample_points(compiled["numpy"], n_points, rng)
        out = {b: u(pts) for b, u in compiled.items()}
        max_diff = float(np.nanmax(np.abs(out["numpy"] - out.get("cython", out["numpy"]))))
        row = {"entry": name, "max_diff": max_diff}
        for backend, u in compiled.items():
            row[backend] = best_rate(u, pts, repeats)
        rows.append(row)
    return rows


def bench_sweep(repeats):
    rng = np.random.default_rng(7)
    entry = lookup("ball-quadratic")
    compiled = {b: compile_expression(entry.text, backend=b) for b in available_backends()}
    rows = []
    for n in SWEEP_SIZES:
        pts = sample_points(compiled["numpy"], n, rng)
        reps = max(repeats, 100_000 // n)
        row = {"batch": n}
        for backend, u in compiled.items():
            row[backend] = best_rate(u, pts, reps)
        rows.append(row)
    return rows


def bench_end_to_end(budget):
    entry = lookup("remark-3.4")
    center = np.zeros(2, dtype=complex)
    frame = UnitaryFrame.identity(2)
    ell = Ellipsoid((0.3, 0.2))
    rows = []
    for backend in available_backends():
        u = compile_expression(entry.text, backend=backend)
        t0 = time.perf_counter()
        est = mean_over_ellipsoid(u, center, frame, ell, budget=budget, seed=1)
        rows.append({
            "backend": backend,
            "seconds": time.perf_counter() - t0,
            "value": est.value,
        })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--budget", type=int, default=1_000_000)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("note: compiled kernel unavailable, benchmarking numpy only", file=sys.stderr)

    thr = bench_throughput(args.points, args.repeats)
    sweep = bench_sweep(args.repeats)
    e2e = bench_end_to_end(args.budget)
    if args.json:
        print(json.dumps({"throughput": thr, "sweep": sweep, "end_to_end": e2e}, indent=2))
        return 0

    print(f"batch evaluation, {args.points} points, best of {args.repeats} (Meval/s)")
    print(f"{'entry':18s}" + "".join(f"{b:>10s}" for b in backends) + f"{'max diff':>12s}")
    for row in thr:
        cells = "".join(f"{row[b]:10.1f}" for b in backends)
        print(f"{row['entry']:18s}{cells}{row['max_diff']:12.2e}")

    print("\nbatch-size sweep on abs(z1)^2+abs(z2)^2 (Meval/s)")
    print(f"{'batch':>8s}" + "".join(f"{b:>10s}" for b in backends))
    for row in sweep:
        print(f"{row['batch']:8d}" + "".join(f"{row[b]:10.1f}" for b in backends))

    print(f"\nellipsoid mean of {lookup('remark-3.4').text}, budget {args.budget}")
    for row in e2e:
        print(f"  {row['backend']:8s}{row['seconds']:8.2f}s   value {row['value']:+.9f}")
    spread = max(r["value"] for r in e2e) - min(r["value"] for r in e2e)
    print(f"  cross-backend value spread {spread:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
