#!/usr/bin/env python3
"""Benchmark the compiled F_p kernels against the numpy fallback.

The root scan over all of F_p* dominates determinantal sampling, so this is
the loop the compiled extension exists for.  Also times an end-to-end
evidence run under each backend.

Usage:  python benchmarks/bench_kernels.py [--samples 50]
"""

import argparse
import os
import random
import statistics
import sys
import time


def time_fn(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def bench_scan(impls):
    rng = random.Random(0)
    print(f"{'case':<28} " + " ".join(f"{name:>12}" for name, _ in impls) + f" {'speedup':>9}")
    for p in (10007, 65537):
        for deg in (10, 30, 60):
            coeffs = [rng.randrange(1, p) for _ in range(deg + 1)]
            row = []
            for _name, impl in impls:
                best, _ = time_fn(lambda impl=impl: impl.scan_roots(coeffs, p))
                row.append(best)
            label = f"scan p={p} deg={deg}"
            cells = " ".join(f"{t * 1e3:>10.2f}ms" for t in row)
            speedup = row[-1] / row[0] if row[0] else float("inf")
            print(f"{label:<28} {cells} {speedup:>8.1f}x")


def bench_pipeline(samples):
    from doublemirror.bridge import build_bridge, enumerate_decompositions, random_coefficients
    from doublemirror.canned import product_projective_lattice
    from doublemirror.cones import normalize_cone
    from doublemirror.evidence import birationality_evidence

    lattice, gens, deg, deg_dual = product_projective_lattice(5, 3)
    pair, _ = normalize_cone(lattice, gens, deg, deg_dual)
    decs = enumerate_decompositions(pair)
    coeffs = random_coefficients(pair, 65537, 0)
    bridge = build_bridge(pair, decs[0], decs[1], coeffs)
    t0 = time.perf_counter()
    report = birationality_evidence(bridge, samples, 65537, 0)
    elapsed = time.perf_counter() - t0
    import doublemirror.fpkernels as fp

    print(
        f"evidence (5,3) p=65537 samples={samples} backend={fp.BACKEND}: "
        f"{elapsed:.2f}s on_d={report.samples_on_d}"
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=50)
    args = parser.parse_args()

    from doublemirror import _pykernels

    impls = []
    try:
        from doublemirror import _speedups

        impls.append(("cython", _speedups))
    except ImportError:
        print("compiled extension unavailable; benchmarking fallback only")
    impls.append(("numpy", _pykernels))

    bench_scan(impls)
    bench_pipeline(args.samples)
    if "DOUBLEMIRROR_PURE" not in os.environ and len(impls) == 2:
        print("re-running the pipeline with DOUBLEMIRROR_PURE=1 ...", flush=True)
        env = dict(os.environ, DOUBLEMIRROR_PURE="1")
        import subprocess

        subprocess.run(
            [sys.executable, __file__, "--samples", str(args.samples), "--scan-done"],
            env=env,
            check=False,
        )


if __name__ == "__main__":
    if "--scan-done" in sys.argv:
        sys.argv.remove("--scan-done")
        parser = argparse.ArgumentParser()
        parser.add_argument("--samples", type=int, default=50)
        args = parser.parse_args()
        bench_pipeline(args.samples)
    else:
        main()
