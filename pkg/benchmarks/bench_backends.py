#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the same seeded workload (triangulation build + a walk batch with
simple paths) through both backends, checks the outputs are identical,
and prints a timing table.

    python3 benchmarks/bench_backends.py [--sizes 10000,100000] [--walks 200]
"""

import argparse
import time

import numpy as np

import conewalk as cw
from conewalk import backend


def run(kernel, sites, cfg):
    t0 = time.perf_counter()
    t = cw.build(sites, kernel=kernel)
    t_build = time.perf_counter() - t0
    t0 = time.perf_counter()
    res = cw.run_walks(t, cfg)
    t_walks = time.perf_counter() - t0
    return t_build, t_walks, res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="10000,100000")
    ap.add_argument("--walks", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not backend.HAS_COMPILED:
        print("compiled kernel not built; timing the pure-Python backend only")

    header = f"{'n':>9} {'backend':>9} {'build[s]':>9} {'walks[s]':>9} {'us/step':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        cfg = cw.ExperimentConfig(n=n, walks=args.walks, seed=args.seed)
        sites = cw.sample_sites(cfg)
        rows = {}
        names = ["py"] + (["c"] if backend.HAS_COMPILED else [])
        for name in names:
            tb, tw, res = run(backend.get_kernel(name), sites, cfg)
            steps = sum(r.kappa for r in res.walk_rows)
            rows[name] = (tb, tw, res)
            label = "compiled" if name == "c" else "python"
            print(
                f"{n:>9} {label:>9} {tb:>9.3f} {tw:>9.3f} "
                f"{1e6 * tw / max(steps, 1):>9.2f}"
            )
        if len(rows) == 2:
            same = rows["py"][2].stats == rows["c"][2].stats and np.array_equal(
                rows["py"][2].radius_samples, rows["c"][2].radius_samples
            )
            speed_b = rows["py"][0] / rows["c"][0]
            speed_w = rows["py"][1] / rows["c"][1]
            print(
                f"{'':>9} identical={same}  speedup: build x{speed_b:.1f}, "
                f"walks x{speed_w:.1f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
