"""Command-line interface.

Subcommands: ``constants`` (closed-form model constants), ``generate``
(emit a site file), ``walk`` (one trace as structured text), ``bench``
(batch experiment + CSV export), ``validate`` (engine-vs-oracle and lemma
checks on small instances), ``backends`` (timing comparison of the
compiled and pure-Python kernels).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
import time

import numpy as np

from . import backend
from .bench import run_experiment, run_walks
from .delaunay import build, load_sites, save_sites, site_set
from .geometry import theory_constants
from .sampling import ExperimentConfig, sample_sites
from .stats import export
from .walk import check_step_lemmata, cone_walk, step_oracle, trace_to_text


def _add_common(p):
    p.add_argument("--n", type=int, default=10_000, help="domain area / site count")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument(
        "--mode",
        choices=("fixed_n", "poisson"),
        default="fixed_n",
        help="site count law",
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="conewalk")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", help="print the closed-form model constants")

    g = sub.add_parser("generate", help="sample sites and write a site file")
    _add_common(g)
    g.add_argument("--out", required=True, help="output site file")

    w = sub.add_parser("walk", help="run one cone walk and print the trace")
    _add_common(w)
    w.add_argument("--sites", help="site file (overrides --n/--seed sampling)")
    w.add_argument("--z", type=int, default=0, help="start site index")
    w.add_argument("--qx", type=float, required=True)
    w.add_argument("--qy", type=float, required=True)
    w.add_argument("--out", help="write the trace here instead of stdout")

    b = sub.add_parser("bench", help="run a batch experiment and export CSVs")
    _add_common(b)
    b.add_argument("--walks", type=int, default=1000)
    b.add_argument(
        "--algos",
        default="cone",
        help="comma list from cone,straight,greedy,compass",
    )
    b.add_argument(
        "--paths", default="simple", help="comma list from simple,competitive"
    )
    b.add_argument("--out-dir", required=True)
    b.add_argument(
        "--boundary-guard",
        type=float,
        default=None,
        help="interior-step guard distance (default 2*sqrt(ln n); 0 disables)",
    )
    b.add_argument(
        "--restrict-aim",
        action="store_true",
        help="draw aims from the start region instead of the whole domain",
    )
    b.add_argument("--per-walk", action="store_true", help="also write walks.csv")
    b.add_argument(
        "--samples", action="store_true", help="also write raw (R, alpha) samples"
    )

    v = sub.add_parser(
        "validate", help="engine-vs-oracle equality and lemma checks"
    )
    v.add_argument("--instances", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("backends", help="compare compiled and pure kernels")
    _add_common(k)
    k.add_argument("--walks", type=int, default=200)

    args = ap.parse_args(argv)
    return _COMMANDS[args.command](args)


def _cmd_constants(args) -> int:
    th = theory_constants()
    for f in dataclasses.fields(th):
        print(f"{f.name} = {getattr(th, f.name)!r}")
    return 0


def _cmd_generate(args) -> int:
    cfg = ExperimentConfig(n=args.n, walks=1, seed=args.seed, mode=args.mode)
    sites = sample_sites(cfg)
    save_sites(sites, args.out)
    print(f"wrote {len(sites)} sites to {args.out}")
    return 0


def _cmd_walk(args) -> int:
    if args.sites:
        sites = load_sites(args.sites)
    else:
        cfg = ExperimentConfig(n=args.n, walks=1, seed=args.seed, mode=args.mode)
        sites = sample_sites(cfg)
    t = build(sites)
    trace = cone_walk(t, args.z, (args.qx, args.qy))
    text = trace_to_text(trace)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args) -> int:
    cfg = ExperimentConfig(
        n=args.n,
        walks=args.walks,
        seed=args.seed,
        mode=args.mode,
        algorithms=frozenset(a for a in args.algos.split(",") if a),
        paths=frozenset(p for p in args.paths.split(",") if p),
        boundary_guard=args.boundary_guard,
        restrict_aim=args.restrict_aim,
    )
    t0 = time.perf_counter()
    result = run_experiment(cfg, collect_baselines=True)
    dt = time.perf_counter() - t0
    files = export(
        result.stats,
        args.out_dir,
        walk_rows=result.walk_rows if args.per_walk else None,
        samples=(
            (result.radius_samples, result.angle_samples) if args.samples else None
        ),
        baseline_rows=result.baseline_rows or None,
    )
    st = result.stats
    print(f"backend: {backend.backend_name(backend.get_kernel())}")
    print(f"elapsed: {dt:.2f}s  interior steps: {st.counts['interior_steps']}")
    for name in (
        "mean_radius",
        "mean_intermediates_per_disc",
        "mean_extra_path_vertices",
        "simple_path_ratio",
        "chain_path_ratio",
        "competitive_path_ratio",
        "mean_steps_per_unit_distance",
        "ks_angle",
        "ks_radius",
    ):
        print(f"{name} = {getattr(st, name)}")
    print(f"max_degree = {st.max_degree}")
    for path in files:
        print(f"wrote {path}")
    return 0


def _cmd_validate(args) -> int:
    rng = np.random.Generator(np.random.PCG64(args.seed))
    bad = 0
    for inst in range(args.instances):
        n = int(rng.integers(10, 201))
        pts = rng.random((n, 2)) * 2.0 * math.sqrt(n) - math.sqrt(n)
        t = build(site_set(pts, domain_radius=math.sqrt(n)))
        z = int(rng.integers(0, n))
        centroid = pts.mean(axis=0)
        q = tuple(0.5 * centroid + 0.5 * pts[int(rng.integers(0, n))] * 0.9)
        if not t.is_inside_hull(q):
            continue
        trace = cone_walk(t, z, q, check_terminal=True)
        anchor = z
        ok = True
        for step in trace.steps:
            ref = step_oracle(t, anchor, q)
            if (
                ref is None
                or ref[0] != step.stopper
                or ref[1] != step.radius
                or tuple(ref[2]) != step.intermediates
            ):
                ok = False
                break
            anchor = step.stopper
        if ok and step_oracle(t, anchor, q) is not None:
            ok = False
        violations = check_step_lemmata(t, trace)
        qn = set(int(v) for v in t.neighbors_of_query(q))
        if trace.terminal not in qn:
            ok = False
        if violations or not ok:
            bad += 1
            print(f"instance {inst}: MISMATCH (violations={violations})")
    print(f"{args.instances - bad}/{args.instances} instances clean")
    return 1 if bad else 0


def _cmd_backends(args) -> int:
    cfg = ExperimentConfig(
        n=args.n, walks=args.walks, seed=args.seed, mode=args.mode
    )
    sites = sample_sites(cfg)
    names = ["python"] + (["compiled"] if backend.HAS_COMPILED else [])
    results = {}
    for name in names:
        kern = backend.get_kernel("py" if name == "python" else "c")
        t0 = time.perf_counter()
        t = build(sites, kernel=kern)
        t_build = time.perf_counter() - t0
        t0 = time.perf_counter()
        res = run_walks(t, cfg)
        t_walks = time.perf_counter() - t0
        results[name] = (t_build, t_walks, res)
        print(
            f"{name:>8}: build {t_build:8.3f}s   walks {t_walks:8.3f}s   "
            f"mean_radius {res.stats.mean_radius:.5f}"
        )
    if len(results) == 2:
        py = results["python"]
        cc = results["compiled"]
        same = (
            py[2].stats == cc[2].stats
            and np.array_equal(py[2].radius_samples, cc[2].radius_samples)
            and np.array_equal(py[2].angle_samples, cc[2].angle_samples)
        )
        print(f"identical results: {same}")
        print(
            f"speedup: build x{py[0] / cc[0]:.1f}, walks x{py[1] / cc[1]:.1f}"
        )
        if not same:
            return 1
    else:
        print("compiled kernel not built; showing pure-Python timings only")
    return 0


_COMMANDS = {
    "constants": _cmd_constants,
    "generate": _cmd_generate,
    "walk": _cmd_walk,
    "bench": _cmd_bench,
    "validate": _cmd_validate,
    "backends": _cmd_backends,
}


if __name__ == "__main__":
    sys.exit(main())
