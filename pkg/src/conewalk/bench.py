"""Batch experiment orchestration over one triangulation.

One triangulation, many walks: start sites are drawn uniformly among the
sites of an inner disc (a fraction of the domain radius), aims uniformly
in the domain.  Per-step statistics are aggregated over *interior* steps
only, i.e. steps far enough both from the aim and from the domain
boundary that the closed-form laws apply without censoring; the guard
distance defaults to 2 * sqrt(ln n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import baselines as _baselines
from .delaunay import Triangulation, build, max_degree
from .geometry import HALF_ANGLE, angle_cdf, theory_constants
from .paths import competitive_path, simple_path
from .sampling import ExperimentConfig, sample_sites, walk_stream
from .stats import StatsTable, WalkRow, ks_statistic
from .walk import cone_walk, discovery_length

__all__ = ["ExperimentResult", "run_experiment", "run_walks"]

_MAX_AIM_TRIES = 256


@dataclass
class ExperimentResult:
    stats: StatsTable
    walk_rows: list
    baseline_rows: list
    radius_samples: np.ndarray
    angle_samples: np.ndarray


def _draw_walk_endpoints(t, rng, eligible, aim_radius):
    z = int(eligible[rng.integers(0, eligible.size)])
    hint = int(t.vertex_triangle[z])
    for _ in range(_MAX_AIM_TRIES):
        r = aim_radius * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        qx = r * math.cos(theta)
        qy = r * math.sin(theta)
        if t.engine().locate(qx, qy, hint) >= 0:
            return z, qx, qy
    raise RuntimeError("could not draw an aim inside the convex hull")


def _sandwich_guard(pts, trace, qx, qy):
    """Cheap per-walk check of the two-sided progress bound; raises on
    violation with a reproducible diagnostic."""
    if not trace.steps:
        return
    idx = np.fromiter((s.from_site for s in trace.steps), dtype=np.int64)
    stop = np.fromiter((s.stopper for s in trace.steps), dtype=np.int64)
    ri = np.fromiter((s.radius for s in trace.steps), dtype=np.float64)
    ai = np.fromiter((s.angle for s in trace.steps), dtype=np.float64)
    li = np.fromiter((s.distance_to_aim for s in trace.steps), dtype=np.float64)
    lnext = np.hypot(pts[stop, 0] - qx, pts[stop, 1] - qy)
    prog = ri * (1.0 + np.cos(2.0 * ai))
    tol = 1e-9 * np.maximum(1.0, li)
    bad = (lnext < li - prog - tol) | (lnext > li - prog + 2.0 * ri * ri / li + tol)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise RuntimeError(
            "progress sandwich violated: step "
            f"{k} from site {int(idx[k])} to {int(stop[k])}, "
            f"R={ri[k]!r} alpha={ai[k]!r} L={li[k]!r} L_next={lnext[k]!r}"
        )


def run_walks(t: Triangulation, config: ExperimentConfig, *, collect_baselines=False):
    """Run the configured walks over ``t`` and aggregate statistics."""
    pts = t.points
    radius = t.site_set.domain_radius
    guard = config.guard
    want_simple = "simple" in config.paths and "cone" in config.algorithms
    want_comp = "competitive" in config.paths and "cone" in config.algorithms

    norm = np.hypot(pts[:, 0], pts[:, 1])
    eligible = np.flatnonzero(norm <= config.start_region_fraction * radius)
    if eligible.size == 0:
        raise RuntimeError("no sites inside the start region")
    boundary_margin = radius - guard
    aim_radius = (
        config.start_region_fraction * radius if config.restrict_aim else radius
    )

    sum_r = 0.0
    sum_tau = 0
    sum_extra = 0
    n_extra = 0
    sum_prog = 0.0
    n_interior = 0
    sum_ratio_simple = 0.0
    sum_ratio_chain = 0.0
    n_ratio_simple = 0
    sum_ratio_comp = 0.0
    n_ratio_comp = 0
    radius_chunks = []
    angle_chunks = []
    walk_rows = []
    baseline_rows = []

    for walk_id in range(config.walks):
        rng = walk_stream(config.seed, walk_id)
        z, qx, qy = _draw_walk_endpoints(t, rng, eligible, aim_radius)
        if "cone" in config.algorithms:
            trace = cone_walk(t, z, (qx, qy), record_paths=want_simple)
            _sandwich_guard(pts, trace, qx, qy)
            l0 = math.hypot(qx - pts[z, 0], qy - pts[z, 1])

            if trace.steps:
                anchors = np.fromiter(
                    (s.from_site for s in trace.steps), dtype=np.int64
                )
                ri = np.fromiter((s.radius for s in trace.steps), dtype=np.float64)
                ai = np.fromiter((s.angle for s in trace.steps), dtype=np.float64)
                li = np.fromiter(
                    (s.distance_to_aim for s in trace.steps), dtype=np.float64
                )
                tau = np.fromiter(
                    (len(s.intermediates) for s in trace.steps), dtype=np.int64
                )
                stop = np.fromiter((s.stopper for s in trace.steps), dtype=np.int64)
                lnext = np.hypot(pts[stop, 0] - qx, pts[stop, 1] - qy)
                interior = (li > guard) & (norm[anchors] < boundary_margin)
                n_int = int(interior.sum())
                if n_int:
                    n_interior += n_int
                    sum_r += float(ri[interior].sum())
                    sum_tau += int(tau[interior].sum())
                    sum_prog += float((li - lnext)[interior].sum())
                    radius_chunks.append(ri[interior])
                    angle_chunks.append(np.minimum(np.abs(ai[interior]), HALF_ANGLE))
                    if want_simple and trace.step_paths is not None:
                        chain_len = np.fromiter(
                            (len(c) for c in trace.step_paths[: trace.kappa]),
                            dtype=np.int64,
                        )
                        sum_extra += int((chain_len[interior] - 2).sum())
                        n_extra += n_int

            lam_simple = math.nan
            lam_comp = math.nan
            stretch = math.nan
            if want_simple:
                p = simple_path(t, trace)
                lam_simple = p.total_length
                if l0 > 0.0:
                    sum_ratio_simple += discovery_length(t, trace) / l0
                    sum_ratio_chain += p.total_length / l0
                    n_ratio_simple += 1
            if want_comp:
                p = competitive_path(t, trace, config.stretch_lambda)
                lam_comp = p.total_length
                stretch = p.stretch
                if l0 > 0.0:
                    sum_ratio_comp += p.stretch
                    n_ratio_comp += 1
            walk_rows.append(
                WalkRow(
                    walk_id=walk_id,
                    L0=l0,
                    kappa=trace.kappa,
                    K=trace.visited_count,
                    accessed=trace.accessed_total,
                    lambda_simple=lam_simple,
                    lambda_competitive=lam_comp,
                    stretch=stretch,
                )
            )
        for name in ("straight", "greedy", "compass"):
            if name in config.algorithms:
                fn = getattr(_baselines, f"{name}_walk")
                res = fn(t, z, (qx, qy))
                if collect_baselines:
                    baseline_rows.append((walk_id, res))

    radii = (
        np.concatenate(radius_chunks) if radius_chunks else np.empty(0)
    )
    angles = (
        np.concatenate(angle_chunks) if angle_chunks else np.empty(0)
    )
    th = theory_constants()
    A = th.cone_area_A
    ks_r = (
        ks_statistic(radii, lambda x: 1.0 - math.exp(-A * x * x))
        if radii.size
        else math.nan
    )
    ks_a = ks_statistic(angles, angle_cdf) if angles.size else math.nan

    stats = StatsTable(
        mean_radius=sum_r / n_interior if n_interior else math.nan,
        mean_intermediates_per_disc=(
            sum_tau / n_interior if n_interior else math.nan
        ),
        mean_extra_path_vertices=sum_extra / n_extra if n_extra else math.nan,
        simple_path_ratio=(
            sum_ratio_simple / n_ratio_simple if n_ratio_simple else math.nan
        ),
        chain_path_ratio=(
            sum_ratio_chain / n_ratio_simple if n_ratio_simple else math.nan
        ),
        competitive_path_ratio=(
            sum_ratio_comp / n_ratio_comp if n_ratio_comp else math.nan
        ),
        mean_steps_per_unit_distance=(
            n_interior / sum_prog if sum_prog > 0.0 else math.nan
        ),
        max_degree=max_degree(t),
        ks_angle=ks_a,
        ks_radius=ks_r,
        counts={
            "interior_steps": n_interior,
            "walks": config.walks,
            "simple_paths": n_ratio_simple,
            "competitive_paths": n_ratio_comp,
            "extra_vertex_steps": n_extra,
        },
        n=config.n,
        walks=config.walks,
        seed=config.seed,
    )
    return ExperimentResult(
        stats=stats,
        walk_rows=walk_rows,
        baseline_rows=baseline_rows,
        radius_samples=radii,
        angle_samples=angles,
    )


def run_experiment(
    config: ExperimentConfig, *, kernel=None, collect_baselines=False
) -> ExperimentResult:
    """Sample sites, build the triangulation, run the walk batch."""
    sites = sample_sites(config)
    t = build(sites, kernel=kernel)
    return run_walks(t, config, collect_baselines=collect_baselines)
