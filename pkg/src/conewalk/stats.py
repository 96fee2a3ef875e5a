"""Statistics aggregation, distribution tests, and file export."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import theory_constants

__all__ = ["StatsTable", "WalkRow", "ks_statistic", "export"]


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """Exact Kolmogorov-Smirnov sup-distance of samples against ``cdf``."""
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    n = xs.size
    if n == 0:
        raise ValueError("KS statistic of an empty sample")
    fx = np.asarray([cdf(x) for x in xs], dtype=np.float64)
    lo = np.arange(n) / n
    hi = np.arange(1, n + 1) / n
    return float(np.maximum(fx - lo, hi - fx).max())


@dataclass(frozen=True)
class WalkRow:
    walk_id: int
    L0: float
    kappa: int
    K: int
    accessed: int
    lambda_simple: float  # total simple-path length (NaN when not run)
    lambda_competitive: float
    stretch: float  # competitive-path stretch (NaN when not run)


@dataclass(frozen=True)
class StatsTable:
    """Aggregated benchmark statistics (means over interior steps).

    ``simple_path_ratio`` is the mean of (discovery traversal length) / L0,
    where the traversal visits every swept vertex in discovery order; this
    is the walk-length quantity the closed-form bound c applies to.  The
    shorter predecessor-chain route produced by ``simple_path`` is
    reported separately as ``chain_path_ratio``.
    """

    mean_radius: float
    mean_intermediates_per_disc: float
    mean_extra_path_vertices: float
    simple_path_ratio: float
    chain_path_ratio: float
    competitive_path_ratio: float
    mean_steps_per_unit_distance: float
    max_degree: int
    ks_angle: float
    ks_radius: float
    counts: dict
    n: int
    walks: int
    seed: int


def _csv_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        return repr(x)
    return str(x)


def _stats_rows(table: StatsTable):
    th = theory_constants()
    log_n = math.log(table.n)
    return [
        ("mean_radius", table.mean_radius, th.expected_radius),
        (
            "mean_intermediates_per_disc",
            table.mean_intermediates_per_disc,
            th.expected_intermediates,
        ),
        ("mean_extra_path_vertices", table.mean_extra_path_vertices, None),
        ("simple_path_ratio", table.simple_path_ratio, th.path_length_const),
        ("chain_path_ratio", table.chain_path_ratio, None),
        (
            "competitive_path_ratio",
            table.competitive_path_ratio,
            th.competitiveness_bound,
        ),
        (
            "mean_steps_per_unit_distance",
            table.mean_steps_per_unit_distance,
            1.0 / th.mean_progress,
        ),
        ("max_degree", table.max_degree, log_n**2.2),
        ("ks_angle", table.ks_angle, 0.0),
        ("ks_radius", table.ks_radius, 0.0),
    ]


def export(
    table: StatsTable,
    out_dir,
    *,
    walk_rows: list[WalkRow] | None = None,
    samples: tuple[np.ndarray, np.ndarray] | None = None,
    baseline_rows: list | None = None,
) -> list[Path]:
    """Write the stats CSV, plus optional per-walk / raw-sample files.

    Identical inputs produce byte-identical files.  Returns the paths
    written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    stats_path = out / "stats.csv"
    with open(stats_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("stat,empirical,theory,n,walks,seed\n")
        for name, emp, theory in _stats_rows(table):
            fh.write(
                f"{name},{_csv_num(emp)},{_csv_num(theory)},"
                f"{table.n},{table.walks},{table.seed}\n"
            )
    written.append(stats_path)

    if walk_rows is not None:
        walks_path = out / "walks.csv"
        with open(walks_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(
                "walk_id,L0,kappa,K,accessed,lambda_simple,"
                "lambda_competitive,stretch\n"
            )
            for row in sorted(walk_rows, key=lambda r: r.walk_id):
                fh.write(
                    f"{row.walk_id},{_csv_num(row.L0)},{row.kappa},{row.K},"
                    f"{row.accessed},{_csv_num(row.lambda_simple)},"
                    f"{_csv_num(row.lambda_competitive)},{_csv_num(row.stretch)}\n"
                )
        written.append(walks_path)

    if samples is not None:
        radii, angles = samples
        samples_path = out / "samples.csv"
        with open(samples_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("R,alpha\n")
            for r, a in zip(radii, angles):
                fh.write(f"{_csv_num(float(r))},{_csv_num(float(a))}\n")
        written.append(samples_path)

    if baseline_rows:
        base_path = out / "baselines.csv"
        with open(base_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("walk_id,algorithm,hops,length,terminated\n")
            for walk_id, res in baseline_rows:
                fh.write(
                    f"{walk_id},{res.algorithm},{res.hop_count},"
                    f"{_csv_num(res.total_length)},{int(res.terminated)}\n"
                )
        written.append(base_path)
    return written
