"""Site sampling and experiment configuration.

Sites model a unit-intensity point process in a disc of area n (radius
sqrt(n / pi)) centred at the origin: ``poisson`` mode draws a Poisson(n)
count, ``fixed_n`` exactly n points, both uniform in the disc via the
radius = R * sqrt(u) transform.  The master seed derives independent
per-purpose streams from fixed spawn keys, so parallel and serial runs of
an experiment agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delaunay import SiteSet

__all__ = [
    "ExperimentConfig",
    "domain_radius",
    "sample_sites",
    "uniform_in_disc",
    "site_stream",
    "walk_stream",
]

_ALGORITHMS = frozenset({"cone", "straight", "greedy", "compass"})
_PATHS = frozenset({"simple", "competitive"})


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    walks: int
    seed: int
    mode: str = "fixed_n"  # "fixed_n" | "poisson"
    start_region_fraction: float = 0.25
    algorithms: frozenset = frozenset({"cone"})
    paths: frozenset = frozenset({"simple"})
    boundary_guard: float | None = None  # None -> 2 * sqrt(ln n)
    restrict_aim: bool = False
    stretch_lambda: float = 1.998

    def __post_init__(self):
        if self.n < 10:
            raise ValueError(f"n must be >= 10, got {self.n}")
        if self.walks < 1:
            raise ValueError(f"walks must be >= 1, got {self.walks}")
        if not 0.0 < self.start_region_fraction <= 1.0:
            raise ValueError(
                f"start_region_fraction must be in (0, 1], got "
                f"{self.start_region_fraction}"
            )
        if self.mode not in ("fixed_n", "poisson"):
            raise ValueError(f"mode must be fixed_n or poisson, got {self.mode!r}")
        object.__setattr__(self, "algorithms", frozenset(self.algorithms))
        object.__setattr__(self, "paths", frozenset(self.paths))
        bad = self.algorithms - _ALGORITHMS
        if bad:
            raise ValueError(f"unknown algorithms: {sorted(bad)}")
        bad = self.paths - _PATHS
        if bad:
            raise ValueError(f"unknown path generators: {sorted(bad)}")

    @property
    def guard(self) -> float:
        if self.boundary_guard is not None:
            return self.boundary_guard
        return 2.0 * math.sqrt(math.log(self.n))


def domain_radius(n: int) -> float:
    """Radius of the disc of area n."""
    return math.sqrt(n / math.pi)


def site_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(0,)))
    )


def walk_stream(seed: int, walk_id: int) -> np.random.Generator:
    """Independent per-walk stream; derivation depends only on (seed, id)."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(1, walk_id)))
    )


def uniform_in_disc(rng: np.random.Generator, m: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(m))
    theta = 2.0 * math.pi * rng.random(m)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_sites(config: ExperimentConfig) -> SiteSet:
    """Draw the site set for an experiment; bit-identical per seed."""
    rng = site_stream(config.seed)
    radius = domain_radius(config.n)
    if config.mode == "poisson":
        count = int(rng.poisson(config.n))
        count = max(count, 3)
    else:
        count = config.n
    pts = uniform_in_disc(rng, count, radius)
    return SiteSet(points=np.ascontiguousarray(pts), domain_radius=radius)
