"""Search-cone and search-disc geometry, plus the closed-form step laws.

The walk grows a disc ``Disc(z, q, r)`` whose diameter runs from the anchor
``z`` to the point at distance ``2r`` along the ray toward the aim ``q``.
``Cone(z, q, r)`` is the part of that disc inside the closed cone of apex
``z``, axis ``zq`` and half angle pi/8.  Everything here is a pure function
of its arguments; predicates use dot products and squared norms only, no
trigonometric calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "UNREACHABLE",
    "HALF_ANGLE",
    "COS2_HALF_ANGLE",
    "ConeFrame",
    "TheoryConstants",
    "min_disc_radius",
    "in_cone",
    "angle_cdf",
    "angle_pdf",
    "radius_survival",
    "theory_constants",
]

#: Distinguished radius for points that never enter any growing disc
#: (non-positive projection onto the axis).  Infinity keeps comparisons
#: natural: an unreachable candidate never wins a minimum.
UNREACHABLE = math.inf

#: Half angle of the search cone.
HALF_ANGLE = math.pi / 8.0

#: cos^2(pi/8) written exactly; used by the cone membership predicate.
COS2_HALF_ANGLE = (2.0 + math.sqrt(2.0)) / 4.0


def _check_point(p) -> tuple[float, float]:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"point coordinates must be finite, got {(x, y)}")
    return x, y


@dataclass(frozen=True)
class ConeFrame:
    """Apex and aim of one growing search cone (the pair z, q)."""

    apex: tuple[float, float]
    aim: tuple[float, float]

    def __post_init__(self):
        ax, ay = _check_point(self.apex)
        bx, by = _check_point(self.aim)
        if ax == bx and ay == by:
            raise ValueError("cone frame is degenerate: apex equals aim")
        object.__setattr__(self, "apex", (ax, ay))
        object.__setattr__(self, "aim", (bx, by))


def min_disc_radius(frame: ConeFrame, p) -> float:
    """Smallest r >= 0 with ``p`` inside ``Disc(apex, aim, r)``.

    Equals |zp|^2 / (2 * proj) where proj is the scalar projection of
    ``p - apex`` onto the unit vector toward the aim.  Returns
    :data:`UNREACHABLE` when proj <= 0.
    """
    px, py = _check_point(p)
    zx, zy = frame.apex
    qx, qy = frame.aim
    ax, ay = qx - zx, qy - zy
    dx, dy = px - zx, py - zy
    dot = dx * ax + dy * ay
    if dot <= 0.0:
        return UNREACHABLE
    axis_len = math.sqrt(ax * ax + ay * ay)
    rr = dx * dx + dy * dy
    return rr * axis_len / (2.0 * dot)


def in_cone(frame: ConeFrame, p) -> bool:
    """True iff the angle between zp and zq is at most pi/8 (closed cone)."""
    px, py = _check_point(p)
    zx, zy = frame.apex
    qx, qy = frame.aim
    if px == zx and py == zy:
        raise ValueError("cone membership is undefined for the apex itself")
    ax, ay = qx - zx, qy - zy
    dx, dy = px - zx, py - zy
    dot = dx * ax + dy * ay
    if dot <= 0.0:
        return False
    rr = dx * dx + dy * dy
    ll = ax * ax + ay * ay
    return dot * dot >= COS2_HALF_ANGLE * rr * ll


def angle_cdf(x: float) -> float:
    """P(|angle| < x) for the stopper angle, x in [0, pi/8].

    The stopper lands uniformly on the boundary arc of the grown cone,
    which gives the law (8 / (pi + 2*sqrt(2))) * (x + sin(2x)/2).
    """
    x = float(x)
    if not 0.0 <= x <= HALF_ANGLE:
        raise ValueError(f"angle must lie in [0, pi/8], got {x}")
    if x == HALF_ANGLE:
        return 1.0
    return 8.0 / (math.pi + 2.0 * math.sqrt(2.0)) * (x + math.sin(2.0 * x) / 2.0)


def angle_pdf(x: float) -> float:
    """Density of the absolute stopper angle on [0, pi/8]."""
    x = float(x)
    if not 0.0 <= x <= HALF_ANGLE:
        raise ValueError(f"angle must lie in [0, pi/8], got {x}")
    return 8.0 / (math.pi + 2.0 * math.sqrt(2.0)) * (1.0 + math.cos(2.0 * x))


def radius_survival(x: float) -> float:
    """P(R >= x) = exp(-A x^2) for the ideal step radius, x >= 0."""
    x = float(x)
    if x < 0.0:
        raise ValueError(f"radius must be nonnegative, got {x}")
    A = math.sqrt(2.0) / 2.0 + math.pi / 4.0
    return math.exp(-A * x * x)


@dataclass(frozen=True)
class TheoryConstants:
    """Closed-form constants of the unit-intensity Poisson model."""

    cone_area_A: float
    expected_radius: float
    expected_intermediates: float
    path_length_const: float
    competitiveness_bound: float
    mean_progress: float


def _gauss_legendre(f, a: float, b: float, order: int = 96) -> float:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return float(half * np.sum(weights * f(mid + half * nodes)))


@lru_cache(maxsize=1)
def theory_constants() -> TheoryConstants:
    """Constants governing the walk on a unit-intensity Poisson site set.

    ``mean_progress`` (the expected per-step decrease of the distance to
    the aim, E[R(1+cos 2a)]) is evaluated by numeric quadrature of the
    product of the independent radius and angle laws; the laws are
    independent, so the double integral factors.
    """
    A = math.sqrt(2.0) / 2.0 + math.pi / 4.0
    expected_radius = math.sqrt(math.pi / (2.0 * math.sqrt(2.0) + math.pi))
    gamma = (math.pi - A) / A
    path_c = (22.0 * math.pi - 4.0 * math.sqrt(2.0)) / (
        2.0 + 3.0 * math.pi + 8.0 * math.sqrt(2.0)
    )
    comp = 4.0 * math.cos(math.pi / 8.0)

    # E[R] by quadrature of r * f_R(r); the survival tail beyond r = 8 is
    # below exp(-95) and is dropped.
    radius_part = _gauss_legendre(
        lambda r: r * 2.0 * A * r * np.exp(-A * r * r), 0.0, 8.0, order=200
    )
    angle_part = _gauss_legendre(
        lambda x: (1.0 + np.cos(2.0 * x))
        * (8.0 / (math.pi + 2.0 * math.sqrt(2.0)))
        * (1.0 + np.cos(2.0 * x)),
        0.0,
        HALF_ANGLE,
    )
    return TheoryConstants(
        cone_area_A=A,
        expected_radius=expected_radius,
        expected_intermediates=gamma,
        path_length_const=path_c,
        competitiveness_bound=comp,
        mean_progress=radius_part * angle_part,
    )
