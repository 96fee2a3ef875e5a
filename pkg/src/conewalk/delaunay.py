"""Delaunay triangulation of a finite site set, with query support.

The triangulation is immutable after :func:`build`; concurrent readers are
safe (each thread gets its own query engine with private scratch state).
``neighbors_of_query`` computes the Delaunay neighbours a point would have
after insertion, without mutating anything.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import HullError

__all__ = [
    "SiteSet",
    "Triangulation",
    "site_set",
    "build",
    "neighbors",
    "neighbors_of_query",
    "validate",
    "max_degree",
    "load_sites",
    "save_sites",
]


@dataclass(frozen=True)
class SiteSet:
    """Sites in a disc-shaped domain centred at the origin.

    General position (no duplicates, no three collinear, no four
    cocircular) is assumed, as almost surely holds for random input;
    violations surface as :class:`DegeneracyError` during construction.
    """

    points: np.ndarray  # (n, 2) float64, C-contiguous
    domain_radius: float

    def __post_init__(self):
        pts = self.points
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must have shape (n, 2)")
        if not np.isfinite(pts).all():
            raise ValueError("site coordinates must be finite")

    def __len__(self):
        return self.points.shape[0]


def site_set(points, domain_radius=None, *, jitter=False, jitter_seed=0) -> SiteSet:
    """Wrap raw coordinates as a :class:`SiteSet`.

    ``domain_radius`` defaults to sqrt(n / pi), the disc of area n at unit
    intensity.  ``jitter`` adds uniform noise of magnitude 1e-9 times the
    domain radius to each coordinate (deterministic in ``jitter_seed``);
    off by default, intended for adversarial inputs that would otherwise
    be degenerate.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if domain_radius is None:
        domain_radius = math.sqrt(len(pts) / math.pi) if len(pts) else 1.0
    if jitter:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(jitter_seed)))
        pts = pts + (rng.random(pts.shape) - 0.5) * 2e-9 * domain_radius
    return SiteSet(points=pts, domain_radius=float(domain_radius))


def _spread_bits(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.uint32)
    v = (v | (v << np.uint32(8))) & np.uint32(0x00FF00FF)
    v = (v | (v << np.uint32(4))) & np.uint32(0x0F0F0F0F)
    v = (v | (v << np.uint32(2))) & np.uint32(0x33333333)
    v = (v | (v << np.uint32(1))) & np.uint32(0x55555555)
    return v


def _morton_order(pts: np.ndarray) -> np.ndarray:
    """Insertion order along a Morton curve, ties broken by input index.

    Spatial locality keeps the walk-based point location at O(1) hops per
    insertion; the finished triangulation does not depend on the order.
    """
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    span[span == 0.0] = 1.0
    grid = np.minimum((pts - lo) / span * 65536.0, 65535.0).astype(np.uint32)
    code = _spread_bits(grid[:, 0]) | (_spread_bits(grid[:, 1]) << np.uint32(1))
    return np.argsort(code, kind="stable").astype(np.int32)


def _adjacency_csr(tv: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    finite = tv[(tv != -1).all(axis=1)]
    edges = np.concatenate([finite[:, [0, 1]], finite[:, [1, 2]], finite[:, [2, 0]]])
    edges.sort(axis=1)
    edges = np.unique(edges, axis=0)
    sym = np.concatenate([edges, edges[:, ::-1]])
    order = np.lexsort((sym[:, 1], sym[:, 0]))
    sym = sym[order]
    indices = np.ascontiguousarray(sym[:, 1], dtype=np.int32)
    indptr = np.zeros(n + 1, dtype=np.int64)
    counts = np.bincount(sym[:, 0], minlength=n)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


class Triangulation:
    """Immutable Delaunay triangulation with adjacency queries."""

    def __init__(self, sites: SiteSet, tv, tn, vtri, indptr, indices, kernel):
        self.site_set = sites
        self.points = sites.points
        self.tri_vertices = tv
        self.tri_neighbors = tn
        self.vertex_triangle = vtri
        self.indptr = indptr
        self.indices = indices
        self.kernel = kernel
        self._local = threading.local()
        self._finite_mask = (tv != -1).all(axis=1)

    def __len__(self):
        return self.points.shape[0]

    @property
    def n_sites(self) -> int:
        return self.points.shape[0]

    def finite_triangles(self) -> np.ndarray:
        """Vertex triples of the finite triangles, one row each."""
        return self.tri_vertices[self._finite_mask]

    def engine(self):
        """Per-thread query engine (private scratch state)."""
        eng = getattr(self._local, "engine", None)
        if eng is None:
            eng = self.kernel.Engine(
                self.points,
                self.tri_vertices,
                self.tri_neighbors,
                self.vertex_triangle,
                self.indptr,
                self.indices,
            )
            self._local.engine = eng
        return eng

    def neighbors(self, v: int) -> np.ndarray:
        """Delaunay neighbours of site ``v``, ascending."""
        n = self.n_sites
        if not 0 <= v < n:
            raise IndexError(f"site index {v} out of range [0, {n})")
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def locate(self, q, hint: int | None = None) -> int:
        """Index of a finite triangle containing ``q`` (closed test).

        Raises :class:`HullError` when ``q`` is outside the convex hull.
        """
        qx, qy = float(q[0]), float(q[1])
        if hint is None:
            hint = int(self.vertex_triangle[0])
        code = self.engine().locate(qx, qy, hint)
        if code < 0:
            raise HullError(f"point {(qx, qy)} is outside the convex hull")
        return int(code)

    def is_inside_hull(self, q, hint: int | None = None) -> bool:
        qx, qy = float(q[0]), float(q[1])
        if hint is None:
            hint = int(self.vertex_triangle[0])
        return self.engine().locate(qx, qy, hint) >= 0

    def neighbors_of_query(self, q, hint: int | None = None) -> np.ndarray:
        """Delaunay neighbours of ``q`` after simulated insertion.

        A query coinciding with a site returns that site alone.  Raises
        :class:`HullError` outside the hull.
        """
        qx, qy = float(q[0]), float(q[1])
        if hint is None:
            hint = int(self.vertex_triangle[0])
        code, sites = self.engine().conflicts(qx, qy, hint)
        if code == 1:
            raise HullError(f"point {(qx, qy)} is outside the convex hull")
        return sites


def build(sites: SiteSet | np.ndarray, kernel=None) -> Triangulation:
    """Build the Delaunay triangulation of ``sites``.

    Deterministic for a fixed input: the insertion order is a fixed
    function of the coordinates, and under general position the resulting
    triangulation is unique anyway.  Raises ``ValueError`` for fewer than
    3 sites and :class:`DegeneracyError` for duplicate or all-collinear
    input.
    """
    if not isinstance(sites, SiteSet):
        sites = site_set(sites)
    if kernel is None:
        kernel = backend.get_kernel()
    pts = sites.points
    if pts.shape[0] < 3:
        raise ValueError(f"need at least 3 sites, got {pts.shape[0]}")
    order = _morton_order(pts)
    tv, tn, vtri = kernel.build(pts, order)
    indptr, indices = _adjacency_csr(tv, pts.shape[0])
    return Triangulation(sites, tv, tn, vtri, indptr, indices, kernel)


def neighbors(t: Triangulation, v: int) -> np.ndarray:
    return t.neighbors(v)


def neighbors_of_query(t: Triangulation, q) -> np.ndarray:
    return t.neighbors_of_query(q)


def max_degree(t: Triangulation) -> int:
    """Maximum Delaunay degree over all sites."""
    return int(np.diff(t.indptr).max())


def validate(t: Triangulation) -> bool:
    """Brute-force empty-circumdisc check of every finite triangle.

    O(T * n); intended for tests.
    """
    pts = t.points
    x = pts[:, 0]
    y = pts[:, 1]
    for tri in t.finite_triangles():
        a, b, c = int(tri[0]), int(tri[1]), int(tri[2])
        adx = x[a] - x
        ady = y[a] - y
        bdx = x[b] - x
        bdy = y[b] - y
        cdx = x[c] - x
        cdy = y[c] - y
        det = (
            (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
            + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
            + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
        )
        det[[a, b, c]] = 0.0
        if (det > 0.0).any():
            return False
    return True


def load_sites(path, domain_radius=None) -> SiteSet:
    """Read "x y" pairs (whitespace- or comma-separated, one per line)."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 'x y', got {text!r}")
            rows.append((float(parts[0]), float(parts[1])))
    return site_set(np.array(rows, dtype=np.float64).reshape(-1, 2), domain_radius)


def save_sites(sites: SiteSet | np.ndarray, path) -> None:
    """Write sites one "x y" pair per line; floats round-trip exactly."""
    pts = sites.points if isinstance(sites, SiteSet) else np.asarray(sites)
    with open(path, "w", encoding="utf-8") as fh:
        for px, py in pts:
            fh.write(f"{float(px)!r} {float(py)!r}\n")
