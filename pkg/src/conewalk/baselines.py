"""Reference navigation algorithms for empirical comparison.

Straight walk marches through the triangles crossed by the segment zq;
greedy walk descends to the neighbour closest to the aim; compass walk
follows the neighbour of smallest absolute angle toward the aim.  All
three terminate on Delaunay inputs.  Greedy and compass report success
when they stop on a Delaunay neighbour of the aim (simulated insertion),
the same criterion the cone walk satisfies by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .delaunay import Triangulation
from .errors import DegeneracyError, DivergenceError

__all__ = [
    "BaselineResult",
    "straight_walk",
    "greedy_walk",
    "compass_walk",
]


@dataclass(frozen=True)
class BaselineResult:
    algorithm: str  # "straight" | "greedy" | "compass"
    vertices_or_triangles: tuple[int, ...]
    hop_count: int
    total_length: float
    terminated: bool


def _orient(pts, a, b, px, py) -> float:
    return (pts[b, 0] - pts[a, 0]) * (py - pts[a, 1]) - (
        pts[b, 1] - pts[a, 1]
    ) * (px - pts[a, 0])


def straight_walk(t: Triangulation, z: int, q) -> BaselineResult:
    """Ordered triangles whose interiors meet the segment from z to q."""
    pts = t.points
    qx, qy = float(q[0]), float(q[1])
    tq = t.locate((qx, qy), hint=int(t.vertex_triangle[z]))
    zx, zy = pts[z, 0], pts[z, 1]
    if qx == zx and qy == zy:
        tris = [int(tq)]
        return BaselineResult("straight", tuple(tris), len(tris), 0.0, True)

    tv = t.tri_vertices
    tn = t.tri_neighbors

    # Pick the star triangle of z whose wedge contains the direction to q.
    start = -1
    for tri in _star(t, z):
        a, b, c = int(tv[tri, 0]), int(tv[tri, 1]), int(tv[tri, 2])
        if a == -1 or b == -1 or c == -1:
            continue
        if a == z:
            va, vb = b, c
        elif b == z:
            va, vb = c, a
        else:
            va, vb = a, b
        o1 = _orient(pts, z, va, qx, qy)
        o2 = _orient(pts, z, vb, qx, qy)
        if o1 == 0.0 or o2 == 0.0:
            raise DegeneracyError("segment is collinear with a Delaunay edge at z")
        if o1 > 0.0 > o2:
            start = tri
            break
    if start < 0:
        raise DegeneracyError("no star wedge strictly contains the segment")

    tris = [start]
    cur = start
    prev = -1
    cap = 4 * tv.shape[0] + 64
    for _ in range(cap):
        if cur == tq:
            break
        nxt = -1
        for k in range(3):
            u = int(tn[cur, k])
            if u == prev:
                continue
            e0 = int(tv[cur, (k + 1) % 3])
            e1 = int(tv[cur, (k + 2) % 3])
            if e0 == z or e1 == z:
                continue  # edges at z are never proper exits
            # Edge (e0, e1) is crossed when its endpoints straddle the
            # line zq and the aim lies beyond the edge.
            o0 = (pts[e0, 0] - zx) * (qy - zy) - (pts[e0, 1] - zy) * (qx - zx)
            o1 = (pts[e1, 0] - zx) * (qy - zy) - (pts[e1, 1] - zy) * (qx - zx)
            if o0 == 0.0 or o1 == 0.0:
                raise DegeneracyError("segment passes exactly through a vertex")
            if (o0 > 0.0) == (o1 > 0.0):
                continue
            if _orient(pts, e0, e1, qx, qy) < 0.0:
                nxt = u
                break
        if nxt < 0:
            break
        prev = cur
        cur = nxt
        if int(tv[cur, 0]) == -1 or int(tv[cur, 1]) == -1 or int(tv[cur, 2]) == -1:
            raise RuntimeError("straight walk left the hull")
        tris.append(cur)
    else:
        raise RuntimeError("straight walk did not terminate")

    dz = math.hypot(qx - zx, qy - zy)
    return BaselineResult("straight", tuple(tris), len(tris), dz, True)


def _star(t: Triangulation, v: int):
    """Finite triangles incident to site v (rotation via adjacency)."""
    tv = t.tri_vertices
    tn = t.tri_neighbors
    first = int(t.vertex_triangle[v])
    out = []
    cur = first
    for _ in range(t.tri_vertices.shape[0]):
        out.append(cur)
        k = -1
        for j in range(3):
            if int(tv[cur, j]) == v:
                k = j
                break
        # Rotate counterclockwise: cross the edge opposite the vertex
        # that follows v in this triangle.
        nxt = int(tn[cur, (k + 1) % 3])
        if nxt == first:
            break
        cur = nxt
        if int(tv[cur, 0]) == -1 or int(tv[cur, 1]) == -1 or int(tv[cur, 2]) == -1:
            # Hull vertex: restart clockwise from the first triangle.
            cur = first
            while True:
                k = -1
                for j in range(3):
                    if int(tv[cur, j]) == v:
                        k = j
                        break
                prv = int(tn[cur, (k + 2) % 3])
                if int(tv[prv, 0]) == -1 or int(tv[prv, 1]) == -1 or (
                    int(tv[prv, 2]) == -1
                ):
                    break
                cur = prv
                out.append(cur)
            break
    return out


def greedy_walk(t: Triangulation, z: int, q) -> BaselineResult:
    """Descend to the neighbour nearest the aim until a local minimum.

    On Delaunay inputs the local minimum is the nearest site to the aim,
    hence a Delaunay neighbour of the aim; ``terminated`` records that
    success criterion.
    """
    pts = t.points
    qx, qy = float(q[0]), float(q[1])
    t.locate((qx, qy), hint=int(t.vertex_triangle[z]))  # hull check
    path = [z]
    cur = z
    dcur = math.hypot(pts[cur, 0] - qx, pts[cur, 1] - qy)
    total = 0.0
    cap = 4 * t.n_sites + 64
    for _ in range(cap):
        best = -1
        dbest = dcur
        for w in t.neighbors(cur):
            w = int(w)
            d = math.hypot(pts[w, 0] - qx, pts[w, 1] - qy)
            if d < dbest or (d == dbest and best >= 0 and w < best):
                best = w
                dbest = d
        if best < 0:
            break
        total += math.hypot(pts[best, 0] - pts[cur, 0], pts[best, 1] - pts[cur, 1])
        cur = best
        dcur = dbest
        path.append(cur)
    else:
        raise DivergenceError("greedy walk exceeded its hop limit")
    qn = t.neighbors_of_query((qx, qy))
    ok = int(cur) in set(int(v) for v in qn)
    return BaselineResult("greedy", tuple(path), len(path) - 1, total, ok)


def compass_walk(t: Triangulation, z: int, q) -> BaselineResult:
    """Follow the neighbour minimising the absolute angle toward the aim.

    Stops as soon as the current vertex is a Delaunay neighbour of the
    aim.  The hop limit guards the known non-convergence pathologies of
    compass routing on non-Delaunay inputs; exceeding it raises
    :class:`DivergenceError`.
    """
    pts = t.points
    qx, qy = float(q[0]), float(q[1])
    t.locate((qx, qy), hint=int(t.vertex_triangle[z]))  # hull check
    qn = set(int(v) for v in t.neighbors_of_query((qx, qy)))
    path = [z]
    cur = z
    total = 0.0
    cap = 10 * t.n_sites
    for _ in range(cap):
        if cur in qn:
            return BaselineResult(
                "compass", tuple(path), len(path) - 1, total, True
            )
        vx = qx - pts[cur, 0]
        vy = qy - pts[cur, 1]
        best = -1
        best_angle = math.inf
        for w in t.neighbors(cur):
            w = int(w)
            wx = pts[w, 0] - pts[cur, 0]
            wy = pts[w, 1] - pts[cur, 1]
            ang = abs(math.atan2(vx * wy - vy * wx, vx * wx + vy * wy))
            if ang < best_angle or (ang == best_angle and w < best):
                best = w
                best_angle = ang
        total += math.hypot(pts[best, 0] - pts[cur, 0], pts[best, 1] - pts[cur, 1])
        cur = best
        path.append(cur)
    raise DivergenceError("compass walk exceeded its hop limit")
