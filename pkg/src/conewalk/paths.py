"""Turn a walk trace into an actual path of Delaunay edges.

``simple_path`` replays the discovery order of each step and back-traces
predecessor chains; it is fast and short on average but carries no
worst-case guarantee.  ``competitive_path`` runs Dijkstra between
consecutive stoppers inside the ellipse that must contain a spanner path,
which bounds the stretch of the whole route by 2 * lambda * cos(pi/8).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .delaunay import Triangulation
from .errors import ConsistencyError, PathSearchError
from .walk import WalkTrace

__all__ = [
    "Path",
    "PathAudit",
    "DEFAULT_STRETCH_LAMBDA",
    "simple_path",
    "competitive_path",
    "path_audit",
]

#: Best published upper bound for the Delaunay stretch factor.
DEFAULT_STRETCH_LAMBDA = 1.998


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]
    total_length: float
    stretch: float


def _segment_length(pts, vertices) -> float:
    total = 0.0
    for u, v in zip(vertices[:-1], vertices[1:]):
        dx = pts[v, 0] - pts[u, 0]
        dy = pts[v, 1] - pts[u, 1]
        total += math.sqrt(dx * dx + dy * dy)
    return total


def _finish(pts, vertices, start, qx, qy) -> Path:
    total = _segment_length(pts, vertices)
    dx = qx - pts[start, 0]
    dy = qy - pts[start, 1]
    l0 = math.sqrt(dx * dx + dy * dy)
    return Path(
        vertices=tuple(int(v) for v in vertices),
        total_length=total,
        stretch=total / l0 if l0 > 0.0 else 0.0,
    )


def _concat_chains(chains) -> list[int]:
    out: list[int] = []
    for chain in chains:
        if out:
            if out[-1] != chain[0]:
                raise ConsistencyError("discovery chains do not join up")
            out.extend(chain[1:])
        else:
            out.extend(chain)
    return out


def simple_path(t: Triangulation, trace: WalkTrace) -> Path:
    """Predecessor-table path through every step of the trace.

    Uses the discovery chains recorded on the trace when present,
    otherwise replays each step's search against ``t`` (a mismatch with
    the recorded stoppers raises :class:`ConsistencyError`).
    """
    if trace.kappa == 0 and trace.terminal == trace.start:
        return _finish(t.points, [trace.start], trace.start, *trace.aim)
    if trace.step_paths is not None:
        chains = trace.step_paths
        if not chains or chains[-1][-1] != trace.terminal:
            raise ConsistencyError("trace chains do not reach the terminal")
    else:
        chains = _replay_chains(t, trace)
    vertices = _concat_chains(chains)
    if vertices[0] != trace.start or vertices[-1] != trace.terminal:
        raise ConsistencyError("replayed path does not match trace endpoints")
    return _finish(t.points, vertices, trace.start, *trace.aim)


def _replay_chains(t: Triangulation, trace: WalkTrace):
    eng = t.engine()
    qx, qy = trace.aim
    chains = []
    anchor = trace.start
    for step in trace.steps:
        if step.from_site != anchor:
            raise ConsistencyError(
                f"step {step.index} starts at {step.from_site}, walk is at {anchor}"
            )
        is_stopper, vertex, _radius, _inters, chain, _acc = eng.step(anchor, qx, qy)
        if not is_stopper or int(vertex) != step.stopper:
            raise ConsistencyError(
                f"replayed step {step.index} found {vertex}, trace says {step.stopper}"
            )
        chains.append(tuple(int(c) for c in chain))
        anchor = step.stopper
    is_stopper, vertex, _radius, _inters, chain, _acc = eng.step(anchor, qx, qy)
    if is_stopper or int(vertex) != trace.terminal:
        raise ConsistencyError(
            f"replayed final step found {vertex}, trace says {trace.terminal}"
        )
    chains.append(tuple(int(c) for c in chain))
    return chains


def _ellipse_dijkstra(t: Triangulation, u: int, v: int, lam: float):
    """Shortest Delaunay path u -> v through sites inside the search ellipse.

    The ellipse is { x : |xu| + |xv| < lam * |uv| }; the endpoints always
    belong.  Returns the vertex list or None when v is unreachable inside
    the ellipse.
    """
    pts = t.points
    ux, uy = pts[u, 0], pts[u, 1]
    vx, vy = pts[v, 0], pts[v, 1]
    duv = math.hypot(vx - ux, vy - uy)
    bound = lam * duv

    def member(w: int) -> bool:
        wx, wy = pts[w, 0], pts[w, 1]
        return (
            math.hypot(wx - ux, wy - uy) + math.hypot(wx - vx, wy - vy) < bound
        )

    dist = {u: 0.0}
    prev = {u: -1}
    heap = [(0.0, u)]
    done = set()
    while heap:
        d, w = heapq.heappop(heap)
        if w in done:
            continue
        done.add(w)
        if w == v:
            out = [v]
            while prev[out[-1]] != -1:
                out.append(prev[out[-1]])
            out.reverse()
            return out
        wx, wy = pts[w, 0], pts[w, 1]
        for x in t.neighbors(w):
            x = int(x)
            if x in done:
                continue
            if x != v and x != u and not member(x):
                continue
            nd = d + math.hypot(pts[x, 0] - wx, pts[x, 1] - wy)
            if nd < dist.get(x, math.inf):
                dist[x] = nd
                prev[x] = w
                heapq.heappush(heap, (nd, x))
    return None


def competitive_path(
    t: Triangulation, trace: WalkTrace, lam: float = DEFAULT_STRETCH_LAMBDA
) -> Path:
    """Concatenated in-ellipse shortest paths between consecutive stoppers.

    Each segment has length at most lam * |Z_i Z_{i+1}|, which bounds the
    whole path by 2 * lam * cos(pi/8) * |zq|.  A segment search that finds
    nothing (numerically conceivable, theoretically impossible for lam at
    least the true stretch factor) retries with lam doubled, at most three
    times.
    """
    if lam < 1.0:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    hops = list(trace.stoppers)
    if trace.terminal != hops[-1]:
        hops.append(trace.terminal)
    vertices = [trace.start]
    for u, v in zip(hops[:-1], hops[1:]):
        seg = None
        lam_i = lam
        for _ in range(4):
            seg = _ellipse_dijkstra(t, u, v, lam_i)
            if seg is not None:
                break
            lam_i *= 2.0
        if seg is None:
            raise PathSearchError(
                f"no path between {u} and {v} inside ellipse after retries"
            )
        vertices.extend(seg[1:])
    return _finish(t.points, vertices, trace.start, *trace.aim)


@dataclass(frozen=True)
class PathAudit:
    adjacency_ok: bool
    endpoints_ok: bool
    length_ok: bool
    stretch_ok: bool
    recomputed_length: float
    stretch: float

    @property
    def passed(self) -> bool:
        return self.adjacency_ok and self.endpoints_ok and self.length_ok and (
            self.stretch_ok
        )


def path_audit(
    t: Triangulation,
    path: Path,
    z: int,
    q,
    stretch_bound: float | None = None,
) -> PathAudit:
    """Verify adjacency, endpoints, recorded length, and stretch.

    The last vertex must be a Delaunay neighbour of ``q`` under simulated
    insertion.  ``stretch_bound`` of None skips the stretch check.
    """
    pts = t.points
    verts = path.vertices
    adjacency_ok = all(
        int(b) in t.neighbors(int(a)) for a, b in zip(verts[:-1], verts[1:])
    )
    qn = set(int(v) for v in t.neighbors_of_query(q))
    endpoints_ok = len(verts) > 0 and verts[0] == z and verts[-1] in qn
    recomputed = _segment_length(pts, verts)
    scale = max(1.0, abs(path.total_length))
    length_ok = abs(recomputed - path.total_length) <= 1e-9 * scale
    qx, qy = float(q[0]), float(q[1])
    dx = qx - pts[z, 0]
    dy = qy - pts[z, 1]
    l0 = math.sqrt(dx * dx + dy * dy)
    stretch = recomputed / l0 if l0 > 0.0 else 0.0
    stretch_ok = True if stretch_bound is None else stretch <= stretch_bound
    return PathAudit(
        adjacency_ok=adjacency_ok,
        endpoints_ok=endpoints_ok,
        length_ok=length_ok,
        stretch_ok=stretch_ok,
        recomputed_length=recomputed,
        stretch=stretch,
    )
