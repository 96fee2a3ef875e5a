"""The cone walk: grow search cones along Delaunay adjacencies.

One step grows ``Cone(z, q, r)`` from r = 0 until a site (the *stopper*)
enters it; sites swept up by the growing disc but outside the cone are
*intermediates*.  The walk ends when the aim ``q`` would win the
extraction, at which point one member of the current sub-step set is a
Delaunay neighbour of ``q`` in the augmented triangulation; that member is
returned as the terminal.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation
from .errors import HullError
from .geometry import COS2_HALF_ANGLE, UNREACHABLE

log = logging.getLogger("conewalk")

__all__ = [
    "StepRecord",
    "WalkTrace",
    "Violation",
    "cone_walk",
    "step_oracle",
    "check_step_lemmata",
    "discovery_length",
    "trace_to_text",
    "trace_from_text",
]


@dataclass(frozen=True)
class StepRecord:
    """One full step: anchor, stopper, and everything swept on the way."""

    index: int
    from_site: int
    stopper: int
    radius: float
    angle: float  # signed, in [-pi/8, pi/8]
    intermediates: tuple[int, ...]
    accessed_count: int
    distance_to_aim: float  # |Z_i q| before the step


@dataclass(frozen=True)
class WalkTrace:
    """Complete record of one cone walk."""

    start: int
    aim: tuple[float, float]
    steps: tuple[StepRecord, ...]
    terminal: int
    kappa: int
    visited_count: int
    accessed_total: int
    neighborhoods_used: int
    final_intermediates: tuple[int, ...]
    final_accessed: int
    step_paths: tuple[tuple[int, ...], ...] | None = None

    @property
    def stoppers(self) -> tuple[int, ...]:
        return (self.start,) + tuple(s.stopper for s in self.steps)


def _signed_angle(zx, zy, qx, qy, sx, sy) -> float:
    """Angle at z between zq and zs, signed by the cross product."""
    ax = qx - zx
    ay = qy - zy
    dx = sx - zx
    dy = sy - zy
    return math.atan2(ax * dy - ay * dx, ax * dx + ay * dy)


def cone_walk(
    t: Triangulation,
    z: int,
    q,
    *,
    record_paths: bool = True,
    check_terminal: bool = False,
) -> WalkTrace:
    """Walk from site ``z`` toward point ``q``; return the full trace.

    ``record_paths`` keeps the per-step discovery chains (used by the path
    generators).  ``check_terminal`` verifies the terminal against the
    simulated insertion of ``q`` and falls back to a sub-step scan on
    mismatch (never observed; the selection is provably a neighbour).
    """
    n = t.n_sites
    if not 0 <= z < n:
        raise IndexError(f"start site {z} out of range [0, {n})")
    qx, qy = float(q[0]), float(q[1])
    eng = t.engine()
    hint = int(t.vertex_triangle[z])
    code = eng.locate(qx, qy, hint)
    if code < 0:
        raise HullError(f"aim {(qx, qy)} is outside the convex hull")
    pts = t.points
    for k in range(3):
        v = int(t.tri_vertices[code, k])
        if pts[v, 0] == qx and pts[v, 1] == qy:
            # Aim coincides with a site: that site is its own nearest
            # neighbour, no walking needed.
            return WalkTrace(
                start=z,
                aim=(qx, qy),
                steps=(),
                terminal=v,
                kappa=0,
                visited_count=1,
                accessed_total=0,
                neighborhoods_used=0,
                final_intermediates=(),
                final_accessed=0,
                step_paths=((z,),) if record_paths and v == z else None,
            )

    steps: list[StepRecord] = []
    chains: list[tuple[int, ...]] = []
    anchor = z
    accessed_total = 0
    visited = 1
    neigh_used = 0
    step_cap = 8 * n + 64
    for i in range(step_cap):
        is_stopper, vertex, radius, inters, chain, accessed = eng.step(
            anchor, qx, qy
        )
        accessed_total += accessed
        visited += len(inters)
        neigh_used = max(neigh_used, 1 + len(inters))
        if record_paths:
            chains.append(tuple(int(c) for c in chain))
        if not is_stopper:
            terminal = int(vertex)
            final_inters = tuple(int(v) for v in inters)
            final_accessed = accessed
            break
        zx = pts[anchor, 0]
        zy = pts[anchor, 1]
        dx = qx - zx
        dy = qy - zy
        steps.append(
            StepRecord(
                index=i,
                from_site=anchor,
                stopper=int(vertex),
                radius=float(radius),
                angle=_signed_angle(
                    zx, zy, qx, qy, pts[vertex, 0], pts[vertex, 1]
                ),
                intermediates=tuple(int(v) for v in inters),
                accessed_count=accessed,
                distance_to_aim=math.sqrt(dx * dx + dy * dy),
            )
        )
        visited += 1
        anchor = int(vertex)
    else:
        raise RuntimeError(f"walk did not terminate within {step_cap} steps")

    if check_terminal:
        qn = t.neighbors_of_query((qx, qy), hint=hint)
        if terminal not in qn:
            log.warning(
                "terminal %d is not a Delaunay neighbour of the aim; "
                "falling back to a sub-step scan",
                terminal,
            )
            members = [anchor, *final_inters]
            in_qn = [s for s in members if s in set(int(v) for v in qn)]
            if in_qn:
                terminal = min(
                    in_qn,
                    key=lambda s: (
                        _reverse_radius(pts, s, anchor, qx, qy),
                        s,
                    ),
                )

    return WalkTrace(
        start=z,
        aim=(qx, qy),
        steps=tuple(steps),
        terminal=terminal,
        kappa=len(steps),
        visited_count=visited,
        accessed_total=accessed_total,
        neighborhoods_used=neigh_used,
        final_intermediates=final_inters,
        final_accessed=final_accessed,
        step_paths=tuple(chains) if record_paths else None,
    )


def discovery_length(t: Triangulation, trace: WalkTrace) -> float:
    """Length of the walk's discovery traversal.

    The traversal visits, within each step, the anchor, then every
    intermediate in the order the growing disc swept them up, then the
    stopper (in the final partial step, the swept vertices only).  One hop
    per swept vertex, each at most one disc diameter, is exactly the
    walk-length quantity the closed-form constant c bounds; it is an upper
    bound for the predecessor-chain route of :func:`~conewalk.simple_path`.
    """
    pts = t.points
    total = 0.0
    for step in trace.steps:
        seq = (step.from_site, *step.intermediates, step.stopper)
        for u, v in zip(seq[:-1], seq[1:]):
            dx = pts[v, 0] - pts[u, 0]
            dy = pts[v, 1] - pts[u, 1]
            total += math.sqrt(dx * dx + dy * dy)
    anchor = trace.steps[-1].stopper if trace.steps else trace.start
    seq = (anchor, *trace.final_intermediates)
    for u, v in zip(seq[:-1], seq[1:]):
        dx = pts[v, 0] - pts[u, 0]
        dy = pts[v, 1] - pts[u, 1]
        total += math.sqrt(dx * dx + dy * dy)
    return total


def _reverse_radius(pts, s, anchor, qx, qy) -> float:
    ax = pts[anchor, 0] - qx
    ay = pts[anchor, 1] - qy
    dx = pts[s, 0] - qx
    dy = pts[s, 1] - qy
    dot = dx * ax + dy * ay
    if dot <= 0.0:
        return UNREACHABLE
    return (dx * dx + dy * dy) * math.sqrt(ax * ax + ay * ay) / (2.0 * dot)


def step_oracle(t: Triangulation, anchor: int, q):
    """Single-step reference by full scan over every site.

    Returns (stopper, radius, intermediates) with intermediates sorted by
    (radius, index), or None when the aim wins the extraction (terminal
    condition).  Test-only reference for the adjacency-driven search.
    """
    pts = t.points
    n = t.n_sites
    qx, qy = float(q[0]), float(q[1])
    zx = pts[anchor, 0]
    zy = pts[anchor, 1]
    ax = qx - zx
    ay = qy - zy
    ll = ax * ax + ay * ay
    axis_len = math.sqrt(ll)
    rq = 0.5 * axis_len

    dx = pts[:, 0] - zx
    dy = pts[:, 1] - zy
    dot = dx * ax + dy * ay
    rr = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        radius = np.where(dot > 0.0, rr * axis_len / (2.0 * dot), np.inf)
    radius[anchor] = np.inf
    cone = (dot > 0.0) & (dot * dot >= COS2_HALF_ANGLE * rr * ll)
    cone[anchor] = False

    cone_idx = np.flatnonzero(cone)
    if cone_idx.size:
        best = cone_idx[np.argmin(radius[cone_idx])]  # first min = lowest index
        best_r = float(radius[best])
    else:
        best = -1
        best_r = math.inf
    if rq <= best_r:
        return None
    smaller = (radius < best_r) | ((radius == best_r) & (np.arange(n) < best))
    smaller[anchor] = False
    smaller[best] = False
    inter_idx = np.flatnonzero(smaller)
    order = np.lexsort((inter_idx, radius[inter_idx]))
    return int(best), best_r, [int(v) for v in inter_idx[order]]


@dataclass(frozen=True)
class Violation:
    step: int
    kind: str
    detail: str


def _point_cone_distance(px, py, apex_x, apex_y, qx, qy) -> float:
    """Distance from a point to the closed infinite cone at the apex."""
    ax = qx - apex_x
    ay = qy - apex_y
    norm = math.sqrt(ax * ax + ay * ay)
    ax /= norm
    ay /= norm
    dx = px - apex_x
    dy = py - apex_y
    dot = dx * ax + dy * ay
    rr = dx * dx + dy * dy
    if dot > 0.0 and dot * dot >= COS2_HALF_ANGLE * rr:
        return 0.0
    best = math.inf
    half = math.pi / 8.0
    cos_h = math.cos(half)
    sin_h = math.sin(half)
    for sign in (1.0, -1.0):
        bx = ax * cos_h - sign * ay * sin_h
        by = sign * ax * sin_h + ay * cos_h
        tproj = max(0.0, dx * bx + dy * by)
        ex = dx - tproj * bx
        ey = dy - tproj * by
        best = min(best, math.hypot(ex, ey))
    return best


def check_step_lemmata(
    t: Triangulation, trace: WalkTrace, boundary_samples: int = 1000
) -> list[Violation]:
    """Check the non-overlap guarantees and the progress sandwich.

    For steps with |Z_i q| > (2 + sqrt(2)) R_i the disc of step i must not
    reach into the next step's infinite cone (they may touch at the
    stopper only).  For consecutive steps whose next disc excludes the
    aim, the next disc must avoid Disc_i minus Cone_i.  Every step's
    distance progress must satisfy the two-sided bound implied by the
    stopper geometry.  Violations are returned as data, not raised.
    """
    out: list[Violation] = []
    pts = t.points
    qx, qy = trace.aim
    rel = 1e-9
    xi = 2.0 + math.sqrt(2.0)
    thetas = np.linspace(0.0, 2.0 * math.pi, boundary_samples, endpoint=False)
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)

    for i, step in enumerate(trace.steps):
        zx = pts[step.from_site, 0]
        zy = pts[step.from_site, 1]
        sx = pts[step.stopper, 0]
        sy = pts[step.stopper, 1]
        li = step.distance_to_aim
        ri = step.radius
        ux = (qx - zx) / li
        uy = (qy - zy) / li
        cx = zx + ri * ux
        cy = zy + ri * uy

        # Non-overlap of this disc with the next search cone.
        if li > xi * ri:
            d = _point_cone_distance(cx, cy, sx, sy, qx, qy)
            if d < ri * (1.0 - rel):
                out.append(
                    Violation(i, "cone-overlap", f"centre-cone distance {d} < {ri}")
                )
            else:
                bx = cx + ri * cos_t
                by = cy + ri * sin_t
                axn = qx - sx
                ayn = qy - sy
                dxn = bx - sx
                dyn = by - sy
                dotn = dxn * axn + dyn * ayn
                rrn = dxn * dxn + dyn * dyn
                lln = axn * axn + ayn * ayn
                inside = (dotn > 0.0) & (
                    dotn * dotn > COS2_HALF_ANGLE * rrn * lln * (1.0 + rel)
                )
                # The shared stopper itself may touch the boundary.
                near_stop = rrn <= (rel * max(ri, 1.0)) ** 2
                if (inside & ~near_stop).any():
                    out.append(
                        Violation(i, "cone-overlap", "disc boundary sample in cone")
                    )

        # Overlap of consecutive discs confined to the cone part.
        if i + 1 < len(trace.steps):
            nxt = trace.steps[i + 1]
            lj = nxt.distance_to_aim
            rj = nxt.radius
            if 0.5 * lj > rj:  # aim outside the next disc (always holds)
                wx = (qx - sx) / lj
                wy = (qy - sy) / lj
                c2x = sx + rj * wx
                c2y = sy + rj * wy
                bx = c2x + rj * cos_t
                by = c2y + rj * sin_t
                # Samples inside disc i must lie in the closed cone of step i.
                din = (bx - cx) ** 2 + (by - cy) ** 2 < (ri * (1.0 - rel)) ** 2
                if din.any():
                    dxn = bx[din] - zx
                    dyn = by[din] - zy
                    dotn = dxn * (qx - zx) + dyn * (qy - zy)
                    rrn = dxn * dxn + dyn * dyn
                    lln = li * li
                    ok = (dotn > 0.0) & (
                        dotn * dotn >= COS2_HALF_ANGLE * rrn * lln * (1.0 - rel)
                    )
                    if not ok.all():
                        out.append(
                            Violation(
                                i,
                                "disc-overlap",
                                "next disc reaches outside this step's cone",
                            )
                        )

        # Progress sandwich from the stopper geometry.
        lj = math.sqrt((qx - sx) ** 2 + (qy - sy) ** 2)
        prog = ri * (1.0 + math.cos(2.0 * step.angle))
        lo = li - prog
        hi = li - prog + 2.0 * ri * ri / li
        tol = rel * max(1.0, li)
        if not (lo - tol <= lj <= hi + tol):
            out.append(
                Violation(i, "sandwich", f"L_next {lj} outside [{lo}, {hi}]")
            )
    return out


def _fmt(x: float) -> str:
    return repr(float(x))


def trace_to_text(trace: WalkTrace) -> str:
    """Serialize a trace: header (z, q, kappa, K, accessed, terminal), then
    one line per step: i, Z_i, Z_{i+1}, R_i, alpha_i, |intermediates|, L_i.
    """
    lines = [
        f"z {trace.start}",
        f"q {_fmt(trace.aim[0])} {_fmt(trace.aim[1])}",
        f"kappa {trace.kappa}",
        f"K {trace.visited_count}",
        f"accessed {trace.accessed_total}",
        f"terminal {trace.terminal}",
    ]
    for s in trace.steps:
        lines.append(
            f"{s.index} {s.from_site} {s.stopper} {_fmt(s.radius)} "
            f"{_fmt(s.angle)} {len(s.intermediates)} {_fmt(s.distance_to_aim)}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedTrace:
    """Trace as reconstructed from its text form (counts, not memberships)."""

    start: int
    aim: tuple[float, float]
    kappa: int
    visited_count: int
    accessed_total: int
    terminal: int
    steps: tuple[tuple[int, int, int, float, float, int, float], ...]

    def to_text(self) -> str:
        lines = [
            f"z {self.start}",
            f"q {_fmt(self.aim[0])} {_fmt(self.aim[1])}",
            f"kappa {self.kappa}",
            f"K {self.visited_count}",
            f"accessed {self.accessed_total}",
            f"terminal {self.terminal}",
        ]
        for i, zi, si, r, a, ni, li in self.steps:
            lines.append(
                f"{i} {zi} {si} {_fmt(r)} {_fmt(a)} {ni} {_fmt(li)}"
            )
        return "\n".join(lines) + "\n"


def trace_from_text(text: str) -> ParsedTrace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = {}
    for ln in lines[:6]:
        key, *rest = ln.split()
        head[key] = rest
    steps = []
    for ln in lines[6:]:
        i, zi, si, r, a, ni, li = ln.split()
        steps.append(
            (int(i), int(zi), int(si), float(r), float(a), int(ni), float(li))
        )
    return ParsedTrace(
        start=int(head["z"][0]),
        aim=(float(head["q"][0]), float(head["q"][1])),
        kappa=int(head["kappa"][0]),
        visited_count=int(head["K"][0]),
        accessed_total=int(head["accessed"][0]),
        terminal=int(head["terminal"][0]),
        steps=tuple(steps),
    )
