"""Pure-Python triangulation and walk kernels.

Twin of the compiled module ``conewalk._ckern``: same algorithms, same
arithmetic expressions, same tie rules, so the two backends produce
bit-identical output.  The compiled twin is selected at import time when
available; this module is the fallback and the readable reference.

Triangle storage follows the usual compactified-plane scheme: every edge
has exactly two incident triangles, with hull edges bordered by "infinite"
triangles that carry the sentinel vertex -1.  An infinite triangle whose
cyclic vertex order reads ``(x, y, -1)`` is in conflict with a point p iff
p lies strictly to the left of the directed line x -> y.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import DegeneracyError

INF = -1

# cos^2(pi/8), exact; shared by all cone membership tests.
_COS2 = (2.0 + math.sqrt(2.0)) / 4.0

IS_COMPILED = False


def _orient(ax, ay, bx, by, cx, cy):
    """Twice the signed area of (a, b, c); > 0 for counterclockwise."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """> 0 iff d lies strictly inside the circle through CCW (a, b, c)."""
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )


class _BuildState:
    __slots__ = (
        "xs", "ys", "tv", "tn", "alive", "free", "ntri",
        "tri_stamp", "stamp",
        "map_start", "map_end", "start_stamp", "end_stamp",
        "last",
    )

    def __init__(self, xs, ys, n):
        cap = 2 * n + 16
        self.xs = xs
        self.ys = ys
        self.tv = np.empty((cap, 3), dtype=np.int32)
        self.tn = np.empty((cap, 3), dtype=np.int32)
        self.alive = np.zeros(cap, dtype=np.uint8)
        self.free = []
        self.ntri = 0
        self.tri_stamp = np.zeros(cap, dtype=np.int64)
        self.stamp = 0
        self.map_start = np.zeros(n + 1, dtype=np.int32)
        self.map_end = np.zeros(n + 1, dtype=np.int32)
        self.start_stamp = np.zeros(n + 1, dtype=np.int64)
        self.end_stamp = np.zeros(n + 1, dtype=np.int64)
        self.last = 0

    def alloc(self):
        if self.free:
            t = self.free.pop()
        else:
            t = self.ntri
            if t >= self.tv.shape[0]:
                cap = 2 * self.tv.shape[0]
                self.tv = np.resize(self.tv, (cap, 3))
                self.tn = np.resize(self.tn, (cap, 3))
                self.alive = np.resize(self.alive, cap)
                self.tri_stamp = np.resize(self.tri_stamp, cap)
            self.ntri = t + 1
        self.alive[t] = 1
        return t


def _tri_conflict(tv, xs, ys, t, px, py):
    a = tv[t, 0]
    b = tv[t, 1]
    c = tv[t, 2]
    if c == INF:
        return _orient(xs[a], ys[a], xs[b], ys[b], px, py) > 0.0
    if a == INF:
        return _orient(xs[b], ys[b], xs[c], ys[c], px, py) > 0.0
    if b == INF:
        return _orient(xs[c], ys[c], xs[a], ys[a], px, py) > 0.0
    return _incircle(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], px, py) > 0.0


def _locate(tv, tn, xs, ys, px, py, hint, cap):
    """Walk toward (px, py) from triangle ``hint``.

    Returns the containing finite triangle (closed containment), or
    ``-t - 1`` when the walk exits the hull into infinite triangle ``t``.
    A hint that is itself infinite is first hopped off into its finite
    neighbour across the hull edge.
    """
    t = hint
    for k in range(3):
        if tv[t, k] == INF:
            t = tn[t, k]
            break
    prev = -1
    for _ in range(cap):
        a = tv[t, 0]
        b = tv[t, 1]
        c = tv[t, 2]
        if a == INF or b == INF or c == INF:
            return -t - 1
        moved = False
        for k in range(3):
            u = tn[t, k]
            if u == prev:
                continue
            if k == 0:
                e0, e1 = b, c
            elif k == 1:
                e0, e1 = c, a
            else:
                e0, e1 = a, b
            if _orient(xs[e0], ys[e0], xs[e1], ys[e1], px, py) < 0.0:
                prev = t
                t = u
                moved = True
                break
        if not moved:
            return t
    raise RuntimeError("point location did not terminate")


def _insert(st, pi):
    xs = st.xs
    ys = st.ys
    tv = st.tv
    tn = st.tn
    px = xs[pi]
    py = ys[pi]

    code = _locate(tv, tn, xs, ys, px, py, st.last, 4 * st.ntri + 64)
    seed = code if code >= 0 else -code - 1
    for k in range(3):
        v = tv[seed, k]
        if v != INF and xs[v] == px and ys[v] == py:
            raise DegeneracyError(f"duplicate site at index {pi}")
    if code < 0 and not _tri_conflict(tv, xs, ys, seed, px, py):
        raise DegeneracyError(f"site {pi} is collinear with a hull edge")

    # Grow the conflict cavity (depth-first, fixed edge order).
    st.stamp += 1
    stamp = st.stamp
    st.tri_stamp[seed] = stamp
    clist = [seed]
    stack = [seed]
    while stack:
        t = stack.pop()
        for k in range(3):
            u = tn[t, k]
            if st.tri_stamp[u] == stamp:
                continue
            if _tri_conflict(tv, xs, ys, u, px, py):
                st.tri_stamp[u] = stamp
                clist.append(u)
                stack.append(u)

    # Collect boundary edges; retriangulate the cavity as a fan around pi.
    created = []
    last_finite = -1
    for t in clist:
        for k in range(3):
            u = tn[t, k]
            if st.tri_stamp[u] == stamp:
                continue
            if k == 0:
                a, b = tv[t, 1], tv[t, 2]
            elif k == 1:
                a, b = tv[t, 2], tv[t, 0]
            else:
                a, b = tv[t, 0], tv[t, 1]
            if a != INF and b != INF:
                if _orient(xs[a], ys[a], xs[b], ys[b], px, py) == 0.0:
                    raise DegeneracyError(
                        f"site {pi} is collinear with sites {a} and {b}"
                    )
            nt = st.alloc()
            tv = st.tv
            tn = st.tn
            tv[nt, 0] = a
            tv[nt, 1] = b
            tv[nt, 2] = pi
            tn[nt, 2] = u
            for j in range(3):
                if tn[u, j] == t:
                    tn[u, j] = nt
                    break
            st.map_start[a + 1] = nt
            st.start_stamp[a + 1] = stamp
            st.map_end[b + 1] = nt
            st.end_stamp[b + 1] = stamp
            created.append(nt)
            if a != INF and b != INF:
                last_finite = nt

    if last_finite < 0:
        raise RuntimeError("cavity without a finite boundary edge")

    # Wire the new triangles to each other around pi.
    for nt in created:
        a = tv[nt, 0]
        b = tv[nt, 1]
        if st.start_stamp[b + 1] != stamp or st.end_stamp[a + 1] != stamp:
            raise RuntimeError("cavity boundary is not a closed loop")
        tn[nt, 0] = st.map_start[b + 1]
        tn[nt, 1] = st.map_end[a + 1]

    for t in clist:
        st.alive[t] = 0
        st.free.append(t)

    st.last = last_finite


def build(points, order):
    """Delaunay triangulation by incremental insertion.

    ``order`` fixes the internal insertion sequence (under general position
    the result is the unique Delaunay triangulation regardless).  Returns
    compacted arrays (tv, tn, vtri); rows of ``tv`` holding a -1 are the
    infinite triangles closing off the hull.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n < 3:
        raise ValueError("triangulation needs at least 3 sites")
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()

    i0 = int(order[0])
    i1 = -1
    pos = 1
    for pos in range(1, n):
        j = int(order[pos])
        if xs[j] != xs[i0] or ys[j] != ys[i0]:
            i1 = j
            break
    if i1 < 0:
        raise DegeneracyError("all sites coincide")
    i2 = -1
    for pos2 in range(pos + 1, n):
        j = int(order[pos2])
        area = _orient(xs[i0], ys[i0], xs[i1], ys[i1], xs[j], ys[j])
        if area != 0.0:
            i2 = j
            if area < 0.0:
                i0, i1 = i1, i0
            break
    if i2 < 0:
        raise DegeneracyError("all sites are collinear")

    st = _BuildState(xs, ys, n)
    t0 = st.alloc()
    t1 = st.alloc()
    t2 = st.alloc()
    t3 = st.alloc()
    tv = st.tv
    tn = st.tn
    tv[t0, 0] = i0
    tv[t0, 1] = i1
    tv[t0, 2] = i2
    tv[t1, 0] = i1
    tv[t1, 1] = i0
    tv[t1, 2] = INF
    tv[t2, 0] = i2
    tv[t2, 1] = i1
    tv[t2, 2] = INF
    tv[t3, 0] = i0
    tv[t3, 1] = i2
    tv[t3, 2] = INF
    tn[t0, 0] = t2
    tn[t0, 1] = t3
    tn[t0, 2] = t1
    tn[t1, 0] = t3
    tn[t1, 1] = t2
    tn[t1, 2] = t0
    tn[t2, 0] = t1
    tn[t2, 1] = t3
    tn[t2, 2] = t0
    tn[t3, 0] = t2
    tn[t3, 1] = t1
    tn[t3, 2] = t0
    st.last = t0

    for pos3 in range(n):
        j = int(order[pos3])
        if j == i0 or j == i1 or j == i2:
            continue
        _insert(st, j)

    # Compact alive triangles.
    new_id = np.full(st.ntri, -1, dtype=np.int32)
    m = 0
    for t in range(st.ntri):
        if st.alive[t]:
            new_id[t] = m
            m += 1
    out_v = np.empty((m, 3), dtype=np.int32)
    out_n = np.empty((m, 3), dtype=np.int32)
    for t in range(st.ntri):
        if not st.alive[t]:
            continue
        mt = new_id[t]
        for k in range(3):
            out_v[mt, k] = st.tv[t, k]
            out_n[mt, k] = new_id[st.tn[t, k]]

    # Point every vertex at one of its finite triangles (locate hints).
    vtri = np.full(n, -1, dtype=np.int32)
    for t in range(m):
        if out_v[t, 0] != INF and out_v[t, 1] != INF and out_v[t, 2] != INF:
            vtri[out_v[t, 0]] = t
            vtri[out_v[t, 1]] = t
            vtri[out_v[t, 2]] = t
    return out_v, out_n, vtri


class Engine:
    """Query state over a finished triangulation.

    Holds reusable scratch arrays, so an instance must not be shared
    between concurrently running walks; the triangulation itself is never
    mutated.
    """

    def __init__(self, points, tv, tn, vtri, indptr, indices):
        self.points = points
        self.xs = points[:, 0].tolist()
        self.ys = points[:, 1].tolist()
        self.tv = tv
        self.tn = tn
        self.vtri = vtri
        self.indptr = indptr.tolist()
        self.indices = indices.tolist()
        n = points.shape[0]
        self.sub_stamp = [0] * n
        self.seen_stamp = [0] * n
        self.pred = [0] * n
        self.stamp = 0
        self.tri_stamp = np.zeros(tv.shape[0], dtype=np.int64)
        self.tstamp = 0

    # -- point location --------------------------------------------------

    def locate(self, px, py, hint):
        """Containing finite triangle, or ``-t - 1`` if outside the hull."""
        return _locate(
            self.tv, self.tn, self.xs, self.ys, px, py, hint,
            4 * self.tv.shape[0] + 64,
        )

    # -- simulated insertion ---------------------------------------------

    def conflicts(self, px, py, hint):
        """Delaunay neighbours of (px, py) under simulated insertion.

        Returns (code, sites): code 0 with the sorted neighbour ids; code 1
        with None when the point is outside the hull; code 2 with the
        coincident site when the point equals a site exactly.
        """
        code = self.locate(px, py, hint)
        if code < 0:
            return 1, None
        seed = code
        xs = self.xs
        ys = self.ys
        tv = self.tv
        tn = self.tn
        for k in range(3):
            v = tv[seed, k]
            if xs[v] == px and ys[v] == py:
                return 2, np.array([v], dtype=np.int32)

        self.tstamp += 1
        stamp = self.tstamp
        tri_stamp = self.tri_stamp
        tri_stamp[seed] = stamp
        stack = [seed]
        verts = []
        while stack:
            t = stack.pop()
            for k in range(3):
                v = tv[t, k]
                if v != INF:
                    verts.append(v)
            for k in range(3):
                u = tn[t, k]
                if tri_stamp[u] == stamp:
                    continue
                if _tri_conflict(tv, xs, ys, u, px, py):
                    tri_stamp[u] = stamp
                    stack.append(u)
        return 0, np.unique(np.array(verts, dtype=np.int32))

    # -- one walk step -----------------------------------------------------

    def step(self, anchor, qx, qy):
        """Grow one search cone from ``anchor`` toward (qx, qy).

        Returns (is_stopper, vertex, radius, intermediates, chain, accessed).
        On a stopper hit, ``vertex``/``radius`` describe it and ``chain`` is
        the discovery path anchor -> stopper.  Otherwise the aim won the
        extraction: ``vertex`` is the terminal choice among the sub-step set
        under the reversed frame and ``radius`` is NaN.  ``accessed`` counts
        every neighbour examination of the step, with multiplicity.
        """
        xs = self.xs
        ys = self.ys
        indptr = self.indptr
        indices = self.indices
        sub_stamp = self.sub_stamp
        seen_stamp = self.seen_stamp
        pred = self.pred

        zx = xs[anchor]
        zy = ys[anchor]
        ax = qx - zx
        ay = qy - zy
        ll = ax * ax + ay * ay
        if ll == 0.0:
            raise ValueError("step aim coincides with the anchor")
        axis_len = math.sqrt(ll)
        rq = 0.5 * axis_len

        self.stamp += 1
        stamp = self.stamp
        sub_stamp[anchor] = stamp
        accessed = 0
        heap = []
        push = heapq.heappush
        pop = heapq.heappop
        for idx in range(indptr[anchor], indptr[anchor + 1]):
            w = indices[idx]
            accessed += 1
            dx = xs[w] - zx
            dy = ys[w] - zy
            dot = dx * ax + dy * ay
            if dot > 0.0:
                rr = dx * dx + dy * dy
                r = rr * axis_len / (2.0 * dot)
                if seen_stamp[w] != stamp:
                    seen_stamp[w] = stamp
                    pred[w] = anchor
                push(heap, (r, w))

        inters = []
        while True:
            while heap and sub_stamp[heap[0][1]] == stamp:
                pop(heap)
            if not heap or rq <= heap[0][0]:
                break
            r, y = pop(heap)
            dx = xs[y] - zx
            dy = ys[y] - zy
            dot = dx * ax + dy * ay
            rr = dx * dx + dy * dy
            if dot * dot >= _COS2 * rr * ll:
                chain = [y]
                v = y
                while v != anchor:
                    v = pred[v]
                    chain.append(v)
                chain.reverse()
                return (
                    True,
                    y,
                    r,
                    np.array(inters, dtype=np.int32),
                    np.array(chain, dtype=np.int32),
                    accessed,
                )
            sub_stamp[y] = stamp
            inters.append(y)
            for idx in range(indptr[y], indptr[y + 1]):
                w = indices[idx]
                accessed += 1
                if sub_stamp[w] == stamp:
                    continue
                dx = xs[w] - zx
                dy = ys[w] - zy
                dot = dx * ax + dy * ay
                if dot > 0.0:
                    rr = dx * dx + dy * dy
                    r = rr * axis_len / (2.0 * dot)
                    if seen_stamp[w] != stamp:
                        seen_stamp[w] = stamp
                        pred[w] = y
                    push(heap, (r, w))

        # The aim won the extraction: pick the terminal among the sub-step
        # set under the reversed frame (apex at the aim, toward the anchor).
        bax = -ax
        bay = -ay
        best = anchor
        dx = xs[anchor] - qx
        dy = ys[anchor] - qy
        dot = dx * bax + dy * bay
        rr = dx * dx + dy * dy
        best_r = rr * axis_len / (2.0 * dot)
        for s in inters:
            dx = xs[s] - qx
            dy = ys[s] - qy
            dot = dx * bax + dy * bay
            if dot <= 0.0:
                continue
            rr = dx * dx + dy * dy
            r = rr * axis_len / (2.0 * dot)
            if r < best_r or (r == best_r and s < best):
                best = s
                best_r = r
        if best == anchor:
            chain = [anchor]
        else:
            chain = [best]
            v = best
            while v != anchor:
                v = pred[v]
                chain.append(v)
            chain.reverse()
        return (
            False,
            best,
            math.nan,
            np.array(inters, dtype=np.int32),
            np.array(chain, dtype=np.int32),
            accessed,
        )
