# cython: language_level=3
# cython: cdivision=True
"""Compiled triangulation and walk kernels.

Typed twin of ``conewalk._kernels_py``: identical algorithms, identical
arithmetic expression order, identical tie rules.  Built with
-ffp-contract=off so the two backends return bit-identical results; the
backend equivalence tests assert exactly that.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.math cimport NAN, sqrt

from .errors import DegeneracyError

cnp.import_array()

IS_COMPILED = True

DEF INF = -1

cdef double COS2 = (2.0 + sqrt(2.0)) / 4.0


cdef inline double _orient(double ax, double ay, double bx, double by,
                           double cx, double cy) noexcept nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


cdef inline double _incircle(double ax, double ay, double bx, double by,
                             double cx, double cy, double dx, double dy) noexcept nogil:
    cdef double adx = ax - dx
    cdef double ady = ay - dy
    cdef double bdx = bx - dx
    cdef double bdy = by - dy
    cdef double cdx = cx - dx
    cdef double cdy = cy - dy
    cdef double alift = adx * adx + ady * ady
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double clift = cdx * cdx + cdy * cdy
    return (alift * (bdx * cdy - cdx * bdy)
            + blift * (cdx * ady - adx * cdy)
            + clift * (adx * bdy - bdx * ady))


@cython.boundscheck(False)
@cython.wraparound(False)
cdef bint _tri_conflict(int[:, ::1] tv, double[::1] xs, double[::1] ys,
                        long t, double px, double py) noexcept nogil:
    cdef int a = tv[t, 0]
    cdef int b = tv[t, 1]
    cdef int c = tv[t, 2]
    if c == INF:
        return _orient(xs[a], ys[a], xs[b], ys[b], px, py) > 0.0
    if a == INF:
        return _orient(xs[b], ys[b], xs[c], ys[c], px, py) > 0.0
    if b == INF:
        return _orient(xs[c], ys[c], xs[a], ys[a], px, py) > 0.0
    return _incircle(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], px, py) > 0.0


@cython.boundscheck(False)
@cython.wraparound(False)
cdef long _locate(int[:, ::1] tv, int[:, ::1] tn, double[::1] xs, double[::1] ys,
                  double px, double py, long hint, long cap) except? -9_000_000_000_000_000_000:
    """Walk toward (px, py); containing finite triangle or -t-1 outside."""
    cdef long t = hint
    cdef long prev = -1
    cdef long u, it
    cdef int a, b, c, k, e0, e1
    cdef bint moved
    for k in range(3):
        if tv[t, k] == INF:
            t = tn[t, k]
            break
    for it in range(cap):
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
                e0 = b
                e1 = c
            elif k == 1:
                e0 = c
                e1 = a
            else:
                e0 = a
                e1 = b
            if _orient(xs[e0], ys[e0], xs[e1], ys[e1], px, py) < 0.0:
                prev = t
                t = u
                moved = True
                break
        if not moved:
            return t
    raise RuntimeError("point location did not terminate")


cdef class _BuildState:
    cdef double[::1] xs
    cdef double[::1] ys
    cdef object tv_arr, tn_arr, alive_arr, stamp_arr
    cdef int[:, ::1] tv
    cdef int[:, ::1] tn
    cdef unsigned char[::1] alive
    cdef long long[::1] tri_stamp
    cdef int[::1] map_start
    cdef int[::1] map_end
    cdef long long[::1] start_stamp
    cdef long long[::1] end_stamp
    cdef object map_start_arr, map_end_arr, sstamp_arr, estamp_arr
    cdef long ntri, last
    cdef long long stamp
    cdef list free

    def __cinit__(self, double[::1] xs, double[::1] ys, long n):
        cdef long cap = 2 * n + 16
        self.xs = xs
        self.ys = ys
        self.tv_arr = np.empty((cap, 3), dtype=np.int32)
        self.tn_arr = np.empty((cap, 3), dtype=np.int32)
        self.alive_arr = np.zeros(cap, dtype=np.uint8)
        self.stamp_arr = np.zeros(cap, dtype=np.int64)
        self.tv = self.tv_arr
        self.tn = self.tn_arr
        self.alive = self.alive_arr
        self.tri_stamp = self.stamp_arr
        self.map_start_arr = np.zeros(n + 1, dtype=np.int32)
        self.map_end_arr = np.zeros(n + 1, dtype=np.int32)
        self.sstamp_arr = np.zeros(n + 1, dtype=np.int64)
        self.estamp_arr = np.zeros(n + 1, dtype=np.int64)
        self.map_start = self.map_start_arr
        self.map_end = self.map_end_arr
        self.start_stamp = self.sstamp_arr
        self.end_stamp = self.estamp_arr
        self.ntri = 0
        self.stamp = 0
        self.last = 0
        self.free = []

    cdef long alloc(self):
        cdef long t, cap
        if self.free:
            t = self.free.pop()
        else:
            t = self.ntri
            if t >= self.tv.shape[0]:
                cap = 2 * self.tv.shape[0]
                self.tv_arr = np.resize(self.tv_arr, (cap, 3))
                self.tn_arr = np.resize(self.tn_arr, (cap, 3))
                alive2 = np.zeros(cap, dtype=np.uint8)
                alive2[: self.ntri] = self.alive_arr[: self.ntri]
                self.alive_arr = alive2
                stamp2 = np.zeros(cap, dtype=np.int64)
                stamp2[: self.ntri] = self.stamp_arr[: self.ntri]
                self.stamp_arr = stamp2
                self.tv = self.tv_arr
                self.tn = self.tn_arr
                self.alive = self.alive_arr
                self.tri_stamp = self.stamp_arr
            self.ntri = t + 1
        self.alive[t] = 1
        return t


@cython.boundscheck(False)
@cython.wraparound(False)
cdef void _insert(_BuildState st, long pi) except *:
    cdef double[::1] xs = st.xs
    cdef double[::1] ys = st.ys
    cdef double px = xs[pi]
    cdef double py = ys[pi]
    cdef long code, seed, t, u, nt, j
    cdef int k, v, a, b
    cdef long long stamp
    cdef list clist, stack, created
    cdef long last_finite

    code = _locate(st.tv, st.tn, xs, ys, px, py, st.last, 4 * st.ntri + 64)
    seed = code if code >= 0 else -code - 1
    for k in range(3):
        v = st.tv[seed, k]
        if v != INF and xs[v] == px and ys[v] == py:
            raise DegeneracyError(f"duplicate site at index {pi}")
    if code < 0 and not _tri_conflict(st.tv, xs, ys, seed, px, py):
        raise DegeneracyError(f"site {pi} is collinear with a hull edge")

    st.stamp += 1
    stamp = st.stamp
    st.tri_stamp[seed] = stamp
    clist = [seed]
    stack = [seed]
    while stack:
        t = stack.pop()
        for k in range(3):
            u = st.tn[t, k]
            if st.tri_stamp[u] == stamp:
                continue
            if _tri_conflict(st.tv, xs, ys, u, px, py):
                st.tri_stamp[u] = stamp
                clist.append(u)
                stack.append(u)

    created = []
    last_finite = -1
    for t in clist:
        for k in range(3):
            u = st.tn[t, k]
            if st.tri_stamp[u] == stamp:
                continue
            if k == 0:
                a = st.tv[t, 1]
                b = st.tv[t, 2]
            elif k == 1:
                a = st.tv[t, 2]
                b = st.tv[t, 0]
            else:
                a = st.tv[t, 0]
                b = st.tv[t, 1]
            if a != INF and b != INF:
                if _orient(xs[a], ys[a], xs[b], ys[b], px, py) == 0.0:
                    raise DegeneracyError(
                        f"site {pi} is collinear with sites {a} and {b}"
                    )
            nt = st.alloc()
            st.tv[nt, 0] = a
            st.tv[nt, 1] = b
            st.tv[nt, 2] = <int> pi
            st.tn[nt, 2] = <int> u
            for j in range(3):
                if st.tn[u, j] == t:
                    st.tn[u, j] = <int> nt
                    break
            st.map_start[a + 1] = <int> nt
            st.start_stamp[a + 1] = stamp
            st.map_end[b + 1] = <int> nt
            st.end_stamp[b + 1] = stamp
            created.append(nt)
            if a != INF and b != INF:
                last_finite = nt

    if last_finite < 0:
        raise RuntimeError("cavity without a finite boundary edge")

    for nt in created:
        a = st.tv[nt, 0]
        b = st.tv[nt, 1]
        if st.start_stamp[b + 1] != stamp or st.end_stamp[a + 1] != stamp:
            raise RuntimeError("cavity boundary is not a closed loop")
        st.tn[nt, 0] = st.map_start[b + 1]
        st.tn[nt, 1] = st.map_end[a + 1]

    for t in clist:
        st.alive[t] = 0
        st.free.append(t)

    st.last = last_finite


@cython.boundscheck(False)
@cython.wraparound(False)
def build(points, order):
    """Delaunay triangulation by incremental insertion (compiled twin)."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef long n = pts.shape[0]
    if n < 3:
        raise ValueError("triangulation needs at least 3 sites")
    xs_arr = np.ascontiguousarray(pts[:, 0])
    ys_arr = np.ascontiguousarray(pts[:, 1])
    cdef double[::1] xs = xs_arr
    cdef double[::1] ys = ys_arr
    cdef int[::1] ins = np.ascontiguousarray(order, dtype=np.int32)

    cdef long i0 = ins[0]
    cdef long i1 = -1
    cdef long i2 = -1
    cdef long pos = 1
    cdef long pos2, j
    cdef double area
    for pos in range(1, n):
        j = ins[pos]
        if xs[j] != xs[i0] or ys[j] != ys[i0]:
            i1 = j
            break
    if i1 < 0:
        raise DegeneracyError("all sites coincide")
    for pos2 in range(pos + 1, n):
        j = ins[pos2]
        area = _orient(xs[i0], ys[i0], xs[i1], ys[i1], xs[j], ys[j])
        if area != 0.0:
            i2 = j
            if area < 0.0:
                i0, i1 = i1, i0
            break
    if i2 < 0:
        raise DegeneracyError("all sites are collinear")

    cdef _BuildState st = _BuildState(xs, ys, n)
    cdef long t0 = st.alloc()
    cdef long t1 = st.alloc()
    cdef long t2 = st.alloc()
    cdef long t3 = st.alloc()
    st.tv[t0, 0] = <int> i0
    st.tv[t0, 1] = <int> i1
    st.tv[t0, 2] = <int> i2
    st.tv[t1, 0] = <int> i1
    st.tv[t1, 1] = <int> i0
    st.tv[t1, 2] = INF
    st.tv[t2, 0] = <int> i2
    st.tv[t2, 1] = <int> i1
    st.tv[t2, 2] = INF
    st.tv[t3, 0] = <int> i0
    st.tv[t3, 1] = <int> i2
    st.tv[t3, 2] = INF
    st.tn[t0, 0] = <int> t2
    st.tn[t0, 1] = <int> t3
    st.tn[t0, 2] = <int> t1
    st.tn[t1, 0] = <int> t3
    st.tn[t1, 1] = <int> t2
    st.tn[t1, 2] = <int> t0
    st.tn[t2, 0] = <int> t1
    st.tn[t2, 1] = <int> t3
    st.tn[t2, 2] = <int> t0
    st.tn[t3, 0] = <int> t2
    st.tn[t3, 1] = <int> t1
    st.tn[t3, 2] = <int> t0
    st.last = t0

    cdef long pos3
    for pos3 in range(n):
        j = ins[pos3]
        if j == i0 or j == i1 or j == i2:
            continue
        _insert(st, j)

    # Compact alive triangles.
    cdef long m = 0
    cdef long t
    new_id_arr = np.full(st.ntri, -1, dtype=np.int32)
    cdef int[::1] new_id = new_id_arr
    for t in range(st.ntri):
        if st.alive[t]:
            new_id[t] = <int> m
            m += 1
    out_v_arr = np.empty((m, 3), dtype=np.int32)
    out_n_arr = np.empty((m, 3), dtype=np.int32)
    cdef int[:, ::1] out_v = out_v_arr
    cdef int[:, ::1] out_n = out_n_arr
    cdef long mt
    cdef int k2
    for t in range(st.ntri):
        if not st.alive[t]:
            continue
        mt = new_id[t]
        for k2 in range(3):
            out_v[mt, k2] = st.tv[t, k2]
            out_n[mt, k2] = new_id[st.tn[t, k2]]

    vtri_arr = np.full(n, -1, dtype=np.int32)
    cdef int[::1] vtri = vtri_arr
    for t in range(m):
        if out_v[t, 0] != INF and out_v[t, 1] != INF and out_v[t, 2] != INF:
            vtri[out_v[t, 0]] = <int> t
            vtri[out_v[t, 1]] = <int> t
            vtri[out_v[t, 2]] = <int> t
    return out_v_arr, out_n_arr, vtri_arr


cdef class Engine:
    """Query state over a finished triangulation (compiled twin).

    Scratch arrays are reused across calls; do not share one instance
    between concurrently running walks.
    """

    cdef object pts_arr, xs_arr, ys_arr, tv_arr, tn_arr, vtri_arr
    cdef object indptr_arr, indices_arr
    cdef double[::1] xs
    cdef double[::1] ys
    cdef int[:, ::1] tv
    cdef int[:, ::1] tn
    cdef int[::1] vtri
    cdef long long[::1] indptr
    cdef int[::1] indices
    cdef long long[::1] sub_stamp
    cdef long long[::1] seen_stamp
    cdef long long[::1] tri_stamp
    cdef int[::1] pred
    cdef object sub_arr, seen_arr, tstamp_arr, pred_arr
    cdef long long stamp, tstamp
    # binary heap on (radius, vertex), lexicographic
    cdef double* heap_r
    cdef int* heap_v
    cdef long heap_n, heap_cap
    cdef object heap_r_arr, heap_v_arr
    # growable buffers for intermediates / chains / conflict search
    cdef object ibuf_arr, cbuf_arr, stack_arr, verts_arr
    cdef int[::1] ibuf
    cdef int[::1] cbuf
    cdef int[::1] stack
    cdef int[::1] verts

    def __cinit__(self, points, tv, tn, vtri, indptr, indices):
        self.pts_arr = points
        self.xs_arr = np.ascontiguousarray(points[:, 0])
        self.ys_arr = np.ascontiguousarray(points[:, 1])
        self.xs = self.xs_arr
        self.ys = self.ys_arr
        self.tv_arr = tv
        self.tn_arr = tn
        self.vtri_arr = vtri
        self.tv = tv
        self.tn = tn
        self.vtri = vtri
        self.indptr_arr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices_arr = np.ascontiguousarray(indices, dtype=np.int32)
        self.indptr = self.indptr_arr
        self.indices = self.indices_arr
        cdef long n = points.shape[0]
        self.sub_arr = np.zeros(n, dtype=np.int64)
        self.seen_arr = np.zeros(n, dtype=np.int64)
        self.pred_arr = np.zeros(n, dtype=np.int32)
        self.tstamp_arr = np.zeros(tv.shape[0], dtype=np.int64)
        self.sub_stamp = self.sub_arr
        self.seen_stamp = self.seen_arr
        self.pred = self.pred_arr
        self.tri_stamp = self.tstamp_arr
        self.stamp = 0
        self.tstamp = 0
        self.heap_cap = 1024
        self.heap_r_arr = np.empty(self.heap_cap, dtype=np.float64)
        self.heap_v_arr = np.empty(self.heap_cap, dtype=np.int32)
        self.heap_r = <double*> cnp.PyArray_DATA(self.heap_r_arr)
        self.heap_v = <int*> cnp.PyArray_DATA(self.heap_v_arr)
        self.heap_n = 0
        self.ibuf_arr = np.empty(1024, dtype=np.int32)
        self.cbuf_arr = np.empty(1024, dtype=np.int32)
        self.stack_arr = np.empty(1024, dtype=np.int32)
        self.verts_arr = np.empty(1024, dtype=np.int32)
        self.ibuf = self.ibuf_arr
        self.cbuf = self.cbuf_arr
        self.stack = self.stack_arr
        self.verts = self.verts_arr

    cdef void _heap_grow(self):
        self.heap_cap *= 2
        hr = np.empty(self.heap_cap, dtype=np.float64)
        hv = np.empty(self.heap_cap, dtype=np.int32)
        hr[: self.heap_n] = self.heap_r_arr[: self.heap_n]
        hv[: self.heap_n] = self.heap_v_arr[: self.heap_n]
        self.heap_r_arr = hr
        self.heap_v_arr = hv
        self.heap_r = <double*> cnp.PyArray_DATA(self.heap_r_arr)
        self.heap_v = <int*> cnp.PyArray_DATA(self.heap_v_arr)

    @cython.boundscheck(False)
    cdef inline void _heap_push(self, double r, int v):
        if self.heap_n >= self.heap_cap:
            self._heap_grow()
        cdef long i = self.heap_n
        cdef long parent
        self.heap_n += 1
        while i > 0:
            parent = (i - 1) >> 1
            if (r < self.heap_r[parent]
                    or (r == self.heap_r[parent] and v < self.heap_v[parent])):
                self.heap_r[i] = self.heap_r[parent]
                self.heap_v[i] = self.heap_v[parent]
                i = parent
            else:
                break
        self.heap_r[i] = r
        self.heap_v[i] = v

    @cython.boundscheck(False)
    cdef inline void _heap_pop(self):
        cdef double r = self.heap_r[self.heap_n - 1]
        cdef int v = self.heap_v[self.heap_n - 1]
        self.heap_n -= 1
        if self.heap_n == 0:
            return
        cdef long i = 0
        cdef long child
        while True:
            child = 2 * i + 1
            if child >= self.heap_n:
                break
            if child + 1 < self.heap_n:
                if (self.heap_r[child + 1] < self.heap_r[child]
                        or (self.heap_r[child + 1] == self.heap_r[child]
                            and self.heap_v[child + 1] < self.heap_v[child])):
                    child += 1
            if (self.heap_r[child] < r
                    or (self.heap_r[child] == r and self.heap_v[child] < v)):
                self.heap_r[i] = self.heap_r[child]
                self.heap_v[i] = self.heap_v[child]
                i = child
            else:
                break
        self.heap_r[i] = r
        self.heap_v[i] = v

    # -- point location --------------------------------------------------

    def locate(self, double px, double py, long hint):
        """Containing finite triangle, or ``-t - 1`` if outside the hull."""
        return _locate(self.tv, self.tn, self.xs, self.ys, px, py, hint,
                       4 * self.tv.shape[0] + 64)

    # -- simulated insertion ---------------------------------------------

    @cython.boundscheck(False)
    @cython.wraparound(False)
    def conflicts(self, double px, double py, long hint):
        """(code, sites): 0 sorted neighbour ids, 1 outside hull, 2 coincident."""
        cdef long code = _locate(self.tv, self.tn, self.xs, self.ys, px, py,
                                 hint, 4 * self.tv.shape[0] + 64)
        if code < 0:
            return 1, None
        cdef long seed = code
        cdef int k, v
        for k in range(3):
            v = self.tv[seed, k]
            if self.xs[v] == px and self.ys[v] == py:
                return 2, np.array([v], dtype=np.int32)

        self.tstamp += 1
        cdef long long stamp = self.tstamp
        self.tri_stamp[seed] = stamp
        cdef long nstack = 0
        cdef long nverts = 0
        cdef long t, u
        if self.stack.shape[0] < 64:
            self._grow_stack(64)
        self.stack[0] = <int> seed
        nstack = 1
        while nstack:
            nstack -= 1
            t = self.stack[nstack]
            for k in range(3):
                v = self.tv[t, k]
                if v != INF:
                    if nverts >= self.verts.shape[0]:
                        self._grow_verts(nverts + 1)
                    self.verts[nverts] = v
                    nverts += 1
            for k in range(3):
                u = self.tn[t, k]
                if self.tri_stamp[u] == stamp:
                    continue
                if _tri_conflict(self.tv, self.xs, self.ys, u, px, py):
                    self.tri_stamp[u] = stamp
                    if nstack >= self.stack.shape[0]:
                        self._grow_stack(nstack + 1)
                    self.stack[nstack] = <int> u
                    nstack += 1
        return 0, np.unique(self.verts_arr[:nverts])

    cdef void _grow_stack(self, long need):
        cdef long cap = max(2 * self.stack.shape[0], need)
        arr = np.empty(cap, dtype=np.int32)
        arr[: self.stack.shape[0]] = self.stack_arr
        self.stack_arr = arr
        self.stack = arr

    cdef void _grow_verts(self, long need):
        cdef long cap = max(2 * self.verts.shape[0], need)
        arr = np.empty(cap, dtype=np.int32)
        arr[: self.verts.shape[0]] = self.verts_arr
        self.verts_arr = arr
        self.verts = arr

    cdef void _grow_ibuf(self, long need):
        cdef long cap = max(2 * self.ibuf.shape[0], need)
        arr = np.empty(cap, dtype=np.int32)
        arr[: self.ibuf.shape[0]] = self.ibuf_arr
        self.ibuf_arr = arr
        self.ibuf = arr

    cdef void _grow_cbuf(self, long need):
        cdef long cap = max(2 * self.cbuf.shape[0], need)
        arr = np.empty(cap, dtype=np.int32)
        arr[: self.cbuf.shape[0]] = self.cbuf_arr
        self.cbuf_arr = arr
        self.cbuf = arr

    # -- one walk step -----------------------------------------------------

    @cython.boundscheck(False)
    @cython.wraparound(False)
    def step(self, long anchor, double qx, double qy):
        """One search-cone growth; see the pure twin for the contract."""
        cdef double[::1] xs = self.xs
        cdef double[::1] ys = self.ys
        cdef double zx = xs[anchor]
        cdef double zy = ys[anchor]
        cdef double ax = qx - zx
        cdef double ay = qy - zy
        cdef double ll = ax * ax + ay * ay
        if ll == 0.0:
            raise ValueError("step aim coincides with the anchor")
        cdef double axis_len = sqrt(ll)
        cdef double rq = 0.5 * axis_len

        self.stamp += 1
        cdef long long stamp = self.stamp
        self.sub_stamp[anchor] = stamp
        cdef long accessed = 0
        self.heap_n = 0
        cdef long long idx
        cdef int w
        cdef double dx, dy, dot, rr, r, r2
        for idx in range(self.indptr[anchor], self.indptr[anchor + 1]):
            w = self.indices[idx]
            accessed += 1
            dx = xs[w] - zx
            dy = ys[w] - zy
            dot = dx * ax + dy * ay
            if dot > 0.0:
                rr = dx * dx + dy * dy
                r = rr * axis_len / (2.0 * dot)
                if self.seen_stamp[w] != stamp:
                    self.seen_stamp[w] = stamp
                    self.pred[w] = <int> anchor
                self._heap_push(r, w)

        cdef long ninter = 0
        cdef int y
        cdef long nchain, v
        cdef bint found = False
        while True:
            while self.heap_n and self.sub_stamp[self.heap_v[0]] == stamp:
                self._heap_pop()
            if self.heap_n == 0 or rq <= self.heap_r[0]:
                break
            r = self.heap_r[0]
            y = self.heap_v[0]
            self._heap_pop()
            dx = xs[y] - zx
            dy = ys[y] - zy
            dot = dx * ax + dy * ay
            rr = dx * dx + dy * dy
            if dot * dot >= COS2 * rr * ll:
                found = True
                break
            self.sub_stamp[y] = stamp
            if ninter >= self.ibuf.shape[0]:
                self._grow_ibuf(ninter + 1)
            self.ibuf[ninter] = y
            ninter += 1
            for idx in range(self.indptr[y], self.indptr[y + 1]):
                w = self.indices[idx]
                accessed += 1
                if self.sub_stamp[w] == stamp:
                    continue
                dx = xs[w] - zx
                dy = ys[w] - zy
                dot = dx * ax + dy * ay
                if dot > 0.0:
                    rr = dx * dx + dy * dy
                    r2 = rr * axis_len / (2.0 * dot)
                    if self.seen_stamp[w] != stamp:
                        self.seen_stamp[w] = stamp
                        self.pred[w] = y
                    self._heap_push(r2, w)

        if found:
            # Backtrace the discovery chain from the stopper.
            nchain = 1
            if self.cbuf.shape[0] < 1:
                self._grow_cbuf(1)
            self.cbuf[0] = y
            v = y
            while v != anchor:
                v = self.pred[v]
                if nchain >= self.cbuf.shape[0]:
                    self._grow_cbuf(nchain + 1)
                self.cbuf[nchain] = <int> v
                nchain += 1
            chain = self.cbuf_arr[:nchain][::-1].copy()
            return (True, int(y), float(r), self.ibuf_arr[:ninter].copy(),
                    chain, int(accessed))

        # The aim won: terminal among {anchor} + intermediates, reversed frame.
        cdef double bax = -ax
        cdef double bay = -ay
        cdef long best = anchor
        cdef double best_r
        cdef long s
        cdef long ii
        dx = xs[anchor] - qx
        dy = ys[anchor] - qy
        dot = dx * bax + dy * bay
        rr = dx * dx + dy * dy
        best_r = rr * axis_len / (2.0 * dot)
        for ii in range(ninter):
            s = self.ibuf[ii]
            dx = xs[s] - qx
            dy = ys[s] - qy
            dot = dx * bax + dy * bay
            if dot <= 0.0:
                continue
            rr = dx * dx + dy * dy
            r2 = rr * axis_len / (2.0 * dot)
            if r2 < best_r or (r2 == best_r and s < best):
                best = s
                best_r = r2
        if best == anchor:
            chain = np.array([anchor], dtype=np.int32)
        else:
            nchain = 1
            self.cbuf[0] = <int> best
            v = best
            while v != anchor:
                v = self.pred[v]
                if nchain >= self.cbuf.shape[0]:
                    self._grow_cbuf(nchain + 1)
                self.cbuf[nchain] = <int> v
                nchain += 1
            chain = self.cbuf_arr[:nchain][::-1].copy()
        return (False, int(best), NAN, self.ibuf_arr[:ninter].copy(),
                chain, int(accessed))
