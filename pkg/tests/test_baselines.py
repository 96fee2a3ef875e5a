"""Baseline navigation: straight, greedy, compass."""

import math

import numpy as np
import pytest

import conewalk as cw
from conewalk.errors import DegeneracyError

SQUARE = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.1, 0.9)])


def seeded(seed, n):
    rng = np.random.default_rng(seed)
    pts = (rng.random((n, 2)) - 0.5) * 2.0 * math.sqrt(n)
    t = cw.build(pts)
    for _ in range(50):
        q = tuple(pts.mean(axis=0) + (rng.random(2) - 0.5) * 0.5 * math.sqrt(n))
        if t.is_inside_hull(q):
            break
    z = int(np.argmax(np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])))
    return rng, pts, t, z, q


def brute_segment_triangles(t, z, q):
    """All finite triangles whose interior meets segment zq, by clipping."""
    pts = t.points
    zx, zy = pts[z]
    qx, qy = float(q[0]), float(q[1])
    out = []
    for idx, tri in zip(
        np.flatnonzero((t.tri_vertices != -1).all(axis=1)), t.finite_triangles()
    ):
        lo, hi = 0.0, 1.0
        ok = True
        for k in range(3):
            a = tri[k]
            b = tri[(k + 1) % 3]
            # Inside = left of directed edge (a, b) for CCW triangles.
            ex = pts[b, 0] - pts[a, 0]
            ey = pts[b, 1] - pts[a, 1]
            f0 = ex * (zy - pts[a, 1]) - ey * (zx - pts[a, 0])
            f1 = ex * (qy - pts[a, 1]) - ey * (qx - pts[a, 0])
            # f(t) = f0 + t (f1 - f0) >= 0 required.
            if f0 < 0.0 and f1 < 0.0:
                ok = False
                break
            if f0 >= 0.0 and f1 >= 0.0:
                continue
            cut = f0 / (f0 - f1)
            if f0 < 0.0:
                lo = max(lo, cut)
            else:
                hi = min(hi, cut)
        if not ok or hi - lo < 1e-12:
            continue
        mid = 0.5 * (lo + hi)
        mx = zx + mid * (qx - zx)
        my = zy + mid * (qy - zy)
        strict = True
        for k in range(3):
            a = tri[k]
            b = tri[(k + 1) % 3]
            o = (pts[b, 0] - pts[a, 0]) * (my - pts[a, 1]) - (
                pts[b, 1] - pts[a, 1]
            ) * (mx - pts[a, 0])
            if o <= 0.0:
                strict = False
                break
        if strict:
            out.append((lo, int(idx)))
    out.sort()
    return [idx for _, idx in out]


class TestStraightWalk:
    def test_single_triangle_star(self):
        t = cw.build(SQUARE)
        res = cw.straight_walk(t, 0, (0.4, 0.3))
        assert res.algorithm == "straight"
        assert res.hop_count == 1
        assert len(res.vertices_or_triangles) == 1
        assert res.terminated

    def test_two_triangle_crossing(self):
        t = cw.build(SQUARE)
        res = cw.straight_walk(t, 0, (0.8, 0.7))
        assert len(res.vertices_or_triangles) == 2
        assert res.vertices_or_triangles == tuple(
            brute_segment_triangles(t, 0, (0.8, 0.7))
        )

    def test_matches_brute_oracle_on_seeded_instances(self):
        for seed in range(10):
            rng, pts, t, z, q = seeded(70 + seed, 300)
            res = cw.straight_walk(t, z, q)
            assert list(res.vertices_or_triangles) == brute_segment_triangles(
                t, z, q
            )

    def test_triangle_count_sanity_band(self):
        rng, pts, t, z, q = seeded(80, 1000)
        res = cw.straight_walk(t, z, q)
        dist = math.hypot(t.points[z, 0] - q[0], t.points[z, 1] - q[1])
        assert 0.5 * dist <= len(res.vertices_or_triangles) <= 4.0 * dist

    def test_vertex_on_segment_raises(self):
        pts = np.array(
            [(0.0, 0.0), (1.0, 0.0), (2.0, 0.1), (1.0, 1.0), (1.0, -1.0), (3.0, 0.0)]
        )
        t = cw.build(pts)
        with pytest.raises(DegeneracyError):
            cw.straight_walk(t, 0, (2.0, 0.0))


class TestGreedyWalk:
    def test_start_already_nearest(self):
        t = cw.build(SQUARE)
        res = cw.greedy_walk(t, 2, (0.95, 0.95))
        assert res.vertices_or_triangles == (2,)
        assert res.hop_count == 0
        assert res.terminated

    def test_collinear_corridor(self):
        # Sites 0, 1, 2 are exactly collinear: every circle through 0 and 2
        # strictly contains 1, so greedy must hop through the middle site.
        pts = np.array([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 40.0), (1.0, -40.0)])
        t = cw.build(pts)
        res = cw.greedy_walk(t, 0, (1.9, 0.0))
        assert res.vertices_or_triangles == (0, 1, 2)

    def test_reaches_nearest_site(self):
        for seed in range(8):
            rng, pts, t, z, q = seeded(90 + seed, 800)
            res = cw.greedy_walk(t, z, q)
            nearest = int(np.argmin(np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])))
            assert res.vertices_or_triangles[-1] == nearest
            assert res.terminated

    def test_distances_strictly_decrease(self):
        rng, pts, t, z, q = seeded(99, 800)
        res = cw.greedy_walk(t, z, q)
        d = [math.hypot(pts[v, 0] - q[0], pts[v, 1] - q[1])
             for v in res.vertices_or_triangles]
        assert all(a > b for a, b in zip(d, d[1:]))
        assert res.total_length == pytest.approx(
            sum(
                math.hypot(*(pts[b] - pts[a]))
                for a, b in zip(
                    res.vertices_or_triangles[:-1], res.vertices_or_triangles[1:]
                )
            )
        )


class TestCompassWalk:
    def test_neighbour_exactly_toward_aim(self):
        pts = np.array(
            [
                (0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0),
                (1.5, 2.0), (1.5, -2.0),
            ]
        )
        t = cw.build(cw.site_set(pts, jitter=True, jitter_seed=2))
        res = cw.compass_walk(t, 0, (2.9, 0.0))
        # Site 1 sits essentially on the axis: minimal angle.
        assert res.vertices_or_triangles[1] == 1
        assert res.terminated

    def test_symmetric_tie_takes_lower_index(self):
        pts = np.array(
            [
                (0.0, 0.0), (1.0, 0.9), (1.0, -0.9),
                (2.0, 0.0), (2.0, 1.4), (2.0, -1.4), (3.0, 0.0),
            ]
        )
        t = cw.build(pts)
        qn = set(int(v) for v in t.neighbors_of_query((2.9, 0.0)))
        assert 0 not in qn
        # Neighbours 1 and 2 of the start are mirror images: exact angle tie.
        res = cw.compass_walk(t, 0, (2.9, 0.0))
        assert res.vertices_or_triangles[1] == 1

    def test_terminates_on_seeded_instances(self):
        for seed in range(8):
            rng, pts, t, z, q = seeded(110 + seed, 600)
            res = cw.compass_walk(t, z, q)
            assert res.terminated
            qn = set(int(v) for v in t.neighbors_of_query(q))
            assert res.vertices_or_triangles[-1] in qn


class TestAllTerminate:
    def test_hundred_seeds(self):
        # Sizes sweep up to 10^4; termination must never fail on Delaunay.
        for seed in range(100):
            n = [60, 200, 700, 2500, 10_000][seed % 5]
            rng, pts, t, z, q = seeded(130 + seed, n)
            for fn in (cw.straight_walk, cw.greedy_walk, cw.compass_walk):
                try:
                    res = fn(t, z, q)
                except DegeneracyError:
                    continue
                assert res.terminated
