"""Triangulation construction, adjacency, simulated insertion, validation."""

import math

import numpy as np
import pytest

import conewalk as cw
from conewalk.errors import DegeneracyError, HullError

SQUARE = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.1, 0.9)])


def random_sites(rng, n, scale=None):
    scale = scale or math.sqrt(n)
    return (rng.random((n, 2)) - 0.5) * 2.0 * scale


class TestBuild:
    def test_single_triangle(self):
        t = cw.build(np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 1.5)]))
        assert len(t.finite_triangles()) == 1
        for v in range(3):
            assert len(t.neighbors(v)) == 2

    def test_square_picks_delaunay_diagonal(self):
        # Brute-force oracle: the circumdisc of (0,0),(1,0),(1,1) contains
        # (0.1, 0.9) (centre (.5,.5), r^2 = .5, dist^2 = .32), so the only
        # empty-circle diagonal is (1,0)-(0.1,0.9).
        t = cw.build(SQUARE)
        assert len(t.finite_triangles()) == 2
        assert 3 in t.neighbors(1) and 1 in t.neighbors(3)
        assert 2 not in t.neighbors(0)

    def test_collinear_rejected(self):
        with pytest.raises(DegeneracyError):
            cw.build(np.array([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]))

    def test_too_few_rejected(self):
        with pytest.raises(ValueError):
            cw.build(np.array([(0.0, 0.0), (1.0, 0.0)]))

    def test_duplicate_rejected(self):
        with pytest.raises(DegeneracyError):
            cw.build(np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)]))

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        pts = random_sites(rng, 200)
        t1 = cw.build(pts)
        t2 = cw.build(pts)
        assert np.array_equal(t1.tri_vertices, t2.tri_vertices)
        assert np.array_equal(t1.indices, t2.indices)

    def test_near_cocircular_ring(self):
        # Every insertion conflicts with a large cavity, stressing the
        # triangle-array growth path; the result must still validate.
        n = 400
        rng = np.random.default_rng(17)
        ang = np.sort(rng.random(n)) * 2.0 * math.pi
        rad = 1.0 + 1e-7 * rng.standard_normal(n)
        pts = np.column_stack((rad * np.cos(ang), rad * np.sin(ang)))
        t = cw.build(pts)
        assert cw.validate(t)
        hull = int((t.tri_vertices == -1).any(axis=1).sum())
        assert len(t.finite_triangles()) == 2 * n - 2 - hull


class TestNeighbors:
    def test_triangle_neighbors(self):
        t = cw.build(np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 1.5)]))
        assert list(t.neighbors(0)) == [1, 2]

    def test_square_degrees(self):
        t = cw.build(SQUARE)
        assert len(t.neighbors(1)) == 3
        assert len(t.neighbors(3)) == 3
        assert len(t.neighbors(0)) == 2
        assert len(t.neighbors(2)) == 2

    def test_hexagon_centre_degree(self):
        # Slightly irregular hexagon (exact regularity is co-circular).
        angles = np.arange(6) * math.pi / 3.0
        radii = 1.0 + 0.01 * np.arange(6)
        pts = np.column_stack((radii * np.cos(angles), radii * np.sin(angles)))
        pts = np.vstack([pts, (0.0, 0.0)])
        t = cw.build(pts)
        assert len(t.neighbors(6)) == 6
        assert cw.max_degree(t) == 6

    def test_symmetry_and_order(self):
        rng = np.random.default_rng(5)
        t = cw.build(random_sites(rng, 80))
        for v in range(80):
            nb = t.neighbors(v)
            assert list(nb) == sorted(set(int(x) for x in nb))
            for u in nb:
                assert v in t.neighbors(int(u))

    def test_euler_bound(self):
        rng = np.random.default_rng(6)
        n = 150
        t = cw.build(random_sites(rng, n))
        assert t.indices.size <= 2 * (3 * n - 6)

    def test_bad_index(self):
        t = cw.build(SQUARE)
        with pytest.raises(IndexError):
            t.neighbors(7)


class TestValidate:
    def test_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(3, 65))
            t = cw.build(random_sites(rng, n))
            assert cw.validate(t)

    def test_flipped_diagonal_fails(self):
        # Hand-build the non-Delaunay triangulation of the square instance
        # by flipping its diagonal.
        t = cw.build(SQUARE)
        tv = t.tri_vertices.copy()
        finite = np.flatnonzero((tv != -1).all(axis=1))
        assert finite.size == 2
        tv[finite[0]] = (0, 1, 2)
        tv[finite[1]] = (0, 2, 3)
        bad = cw.Triangulation(
            t.site_set, tv, t.tri_neighbors, t.vertex_triangle,
            t.indptr, t.indices, t.kernel,
        )
        assert not cw.validate(bad)

    def test_three_points(self):
        t = cw.build(np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 1.5)]))
        assert cw.validate(t)


class TestNeighborsOfQuery:
    def test_coincident_query_returns_site(self):
        t = cw.build(SQUARE)
        assert list(t.neighbors_of_query((1.0, 1.0))) == [2]

    def test_centroid_of_triangle(self):
        pts = np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 1.5)])
        t = cw.build(pts)
        got = t.neighbors_of_query(pts.mean(axis=0))
        assert list(got) == [0, 1, 2]

    def test_against_rebuild_oracle(self):
        rng = np.random.default_rng(8)
        checked = 0
        for _ in range(25):
            n = int(rng.integers(4, 65))
            pts = random_sites(rng, n)
            t = cw.build(pts)
            for _ in range(4):
                q = pts.mean(axis=0) + (rng.random(2) - 0.5) * math.sqrt(n)
                try:
                    got = t.neighbors_of_query(q)
                except HullError:
                    continue
                t2 = cw.build(np.vstack([pts, q]))
                assert np.array_equal(got, t2.neighbors(n))
                checked += 1
        assert checked >= 40

    def test_outside_hull_raises(self):
        t = cw.build(SQUARE)
        with pytest.raises(HullError):
            t.neighbors_of_query((50.0, 50.0))


class TestMaxDegree:
    def test_single_triangle(self):
        t = cw.build(np.array([(0.0, 0.0), (2.0, 0.0), (1.0, 1.5)]))
        assert cw.max_degree(t) == 2


class TestSiteIO:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(9)
        pts = random_sites(rng, 30)
        path = tmp_path / "sites.txt"
        cw.save_sites(cw.site_set(pts), path)
        loaded = cw.load_sites(path)
        assert np.array_equal(loaded.points, pts)
        # Re-serialization echoes the file byte for byte.
        path2 = tmp_path / "sites2.txt"
        cw.save_sites(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_csv_separator(self, tmp_path):
        path = tmp_path / "sites.csv"
        path.write_text("0.5,1.5\n-2.25, 3.0\n")
        loaded = cw.load_sites(path)
        assert loaded.points.tolist() == [[0.5, 1.5], [-2.25, 3.0]]

    def test_jitter_is_deterministic(self):
        pts = SQUARE
        a = cw.site_set(pts, jitter=True, jitter_seed=4).points
        b = cw.site_set(pts, jitter=True, jitter_seed=4).points
        assert np.array_equal(a, b)
        assert not np.array_equal(a, pts)
        assert np.abs(a - pts).max() < 1e-8
