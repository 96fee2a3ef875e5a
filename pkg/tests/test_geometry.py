"""Cone/disc predicates and the closed-form laws."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conewalk.geometry import (
    HALF_ANGLE,
    UNREACHABLE,
    ConeFrame,
    angle_cdf,
    angle_pdf,
    in_cone,
    min_disc_radius,
    radius_survival,
    theory_constants,
)

FRAME = ConeFrame((0.0, 0.0), (1.0, 0.0))

coord = st.floats(-50.0, 50.0, allow_nan=False, allow_infinity=False)


def brute_min_radius(frame, p, r_hi=200.0, steps=400_000):
    """Grow r in small increments until the disc contains p."""
    (zx, zy), (qx, qy) = frame.apex, frame.aim
    norm = math.hypot(qx - zx, qy - zy)
    ux, uy = (qx - zx) / norm, (qy - zy) / norm
    for i in range(steps + 1):
        r = r_hi * i / steps
        cx, cy = zx + r * ux, zy + r * uy
        if math.hypot(p[0] - cx, p[1] - cy) <= r:
            return r
    return math.inf


class TestMinDiscRadius:
    def test_collinear_point(self):
        assert min_disc_radius(FRAME, (2.0, 0.0)) == 1.0

    def test_diagonal_point(self):
        # Frozen from the incremental-growth oracle (and |zp|^2 / (2 proj)).
        r = min_disc_radius(FRAME, (1.0, 1.0))
        assert r == pytest.approx(1.0, abs=1e-12)
        assert brute_min_radius(FRAME, (1.0, 1.0), r_hi=2.0, steps=40_000) == (
            pytest.approx(1.0, abs=1e-3)
        )

    def test_perpendicular_point_unreachable(self):
        assert min_disc_radius(FRAME, (0.0, 1.0)) == UNREACHABLE

    def test_behind_apex_unreachable(self):
        assert min_disc_radius(FRAME, (-0.5, 0.2)) == UNREACHABLE

    def test_degenerate_frame_rejected(self):
        with pytest.raises(ValueError):
            ConeFrame((1.0, 2.0), (1.0, 2.0))

    def test_nonfinite_point_rejected(self):
        with pytest.raises(ValueError):
            min_disc_radius(FRAME, (math.nan, 0.0))

    @given(coord, coord, coord, coord, coord, coord)
    @settings(max_examples=300)
    def test_point_on_boundary_circle(self, zx, zy, qx, qy, px, py):
        if (zx, zy) == (qx, qy):
            return
        frame = ConeFrame((zx, zy), (qx, qy))
        r = min_disc_radius(frame, (px, py))
        pp = math.hypot(px - zx, py - zy)
        if r == UNREACHABLE or r == 0.0 or r > 1e3 * pp:
            return  # near-zero projection: circle arithmetic degenerates
        if pp < 1e-6:
            return  # the apex sits on the boundary of every disc
        norm = math.hypot(qx - zx, qy - zy)
        cx = zx + r * (qx - zx) / norm
        cy = zy + r * (qy - zy) / norm
        dist = math.hypot(px - cx, py - cy)
        assert dist == pytest.approx(r, rel=1e-9)
        # Strictly outside any slightly smaller disc.
        r2 = r * (1.0 - 1e-6)
        cx2 = zx + r2 * (qx - zx) / norm
        cy2 = zy + r2 * (qy - zy) / norm
        assert math.hypot(px - cx2, py - cy2) > r2


class TestInCone:
    def test_on_axis(self):
        assert in_cone(FRAME, (5.0, 0.0))

    def test_forty_five_degrees_outside(self):
        assert not in_cone(FRAME, (1.0, 1.0))

    def test_boundary_ray_included(self):
        # Closed cone: the ray at exactly half angle belongs.
        assert in_cone(FRAME, (math.cos(HALF_ANGLE), math.sin(HALF_ANGLE)))

    def test_apex_rejected(self):
        with pytest.raises(ValueError):
            in_cone(FRAME, (0.0, 0.0))

    def test_membership_characterisation_against_sampling_oracle(self):
        # in_cone + finite min radius characterise membership in the grown
        # cone region for every radius above the minimum.
        rng = np.random.default_rng(42)
        for _ in range(10_000):
            zx, zy, qx, qy, px, py = rng.uniform(-10, 10, 6)
            if (zx, zy) == (qx, qy) or (px, py) == (zx, zy):
                continue
            frame = ConeFrame((zx, zy), (qx, qy))
            r = min_disc_radius(frame, (px, py))
            member = in_cone(frame, (px, py)) and r != UNREACHABLE
            # The oracle tests angle and disc containment directly.
            ang = abs(
                math.atan2(py - zy, px - zx) - math.atan2(qy - zy, qx - zx)
            )
            ang = min(ang, 2 * math.pi - ang)
            oracle = ang <= HALF_ANGLE + 1e-12 and r != UNREACHABLE
            if abs(ang - HALF_ANGLE) < 1e-9:
                continue  # boundary: float-sensitive either way
            assert member == oracle


class TestRigidMotionInvariance:
    @given(coord, coord, coord, coord, coord, coord,
           st.floats(-math.pi, math.pi), coord, coord)
    @settings(max_examples=300)
    def test_invariance(self, zx, zy, qx, qy, px, py, theta, tx, ty):
        # Restrict to well-conditioned configurations: separations and the
        # axis projection must not vanish, or double rounding dominates.
        ll = math.hypot(qx - zx, qy - zy)
        pp = math.hypot(px - zx, py - zy)
        if ll < 1e-2 or pp < 1e-2:
            return
        dot = (px - zx) * (qx - zx) + (py - zy) * (qy - zy)
        if abs(dot) < 1e-2 * ll * pp:
            return
        c, s = math.cos(theta), math.sin(theta)

        def move(x, y):
            return (c * x - s * y + tx, s * x + c * y + ty)

        f1 = ConeFrame((zx, zy), (qx, qy))
        f2 = ConeFrame(move(zx, zy), move(qx, qy))
        r1 = min_disc_radius(f1, (px, py))
        r2 = min_disc_radius(f2, move(px, py))
        if r1 == UNREACHABLE or r2 == UNREACHABLE:
            assert r1 == r2
            return
        assert r2 == pytest.approx(r1, rel=1e-9)
        # Cone membership flips only within rounding of the boundary.
        m1 = in_cone(f1, (px, py))
        m2 = in_cone(f2, move(px, py))
        if m1 != m2:
            ang = abs(
                math.atan2(py - zy, px - zx) - math.atan2(qy - zy, qx - zx)
            )
            ang = min(ang, 2 * math.pi - ang)
            assert abs(ang - HALF_ANGLE) < 1e-6


class TestAngleLaw:
    def test_endpoints(self):
        assert angle_cdf(0.0) == 0.0
        assert angle_cdf(HALF_ANGLE) == 1.0

    def test_midpoint_value(self):
        # Frozen from direct evaluation of the closed form, cross-checked
        # below by quadrature of the density.
        assert angle_cdf(math.pi / 16) == pytest.approx(0.5195175512667635, abs=1e-12)

    def test_cdf_matches_density_quadrature(self):
        xs = np.linspace(0.0, HALF_ANGLE, 20_001)
        dens = np.array([angle_pdf(x) for x in xs])
        total = np.trapezoid(dens, xs)
        assert total == pytest.approx(1.0, abs=1e-6)
        half = np.trapezoid(dens[: 10_001], xs[: 10_001])
        assert half == pytest.approx(angle_cdf(math.pi / 16), abs=1e-6)

    def test_monotone(self):
        xs = np.linspace(0.0, HALF_ANGLE, 1000)
        vals = [angle_cdf(x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_numeric_derivative_matches_density(self):
        h = 1e-7
        for x in np.linspace(2 * h, HALF_ANGLE - 2 * h, 61):
            slope = (angle_cdf(x + h) - angle_cdf(x - h)) / (2 * h)
            assert slope == pytest.approx(angle_pdf(x), rel=1e-5)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            angle_cdf(-1e-9)
        with pytest.raises(ValueError):
            angle_cdf(HALF_ANGLE + 1e-9)


class TestRadiusLaw:
    def test_at_zero(self):
        assert radius_survival(0.0) == 1.0

    def test_at_one(self):
        A = math.sqrt(2) / 2 + math.pi / 4
        assert radius_survival(1.0) == pytest.approx(math.exp(-A), rel=1e-12)
        assert radius_survival(1.0) == pytest.approx(0.22481, abs=1e-5)

    def test_median_inverts(self):
        A = math.sqrt(2) / 2 + math.pi / 4
        median = math.sqrt(math.log(2.0) / A)
        assert median == pytest.approx(0.68148, abs=1e-5)
        assert radius_survival(median) == pytest.approx(0.5, rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            radius_survival(-0.1)


class TestTheoryConstants:
    def test_cone_area(self):
        th = theory_constants()
        assert th.cone_area_A == math.sqrt(2) / 2 + math.pi / 4
        assert th.cone_area_A == pytest.approx(1.49250494458, abs=1e-10)

    def test_expected_radius(self):
        th = theory_constants()
        want = math.sqrt(math.pi / (2 * math.sqrt(2) + math.pi))
        assert th.expected_radius == want
        assert th.expected_radius == pytest.approx(0.72542, abs=5e-6)

    def test_expected_intermediates(self):
        th = theory_constants()
        A = th.cone_area_A
        assert th.expected_intermediates == pytest.approx((math.pi - A) / A, rel=1e-12)
        assert th.expected_intermediates == pytest.approx(1.1049, abs=5e-5)

    def test_path_length_const(self):
        th = theory_constants()
        want = (22 * math.pi - 4 * math.sqrt(2)) / (2 + 3 * math.pi + 8 * math.sqrt(2))
        assert th.path_length_const == pytest.approx(want, rel=1e-12)

    def test_competitiveness(self):
        th = theory_constants()
        assert th.competitiveness_bound == 4 * math.cos(math.pi / 8)
        assert th.competitiveness_bound <= 3.7

    def test_mean_progress_against_closed_form(self):
        # Independent oracle: E[R] * (1 + E[cos 2a]) in closed form.
        th = theory_constants()
        e_cos = (2 * math.sqrt(2) + math.pi / 2 + 1) / (math.pi + 2 * math.sqrt(2))
        want = th.expected_radius * (1.0 + e_cos)
        assert th.mean_progress == pytest.approx(want, rel=1e-9)
