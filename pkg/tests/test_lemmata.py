"""Geometric step guarantees checked as data on real traces."""

import math

import numpy as np

import conewalk as cw
from conewalk.walk import StepRecord, WalkTrace, check_step_lemmata


def run_one(seed, n=1000):
    rng = np.random.default_rng(seed)
    pts = (rng.random((n, 2)) - 0.5) * 2.0 * math.sqrt(n)
    t = cw.build(pts)
    q = tuple(pts.mean(axis=0) * 0.2)
    if not t.is_inside_hull(q):
        return None
    z = int(np.argmax(np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])))
    return t, cw.cone_walk(t, z, q)


def test_no_violations_on_seeded_runs():
    checked = 0
    for seed in range(8):
        got = run_one(seed)
        if got is None:
            continue
        t, trace = got
        assert check_step_lemmata(t, trace) == []
        checked += 1
    assert checked >= 6


def test_hypothesis_gating_skips_large_radius_steps():
    # A fabricated step that fails |Z_i q| > (2 + sqrt 2) R_i is skipped by
    # the cone-overlap check rather than flagged.
    got = run_one(3)
    assert got is not None
    t, trace = got
    step = trace.steps[0]
    fat = StepRecord(
        index=step.index,
        from_site=step.from_site,
        stopper=step.stopper,
        radius=step.distance_to_aim,  # huge: hypothesis fails
        angle=step.angle,
        intermediates=step.intermediates,
        accessed_count=step.accessed_count,
        distance_to_aim=step.distance_to_aim,
    )
    doctored = WalkTrace(
        start=trace.start,
        aim=trace.aim,
        steps=(fat,),
        terminal=trace.terminal,
        kappa=1,
        visited_count=trace.visited_count,
        accessed_total=trace.accessed_total,
        neighborhoods_used=trace.neighborhoods_used,
        final_intermediates=trace.final_intermediates,
        final_accessed=trace.final_accessed,
    )
    kinds = {v.kind for v in check_step_lemmata(t, doctored)}
    assert "cone-overlap" not in kinds


def test_sandwich_holds_on_every_step():
    for seed in range(5):
        got = run_one(seed, n=600)
        if got is None:
            continue
        t, trace = got
        pts = t.points
        qx, qy = trace.aim
        for step in trace.steps:
            li = step.distance_to_aim
            lj = math.hypot(pts[step.stopper, 0] - qx, pts[step.stopper, 1] - qy)
            prog = step.radius * (1.0 + math.cos(2.0 * step.angle))
            tol = 1e-9 * max(1.0, li)
            assert li - prog - tol <= lj
            assert lj <= li - prog + 2.0 * step.radius**2 / li + tol


def test_violation_on_fabricated_overlap():
    # Radii large enough to overlap the next cone while keeping the
    # gating hypothesis satisfied must be flagged.
    got = run_one(4)
    assert got is not None
    t, trace = got
    step = trace.steps[0]
    # Shrink the distance instead: keep radius, fake a huge L_i so that
    # the gate holds but geometry is inconsistent -> sandwich + overlap.
    fake = StepRecord(
        index=0,
        from_site=step.from_site,
        stopper=step.from_site,  # stopper at the anchor: cone apex inside disc
        radius=step.radius,
        angle=0.0,
        intermediates=(),
        accessed_count=0,
        distance_to_aim=step.distance_to_aim,
    )
    doctored = WalkTrace(
        start=trace.start,
        aim=trace.aim,
        steps=(fake,),
        terminal=trace.terminal,
        kappa=1,
        visited_count=3,
        accessed_total=0,
        neighborhoods_used=1,
        final_intermediates=(),
        final_accessed=0,
    )
    assert check_step_lemmata(t, doctored) != []
