"""Cross-cutting contract checks: retries, modes, concurrency."""

import math
import threading

import numpy as np

import conewalk as cw
from conewalk.sampling import ExperimentConfig


def seeded_walk(seed, n=400):
    rng = np.random.default_rng(seed)
    pts = (rng.random((n, 2)) - 0.5) * 2.0 * math.sqrt(n)
    t = cw.build(pts)
    for _ in range(50):
        q = tuple(pts.mean(axis=0) + (rng.random(2) - 0.5) * 0.5 * math.sqrt(n))
        if t.is_inside_hull(q):
            break
    z = int(np.argmax(np.hypot(pts[:, 0] - q[0], pts[:, 1] - q[1])))
    return t, z, q, cw.cone_walk(t, z, q)


def test_lambda_escalation_recovers():
    # A lambda barely above 1 leaves most stopper pairs without any
    # in-ellipse path; the doubling retry must still produce a valid route.
    t, z, q, trace = seeded_walk(201)
    assert trace.kappa >= 3
    p = cw.competitive_path(t, trace, lam=1.0001)
    for u, v in zip(p.vertices[:-1], p.vertices[1:]):
        assert v in t.neighbors(u)
    assert p.vertices[0] == trace.start
    assert p.vertices[-1] == trace.terminal


def test_poisson_mode_experiment():
    cfg = ExperimentConfig(n=300, walks=10, seed=6, mode="poisson")
    res = cw.run_experiment(cfg)
    assert res.stats.counts["walks"] == 10
    assert math.isfinite(res.stats.mean_radius)


def test_restrict_aim_limits_walk_span():
    cfg = ExperimentConfig(n=2000, walks=40, seed=13, restrict_aim=True)
    res = cw.run_experiment(cfg)
    radius = math.sqrt(cfg.n / math.pi)
    # Start and aim both live in the quarter-radius disc.
    assert max(r.L0 for r in res.walk_rows) <= 0.5 * radius + 1e-9
    unrestricted = cw.run_experiment(
        ExperimentConfig(n=2000, walks=40, seed=13, restrict_aim=False)
    )
    assert max(r.L0 for r in unrestricted.walk_rows) > 0.5 * radius


def test_concurrent_walks_match_serial():
    # Walks are pure reads with per-thread scratch; concurrent execution
    # must reproduce the serial traces exactly.
    rng = np.random.default_rng(77)
    n = 2000
    pts = (rng.random((n, 2)) - 0.5) * 2.0 * math.sqrt(n)
    t = cw.build(pts)
    jobs = []
    for _ in range(24):
        z = int(rng.integers(0, n))
        q = tuple(pts.mean(axis=0) + (rng.random(2) - 0.5) * 0.4 * math.sqrt(n))
        if t.is_inside_hull(q):
            jobs.append((z, q))
    serial = [cw.cone_walk(t, z, q) for z, q in jobs]

    results = [None] * len(jobs)
    def worker(indices):
        for i in indices:
            z, q = jobs[i]
            results[i] = cw.cone_walk(t, z, q)

    threads = [
        threading.Thread(target=worker, args=(range(k, len(jobs), 4),))
        for k in range(4)
    ]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert results == serial
