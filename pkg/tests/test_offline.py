import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcoreset import (
    CapacityError, InputError, Instance, LINF, Metric, WeightedPoint,
    brute_force_opt, check_mini_ball_covering, evaluate_cost, greedy,
    mbc_construction, mbc_size_bound, midpoint_grid_universe, update_coreset,
)
from conftest import random_points

W = WeightedPoint


def pts1d(*xs):
    return [W((float(x),)) for x in xs]


def inst1d(xs, k, z, eps, metric):
    return Instance(tuple(pts1d(*xs)), k, z, eps, metric)


def test_instance_validation(linf):
    with pytest.raises(InputError):
        inst1d([1, 2], 0, 0, 1.0, linf)
    with pytest.raises(InputError):
        inst1d([1, 2], 1, -1, 1.0, linf)
    with pytest.raises(InputError):
        inst1d([1, 2], 1, 0, 0.0, linf)
    with pytest.raises(InputError):
        inst1d([1, 2], 1, 2, 1.0, linf)  # weight <= z is vacuous


def test_evaluate_cost_examples(linf):
    assert evaluate_cost(pts1d(0, 1, 2), [(1.0,)], 0, linf) == 1.0
    assert evaluate_cost(pts1d(0, 1, 3), [(1.0,)], 1, linf) == 1.0
    # weighted peel: distances are 1 (w=1), 0 (w=2), 2 (w=1); only the
    # distance-2 point fits in the z=1 outlier budget, so the cost is 1
    # (value frozen from the exhaustive threshold scan the contract defines).
    weighted = [W((0.0,)), W((1.0,), 2), W((3.0,))]
    assert evaluate_cost(weighted, [(1.0,)], 1, linf) == 1.0
    with pytest.raises(InputError):
        evaluate_cost(pts1d(0), [], 0, linf)


def exhaustive_threshold_scan(points, centers, z, metric):
    dists = [min(metric.distance(p.point, c) for c in centers) for p in points]
    for r in sorted({0.0} | set(dists)):
        if sum(p.weight for p, d in zip(points, dists) if d > r + 1e-12) <= z:
            return r
    raise AssertionError


@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_evaluate_cost_matches_threshold_scan(linf, data):
    xs = data.draw(st.lists(st.integers(0, 30), min_size=1, max_size=8))
    ws = data.draw(st.lists(st.integers(1, 3), min_size=len(xs), max_size=len(xs)))
    z = data.draw(st.integers(0, 4))
    cs = data.draw(st.lists(st.integers(0, 30), min_size=1, max_size=3))
    pts = [W((float(x),), w) for x, w in zip(xs, ws)]
    centers = [(float(c),) for c in cs]
    assert evaluate_cost(pts, centers, z, linf) == pytest.approx(
        exhaustive_threshold_scan(pts, centers, z, linf))


def test_evaluate_cost_monotonicity(linf):
    rng = np.random.default_rng(11)
    pts = random_points(rng, 20, 2, weights=True)
    centers = [pts[0].point, pts[3].point]
    costs = [evaluate_cost(pts, centers, z, linf) for z in range(6)]
    assert all(a >= b for a, b in zip(costs, costs[1:]))
    more = evaluate_cost(pts, centers + [pts[7].point], 2, linf)
    assert more <= costs[2] + 1e-12


def test_brute_force_examples(linf):
    assert brute_force_opt(inst1d([1, 2, 3], 2, 1, 1.0, linf)).radius == 0.0
    assert brute_force_opt(
        inst1d([1, 2, 3, 4], 2, 1, 1.0, linf), midpoint_grid_universe()
    ).radius == pytest.approx(0.5)
    sol = brute_force_opt(inst1d([0, 1, 2, 10, 11, 12], 2, 0, 1.0, linf))
    assert sol.radius == pytest.approx(1.0)
    assert sol.centers == ((1.0,), (11.0,))


def test_brute_force_cap(linf):
    inst = inst1d(range(30), 3, 0, 1.0, linf)
    with pytest.raises(CapacityError):
        brute_force_opt(inst, cap=100)


def test_brute_force_deterministic_witness(linf):
    inst = inst1d([0, 1, 10, 11], 2, 0, 1.0, linf)
    a = brute_force_opt(inst)
    b = brute_force_opt(inst)
    assert a == b


def test_greedy_examples(linf):
    r, balls, *_ = greedy(pts1d(5), 3, 0, linf)
    assert r == 0.0 and len(balls) == 1 and balls[0].center == (5.0,)
    r, balls, *_ = greedy(pts1d(1, 2, 3), 2, 1, linf)
    assert r == 0.0
    res = greedy([], 2, 0, linf)
    assert res.vacuous and res.radius == 0.0 and res.balls == ()
    res = greedy(pts1d(4), 1, 5, linf)  # weight <= z
    assert res.vacuous


def test_greedy_three_approx_small(linf, l2):
    rng = np.random.default_rng(1)
    for trial in range(40):
        n = int(rng.integers(4, 20))
        d = int(rng.integers(1, 3))
        k = int(rng.integers(1, 4))
        z = int(rng.integers(0, 4))
        metric = linf if trial % 2 else l2
        pts = random_points(rng, max(n, z + 1), d, hi=60)
        res = greedy(pts, k, z, metric)
        inst = Instance(tuple(pts), k, z, 1.0, metric)
        opt = brute_force_opt(inst).radius
        assert res.radius <= 3 * opt + 1e-9
        # uncovered weight within the reported balls is at most z
        uncov = 0
        for p in pts:
            if all(metric.distance(p.point, b.center) > b.radius + 1e-9 for b in res.balls):
                uncov += p.weight
        assert uncov <= z


def test_mbc_examples(linf):
    cov = mbc_construction(inst1d([7], 1, 0, 1.0, linf))
    assert [(p.point, p.weight) for p in cov.representatives] == [((7.0,), 1)]
    cov = mbc_construction(inst1d([0, 1], 1, 0, 1.0, linf))
    assert [(p.point, p.weight) for p in cov.representatives] == [((0.0,), 1), ((1.0,), 1)]
    assert cov.assignment == (0, 1)


def test_mbc_passes_flow_validation(linf):
    rng = np.random.default_rng(5)
    for _ in range(10):
        pts = random_points(rng, 15, 2, hi=40, weights=True)
        k, z, eps = 2, 2, 0.5
        inst = Instance(tuple(pts), k, z, eps, linf)
        cov = mbc_construction(inst)
        opt = brute_force_opt(inst).radius
        report = check_mini_ball_covering(pts, list(cov.representatives), eps * opt, linf)
        assert report.passed, report
        assert len(cov.representatives) <= mbc_size_bound(k, z, eps, 2)
        # the returned assignment itself is a witness: weights add up and
        # every point sits within the mini-ball radius of its representative
        totals = [0] * len(cov.representatives)
        for i, p in enumerate(pts):
            rep = cov.representatives[cov.assignment[i]]
            assert linf.distance(p.point, rep.point) <= cov.ball_radius + 1e-9
            totals[cov.assignment[i]] += p.weight
        assert totals == [r.weight for r in cov.representatives]
        # representatives are pairwise separated beyond the mini-ball radius
        if cov.ball_radius > 0:
            reps = cov.representatives
            for i in range(len(reps)):
                for j in range(i + 1, len(reps)):
                    assert linf.distance(reps[i].point, reps[j].point) > cov.ball_radius


def test_update_coreset_examples(linf):
    out = update_coreset([W((0.0,), 2), W((0.2,), 1), W((1.0,), 3)], 0.5, linf)
    assert [(p.point, p.weight) for p in out] == [((0.0,), 3), ((1.0,), 3)]
    dup = update_coreset([W((1.0,)), W((1.0,)), W((2.0,))], 0.0, linf)
    assert [(p.point, p.weight) for p in dup] == [((1.0,), 2), ((2.0,), 1)]
    with pytest.raises(InputError):
        update_coreset([W((0.0,))], -1.0, linf)


@given(st.lists(st.tuples(st.integers(0, 40), st.integers(1, 3)), min_size=1, max_size=12),
       st.integers(0, 8))
@settings(max_examples=80, deadline=None)
def test_update_coreset_properties(raw, delta):
    m = Metric(LINF)
    pts = [W((float(x),), w) for x, w in raw]
    out = update_coreset(pts, float(delta), m)
    assert sum(p.weight for p in out) == sum(p.weight for p in pts)
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            assert m.distance(out[i].point, out[j].point) > delta
    again = update_coreset(out, float(delta), m)
    assert [(p.point, p.weight) for p in again] == [(p.point, p.weight) for p in out]


def test_explicit_matrix_through_solvers():
    # five stations on a path metric, by index
    n = 5
    mat = [[abs(i - j) * 2.0 for j in range(n)] for i in range(n)]
    m = Metric("matrix", matrix=mat)
    pts = [W((float(i),)) for i in range(n)]
    inst = Instance(tuple(pts), 2, 1, 1.0, m)
    opt = brute_force_opt(inst).radius
    assert opt == pytest.approx(2.0)  # e.g. centers {1, 3}, drop one endpoint
    res = greedy(pts, 2, 1, m)
    assert res.radius <= 3 * opt + 1e-9
    cov = mbc_construction(inst)
    assert check_mini_ball_covering(pts, list(cov.representatives), 1.0 * opt, m).passed


def test_transitive_composition(linf):
    # gamma-covering of P recompressed at eps*opt stays a covering at
    # (eps + gamma + eps*gamma) * opt.
    rng = np.random.default_rng(9)
    for _ in range(5):
        pts = random_points(rng, 14, 1, hi=30)
        k, z = 2, 1
        gamma, eps = 0.5, 0.5
        inst = Instance(tuple(pts), k, z, gamma, linf)
        opt = brute_force_opt(inst).radius
        first = mbc_construction(inst)
        second = update_coreset(list(first.representatives), eps * opt, linf)
        bound = (eps + gamma + eps * gamma) * opt
        assert check_mini_ball_covering(pts, second, bound, linf).passed
