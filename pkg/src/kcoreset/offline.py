"""Offline solvers: cost evaluation, brute-force oracle, the greedy
3-approximation for k-center with outliers, and the two coreset
constructions (mini-ball covering and the delta-net recompression).

Everything here is a pure function of immutable inputs. "Arbitrary point"
choices are pinned to first-in-input-order so every run is reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CapacityError, InputError
from .metric import (
    Ball,
    CenterUniverse,
    Metric,
    REL_TOL,
    WeightedPoint,
    as_weighted,
    coords_array,
    input_points_universe,
    materialize_universe,
    weights_array,
)

SUBSET_CAP = 2_000_000  # default cap on enumerated candidate center sets


@dataclass(frozen=True)
class Instance:
    """A k-center-with-outliers instance: weighted points plus (k, z, epsilon)."""

    points: tuple
    k: int
    z: int
    epsilon: float
    metric: Metric

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(as_weighted(self.points)))
        if self.k < 1:
            raise InputError("k must be >= 1")
        if self.z < 0:
            raise InputError("z must be >= 0")
        if not (0 < self.epsilon <= 1):
            raise InputError("epsilon must be in (0, 1]")
        if not self.points:
            raise InputError("instance needs at least one point")
        if sum(wp.weight for wp in self.points) <= self.z:
            raise InputError("total weight must exceed z (instance is vacuous)")
        dims = {len(wp.point) for wp in self.points}
        if len(dims) != 1:
            raise InputError("points have mixed dimensions")


@dataclass(frozen=True)
class Solution:
    radius: float
    centers: tuple
    outlier_weight: int


class GreedyResult(NamedTuple):
    radius: float          # radius of the reported balls (3x feasibility radius)
    balls: tuple
    feasibility_radius: float
    vacuous: bool = False


@dataclass(frozen=True)
class MiniBallCovering:
    """Weighted representatives plus the witnessing assignment.

    ``assignment[i]`` is the index into ``representatives`` for the i-th input
    point. ``ball_radius`` is the mini-ball radius used by the construction
    (epsilon * greedy_radius / 3).
    """

    representatives: tuple
    assignment: tuple
    epsilon: float
    ball_radius: float
    greedy_radius: float

    @property
    def points(self) -> list[WeightedPoint]:
        return list(self.representatives)


def _cost_from_nearest(nearest: np.ndarray, weights: np.ndarray, z: int) -> float:
    """Smallest r with total weight of points at nearest-distance > r at most z.

    Peeling: drop points in descending distance order while the dropped weight
    stays <= z; the answer is the largest remaining distance (0 if none).
    """
    if nearest.size == 0:
        return 0.0
    if z <= 0:
        return float(nearest.max())
    order = np.argsort(-nearest, kind="stable")
    cw = np.cumsum(weights[order])
    idx = int(np.searchsorted(cw, z, side="right"))
    if idx >= nearest.size:
        return 0.0
    return float(nearest[order[idx]])


def _cost_batch(nearest: np.ndarray, weights: np.ndarray, z: int) -> np.ndarray:
    """Row-wise version of ``_cost_from_nearest`` for a (rows, n) matrix."""
    if nearest.shape[1] == 0:
        return np.zeros(nearest.shape[0])
    if z <= 0:
        return nearest.max(axis=1)
    order = np.argsort(-nearest, axis=1)
    w = np.broadcast_to(weights, nearest.shape)
    cw = np.take_along_axis(w, order, axis=1).cumsum(axis=1)
    idx = (cw <= z).sum(axis=1)  # first index with cumulative weight > z
    sorted_near = np.take_along_axis(nearest, order, axis=1)
    safe = np.minimum(idx, nearest.shape[1] - 1)
    picked = sorted_near[np.arange(nearest.shape[0]), safe]
    return np.where(idx < nearest.shape[1], picked, 0.0)


def _combo_chunks(n_items: int, k: int, chunk: int = 4096):
    """Lexicographic k-combinations of range(n_items), as (chunk, k) arrays."""
    it = itertools.combinations(range(n_items), k)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.intp)


def evaluate_cost(points, centers, z: int, metric: Metric) -> float:
    """k-center-with-outliers cost of a fixed center set."""
    centers = [tuple(c) for c in centers]
    if not centers:
        raise InputError("evaluate_cost needs at least one center")
    wps = as_weighted(points)
    if not wps:
        return 0.0
    d = metric.pairwise(coords_array(wps), np.asarray(centers, dtype=float).reshape(len(centers), -1))
    return _cost_from_nearest(d.min(axis=1), weights_array(wps), z)


def uncovered_weight(points, centers, radius: float, metric: Metric) -> int:
    """Total weight at nearest-center distance beyond ``radius`` (with tolerance)."""
    wps = as_weighted(points)
    if not wps:
        return 0
    d = metric.pairwise(coords_array(wps), np.asarray([tuple(c) for c in centers], dtype=float).reshape(len(centers), -1))
    nearest = d.min(axis=1)
    slack = REL_TOL * np.maximum(1.0, np.maximum(np.abs(nearest), abs(radius)))
    return int(weights_array(wps)[nearest > radius + slack].sum())


def brute_force_opt(inst: Instance, universe: CenterUniverse = None, cap: int = SUBSET_CAP) -> Solution:
    """Exact optimum over all k-subsets of the materialized universe.

    Deterministic: the witness is the lexicographically first minimizer in the
    canonical universe order.
    """
    universe = universe or input_points_universe()
    cands = materialize_universe(inst.points, universe)
    k = min(inst.k, len(cands))
    n_sets = math.comb(len(cands), k)
    if n_sets > cap:
        raise CapacityError(f"{n_sets} candidate center sets exceed cap {cap}")
    dmat = inst.metric.pairwise(coords_array(inst.points), np.asarray(cands, dtype=float).reshape(len(cands), -1))
    w = weights_array(inst.points)
    best = math.inf
    best_combo = None
    for combos in _combo_chunks(len(cands), k):
        nearest = dmat[:, combos].min(axis=2).T  # (chunk, n)
        costs = _cost_batch(nearest, w, inst.z)
        i = int(np.argmin(costs))
        if costs[i] < best:
            best, best_combo = float(costs[i]), tuple(int(c) for c in combos[i])
    centers = tuple(cands[i] for i in best_combo)
    out_w = uncovered_weight(inst.points, centers, best, inst.metric)
    return Solution(radius=best, centers=centers, outlier_weight=out_w)


def _feasible(dmat: np.ndarray, weights: np.ndarray, k: int, z: int, r: float):
    """One round-robin of the greedy disk heuristic at guess radius r.

    Picks, k times, the input point whose radius-r ball covers maximum
    uncovered weight (ties: lowest index), then marks everything within 3r of
    it covered. Returns (feasible, chosen center indices).
    """
    slack = REL_TOL * max(1.0, abs(r))
    within_r = dmat <= r + slack
    within_3r = dmat <= 3 * r + 3 * slack
    uncovered = weights.astype(np.int64).copy()
    centers = []
    for _ in range(k):
        if uncovered.sum() == 0:
            break
        coverage = within_r @ uncovered
        c = int(np.argmax(coverage))
        centers.append(c)
        uncovered[within_3r[c]] = 0
    return int(uncovered.sum()) <= z, centers


def greedy(points, k: int, z: int, metric: Metric) -> GreedyResult:
    """Greedy 3-approximation for weighted k-center with z outliers.

    Candidate radii are 0, all pairwise distances, and all half pairwise
    distances; a binary search finds the smallest feasible candidate r and the
    reported balls have radius 3r. Returns radius 0 and no balls when the
    total weight is at most z (vacuous instance: everything is an outlier).
    """
    wps = as_weighted(points)
    w = weights_array(wps) if wps else np.zeros(0, dtype=np.int64)
    if int(w.sum()) <= z:
        return GreedyResult(0.0, (), 0.0, vacuous=True)
    coords = coords_array(wps)
    dmat = metric.pairwise(coords, coords)
    iu = np.triu_indices(len(wps), k=1)
    pair = dmat[iu]
    cands = np.unique(np.concatenate([np.asarray([0.0]), pair, pair / 2.0]))
    lo, hi = 0, len(cands) - 1
    # the largest candidate is always feasible: one ball reaches every point
    while lo < hi:
        mid = (lo + hi) // 2
        ok, _ = _feasible(dmat, w, k, z, float(cands[mid]))
        if ok:
            hi = mid
        else:
            lo = mid + 1
    r_f = float(cands[lo])
    ok, centers = _feasible(dmat, w, k, z, r_f)
    if not ok:  # cannot happen: the top candidate is feasible
        raise AssertionError("greedy binary search ended on an infeasible radius")
    radius = 3.0 * r_f
    balls = tuple(Ball(wps[c].point, radius) for c in centers)
    return GreedyResult(radius, balls, r_f)


def _net(points, delta: float, metric: Metric):
    """Greedy delta-net in input order.

    Repeatedly takes the first remaining point q and merges every remaining
    point within distance delta of q (inclusive) into q, summing weights.
    Returns (representatives, assignment) where assignment[i] is the
    representative index of input point i.
    """
    wps = as_weighted(points)
    n = len(wps)
    if n == 0:
        return [], []
    coords = coords_array(wps)
    dmat = metric.pairwise(coords, coords)
    slack = REL_TOL * max(1.0, abs(delta))
    assignment = [-1] * n
    reps = []
    remaining = np.ones(n, dtype=bool)
    for i in range(n):
        if not remaining[i]:
            continue
        members = np.flatnonzero(remaining & (dmat[i] <= delta + slack))
        weight = int(sum(wps[j].weight for j in members))
        rep_idx = len(reps)
        reps.append(WeightedPoint(wps[i].point, weight))
        for j in members:
            assignment[int(j)] = rep_idx
        remaining[members] = False
    return reps, assignment


def update_coreset(points, delta: float, metric: Metric) -> list[WeightedPoint]:
    """Recompress a weighted set to a delta-net (first-in-input-order greedy)."""
    if delta < 0:
        raise InputError("delta must be nonnegative")
    reps, _ = _net(points, delta, metric)
    return reps


def _mbc(points, k: int, z: int, epsilon: float, metric: Metric) -> MiniBallCovering:
    """Mini-ball covering construction without Instance validation.

    Used internally where vacuous sub-instances (total weight <= z) are
    legitimate, e.g. on starved MPC machines; those reduce to a radius-0 net.
    """
    result = greedy(points, k, z, metric)
    delta = epsilon * result.radius / 3.0
    reps, assignment = _net(points, delta, metric)
    return MiniBallCovering(
        representatives=tuple(reps),
        assignment=tuple(assignment),
        epsilon=epsilon,
        ball_radius=delta,
        greedy_radius=result.radius,
    )


def mbc_construction(inst: Instance) -> MiniBallCovering:
    """Mini-ball covering of an instance (size at most k*(12/eps)^d + z for
    declared doubling dimension d)."""
    return _mbc(list(inst.points), inst.k, inst.z, inst.epsilon, inst.metric)


def mbc_size_bound(k: int, z: int, epsilon: float, d: int) -> float:
    return k * (12.0 / epsilon) ** d + z
