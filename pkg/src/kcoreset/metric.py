"""Points, weights, metrics, balls, and candidate-center universes.

All types here are immutable value objects; they can be shared freely across
threads. Coordinates are 64-bit floats and every radius comparison in the
package goes through ``leq`` (relative tolerance 1e-9 with a unit floor) to
absorb rounding.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DegenerateSetError, InputError

REL_TOL = 1e-9

Point = tuple  # tuple of floats (or a single index for explicit-matrix metrics)


def leq(a: float, b: float) -> float:
    """a <= b up to relative tolerance (unit floor for values near zero)."""
    return a <= b + REL_TOL * max(1.0, abs(a), abs(b))


def close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class WeightedPoint:
    point: Point
    weight: int = 1

    def __post_init__(self):
        if not isinstance(self.weight, int) or self.weight < 1:
            raise InputError(f"weight must be a positive integer, got {self.weight!r}")
        object.__setattr__(self, "point", tuple(float(c) for c in self.point))


def as_weighted(points) -> list[WeightedPoint]:
    """Normalize a list of Points / WeightedPoints to WeightedPoints."""
    out = []
    for p in points:
        if isinstance(p, WeightedPoint):
            out.append(p)
        else:
            out.append(WeightedPoint(tuple(p)))
    return out


def total_weight(points) -> int:
    return sum(wp.weight for wp in as_weighted(points))


def coords_array(points) -> np.ndarray:
    pts = [wp.point for wp in as_weighted(points)]
    return np.asarray(pts, dtype=float).reshape(len(pts), -1)


def weights_array(points) -> np.ndarray:
    return np.asarray([wp.weight for wp in as_weighted(points)], dtype=np.int64)


L2 = "l2"
LINF = "linf"
EXPLICIT = "matrix"


@dataclass(frozen=True)
class Metric:
    """A metric: L2, L-infinity, or an explicit finite distance matrix.

    For ``EXPLICIT``, points are 1-tuples holding an index into the matrix.
    The matrix is validated for symmetry, nonnegativity and zero diagonal;
    the triangle inequality is spot-checked on sampled triples.
    """

    kind: str
    matrix: tuple = field(default=None, compare=True)

    def __post_init__(self):
        if self.kind not in (L2, LINF, EXPLICIT):
            raise InputError(f"unknown metric kind {self.kind!r}")
        if self.kind == EXPLICIT:
            if self.matrix is None:
                raise InputError("explicit metric requires a matrix")
            m = tuple(tuple(float(v) for v in row) for row in self.matrix)
            object.__setattr__(self, "matrix", m)
            _validate_matrix(m)
        elif self.matrix is not None:
            raise InputError("matrix only allowed for explicit metrics")

    def distance(self, p: Point, q: Point) -> float:
        p, q = tuple(p), tuple(q)
        if len(p) != len(q):
            raise InputError(f"dimension mismatch: {len(p)} vs {len(q)}")
        if self.kind == EXPLICIT:
            i, j = int(p[0]), int(q[0])
            n = len(self.matrix)
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"matrix index out of range: {i}, {j}")
            return self.matrix[i][j]
        diff = [abs(a - b) for a, b in zip(p, q)]
        if self.kind == LINF:
            return max(diff) if diff else 0.0
        return math.sqrt(sum(d * d for d in diff))

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Distance matrix between rows of a (n x d) and rows of b (m x d)."""
        if self.kind == EXPLICIT:
            ia = a.astype(int).ravel()
            ib = b.astype(int).ravel()
            mat = np.asarray(self.matrix, dtype=float)
            return mat[np.ix_(ia, ib)]
        diff = np.abs(a[:, None, :] - b[None, :, :])
        if self.kind == LINF:
            return diff.max(axis=2)
        return np.sqrt((diff * diff).sum(axis=2))


def _validate_matrix(m, samples=200, seed=0):
    n = len(m)
    if any(len(row) != n for row in m):
        raise InputError("explicit metric matrix must be square")
    for i in range(n):
        if m[i][i] != 0.0:
            raise InputError("explicit metric matrix must have zero diagonal")
        for j in range(n):
            if m[i][j] < 0:
                raise InputError("explicit metric matrix must be nonnegative")
            if m[i][j] != m[j][i]:
                raise InputError("explicit metric matrix must be symmetric")
    triples = itertools.permutations(range(n), 3) if n <= 12 else (
        tuple(random.Random(seed).choices(range(n), k=3)) for _ in range(samples)
    )
    for i, j, k in triples:
        if m[i][k] > m[i][j] + m[j][k] + REL_TOL * max(1.0, m[i][k]):
            raise InputError(f"triangle inequality violated on sampled triple ({i},{j},{k})")


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise InputError("ball radius must be nonnegative")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))


INPUT_POINTS = "input-points"
LINF_MIDPOINT_GRID = "linf-midpoint-grid"
EXPLICIT_LIST = "explicit-list"


@dataclass(frozen=True)
class CenterUniverse:
    """A finite surrogate for the space of candidate centers.

    ``INPUT_POINTS``: the distinct input locations. ``LINF_MIDPOINT_GRID``:
    the Cartesian product, per coordinate, of all input coordinate values and
    all midpoints of input coordinate pairs; exact for L-infinity k-center.
    """

    kind: str
    points: tuple = ()

    def __post_init__(self):
        if self.kind not in (INPUT_POINTS, LINF_MIDPOINT_GRID, EXPLICIT_LIST):
            raise InputError(f"unknown universe kind {self.kind!r}")
        object.__setattr__(
            self, "points", tuple(tuple(float(c) for c in p) for p in self.points)
        )


def input_points_universe() -> CenterUniverse:
    return CenterUniverse(INPUT_POINTS)


def midpoint_grid_universe() -> CenterUniverse:
    return CenterUniverse(LINF_MIDPOINT_GRID)


def explicit_universe(points) -> CenterUniverse:
    return CenterUniverse(EXPLICIT_LIST, tuple(tuple(p) for p in points))


def materialize_universe(points, universe: CenterUniverse, cap: int = 1_000_000) -> list[Point]:
    """Materialize the candidate centers for a point set, in canonical (sorted) order."""
    wps = as_weighted(points)
    if not wps:
        raise InputError("cannot materialize a universe for an empty point set")
    if universe.kind == EXPLICIT_LIST:
        pts = sorted(set(universe.points))
    elif universe.kind == INPUT_POINTS:
        pts = sorted({wp.point for wp in wps})
    else:
        axes = []
        dim = len(wps[0].point)
        for j in range(dim):
            vals = sorted({wp.point[j] for wp in wps})
            mids = {(a + b) / 2.0 for a, b in itertools.combinations(vals, 2)}
            axes.append(sorted(set(vals) | mids))
        size = math.prod(len(ax) for ax in axes)
        if size > cap:
            raise CapacityError(f"midpoint-grid universe has {size} points, cap is {cap}")
        pts = [tuple(p) for p in itertools.product(*axes)]
    if len(pts) > cap:
        raise CapacityError(f"universe has {len(pts)} points, cap is {cap}")
    return pts


def min_pairwise_distance(points, metric: Metric) -> float:
    """Minimum distance over distinct locations; coinciding points are ignored.

    Raises DegenerateSetError when fewer than two distinct locations remain.
    """
    locs = sorted({wp.point for wp in as_weighted(points)})
    if len(locs) < 2:
        raise DegenerateSetError("need at least two distinct locations")
    arr = np.asarray(locs, dtype=float)
    d = metric.pairwise(arr, arr)
    iu = np.triu_indices(len(locs), k=1)
    vals = d[iu]
    vals = vals[vals > 0]
    if vals.size == 0:
        raise DegenerateSetError("all pairwise distances are zero")
    return float(vals.min())
