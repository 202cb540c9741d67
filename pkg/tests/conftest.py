import numpy as np
import pytest

from kcoreset import L2, LINF, Metric, WeightedPoint


@pytest.fixture(scope="session")
def linf():
    return Metric(LINF)


@pytest.fixture(scope="session")
def l2():
    return Metric(L2)


def random_points(rng, n, d, lo=0, hi=100, cluster_frac=0.0, weights=False):
    """Random integer-coordinate points, optionally clustered, as WeightedPoints."""
    pts = []
    n_clustered = int(n * cluster_frac)
    if n_clustered:
        n_centers = int(rng.integers(1, 4))
        centers = rng.integers(lo, hi + 1, size=(n_centers, d))
        for _ in range(n_clustered):
            c = centers[rng.integers(n_centers)]
            p = np.clip(c + rng.integers(-3, 4, size=d), lo, hi)
            pts.append(tuple(float(v) for v in p))
    for _ in range(n - n_clustered):
        pts.append(tuple(float(v) for v in rng.integers(lo, hi + 1, size=d)))
    out = []
    for p in pts:
        w = int(rng.integers(1, 4)) if weights else 1
        out.append(WeightedPoint(p, w))
    return out


def unit_assignment_exists(P, Pstar, bound, metric):
    """Exhaustive oracle for the transportation feasibility the flow checker
    decides: every unit of input weight goes to some representative within
    ``bound`` and representative totals are met exactly."""
    units = []
    for p in P:
        units.extend([p.point] * p.weight)
    compat = [
        tuple(j for j, q in enumerate(Pstar)
              if metric.distance(u, q.point) <= bound + 1e-12 * max(1.0, bound))
        for u in units
    ]
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def rec(i, remaining):
        if i == len(units):
            return all(r == 0 for r in remaining)
        for j in compat[i]:
            if remaining[j] > 0:
                nxt = list(remaining)
                nxt[j] -= 1
                if rec(i + 1, tuple(nxt)):
                    return True
        return False

    return rec(0, tuple(q.weight for q in Pstar))
