"""Deterministic one-pass insertion-only streaming coreset maintainer.

The state keeps a lower-bound estimate r of the optimal radius and a weighted
representative set. A new arrival is absorbed by the first representative (in
insertion order) within (eps/2)*r, else appended with weight 1. Once the set
reaches k*(16/eps)^d + z, r doubles and the set is recompressed to a
(eps/2)*r net until it shrinks below the threshold.

Single-writer: one arrival at a time; reports may be taken between arrivals.
"""

from __future__ import annotations

import math

from .errors import InputError
from .metric import Metric, REL_TOL, WeightedPoint, min_pairwise_distance
from .offline import _net


def size_threshold(k: int, z: int, epsilon: float, d: int) -> int:
    t = k * (16.0 / epsilon) ** d
    if t > 2**53:
        raise InputError("size threshold k*(16/eps)^d overflows; use a larger epsilon")
    return int(math.floor(t)) + z


class InsertionStream:
    """Streaming (eps,k,z)-coreset over a metric of declared doubling dimension d.

    With ``track_chains=True`` (test builds) the full representative-merge
    history is retained so each arrival can be traced to its current
    representative.
    """

    def __init__(self, k: int, z: int, epsilon: float, d: int, metric: Metric,
                 track_chains: bool = False):
        if k < 1 or z < 0:
            raise InputError("need k >= 1 and z >= 0")
        if not (0 < epsilon <= 1):
            raise InputError("epsilon must be in (0, 1]")
        if d < 1:
            raise InputError("declared doubling dimension must be >= 1")
        self.k, self.z, self.epsilon, self.d = k, z, epsilon, d
        self.metric = metric
        self.threshold = size_threshold(k, z, epsilon, d)
        self.r = 0.0
        self.pstar: list[WeightedPoint] = []
        self.arrivals = 0
        self.track_chains = track_chains
        if track_chains:
            self._rep_ids: list[int] = []     # id of each current representative
            self._next_id = 0
            self._parent: dict[int, int] = {}  # merged rep id -> surviving rep id
            self._arrival_rep: list[int] = []  # arrival t -> rep id at assignment time

    def arrival(self, point) -> None:
        point = tuple(float(c) for c in point)
        if self.pstar and len(point) != len(self.pstar[0].point):
            raise InputError("arrival dimension mismatch")
        self.arrivals += 1
        limit = (self.epsilon / 2.0) * self.r
        slack = REL_TOL * max(1.0, limit)
        for i, rep in enumerate(self.pstar):
            if self.metric.distance(point, rep.point) <= limit + slack:
                self.pstar[i] = WeightedPoint(rep.point, rep.weight + 1)
                if self.track_chains:
                    self._arrival_rep.append(self._rep_ids[i])
                break
        else:
            self.pstar.append(WeightedPoint(point, 1))
            if self.track_chains:
                self._rep_ids.append(self._next_id)
                self._arrival_rep.append(self._next_id)
                self._next_id += 1

        if self.r == 0.0 and len(self.pstar) >= self.k + self.z + 1:
            self.r = min_pairwise_distance(self.pstar, self.metric) / 2.0

        while len(self.pstar) >= self.threshold:
            self.r *= 2.0
            delta = (self.epsilon / 2.0) * self.r
            reps, assignment = _net(self.pstar, delta, self.metric)
            if self.track_chains:
                new_ids = [None] * len(reps)
                for old_idx, new_idx in enumerate(assignment):
                    old_id = self._rep_ids[old_idx]
                    if new_ids[new_idx] is None:
                        new_ids[new_idx] = old_id  # survivor keeps its id
                    else:
                        self._parent[old_id] = new_ids[new_idx]
                self._rep_ids = new_ids
            self.pstar = reps

    def extend(self, points) -> None:
        for p in points:
            self.arrival(p)

    def report(self) -> list[WeightedPoint]:
        return list(self.pstar)

    def resolved_representative(self, t: int):
        """Location of the (transitively merged) representative of arrival t."""
        if not self.track_chains:
            raise InputError("stream was not built with track_chains=True")
        rid = self._arrival_rep[t]
        while rid in self._parent:
            rid = self._parent[rid]
        return self.pstar[self._rep_ids.index(rid)].point
