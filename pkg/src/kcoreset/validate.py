"""Machine-checkable validators for mini-ball coverings and coresets.

The mini-ball check does not trust any assignment produced by a construction:
it decides existence of a valid partition independently, as a transportation
feasibility problem solved by max-flow. The coreset check enumerates candidate
center sets over a finite universe; for each center set the uncovered-weight
function of the radius is a step function, so checking at its feasibility
threshold is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import CapacityError, InputError
from .metric import (
    CenterUniverse,
    Metric,
    REL_TOL,
    as_weighted,
    coords_array,
    input_points_universe,
    materialize_universe,
    weights_array,
)
from .offline import SUBSET_CAP, _combo_chunks, _cost_batch

WEIGHT_MISMATCH = "WeightMismatch"
COVERING_DISTANCE = "CoveringDistance"
RADIUS_BAND_LOW = "RadiusBandLow"
RADIUS_BAND_HIGH = "RadiusBandHigh"
EXPANDED_COVER_FAILS = "ExpandedCoverFails"
WEIGHT_RESTRICTION = "WeightRestriction"


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violated_condition: str = None
    witness: str = None

    def __post_init__(self):
        if self.passed != (self.violated_condition is None):
            raise InputError("passed must hold exactly when no condition is violated")


def check_mini_ball_covering(P, Pstar, bound: float, metric: Metric,
                             weight_cap: int = 10**6) -> ValidationReport:
    """Does a partition of P into radius-``bound`` balls around Pstar exist?

    Supply w(p) at each input point, demand w(q) at each representative, edges
    where dist(p, q) <= bound; passes iff a saturating integral flow exists.
    """
    P = as_weighted(P)
    Pstar = as_weighted(Pstar)
    if bound < 0:
        raise InputError("bound must be nonnegative")
    locations = {wp.point for wp in P}
    for q in Pstar:
        if q.point not in locations:
            raise InputError(f"representative {q.point} is not an input location")
    wp_total = sum(p.weight for p in P)
    wq_total = sum(q.weight for q in Pstar)
    if wp_total > weight_cap:
        raise CapacityError(f"total weight {wp_total} exceeds validation cap {weight_cap}")
    if wp_total != wq_total:
        return ValidationReport(False, WEIGHT_MISMATCH,
                                f"total weight {wq_total} of representatives vs {wp_total} of input")
    if not P:
        return ValidationReport(True)

    d = metric.pairwise(coords_array(P), coords_array(Pstar))
    slack = REL_TOL * max(1.0, abs(bound))
    reachable = d <= bound + slack
    for i in range(len(P)):
        if not reachable[i].any():
            return ValidationReport(False, COVERING_DISTANCE,
                                    f"point {P[i].point} has no representative within {bound}")

    g = nx.DiGraph()
    for i, p in enumerate(P):
        g.add_edge("s", ("p", i), capacity=p.weight)
    for j, q in enumerate(Pstar):
        g.add_edge(("q", j), "t", capacity=q.weight)
    for i, j in zip(*np.nonzero(reachable)):
        g.add_edge(("p", int(i)), ("q", int(j)), capacity=P[int(i)].weight)
    flow_value, flow = nx.maximum_flow(g, "s", "t")
    if flow_value == wp_total:
        return ValidationReport(True)
    short = [i for i, p in enumerate(P) if flow["s"][("p", i)] < p.weight]
    i = short[0]
    return ValidationReport(False, COVERING_DISTANCE,
                            f"no saturating assignment: point {P[i].point} keeps "
                            f"{P[i].weight - flow['s'][('p', i)]} unassigned weight")


def check_coreset(P, Pstar, k: int, z: int, epsilon: float, metric: Metric,
                  universe: CenterUniverse = None, cap: int = SUBSET_CAP) -> ValidationReport:
    """Decide both coreset conditions over a finite center universe.

    Condition 1 compares the two optima computed over the same universe.
    Condition 2 quantifies over all k-subsets of the universe and all radii;
    per center set C it reduces to cost(P, C) <= cost(Pstar, C) + eps * opt(P)
    because the uncovered weight is a nonincreasing step function of the
    radius. The weight restriction w(Pstar) <= w(P) is checked first.
    ``epsilon`` here is the claimed quality and may exceed 1 (composed
    pipelines are validated at 3*eps or (1+eps)^R - 1).
    """
    P = as_weighted(P)
    Pstar = as_weighted(Pstar)
    if k < 1 or z < 0 or epsilon <= 0:
        raise InputError("need k >= 1, z >= 0, epsilon > 0")
    if not P or not Pstar:
        raise InputError("both point sets must be nonempty")
    wP, wS = sum(p.weight for p in P), sum(q.weight for q in Pstar)
    if wS > wP:
        return ValidationReport(False, WEIGHT_RESTRICTION,
                                f"coreset weight {wS} exceeds input weight {wP}")
    universe = universe or input_points_universe()
    cands = materialize_universe(P, universe)
    kk = min(k, len(cands))
    n_sets = math.comb(len(cands), kk)
    if n_sets > cap:
        raise CapacityError(f"{n_sets} candidate center sets exceed cap {cap}")

    carr = np.asarray(cands, dtype=float).reshape(len(cands), -1)
    dP = metric.pairwise(coords_array(P), carr)
    dS = metric.pairwise(coords_array(Pstar), carr)
    wPa, wSa = weights_array(P), weights_array(Pstar)

    opt_p = opt_s = math.inf
    max_gap = -math.inf
    gap_witness = None
    for combos in _combo_chunks(len(cands), kk):
        rp = _cost_batch(dP[:, combos].min(axis=2).T, wPa, z)
        rs = _cost_batch(dS[:, combos].min(axis=2).T, wSa, z)
        opt_p = min(opt_p, float(rp.min()))
        opt_s = min(opt_s, float(rs.min()))
        gaps = rp - rs
        i = int(np.argmax(gaps))
        if gaps[i] > max_gap:
            max_gap = float(gaps[i])
            gap_witness = tuple(int(c) for c in combos[i])

    slack = REL_TOL * max(1.0, opt_p, opt_s)
    if opt_s < (1 - epsilon) * opt_p - slack:
        return ValidationReport(False, RADIUS_BAND_LOW,
                                f"opt(coreset)={opt_s} below (1-eps)*opt(P)={(1 - epsilon) * opt_p}")
    if opt_s > (1 + epsilon) * opt_p + slack:
        return ValidationReport(False, RADIUS_BAND_HIGH,
                                f"opt(coreset)={opt_s} above (1+eps)*opt(P)={(1 + epsilon) * opt_p}")
    if max_gap > epsilon * opt_p + slack:
        centers = tuple(cands[i] for i in gap_witness)
        return ValidationReport(False, EXPANDED_COVER_FAILS,
                                f"centers {centers}: expanding by eps*opt(P)={epsilon * opt_p} "
                                f"leaves more than z={z} weight of P uncovered")
    return ValidationReport(True)
