"""Fully dynamic (insert/delete) coreset maintenance over the integer grid
[Delta]^d.

A hierarchy of grids G_0..G_L (cell side 2^i, L = ceil(log2 Delta)) is kept;
each level carries an s-sparse recovery sketch and a distinct-count sketch
over its cell-frequency vector, with s = k*(4*sqrt(d)/eps)^d + z. A report
finds the finest level whose estimated nonempty-cell count is small enough,
recovers its cells exactly, and returns each cell's center weighted by its
exact count (a relaxed coreset: representatives are cell centers, not input
points).

An optional exact shadow (per-level cell -> count maps) supports test mode:
it enforces strict-turnstile discipline and answers reports without
randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, SketchFailureError
from .metric import WeightedPoint
from .sketches import F0Sketch, SparseRecoverySketch, _mix64

F0_EPSILON = 1.0 / 3.0  # level selection only needs a coarse estimate


@dataclass(frozen=True)
class GridConfig:
    """Grid hierarchy over [Delta]^d; Delta is rounded up to a power of two."""

    delta: int
    d: int

    def __post_init__(self):
        if self.delta < 1 or self.d < 1:
            raise InputError("need Delta >= 1 and d >= 1")
        object.__setattr__(self, "delta", 1 << max(0, (self.delta - 1).bit_length()))

    @property
    def top_level(self) -> int:
        return max(1, self.delta).bit_length() - 1  # log2 of the power of two

    @property
    def levels(self) -> int:
        return self.top_level + 1

    def cells_per_axis(self, level: int) -> int:
        return max(1, self.delta >> level)

    def cell_count(self, level: int) -> int:
        return self.cells_per_axis(level) ** self.d

    def cell_of(self, point, level: int) -> tuple:
        if not (0 <= level <= self.top_level):
            raise InputError(f"level {level} outside 0..{self.top_level}")
        idx = []
        for c in point:
            ci = int(c)
            if ci != c or not (1 <= ci <= self.delta):
                raise InputError(f"coordinate {c} outside integer range [1, {self.delta}]")
            idx.append((ci - 1) >> level)
        if len(idx) != self.d:
            raise InputError(f"point dimension {len(idx)} != {self.d}")
        return tuple(idx)

    def cell_id(self, index: tuple, level: int) -> int:
        per_axis = self.cells_per_axis(level)
        out = 0
        for v in index:
            out = out * per_axis + v
        return out

    def cell_index(self, ident: int, level: int) -> tuple:
        per_axis = self.cells_per_axis(level)
        idx = []
        for _ in range(self.d):
            idx.append(ident % per_axis)
            ident //= per_axis
        return tuple(reversed(idx))

    def cell_center(self, index: tuple, level: int) -> tuple:
        side = 1 << level
        return tuple(v * side + (side + 1) / 2.0 for v in index)


@dataclass(frozen=True)
class DynReport:
    points: tuple          # weighted cell centers
    level: int
    from_exact: bool


class DynamicCoresetState:
    """Per-level sketches (and optionally an exact shadow) over [Delta]^d.

    ``with_shadow=True`` keeps exact per-level cell counts, enforces the
    strict turnstile discipline and enables ``report(exact=True)``;
    ``with_sketches=False`` skips sketch allocation for shadow-only replays.
    """

    def __init__(self, delta: int, d: int, k: int, z: int, epsilon: float,
                 delta_fail: float = 0.1, seed: int = 0,
                 with_sketches: bool = True, with_shadow: bool = False):
        if k < 1 or z < 0 or not (0 < epsilon <= 1):
            raise InputError("need k >= 1, z >= 0, 0 < epsilon <= 1")
        if not with_sketches and not with_shadow:
            raise InputError("enable sketches, the shadow, or both")
        self.grid = GridConfig(delta, d)
        self.k, self.z, self.epsilon = k, z, epsilon
        self.delta_fail = delta_fail
        self.seed = seed
        self.s = math.ceil(k * (4.0 * math.sqrt(d) / epsilon) ** d - 1e-9) + z
        self.live_count = 0
        self.ops = 0
        self.shadow = [dict() for _ in range(self.grid.levels)] if with_shadow else None
        self.sr = None
        self.f0 = None
        if with_sketches:
            # per-query failure budget: delta / (levels * assumed stream length Delta^(3d))
            queries = self.grid.levels * self.grid.delta ** (3 * d)
            per_query = delta_fail / max(queries, 1)
            self.sr = []
            self.f0 = []
            for lv in range(self.grid.levels):
                u = self.grid.cell_count(lv)
                self.sr.append(SparseRecoverySketch(self.s, per_query, u,
                                                    seed=_mix64(seed + 7919 * lv + 1)))
                self.f0.append(F0Sketch(F0_EPSILON, per_query, u,
                                        seed=_mix64(seed + 7919 * lv + 2)))

    def update(self, point, sign: int) -> None:
        if sign not in (1, -1):
            raise InputError("sign must be +1 or -1")
        cells = [self.grid.cell_of(point, lv) for lv in range(self.grid.levels)]
        if self.shadow is not None and sign < 0:
            c0 = cells[0]
            if self.shadow[0].get(c0, 0) <= 0:
                raise InputError(f"deletion of absent point {tuple(point)} (strict turnstile)")
        self.ops += 1
        self.live_count += sign
        for lv, cell in enumerate(cells):
            if self.shadow is not None:
                m = self.shadow[lv]
                c = m.get(cell, 0) + sign
                if c:
                    m[cell] = c
                else:
                    m.pop(cell, None)
            if self.sr is not None:
                ident = self.grid.cell_id(cell, lv)
                self.sr[lv].update(ident, sign)
                self.f0[lv].update(ident, sign)

    def apply(self, ops) -> None:
        for sign, point in ops:
            self.update(point, sign)

    def sr_query_level(self, level: int):
        """Recovered {cell index: count} at a level, or None on sketch failure."""
        res = self.sr[level].query()
        if res is None:
            return None
        return {self.grid.cell_index(i, level): c for i, c in res.items()}

    def f0_estimate_level(self, level: int) -> float:
        return self.f0[level].query()

    def _report_from_cells(self, cells: dict, level: int, from_exact: bool) -> DynReport:
        pts = tuple(
            WeightedPoint(self.grid.cell_center(idx, level), int(c))
            for idx, c in sorted(cells.items())
        )
        return DynReport(points=pts, level=level, from_exact=from_exact)

    def report(self, exact: bool = False) -> DynReport:
        if self.live_count <= 0:
            raise InputError("report requires at least one live point")
        if exact:
            if self.shadow is None:
                raise InputError("exact report requires the shadow")
            for lv in range(self.grid.levels):
                if len(self.shadow[lv]) <= self.s:
                    return self._report_from_cells(self.shadow[lv], lv, True)
            raise AssertionError("top level always has <= s cells")
        if self.sr is None:
            raise InputError("sketch report requires sketches")
        start = self.grid.levels - 1
        for lv in range(self.grid.levels):
            try:
                est = self.f0[lv].query()
            except SketchFailureError:
                continue
            if est <= (1 + F0_EPSILON) * self.s:
                start = lv
                break
        for lv in range(start, self.grid.levels):
            res = self.sr_query_level(lv)
            if res is not None:
                return self._report_from_cells(res, lv, False)
        raise SketchFailureError("sparse recovery failed at every level")

    def merge(self, other: "DynamicCoresetState") -> None:
        """Absorb another shard built with identical parameters and seed.

        Sketches add bucket-wise (linearity); shadows and counters add too,
        so shard-then-merge ingestion equals sequential ingestion.
        """
        if (self.grid, self.k, self.z, self.epsilon, self.seed, self.s) != \
                (other.grid, other.k, other.z, other.epsilon, other.seed, other.s):
            raise InputError("can only merge states with identical configuration")
        if (self.shadow is None) != (other.shadow is None) or \
                (self.sr is None) != (other.sr is None):
            raise InputError("can only merge states with identical modes")
        self.live_count += other.live_count
        self.ops += other.ops
        if self.shadow is not None:
            for lv in range(self.grid.levels):
                for cell, c in other.shadow[lv].items():
                    total = self.shadow[lv].get(cell, 0) + c
                    if total:
                        self.shadow[lv][cell] = total
                    else:
                        self.shadow[lv].pop(cell, None)
        if self.sr is not None:
            for mine, theirs in zip(self.sr, other.sr):
                mine.merge(theirs)
            for mine, theirs in zip(self.f0, other.f0):
                mine.merge(theirs)

    def sketch_bytes(self) -> int:
        if self.sr is None:
            return 0
        return sum(sk.nominal_bytes() for sk in self.sr) + sum(sk.nominal_bytes() for sk in self.f0)

    def digest(self) -> tuple:
        if self.sr is None:
            raise InputError("digest requires sketches")
        return (tuple(sk.digest() for sk in self.sr), tuple(sk.digest() for sk in self.f0))
