"""Guard and travel round counts of a decomposition's covers and the capture-time bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..cover import RetractCover
from ..decomposition import TreeDecomposition, tree_centre_and_diameter
from ..graph import Graph
from .controllers import bottleneck_assignment, cover_slots


def guard_rounds(cover: RetractCover) -> int:
    """Rounds until every retract of the cover is guarded (entries guard in parallel)."""
    return max(e.rounds_to_guard for e in cover.entries)


def travel_rounds(g: Graph, source: RetractCover, dest: RetractCover, team_size: int) -> int:
    """Worst-case rounds for a team that last guarded `source` to stand on `dest`'s openings.

    A primary guard may be anywhere in its own retract; spare cops are
    charged over the union of the source cover.
    """
    d = g.distances
    regions = [list(e.support) for e in source.entries for _ in e.opening]
    anywhere = sorted({v for e in source.entries for v in e.support})
    regions += [anywhere] * (team_size - len(regions))
    targets = [s[2] for s in cover_slots(dest)]
    cost = np.array([[d[region, v].max() for v in targets] for region in regions], dtype=np.int64)
    return bottleneck_assignment(cost)[1]


def measure_g_tr(g: Graph, t: TreeDecomposition, covers: Sequence[RetractCover]) -> tuple[int, int]:
    """(g_T, tr_T): slowest bag to guard, slowest relocation between bags at tree distance 1 or 2."""
    m = max(c.total_guards for c in covers)
    g_t = max(guard_rounds(c) for c in covers)
    tr_t = 0
    dist = t.tree_distances
    for a in range(len(t.bags)):
        for b in range(len(t.bags)):
            if 1 <= dist[a][b] <= 2:
                tr_t = max(tr_t, travel_rounds(g, covers[a], covers[b], m))
    return g_t, tr_t


@dataclass(frozen=True)
class CaptureTimeBoundReport:
    g_t: int
    tr_t: int
    diam_t: int
    bound_even: int
    bound_odd: int | None

    @property
    def applicable(self) -> int:
        """The floor variant when the tree diameter is odd, the ceiling form otherwise."""
        return self.bound_odd if self.bound_odd is not None else self.bound_even

    def to_json(self) -> dict:
        return {
            "g_T": self.g_t,
            "tr_T": self.tr_t,
            "diam_T": self.diam_t,
            "bound_even": self.bound_even,
            "bound_odd": self.bound_odd,
            "applicable": self.applicable,
        }


def capture_time_formula(g_t: int, tr_t: int, diam: int) -> CaptureTimeBoundReport:
    up = -(-diam // 2)
    down = diam // 2
    even = g_t * (up + 1) + tr_t * up
    odd = g_t * (down + 1) + tr_t * down if diam % 2 else None
    return CaptureTimeBoundReport(g_t, tr_t, diam, even, odd)


def capture_time_bound(
    g: Graph, t: TreeDecomposition, measured: tuple[int, int] | Sequence[RetractCover]
) -> CaptureTimeBoundReport:
    """Bound from measured (g_T, tr_T), or from covers, which are measured first."""
    if len(measured) == 2 and all(isinstance(x, (int, np.integer)) for x in measured):
        g_t, tr_t = (int(x) for x in measured)
    else:
        g_t, tr_t = measure_g_tr(g, t, measured)
    return capture_time_formula(g_t, tr_t, tree_centre_and_diameter(t)[1])
