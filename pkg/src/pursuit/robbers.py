"""Robber policies used by simulations and guarding checks."""

from __future__ import annotations

import random
from typing import Iterable, Protocol, Sequence

from .graph import Graph
from .solver import GameSolution, INF


class RobberPolicy(Protocol):
    name: str

    def place(self, g: Graph, cops: Sequence[int], rng: random.Random) -> int: ...

    def move(self, g: Graph, cops: Sequence[int], robber: int, rng: random.Random) -> int: ...


def _spread(g: Graph, cops: Sequence[int], v: int) -> tuple[int, int]:
    d = g.distances
    dists = [int(d[c, v]) for c in cops]
    return min(dists), sum(dists)


class StationaryRobber:
    """Places as far from the cops as possible, then never moves."""

    name = "still"

    def place(self, g, cops, rng):
        return max(g.vertices, key=lambda v: (_spread(g, cops, v), -v))

    def move(self, g, cops, robber, rng):
        return robber


class GreedyRobber:
    """Maximises the distance to the nearest cop, then the total distance."""

    name = "greedy"

    def place(self, g, cops, rng):
        return max(g.vertices, key=lambda v: (_spread(g, cops, v), -v))

    def move(self, g, cops, robber, rng):
        return max(g.closed_nbhd[robber], key=lambda v: (_spread(g, cops, v), -v))


class RandomRobber:
    """Uniform over the safest available moves (seeded through the caller's rng)."""

    name = "random"

    def _pick(self, g, cops, options: Iterable[int], rng):
        options = list(options)
        for safe in (2, 1):
            pool = [v for v in options if _spread(g, cops, v)[0] >= safe]
            if pool:
                return rng.choice(pool)
        return rng.choice(options)

    def place(self, g, cops, rng):
        return self._pick(g, cops, g.vertices, rng)

    def move(self, g, cops, robber, rng):
        return self._pick(g, cops, g.closed_nbhd[robber], rng)


class TableRobber:
    """Optimal robber read from a solved game: maximises optimal-play capture time.

    The table must have been solved for the same number of cops. When the
    cops stand on positions outside the table's cop domain the robber falls
    back to the greedy rule.
    """

    name = "optimal"

    def __init__(self, solution: GameSolution) -> None:
        self.solution = solution
        self._fallback = GreedyRobber()

    def _known(self, cops) -> bool:
        return len(cops) == self.solution.k and tuple(sorted(cops)) in self.solution.index

    def place(self, g, cops, rng):
        if not self._known(cops):
            return self._fallback.place(g, cops, rng)
        c = self.solution._state(cops)
        row = self.solution.cop_val[c]
        # prefer the longest survival; break ties by distance from the cops
        return max(g.vertices, key=lambda v: (int(row[v]), _spread(g, cops, v), -v))

    def move(self, g, cops, robber, rng):
        if not self._known(cops):
            return self._fallback.move(g, cops, robber, rng)
        c = self.solution._state(cops)
        row = self.solution.cop_val[c]
        return max(g.closed_nbhd[robber], key=lambda v: (int(row[v]), _spread(g, cops, v), -v))


class RushRobber:
    """Heads along a shortest path to the nearest vertex of `targets`, then stays."""

    name = "rush"

    def __init__(self, targets: Iterable[int], start: int | None = None) -> None:
        self.targets = frozenset(targets)
        self.start = start

    def place(self, g, cops, rng):
        if self.start is not None:
            return self.start
        d = g.distances
        return max(g.vertices, key=lambda v: (min(int(d[v, t]) for t in self.targets), -v))

    def move(self, g, cops, robber, rng):
        if robber in self.targets:
            return robber
        d = g.distances
        return min(g.closed_nbhd[robber], key=lambda v: (min(int(d[v, t]) for t in self.targets), v))


POLICIES = {"still": StationaryRobber, "greedy": GreedyRobber, "random": RandomRobber}


__all__ = [
    "INF",
    "RobberPolicy",
    "StationaryRobber",
    "GreedyRobber",
    "RandomRobber",
    "TableRobber",
    "RushRobber",
    "POLICIES",
]
