"""Cop controllers that execute the constructive strategies behind the bounds.

A controller is stateful: `opening()` resets it and returns the initial cop
positions; `move(cops, robber)` returns the next positions (one entry per
cop, each a neighbour or a pass) and `note()` describes the current phase
for the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..cover import RetractCover
from ..decomposition import (
    TreeDecomposition,
    pairwise_clique_intersections,
    robber_subtree,
    separator,
    tree_centre_and_diameter,
)
from ..errors import ConfigurationError, InvalidInputError
from ..graph import Graph, is_clique
from ..solver import GameSolution


def step_towards(g: Graph, here: int, goal: int) -> int:
    """Lowest-id neighbour one step closer to `goal` along a shortest path."""
    if here == goal:
        return here
    d = g.distances
    return min(w for w in g.adj[here] if d[w, goal] == d[here, goal] - 1)


def bottleneck_assignment(cost: np.ndarray) -> tuple[list[int], int]:
    """Assign every cop (row) to a slot (column) so each slot gets at least one cop.

    Minimises the largest cost used. Returns (slot per cop, bottleneck).
    """
    m, t = cost.shape
    if t == 0:
        return [-1] * m, 0
    if m < t:
        raise ConfigurationError(f"{m} cops cannot fill {t} cover slots")
    for thr in np.unique(cost).tolist():
        ok = cost <= thr
        if not ok.any(axis=1).all():
            continue
        bad = (~ok).T.astype(np.int64)
        rows, cols = linear_sum_assignment(bad)
        if bad[rows, cols].sum():
            continue
        slot = [-1] * m
        for s, c in zip(rows, cols):
            slot[c] = int(s)
        for c in range(m):
            if slot[c] < 0:
                slot[c] = int(np.argmin(cost[c]))
        return slot, int(thr)
    raise AssertionError("unreachable: the largest threshold admits every assignment")


def cover_slots(cover: RetractCover) -> list[tuple[int, int, int]]:
    """(entry index, cop index within entry, opening vertex) for every guard slot."""
    return [
        (i, j, v)
        for i, entry in enumerate(cover.entries)
        for j, v in enumerate(entry.opening)
    ]


class Team:
    """A group of cops that travels to, and then guards, one retract cover at a time."""

    def __init__(self, g: Graph, ids: Sequence[int]) -> None:
        self.g = g
        self.ids = list(ids)
        self.reset()

    def reset(self) -> None:
        self.cover: RetractCover | None = None
        self.bag: int | None = None
        self.mode = "idle"
        self.slot: dict[int, int] = {}
        self.slots: list[tuple[int, int, int]] = []
        self.travel_rounds = 0

    def place(self, cover: RetractCover, bag: int) -> list[int]:
        """Opening placement: primaries on their slots, spares stacked round-robin."""
        self.cover, self.bag = cover, bag
        self.slots = cover_slots(cover)
        self.slot = {c: k % len(self.slots) for k, c in enumerate(self.ids)}
        self.mode = "guard"
        return [self.slots[self.slot[c]][2] for c in self.ids]

    def send(self, cover: RetractCover, bag: int, pos: Sequence[int]) -> None:
        self.cover, self.bag = cover, bag
        self.slots = cover_slots(cover)
        d = self.g.distances
        cost = np.array([[d[pos[c], s[2]] for s in self.slots] for c in self.ids], dtype=np.int64)
        assignment, self.travel_rounds = bottleneck_assignment(cost)
        self.slot = dict(zip(self.ids, assignment))
        self.mode = "travel"
        if self.arrived(pos):
            self.mode = "guard"

    def arrived(self, pos: Sequence[int]) -> bool:
        return all(pos[c] == self.slots[self.slot[c]][2] for c in self.ids)

    def _primaries(self) -> dict[int, int]:
        first: dict[int, int] = {}
        for c in self.ids:
            first.setdefault(self.slot[c], c)
        return first

    def guarded(self, pos: Sequence[int], robber: int) -> bool:
        if self.mode != "guard":
            return False
        prim = self._primaries()
        for i, entry in enumerate(self.cover.entries):
            cops = [pos[prim[k]] for k, s in enumerate(self.slots) if s[0] == i]
            if entry.shadow(robber) not in cops:
                return False
        return True

    def step(self, pos: Sequence[int], robber: int, out: list[int]) -> None:
        """Write this team's moves into `out`."""
        if self.mode == "idle":
            return
        if self.mode == "travel":
            for c in self.ids:
                out[c] = step_towards(self.g, pos[c], self.slots[self.slot[c]][2])
            return
        prim = self._primaries()
        for i, entry in enumerate(self.cover.entries):
            keys = [k for k, s in enumerate(self.slots) if s[0] == i]
            new = entry.cop_move([pos[prim[k]] for k in keys], robber)
            for k, v in zip(keys, new):
                out[prim[k]] = v
        for c in self.ids:
            p = prim[self.slot[c]]
            if p != c:
                out[c] = out[p]

    def after_move(self, pos: Sequence[int]) -> None:
        if self.mode == "travel" and self.arrived(pos):
            self.mode = "guard"


def next_bag_towards(t: TreeDecomposition, frontier: int, robber: int) -> int:
    """Neighbour of `frontier` on the shortest tree path to a bag containing the robber."""
    sub = robber_subtree(t, robber)
    dist = t.tree_distances[frontier]
    nearest = min(sub, key=lambda b: (dist[b], b))
    return t.tree_path(frontier, nearest)[1]


def _capture_if_adjacent(g: Graph, pos: Sequence[int], robber: int, out: list[int]) -> None:
    if robber in out:
        return
    for c, p in enumerate(pos):
        if robber in g.closed_nbhd[p]:
            out[c] = robber
            return


@dataclass
class Frontier:
    bag: int | None = None
    prev: int | None = None
    target: int | None = None
    history: list[int] = field(default_factory=list)


class LeapController:
    """Two teams of m cops leapfrogging along the tree towards the robber.

    m is the largest total guard number over the supplied bag covers. With
    an odd tree diameter the teams open on the two centre bags.
    """

    name = "thm1"

    def __init__(self, g: Graph, t: TreeDecomposition, covers: Sequence[RetractCover]) -> None:
        if len(covers) != len(t.bags):
            raise ConfigurationError("need one cover per bag")
        for b, cover in enumerate(covers):
            if cover is None or not set(t.bags[b]) <= cover.covered():
                raise ConfigurationError(f"cover for bag {b} is missing or incomplete")
        self.g, self.t, self.covers = g, t, list(covers)
        self.m = max(c.total_guards for c in covers)
        self.cop_count = 2 * self.m
        self.centre, self.diameter = tree_centre_and_diameter(t)
        self.teams = (Team(g, range(self.m)), Team(g, range(self.m, 2 * self.m)))

    def opening(self) -> list[int]:
        for team in self.teams:
            team.reset()
        self.phase = "start"
        self.front = Frontier()
        self.holder = self.mover = None
        bags = (self.centre[0], self.centre[-1])
        pos = [0] * self.cop_count
        for team, bag in zip(self.teams, bags):
            for c, v in zip(team.ids, team.place(self.covers[bag], bag)):
                pos[c] = v
        return pos

    def _decide(self, pos: Sequence[int], robber: int) -> None:
        t = self.t
        if self.front.bag is None:
            a, b = self.teams
            if a.bag == b.bag:
                self.holder, self.mover = a, b
                self.front = Frontier(a.bag, None, None, [a.bag])
                if robber in t.bag_sets[a.bag]:
                    self.phase = "hold"
                    return
            else:
                if robber in t.bag_sets[a.bag] or robber in t.bag_sets[b.bag]:
                    self.phase = "hold"
                    return
                # the centre bag on the robber's side becomes the frontier
                toward = next_bag_towards(t, a.bag, robber)
                if toward == b.bag:
                    self.holder, self.mover = b, a
                else:
                    self.holder, self.mover = a, b
                self.front = Frontier(self.holder.bag, self.mover.bag, None, [a.bag, b.bag])
        f = self.front
        if robber in t.bag_sets[f.bag]:
            self.phase = "hold"
            return
        nxt = next_bag_towards(t, f.bag, robber)
        if nxt == f.prev:
            raise AssertionError(f"robber escaped behind bag {f.bag} into bag {nxt}")
        f.target = nxt
        self.mover.send(self.covers[nxt], nxt, pos)
        self.phase = "advance"

    def move(self, cops: Sequence[int], robber: int) -> list[int]:
        pos = list(cops)
        if self.phase in ("ready", "hold"):
            self._decide(pos, robber)
        out = list(pos)
        for team in self.teams:
            team.step(pos, robber, out)
        _capture_if_adjacent(self.g, pos, robber, out)
        for team in self.teams:
            team.after_move(out)
        if self.phase == "start":
            if all(team.guarded(out, robber) for team in self.teams):
                self.phase = "ready"
        elif self.phase == "advance" and self.mover.guarded(out, robber):
            f = self.front
            f.prev, f.bag, f.target = f.bag, f.target, None
            f.history.append(f.bag)
            self.holder, self.mover = self.mover, self.holder
            self.mover.mode = "idle"
            self.phase = "ready"
        return out

    def note(self) -> dict:
        f = self.front
        return {"phase": self.phase, "frontier": f.bag, "prev": f.prev, "next": f.target}


class CliqueTreeController:
    """One cop walking a clique tree: each move keeps it inside the current clique bag."""

    name = "thm-i"

    def __init__(self, g: Graph, t: TreeDecomposition) -> None:
        for b, bag in enumerate(t.bags):
            if not is_clique(g, bag):
                raise ConfigurationError(f"bag {b} is not a clique")
        self.g, self.t = g, t
        self.cop_count = 1
        self.centre, self.diameter = tree_centre_and_diameter(t)

    def opening(self) -> list[int]:
        self.front = Frontier(self.centre[0], None, None, [self.centre[0]])
        self.phase = "chase"
        return [self.t.bags[self.centre[0]][0]]

    def move(self, cops: Sequence[int], robber: int) -> list[int]:
        cop = cops[0]
        if robber in self.g.closed_nbhd[cop]:
            self.phase = "capture"
            return [robber]
        t, f = self.t, self.front
        while True:
            nxt = next_bag_towards(t, f.bag, robber)
            if nxt == f.prev:
                raise AssertionError("robber escaped behind the cop's clique")
            if cop in t.bag_sets[nxt]:
                f.prev, f.bag = f.bag, nxt
                f.history.append(nxt)
                continue
            f.target = nxt
            return [min(separator(t, f.bag, nxt))]

    def note(self) -> dict:
        f = self.front
        return {"phase": self.phase, "frontier": f.bag, "prev": f.prev, "next": f.target}


class RelayController:
    """m guards plus one relay cop parked on the clique separating frontier and next bag."""

    name = "thm-main2"

    def __init__(self, g: Graph, t: TreeDecomposition, covers: Sequence[RetractCover]) -> None:
        if not pairwise_clique_intersections(g, t):
            raise InvalidInputError("bags do not meet in cliques")
        if len(covers) != len(t.bags):
            raise ConfigurationError("need one cover per bag")
        self.g, self.t, self.covers = g, t, list(covers)
        self.m = max(c.total_guards for c in covers)
        self.cop_count = self.m + 1
        self.relay = self.m
        self.centre, self.diameter = tree_centre_and_diameter(t)
        self.team = Team(g, range(self.m))

    def opening(self) -> list[int]:
        self.team.reset()
        c = self.centre[0]
        pos = self.team.place(self.covers[c], c)
        self.front = Frontier(c, None, None, [c])
        self.phase = "start"
        self.relay_goal: int | None = None
        return pos + [pos[0]]

    def move(self, cops: Sequence[int], robber: int) -> list[int]:
        pos = list(cops)
        t, f, team = self.t, self.front, self.team
        if self.phase == "ready":
            if robber in t.bag_sets[f.bag]:
                self.phase = "hold"
            else:
                nxt = next_bag_towards(t, f.bag, robber)
                if nxt == f.prev:
                    raise AssertionError("robber escaped behind the frontier")
                f.target = nxt
                sep = separator(t, f.bag, nxt)
                d = self.g.distances
                here = pos[self.relay]
                self.relay_goal = min(sep, key=lambda v: (d[here, v], v)) if sep else here
                self.phase = "relay"
        if self.phase == "relay" and pos[self.relay] == self.relay_goal:
            team.send(self.covers[f.target], f.target, pos)
            self.phase = "advance"
        out = list(pos)
        team.step(pos, robber, out)
        if self.phase == "relay":
            out[self.relay] = step_towards(self.g, pos[self.relay], self.relay_goal)
        _capture_if_adjacent(self.g, pos, robber, out)
        team.after_move(out)
        if self.phase == "start" and team.guarded(out, robber):
            self.phase = "ready"
        elif self.phase == "advance" and team.guarded(out, robber):
            f.prev, f.bag, f.target = f.bag, f.target, None
            f.history.append(f.bag)
            self.phase = "ready"
        return out

    def note(self) -> dict:
        f = self.front
        return {"phase": self.phase, "frontier": f.bag, "prev": f.prev, "next": f.target}


class TableController:
    """k cops following a solved game's optimal strategy, or chasing greedily when it is lost."""

    name = "table"

    def __init__(self, g: Graph, k: int, solution: GameSolution | None = None) -> None:
        self.g, self.cop_count = g, k
        self.solution = solution if solution is not None and solution.cops_win else None

    def opening(self) -> list[int]:
        if self.solution is not None:
            return list(self.solution.opening)
        return [0] * self.cop_count

    def move(self, cops: Sequence[int], robber: int) -> list[int]:
        if self.solution is not None:
            return list(self.solution.cop_move(cops, robber))
        return [step_towards(self.g, c, robber) for c in cops]

    def note(self) -> dict:
        return {"phase": "optimal" if self.solution is not None else "chase"}
