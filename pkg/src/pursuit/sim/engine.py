"""Round-by-round game loop with legality checks and trace export."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from ..errors import IllegalMoveError
from ..generators import grid_shape
from ..graph import Graph
from ..robbers import RobberPolicy


class StopGame(Exception):
    """Raised by a robber policy (for instance a human at the keyboard) to abandon the game."""


class Controller(Protocol):
    name: str
    cop_count: int

    def opening(self) -> list[int]: ...

    def move(self, cops: Sequence[int], robber: int) -> list[int]: ...

    def note(self) -> dict: ...


@dataclass(frozen=True)
class Round:
    index: int
    cops: tuple[int, ...]
    robber: int
    note: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"round": self.index, "cops": list(self.cops), "robber": self.robber, "note": self.note}


@dataclass
class SimulationTrace:
    rounds: list[Round]
    outcome: str  # "captured", "timeout" or "incomplete"
    capture_round: int | None
    controller: str = ""
    robber_policy: str = ""
    seed: int = 0

    def __post_init__(self) -> None:
        assert (self.outcome == "captured") == (self.capture_round is not None)

    @property
    def captured(self) -> bool:
        return self.outcome == "captured"

    def header(self) -> dict:
        return {
            "controller": self.controller,
            "robber": self.robber_policy,
            "seed": self.seed,
            "outcome": self.outcome,
            "capture_round": self.capture_round,
            "rounds": len(self.rounds),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header(), sort_keys=True)]
        lines += [json.dumps(r.to_json(), sort_keys=True) for r in self.rounds]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "SimulationTrace":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        head, body = rows[0], rows[1:]
        rounds = [Round(r["round"], tuple(r["cops"]), r["robber"], r["note"]) for r in body]
        return cls(rounds, head["outcome"], head["capture_round"], head["controller"], head["robber"], head["seed"])


def render_board(g: Graph, cops: Sequence[int], robber: int) -> str:
    """Text picture of a grid position: C cop, R robber, X capture, . empty."""
    shape = grid_shape(g)
    if shape is None:
        return f"cops {sorted(cops)}  robber {robber}"
    rows, cols = shape
    lines = []
    for i in range(rows):
        cells = []
        for j in range(cols):
            v = i * cols + j
            here = v in cops
            cells.append("X" if here and v == robber else "C" if here else "R" if v == robber else ".")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def check_move(g: Graph, before: Sequence[int], after: Sequence[int]) -> str | None:
    if len(before) != len(after):
        return f"controller returned {len(after)} positions for {len(before)} cops"
    for i, (a, b) in enumerate(zip(before, after)):
        if not 0 <= b < g.n or b not in g.closed_nbhd[a]:
            return f"cop {i} moved {a} -> {b}"
    return None


def simulate(
    g: Graph,
    controller: Controller,
    robber: RobberPolicy,
    max_rounds: int = 1000,
    seed: int = 0,
) -> SimulationTrace:
    """Play one game; cops open, then cop and robber moves alternate.

    Raises IllegalMoveError (carrying the partial trace) if the controller
    breaks the movement rules. A policy raising StopGame ends the game as
    "incomplete".
    """
    rng = random.Random(seed)
    cops = list(controller.opening())
    rounds: list[Round] = []

    def finish(outcome: str, at: int | None) -> SimulationTrace:
        return SimulationTrace(rounds, outcome, at, controller.name, robber.name, seed)

    if len(cops) != controller.cop_count or not all(0 <= c < g.n for c in cops):
        raise IllegalMoveError(f"bad opening {cops}", [])
    try:
        r = robber.place(g, cops, rng)
    except StopGame:
        return finish("incomplete", None)
    rounds.append(Round(0, tuple(cops), r, controller.note()))
    if r in cops:
        return finish("captured", 0)
    for t in range(1, max_rounds + 1):
        new = list(controller.move(cops, r))
        problem = check_move(g, cops, new)
        if problem:
            raise IllegalMoveError(f"round {t}: {problem}", finish("incomplete", None))
        cops = new
        if r in cops:
            rounds.append(Round(t, tuple(cops), r, controller.note()))
            return finish("captured", t)
        try:
            nxt = robber.move(g, cops, r, rng)
        except StopGame:
            rounds.append(Round(t, tuple(cops), r, controller.note()))
            return finish("incomplete", None)
        assert nxt in g.closed_nbhd[r], f"robber policy {robber.name} moved {r} -> {nxt}"
        r = nxt
        rounds.append(Round(t, tuple(cops), r, controller.note()))
        if r in cops:
            return finish("captured", t)
    return finish("timeout", None)


def sealed_region(t, frontier: int, prev: int) -> set[int]:
    """Vertices in bags on prev's side of frontier, excluding frontier itself."""
    behind: set[int] = set()
    for b in t.component_bags(frontier, prev):
        behind |= t.bag_sets[b]
    return behind - t.bag_sets[frontier]


def reentry_violations(trace: SimulationTrace, t) -> list[int]:
    """Rounds where the robber stands behind the frontier the controller has sealed."""
    bad = []
    for rnd in trace.rounds:
        f, p = rnd.note.get("frontier"), rnd.note.get("prev")
        if f is None or p is None:
            continue
        if rnd.robber in sealed_region(t, f, p):
            bad.append(rnd.index)
    return bad
