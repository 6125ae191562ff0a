"""Exact k-cop pursuit solver by backward induction.

One engine serves two games:

* the ordinary game: cops move anywhere in the graph and win by landing on
  the robber;
* the shadow game used for guarding a retract: cops are confined to the
  image vertex set and win by landing on ``f(robber)``.

Both are encoded by a cop domain and a ``target`` map from robber vertices to
the vertex a cop must occupy. Values count cop moves until capture (round 0
placement excluded). Cop positions are kept as sorted tuples, so permuted
placements share one state.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BoundNotFoundError, InvalidInputError, ParseError, ResourceBudgetError
from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 50_000_000
INF = np.iinfo(np.int32).max // 2
# rough cap on the temporary array built per sweep chunk
_CHUNK_CELLS = 4_000_000


def state_count(domain_size: int, n: int, k: int) -> int:
    """Number of game states: cop multisets x robber vertices x side to move."""
    return comb(domain_size + k - 1, k) * n * 2


@dataclass(eq=False)
class GameSolution:
    """Solved pursuit game with k cops.

    `cop_val[c, r]` is the number of cop moves still needed with the cops on
    tuple c, the robber on r and the cops to move; `rob_val` is the same
    quantity with the robber to move. INF marks robber wins.
    """

    host: Graph = field(repr=False)
    k: int
    domain: tuple[int, ...] = field(repr=False)
    target: tuple[int, ...] = field(repr=False)
    tuples: list[tuple[int, ...]] = field(repr=False)
    succ: list[np.ndarray] = field(repr=False)
    moves: list[list[tuple[int, ...]]] = field(repr=False)
    cop_val: np.ndarray = field(repr=False)
    rob_val: np.ndarray = field(repr=False)
    opening: tuple[int, ...] = ()
    cops_win: bool = False
    capture_time: int | None = None

    def __post_init__(self) -> None:
        self.index = {c: i for i, c in enumerate(self.tuples)}

    @property
    def states(self) -> int:
        return 2 * self.cop_val.size

    def _state(self, cops: Sequence[int]) -> int:
        return self.index[tuple(sorted(cops))]

    def captured(self, cops: Sequence[int], robber: int) -> bool:
        return self.target[robber] in cops

    def value(self, cops: Sequence[int], robber: int, cops_to_move: bool = True) -> float:
        table = self.cop_val if cops_to_move else self.rob_val
        v = int(table[self._state(cops), robber])
        return float("inf") if v >= INF else v

    def cop_move(self, cops: Sequence[int], robber: int) -> tuple[int, ...]:
        """Optimal cop reply, returned aligned with the order of `cops`."""
        if self.captured(cops, robber):
            return tuple(cops)
        order = sorted(range(len(cops)), key=lambda i: cops[i])
        c = self._state([cops[i] for i in order])
        vals = self.rob_val[self.succ[c], robber]
        best = self.moves[c][int(np.argmin(vals))]
        out = [0] * len(cops)
        for slot, i in enumerate(order):
            out[i] = best[slot]
        return tuple(out)

    def robber_move(self, cops: Sequence[int], robber: int) -> int:
        """Robber reply maximising the remaining optimal-play capture time."""
        c = self._state(cops)
        options = self.host.closed_nbhd[robber]
        vals = self.cop_val[c, list(options)]
        return options[int(np.argmax(vals))]

    def robber_place(self, cops: Sequence[int]) -> int:
        c = self._state(cops)
        return int(np.argmax(self.cop_val[c]))

    def worst_case_from(self, cops: Sequence[int]) -> float:
        """Max over robber starts of the capture time with these cops placed."""
        v = int(self.cop_val[self._state(cops)].max())
        return float("inf") if v >= INF else v

    # -- textual cache ---------------------------------------------------

    def to_text(self) -> str:
        lines = [
            "pursuit-solution 1",
            f"graph {graph_hash(self.host)}",
            f"k {self.k}",
            "domain " + " ".join(map(str, self.domain)),
            "target " + " ".join(map(str, self.target)),
        ]
        for c, cops in enumerate(self.tuples):
            for r in range(self.host.n):
                cv, rv = int(self.cop_val[c, r]), int(self.rob_val[c, r])
                lines.append(
                    " ".join(map(str, cops))
                    + f" | {r} {'inf' if cv >= INF else cv} {'inf' if rv >= INF else rv}"
                )
        return "\n".join(lines) + "\n"


def graph_hash(g: Graph) -> str:
    """Hash of the labelled edge list (not an isomorphism invariant)."""
    text = f"{g.n};" + ";".join(f"{u},{v}" for u, v in g.edges())
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _enumerate(host: Graph, domain: Sequence[int], k: int):
    inside = set(domain)
    local_nbhd = {v: tuple(w for w in host.closed_nbhd[v] if w in inside) for v in domain}
    tuples = list(itertools.combinations_with_replacement(domain, k))
    index = {c: i for i, c in enumerate(tuples)}
    succ, moves = [], []
    for c in tuples:
        seen: dict[int, tuple[int, ...]] = {}
        for mv in itertools.product(*(local_nbhd[v] for v in c)):
            key = index[tuple(sorted(mv))]
            if key not in seen:
                seen[key] = mv
        succ.append(np.fromiter(seen.keys(), dtype=np.int64))
        moves.append(list(seen.values()))
    return tuples, succ, moves


def _padded(rows: list[np.ndarray]) -> np.ndarray:
    width = max(len(r) for r in rows)
    out = np.empty((len(rows), width), dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
        out[i, len(r) :] = r[0]
    return out


def _solve_tables(host, domain, target, k, tuples, succ):
    n = host.n
    ncop = len(tuples)
    target_arr = np.asarray(target)
    captured = np.zeros((ncop, n), dtype=bool)
    for c, cops in enumerate(tuples):
        captured[c] = np.isin(target_arr, cops)
    nbr = _padded([np.asarray(host.closed_nbhd[r]) for r in range(n)])
    succ_pad = _padded(succ)
    cop_val = np.where(captured, 0, INF).astype(np.int32)
    rob_val = np.zeros_like(cop_val)
    step = max(1, _CHUNK_CELLS // max(1, succ_pad.shape[1] * n))
    while True:
        # robber to move: maximise over closed neighbourhood; landing on target is 0
        rob_val = cop_val[:, nbr].max(axis=2)
        rob_val[captured] = 0
        new = np.empty_like(cop_val)
        for lo in range(0, ncop, step):
            block = rob_val[succ_pad[lo : lo + step]].min(axis=1)
            new[lo : lo + step] = np.minimum(block.astype(np.int64) + 1, INF)
        new[captured] = 0
        if np.array_equal(new, cop_val):
            break
        cop_val = new
    return cop_val, rob_val


def solve_pursuit(
    host: Graph,
    k: int,
    domain: Sequence[int] | None = None,
    target: Sequence[int] | None = None,
    budget: int = DEFAULT_STATE_BUDGET,
) -> GameSolution:
    """Solve the generic pursuit game; see the module docstring."""
    if k < 1:
        raise InvalidInputError("need at least one cop")
    domain = tuple(range(host.n)) if domain is None else tuple(sorted(set(domain)))
    target = tuple(range(host.n)) if target is None else tuple(target)
    if not domain:
        raise InvalidInputError("cop domain is empty")
    if any(t not in set(domain) for t in target):
        raise InvalidInputError("every target must lie in the cop domain")
    states = state_count(len(domain), host.n, k)
    if states > budget:
        raise ResourceBudgetError(
            f"{states} game states for k={k} exceed the state budget {budget}", budget
        )
    tuples, succ, moves = _enumerate(host, domain, k)
    cop_val, rob_val = _solve_tables(host, domain, target, k, tuples, succ)
    worst = cop_val.max(axis=1)
    best = int(np.argmin(worst))
    win = bool(worst[best] < INF)
    sol = GameSolution(
        host=host,
        k=k,
        domain=domain,
        target=target,
        tuples=tuples,
        succ=succ,
        moves=moves,
        cop_val=cop_val,
        rob_val=rob_val,
        opening=tuples[best],
        cops_win=win,
        capture_time=int(worst[best]) if win else None,
    )
    log.debug("solved k=%d on %r: %d states, win=%s", k, host, sol.states, win)
    return sol


def solve_k_cop_game(g: Graph, k: int, budget: int = DEFAULT_STATE_BUDGET) -> GameSolution:
    """Ordinary Cops and Robbers with k cops; cops place first, then the robber."""
    if not g.is_connected():
        raise InvalidInputError("the game solver requires a connected graph")
    return solve_pursuit(g, k, budget=budget)


def cop_number(g: Graph, k_max: int = 4, budget: int = DEFAULT_STATE_BUDGET) -> int:
    return cop_number_solution(g, k_max, budget).k


def cop_number_solution(g: Graph, k_max: int = 4, budget: int = DEFAULT_STATE_BUDGET) -> GameSolution:
    """Winning solution for the smallest k <= k_max."""
    for k in range(1, k_max + 1):
        sol = solve_k_cop_game(g, k, budget)
        if sol.cops_win:
            return sol
    raise BoundNotFoundError(f"no k <= {k_max} cops win on {g!r}", k_max)


def is_copwin_dismantlable(g: Graph) -> tuple[bool, list[int]]:
    """Greedy dismantling: delete a vertex whose closed neighbourhood sits inside another's.

    Returns (dismantlable, deletion order). Greedy order is complete because
    deleting a dominated vertex is a retraction, and retracts of
    dismantlable graphs stay dismantlable.
    """
    if not g.is_connected():
        raise InvalidInputError("dismantlability is checked on connected graphs")
    alive = set(range(g.n))
    order: list[int] = []
    while len(alive) > 1:
        found = None
        for u in sorted(alive):
            nu = (g.adj[u] & alive) | {u}
            for v in sorted(nu - {u}):
                if nu <= (g.adj[v] & alive) | {v}:
                    found = u
                    break
            if found is not None:
                break
        if found is None:
            return False, order
        alive.remove(found)
        order.append(found)
    order.extend(alive)
    return True, order


class SolutionCache:
    """Directory of solved games keyed by graph hash and k, one state per line."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, g: Graph, k: int) -> Path:
        return self.root / f"{graph_hash(g)}-k{k}.txt"

    def save(self, sol: GameSolution) -> Path:
        p = self.path(sol.host, sol.k)
        p.write_text(sol.to_text())
        return p

    def load(self, g: Graph, k: int) -> GameSolution | None:
        p = self.path(g, k)
        if not p.exists():
            return None
        return solution_from_text(p.read_text(), g)

    def solve(self, g: Graph, k: int, budget: int = DEFAULT_STATE_BUDGET) -> GameSolution:
        sol = self.load(g, k)
        if sol is None:
            sol = solve_k_cop_game(g, k, budget)
            self.save(sol)
        return sol


def solution_from_text(text: str, host: Graph) -> GameSolution:
    lines = text.splitlines()
    if not lines or lines[0] != "pursuit-solution 1":
        raise ParseError("not a pursuit-solution file", 1)
    if lines[1].split()[1] != graph_hash(host):
        raise ParseError("cached solution belongs to a different graph", 2)
    k = int(lines[2].split()[1])
    domain = tuple(int(x) for x in lines[3].split()[1:])
    target = tuple(int(x) for x in lines[4].split()[1:])
    tuples, succ, moves = _enumerate(host, domain, k)
    index = {c: i for i, c in enumerate(tuples)}
    cop_val = np.full((len(tuples), host.n), INF, dtype=np.int32)
    rob_val = np.full_like(cop_val, INF)
    for lineno, line in enumerate(lines[5:], start=6):
        left, _, right = line.partition("|")
        try:
            cops = tuple(int(x) for x in left.split())
            r, cv, rv = right.split()
            c = index[cops]
            cop_val[c, int(r)] = INF if cv == "inf" else int(cv)
            rob_val[c, int(r)] = INF if rv == "inf" else int(rv)
        except (ValueError, KeyError):
            raise ParseError(f"bad state line {line!r}", lineno) from None
    worst = cop_val.max(axis=1)
    best = int(np.argmin(worst))
    win = bool(worst[best] < INF)
    return GameSolution(
        host, k, domain, target, tuples, succ, moves, cop_val, rob_val,
        tuples[best], win, int(worst[best]) if win else None,
    )
