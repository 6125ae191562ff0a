"""Retractions onto induced subgraphs and guard numbers via the shadow game.

A retract H of G is guarded once some cop stands on f(robber): every robber
step maps to a step or a pass inside H, so that cop can keep following the
shadow, and a robber entering H (where f is the identity) is caught on the
next cop move.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BoundNotFoundError, InvalidInputError, ResourceBudgetError
from .graph import Graph, InducedSubgraph, is_clique, is_isometric_path, vertex_set
from .solver import DEFAULT_STATE_BUDGET, GameSolution, solve_pursuit

DEFAULT_SEARCH_BUDGET = 1_000_000


@dataclass(frozen=True)
class Retraction:
    host: Graph = field(repr=False, compare=False)
    support: tuple[int, ...]
    f: tuple[int, ...]

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.support)

    @property
    def image(self) -> InducedSubgraph:
        return InducedSubgraph(self.host, self.support)

    def violations(self) -> list[str]:
        g, s = self.host, self.members
        out = []
        if len(self.f) != g.n:
            return [f"map has {len(self.f)} entries for {g.n} vertices"]
        for x in range(g.n):
            if self.f[x] not in s:
                out.append(f"f({x})={self.f[x]} leaves the image")
        for x in self.support:
            if self.f[x] != x:
                out.append(f"f({x})={self.f[x]} but {x} is in the image")
        for x, y in g.edges():
            a, b = self.f[x], self.f[y]
            if a != b and not g.has_edge(a, b):
                out.append(f"edge ({x}, {y}) maps to non-adjacent ({a}, {b})")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def to_json(self) -> dict:
        return {"support": list(self.support), "f": list(self.f)}


def _support_of(g: Graph, h) -> tuple[int, ...]:
    if isinstance(h, InducedSubgraph):
        if h.host != g:
            raise InvalidInputError("subgraph belongs to a different host graph")
        return h.support
    return vertex_set(g, h)


def find_retraction(
    g: Graph, h: InducedSubgraph | Iterable[int], budget: int = DEFAULT_SEARCH_BUDGET
) -> Retraction | None:
    """Complete backtracking search for a retraction of g onto h.

    Returns None only when no retraction exists. Raises ResourceBudgetError
    when the search would need more than `budget` assignment attempts.
    """
    support = _support_of(g, h)
    if not support:
        raise InvalidInputError("cannot retract onto the empty subgraph")
    inside = set(support)
    image_nbhd = {v: (g.adj[v] & inside) | {v} for v in support}
    f: list[int | None] = [v if v in inside else None for v in range(g.n)]
    rest = sorted((v for v in range(g.n) if v not in inside), key=lambda v: (-g.degree(v), v))
    d = g.distances
    attempts = 0

    def candidates(x: int) -> list[int]:
        allowed = set(support)
        for y in g.adj[x]:
            if f[y] is not None:
                allowed &= image_nbhd[f[y]]
                if not allowed:
                    return []
        return sorted(allowed, key=lambda c: (int(d[x, c]), c))

    def search(i: int) -> bool:
        nonlocal attempts
        if i == len(rest):
            return True
        x = rest[i]
        for c in candidates(x):
            attempts += 1
            if attempts > budget:
                raise ResourceBudgetError(
                    f"retraction search exceeded {budget} attempts", budget
                )
            f[x] = c
            if search(i + 1):
                return True
        f[x] = None
        return False

    if not search(0):
        return None
    r = Retraction(g, support, tuple(f))  # type: ignore[arg-type]
    assert r.is_valid(), r.violations()
    return r


def retraction_for_isometric_path(g: Graph, p: Sequence[int]) -> Retraction:
    """f(x) = p[min(d(x, p0), L)]."""
    if not is_isometric_path(g, p):
        raise InvalidInputError(f"{list(p)} is not an isometric path")
    d = g.distances
    last = len(p) - 1
    f = tuple(p[min(int(d[x, p[0]]), last)] for x in range(g.n))
    r = Retraction(g, vertex_set(g, p), f)
    bad = r.violations()
    if bad:
        raise AssertionError(f"path retraction failed verification: {bad[:3]}")
    return r


def retraction_for_clique(g: Graph, s: Iterable[int]) -> Retraction:
    """Identity on the clique, its lowest vertex everywhere else."""
    support = vertex_set(g, s)
    if not support:
        raise InvalidInputError("clique must be nonempty")
    if not is_clique(g, support):
        raise InvalidInputError(f"{list(support)} is not a clique")
    inside = set(support)
    anchor = support[0]
    return Retraction(g, support, tuple(v if v in inside else anchor for v in range(g.n)))


@dataclass(eq=False)
class GuardCertificate:
    retraction: Retraction
    guards: int
    solution: GameSolution = field(repr=False)

    @property
    def support(self) -> tuple[int, ...]:
        return self.retraction.support

    @property
    def opening(self) -> tuple[int, ...]:
        return self.solution.opening

    @property
    def rounds_to_guard(self) -> int:
        assert self.solution.capture_time is not None
        return self.solution.capture_time

    def shadow(self, robber: int) -> int:
        return self.retraction.f[robber]

    def cop_move(self, cops: Sequence[int], robber: int) -> tuple[int, ...]:
        """One guarding move: step onto the shadow if possible, hold it, else follow the table."""
        s = self.shadow(robber)
        if s in cops:
            return tuple(cops)
        g = self.retraction.host
        for i, c in enumerate(cops):
            if s in g.closed_nbhd[c]:
                return tuple(s if j == i else x for j, x in enumerate(cops))
        return self.solution.cop_move(cops, robber)

    def to_json(self) -> dict:
        return {
            "support": list(self.support),
            "guards": self.guards,
            "rounds_to_guard": self.rounds_to_guard,
            "opening": list(self.opening),
        }


def guard_number(
    g: Graph, r: Retraction, k_max: int = 3, budget: int = DEFAULT_STATE_BUDGET
) -> GuardCertificate:
    """Least k <= k_max winning the shadow game (cops on the image, robber on g, goal f(robber))."""
    if not r.is_valid():
        raise InvalidInputError("retraction is invalid: " + "; ".join(r.violations()[:3]))
    for k in range(1, k_max + 1):
        sol = solve_pursuit(g, k, domain=r.support, target=r.f, budget=budget)
        if sol.cops_win:
            return GuardCertificate(r, k, sol)
    raise BoundNotFoundError(f"shadow game not won with {k_max} cops", k_max)


@dataclass
class GuardingReport:
    ok: bool
    trials: int
    counterexample: list[tuple[tuple[int, ...], int]] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_guarding(
    g: Graph,
    cert: GuardCertificate,
    robber_policy,
    trials: int = 5,
    max_rounds: int = 200,
    seed: int = 0,
) -> GuardingReport:
    """Play the certificate against a robber policy and check both guarding claims.

    The shadow must be caught within ``rounds_to_guard`` rounds; afterwards a
    cop must sit on the shadow after every cop move, and a robber standing
    in the image at a cop turn must be caught by that move.
    """
    inside = cert.retraction.members
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        cops = tuple(cert.opening)
        robber = robber_policy.place(g, cops, rng)
        trace = [(cops, robber)]
        guarded_at = None
        for rnd in range(1, max_rounds + 1):
            entering = guarded_at is not None and robber in inside
            new = cert.cop_move(cops, robber)
            for a, b in zip(cops, new):
                if b not in g.closed_nbhd[a] or b not in inside:
                    return GuardingReport(False, trial + 1, trace, f"illegal guard move {a}->{b}")
            cops = new
            trace.append((cops, robber))
            on_shadow = cert.shadow(robber) in cops
            if guarded_at is None and on_shadow:
                guarded_at = rnd
            if guarded_at is None and rnd >= cert.rounds_to_guard:
                return GuardingReport(
                    False, trial + 1, trace, f"shadow free after {rnd} rounds (bound {cert.rounds_to_guard})"
                )
            if guarded_at is not None and not on_shadow:
                return GuardingReport(False, trial + 1, trace, f"shadow escaped in round {rnd}")
            if entering and robber not in cops:
                return GuardingReport(False, trial + 1, trace, f"robber entered the image at {robber} uncaught")
            if robber in cops:
                break
            robber = robber_policy.move(g, cops, robber, rng)
            if robber in cops:
                break
        else:
            if guarded_at is None:
                return GuardingReport(False, trial + 1, trace, "shadow never caught")
    return GuardingReport(True, trials)
