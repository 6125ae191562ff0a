"""Retract covers and the retract cover cop number.

rcc is a minimum-weight set cover of the target's vertices by retracts,
weighted by guard numbers. The search runs over a finite candidate pool, so
the value is an upper bound on the true parameter unless the pool holds
every retract of the host (`pool_complete`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

import networkx as nx

from .errors import BoundNotFoundError, InvalidInputError, ResourceBudgetError, UncoverableError
from .graph import Graph, InducedSubgraph, is_isometric_path, vertex_set
from .retract import (
    GuardCertificate,
    Retraction,
    find_retraction,
    guard_number,
    retraction_for_clique,
    retraction_for_isometric_path,
)
from .solver import DEFAULT_STATE_BUDGET

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoolLimits:
    max_pool: int = 5000
    max_path_len: int | None = None
    # hosts up to this size get every retract in the pool
    exhaustive_max_n: int = 8
    guard_k_max: int = 3
    extra: tuple[tuple[int, ...], ...] = ()
    state_budget: int = DEFAULT_STATE_BUDGET
    branch_budget: int = 200_000


class RetractCatalog:
    """Per-graph cache of guard certificates, keyed by retract vertex set.

    The guard number of a retract does not depend on which retraction is
    used (see `guard_number`), so one certificate per vertex set suffices.
    """

    def __init__(self, g: Graph, limits: PoolLimits | None = None) -> None:
        self.g = g
        self.limits = limits or PoolLimits()
        self._certs: dict[tuple[int, ...], GuardCertificate | None] = {}
        self._all: list[GuardCertificate] | None = None
        self.failures = 0

    def certify(self, r: Retraction) -> GuardCertificate | None:
        key = r.support
        if key not in self._certs:
            try:
                self._certs[key] = guard_number(
                    self.g, r, self.limits.guard_k_max, self.limits.state_budget
                )
            except (BoundNotFoundError, ResourceBudgetError) as exc:
                log.info("no guard certificate for %s: %s", list(key), exc)
                self.failures += 1
                self._certs[key] = None
        return self._certs[key]

    def cached(self, support: tuple[int, ...]) -> bool:
        return support in self._certs

    def all_retracts(self) -> list[GuardCertificate]:
        """Every retract of the host with a certified guard number (small hosts only)."""
        if self._all is None:
            g = self.g
            out = []
            for mask in range(1, 1 << g.n):
                support = tuple(v for v in range(g.n) if mask >> v & 1)
                if not _connected(g, support):
                    continue
                if self.cached(support):
                    cert = self._certs[support]
                else:
                    r = find_retraction(g, support)
                    cert = self.certify(r) if r is not None else None
                if cert is not None:
                    out.append(cert)
            self._all = out
        return self._all


def _connected(g: Graph, support: Sequence[int]) -> bool:
    inside = set(support)
    start = support[0]
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in inside and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(inside)


@dataclass
class CandidatePool:
    entries: list[GuardCertificate]
    truncated: bool = False
    complete: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _support(g: Graph, h) -> tuple[int, ...]:
    return h.support if isinstance(h, InducedSubgraph) else vertex_set(g, h)


def candidate_retracts(
    g: Graph,
    h: InducedSubgraph | Iterable[int],
    limits: PoolLimits | None = None,
    catalog: RetractCatalog | None = None,
) -> CandidatePool:
    """Certified retracts meeting H: isometric paths, cliques, extras, and (small hosts) all."""
    catalog = catalog or RetractCatalog(g, limits)
    limits = catalog.limits
    target = _support(g, h)
    inside = set(target)
    found: dict[tuple[int, ...], GuardCertificate] = {}
    truncated = False

    def offer(r: Retraction | None) -> None:
        nonlocal truncated
        if r is None or r.support in found:
            return
        if len(found) >= limits.max_pool:
            truncated = True
            return
        cert = catalog.certify(r)
        if cert is None:
            truncated = True
        else:
            found[r.support] = cert

    for v in target:
        offer(retraction_for_clique(g, [v]))
    for u, v in permutations(target, 2):
        p = g.shortest_path(u, v, within=target)
        if p is None or not is_isometric_path(g, p):
            p = g.shortest_path(u, v)
        if p is None:
            continue
        if limits.max_path_len is not None and len(p) - 1 > limits.max_path_len:
            truncated = True
            continue
        if tuple(sorted(p)) not in found:
            offer(retraction_for_isometric_path(g, p))
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    for clique in sorted(tuple(sorted(c)) for c in nx.find_cliques(nxg)):
        if inside.intersection(clique):
            offer(retraction_for_clique(g, clique))
    for extra in limits.extra:
        support = vertex_set(g, extra)
        if support in found or not inside.intersection(support):
            continue
        offer(find_retraction(g, support))
    complete = False
    if g.n <= limits.exhaustive_max_n:
        for cert in catalog.all_retracts():
            if cert.support not in found and inside.intersection(cert.support):
                if len(found) >= limits.max_pool:
                    truncated = True
                    break
                found[cert.support] = cert
        complete = not truncated and catalog.failures == 0
    return CandidatePool(list(found.values()), truncated, complete)


@dataclass
class RetractCover:
    target: tuple[int, ...]
    entries: list[GuardCertificate]

    @property
    def total_guards(self) -> int:
        return sum(e.guards for e in self.entries)

    def covered(self) -> set[int]:
        out: set[int] = set()
        for e in self.entries:
            out.update(e.support)
        return out

    def to_json(self) -> dict:
        return {"target": list(self.target), "entries": [e.to_json() for e in self.entries]}


@dataclass
class RccResult:
    value: int
    cover: RetractCover
    exact_over_pool: bool
    pool_complete: bool = False
    pool_size: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        """True when the value is the true rcc, not just a pool-relative upper bound."""
        return self.exact_over_pool and self.pool_complete

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "exact_over_pool": self.exact_over_pool,
            "pool_complete": self.pool_complete,
            "pool_size": self.pool_size,
            "cover": self.cover.to_json(),
        }


def _greedy(universe: int, sets: list[tuple[int, int, int, int]]) -> list[int]:
    """Weighted greedy: cheapest per new vertex, then more coverage, smaller weight, lower id."""
    covered = 0
    chosen = []
    while covered != universe:
        best = None
        for i, (mask, w, low, _) in enumerate(sets):
            gain = bin(mask & ~covered).count("1")
            if not gain:
                continue
            key = (w / gain, -gain, w, low)
            if best is None or key < best[0]:
                best = (key, i)
        assert best is not None
        chosen.append(best[1])
        covered |= sets[best[1]][0]
    return chosen


def _exact(universe: int, sets: list[tuple[int, int, int, int]], budget: int) -> tuple[list[int], bool]:
    """Branch and bound weighted set cover; returns (choice, finished_within_budget)."""
    # drop entries dominated by another that covers at least as much for no more weight
    keep = []
    for i, (mask, w, low, _) in enumerate(sets):
        dominated = any(
            j != i
            and (mask | m2) == m2
            and w2 <= w
            and (m2 != mask or w2 < w or j < i)
            for j, (m2, w2, _, _) in enumerate(sets)
        )
        if not dominated:
            keep.append(i)
    best_choice = _greedy(universe, sets)
    best = sum(sets[i][1] for i in best_choice)
    max_cov = max(bin(sets[i][0]).count("1") for i in keep)
    min_w = min(sets[i][1] for i in keep)
    memo: dict[int, int] = {}
    nodes = 0
    finished = True
    elements = [e for e in range(universe.bit_length()) if universe >> e & 1]
    covering = {e: [i for i in keep if sets[i][0] >> e & 1] for e in elements}

    def rec(covered: int, weight: int, chosen: list[int]) -> None:
        nonlocal best, best_choice, nodes, finished
        if covered == universe:
            if weight < best:
                best, best_choice = weight, list(chosen)
            return
        nodes += 1
        if nodes > budget:
            finished = False
            return
        left = bin(universe & ~covered).count("1")
        if weight + -(-left // max_cov) * min_w >= best:
            return
        if memo.get(covered, best + 1) <= weight:
            return
        memo[covered] = weight
        e = min(
            (x for x in elements if not covered >> x & 1),
            key=lambda x: (len(covering[x]), x),
        )
        options = sorted(
            covering[e],
            key=lambda i: (sets[i][1], -bin(sets[i][0] & ~covered).count("1"), sets[i][2]),
        )
        for i in options:
            chosen.append(i)
            rec(covered | sets[i][0], weight + sets[i][1], chosen)
            chosen.pop()

    rec(0, 0, [])
    return best_choice, finished


def rcc(
    g: Graph,
    h: InducedSubgraph | Iterable[int],
    pool: CandidatePool | Sequence[GuardCertificate],
    mode: str = "exact",
    branch_budget: int = 200_000,
) -> RccResult:
    """Minimum total guard number of a cover of H drawn from `pool`."""
    if mode not in ("exact", "greedy"):
        raise InvalidInputError(f"unknown rcc mode {mode!r}")
    target = _support(g, h)
    if not target:
        raise InvalidInputError("rcc of an empty subgraph")
    entries = pool.entries if isinstance(pool, CandidatePool) else list(pool)
    complete = pool.complete if isinstance(pool, CandidatePool) else False
    bit = {v: 1 << i for i, v in enumerate(target)}
    universe = (1 << len(target)) - 1
    sets, owners = [], []
    for cert in entries:
        mask = 0
        for v in cert.support:
            mask |= bit.get(v, 0)
        if mask:
            sets.append((mask, cert.guards, cert.support[0], len(owners)))
            owners.append(cert)
    reach = 0
    for mask, *_ in sets:
        reach |= mask
    if reach != universe:
        raise UncoverableError(v for v in target if not reach & bit[v])
    if mode == "greedy":
        choice, exact = _greedy(universe, sets), False
    else:
        choice, exact = _exact(universe, sets, branch_budget)
    chosen = sorted((owners[i] for i in choice), key=lambda c: c.support)
    cover = RetractCover(target, chosen)
    return RccResult(cover.total_guards, cover, exact, complete, len(entries))
