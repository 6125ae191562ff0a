"""Reflexive undirected graphs over dense integer vertex ids.

Loops are implicit: every vertex is adjacent to itself for the purpose of
movement (a player may always pass), but the stored adjacency is irreflexive.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise InvalidInputError("adjacency length does not match vertex count")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise InvalidInputError(f"explicit self-loop at vertex {v}")
            for w in nbrs:
                if not 0 <= w < self.n:
                    raise InvalidInputError(f"vertex id {w} out of range")
                if v not in self.adj[w]:
                    raise InvalidInputError(f"asymmetric adjacency between {v} and {w}")
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidInputError("label count does not match vertex count")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
        name: str = "",
    ) -> "Graph":
        """Build a graph; duplicate edges collapse, self-loops are rejected."""
        if n < 0:
            raise InvalidInputError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(
            n,
            tuple(frozenset(s) for s in nbrs),
            tuple(labels) if labels is not None else None,
            name,
        )

    # -- basic queries ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<Graph{tag} n={self.n} m={self.m}>"

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def m(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def closed_nbhd(self) -> tuple[tuple[int, ...], ...]:
        """Sorted closed neighbourhoods N[v]: the legal moves from v."""
        return tuple(tuple(sorted(self.adj[v] | {v})) for v in range(self.n))

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def relabeled(self, perm: Sequence[int]) -> "Graph":
        """Copy with vertex v renamed perm[v]."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    # -- metric ----------------------------------------------------------

    def bfs(self, source: int) -> list[int]:
        dist = [UNREACHABLE] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if dist[w] == UNREACHABLE:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs hop distances; UNREACHABLE (-1) for disconnected pairs."""
        d = np.full((self.n, self.n), UNREACHABLE, dtype=np.int64)
        for s in range(self.n):
            d[s] = self.bfs(s)
        d.flags.writeable = False
        return d

    def is_connected(self) -> bool:
        return self.n == 0 or UNREACHABLE not in self.bfs(0)

    def shortest_path(self, u: int, v: int, within: Iterable[int] | None = None) -> list[int] | None:
        """A BFS shortest u-v path, optionally restricted to the vertex set `within`.

        Ties are broken towards lower vertex ids so results are reproducible.
        """
        allowed = None if within is None else set(within)
        if allowed is not None and (u not in allowed or v not in allowed):
            return None
        parent = {u: u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for w in sorted(self.adj[x]):
                if w not in parent and (allowed is None or w in allowed):
                    parent[w] = x
                    queue.append(w)
        if v not in parent:
            return None
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        return path[::-1]

    def induced(self, support: Iterable[int]) -> "InducedSubgraph":
        return InducedSubgraph(self, vertex_set(self, support))


def vertex_set(g: Graph, vertices: Iterable[int]) -> tuple[int, ...]:
    """Normalize to a sorted duplicate-free tuple of valid vertex ids."""
    s = tuple(sorted(set(vertices)))
    if s and not (0 <= s[0] and s[-1] < g.n):
        raise InvalidInputError(f"vertex set {list(s)} not contained in graph with n={g.n}")
    return s


@dataclass(frozen=True)
class InducedSubgraph:
    host: Graph = field(repr=False)
    support: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.support)

    def __contains__(self, v: int) -> bool:
        return v in self._members

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.support)

    def neighbours(self, v: int) -> frozenset[int]:
        return self.host.adj[v] & self._members

    def as_graph(self) -> Graph:
        """Relabel to a standalone graph on 0..len-1 (support order)."""
        index = {v: i for i, v in enumerate(self.support)}
        edges = [
            (index[u], index[v])
            for u in self.support
            for v in self.host.adj[u]
            if v in index and u < v
        ]
        labels = [self.host.label(v) for v in self.support]
        return Graph.from_edges(len(self.support), edges, labels)


def is_isometric_path(g: Graph, seq: Sequence[int]) -> bool:
    """True iff `seq` is a path whose internal distances match those of `g`."""
    if not seq:
        raise InvalidInputError("path must be nonempty")
    if len(set(seq)) != len(seq):
        raise InvalidInputError("path repeats a vertex")
    d = g.distances
    for i in range(len(seq) - 1):
        if not g.has_edge(seq[i], seq[i + 1]):
            return False
    for i in range(len(seq)):
        for j in range(i + 2, len(seq)):
            if d[seq[i], seq[j]] != j - i:
                return False
    return True


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    return all(g.has_edge(u, v) for i, u in enumerate(s) for v in s[i + 1 :])
