"""Tree decompositions: the type, validation, generators and tree utilities."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .errors import InvalidInputError, StructuralError
from .generators import grid, grid_vertex
from .graph import Graph, is_clique, vertex_set


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    host: Graph = field(repr=False)
    bags: tuple[tuple[int, ...], ...]
    tree_edges: tuple[tuple[int, int], ...]
    name: str = ""

    @classmethod
    def build(
        cls,
        host: Graph,
        bags: Iterable[Iterable[int]],
        tree_edges: Iterable[tuple[int, int]],
        name: str = "",
    ) -> "TreeDecomposition":
        bags = tuple(vertex_set(host, b) for b in bags)
        norm = []
        for a, b in tree_edges:
            if not (0 <= a < len(bags) and 0 <= b < len(bags)):
                raise InvalidInputError(f"tree edge ({a}, {b}) refers to a missing bag")
            norm.append((min(a, b), max(a, b)))
        return cls(host, bags, tuple(sorted(norm)), name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return (self.host, self.bags, self.tree_edges) == (other.host, other.bags, other.tree_edges)

    def __hash__(self) -> int:
        return hash((self.bags, self.tree_edges))

    def __len__(self) -> int:
        return len(self.bags)

    @cached_property
    def tree_adj(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def bag_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(b) for b in self.bags)

    @cached_property
    def occurrences(self) -> tuple[tuple[int, ...], ...]:
        """For each host vertex, the ids of the bags containing it."""
        occ: list[list[int]] = [[] for _ in range(self.host.n)]
        for i, bag in enumerate(self.bags):
            for v in bag:
                occ[v].append(i)
        return tuple(tuple(o) for o in occ)

    @cached_property
    def tree_distances(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_tree_bfs(self.tree_adj, s)) for s in range(len(self.bags)))

    def is_tree(self) -> bool:
        k = len(self.bags)
        if k == 0 or len(self.tree_edges) != k - 1:
            return False
        return -1 not in _tree_bfs(self.tree_adj, 0)

    def tree_path(self, a: int, b: int) -> list[int]:
        """Bag ids along the unique tree path from a to b (inclusive)."""
        dist = self.tree_distances[b]
        path = [a]
        while path[-1] != b:
            here = path[-1]
            path.append(next(x for x in self.tree_adj[here] if dist[x] == dist[here] - 1))
        return path

    def component_bags(self, removed: int, start: int) -> set[int]:
        """Bags of the component of T - {removed} that contains `start`."""
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self.tree_adj[x]:
                if y != removed and y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


def _tree_bfs(adj: Sequence[Sequence[int]], source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


@dataclass(frozen=True)
class Violation:
    prop: int
    message: str
    witness: tuple


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def validate_td(g: Graph, t: TreeDecomposition) -> ValidationReport:
    """Check vertex coverage (1), edge coverage (2) and the subtree property (3).

    Raises StructuralError if the bag graph is not a tree.
    """
    if not t.is_tree():
        raise StructuralError(
            f"tree edges do not form a tree on {len(t.bags)} bags ({len(t.tree_edges)} edges)"
        )
    for bag in t.bags:
        if bag and bag[-1] >= g.n:
            raise InvalidInputError(f"bag {list(bag)} mentions a vertex outside the graph")
    violations: list[Violation] = []
    occ = [[] for _ in range(g.n)]
    for i, bag in enumerate(t.bags):
        for v in bag:
            occ[v].append(i)
    for v in range(g.n):
        if not occ[v]:
            violations.append(Violation(1, f"vertex {v} lies in no bag", (v,)))
    for u, v in g.edges():
        if not set(occ[u]) & set(occ[v]):
            violations.append(Violation(2, f"edge ({u}, {v}) lies in no bag", (u, v)))
    for v in range(g.n):
        if len(occ[v]) < 2:
            continue
        members = set(occ[v])
        seen = {occ[v][0]}
        queue = deque(seen)
        while queue:
            x = queue.popleft()
            for y in t.tree_adj[x]:
                if y in members and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != members:
            a = occ[v][0]
            b = min(members - seen)
            mid = next(x for x in t.tree_path(a, b) if x not in members)
            violations.append(
                Violation(3, f"bags containing vertex {v} are not connected in the tree", (v, a, mid, b))
            )
    return ValidationReport(tuple(violations))


def width(t: TreeDecomposition) -> int:
    if not t.bags:
        raise InvalidInputError("decomposition has no bags")
    return max(len(b) for b in t.bags) - 1


def trivial_decomposition(g: Graph) -> TreeDecomposition:
    return TreeDecomposition.build(g, [range(g.n)], [], name="trivial")


def tree_centre_and_diameter(t: TreeDecomposition) -> tuple[tuple[int, ...], int]:
    """Centre bag ids (one or two) by leaf stripping, and the tree diameter."""
    k = len(t.bags)
    if k == 0:
        raise InvalidInputError("empty tree")
    degree = [len(a) for a in t.tree_adj]
    remaining = k
    layer = [i for i in range(k) if degree[i] <= 1]
    stripped = 0
    removed = [False] * k
    while remaining > 2:
        nxt = []
        for leaf in layer:
            removed[leaf] = True
            remaining -= 1
            for y in t.tree_adj[leaf]:
                if not removed[y]:
                    degree[y] -= 1
                    if degree[y] == 1:
                        nxt.append(y)
        layer = nxt
        stripped += 1
    centre = tuple(sorted(i for i in range(k) if not removed[i]))
    diameter = 2 * stripped + (len(centre) - 1)
    return centre, diameter


def robber_subtree(t: TreeDecomposition, r: int) -> set[int]:
    """Ids of the bags containing vertex r; connected in a valid decomposition."""
    return set(t.occurrences[r])


def pairwise_clique_intersections(g: Graph, t: TreeDecomposition) -> bool:
    """True iff every pair of bags meets in a clique.

    Only tree edges are inspected: by the subtree property each pairwise
    intersection sits inside the intersection of some adjacent pair on the
    connecting path.
    """
    return all(is_clique(g, t.bag_sets[a] & t.bag_sets[b]) for a, b in t.tree_edges)


def separator(t: TreeDecomposition, a: int, b: int) -> tuple[int, ...]:
    return tuple(sorted(t.bag_sets[a] & t.bag_sets[b]))


# -- generators -----------------------------------------------------------


def grid_bag(n: int, i: int, j: int) -> list[int]:
    """Bag B_{i,j} of the n x n grid as a path: (i+1,1)..(i+1,j),(i,j)..(i,n)."""
    lower = [grid_vertex(i + 1, k, n) for k in range(1, j + 1)]
    upper = [grid_vertex(i, k, n) for k in range(j, n + 1)]
    return lower + upper


def grid_path_decomposition(n: int, host: Graph | None = None) -> TreeDecomposition:
    """Decomposition of the n x n grid into isometric-path bags B_{i,j}.

    Bags are strung along a path in lexicographic (i, j) order; bag id
    (i-1)*n + (j-1).
    """
    if n < 2:
        raise InvalidInputError("grid decomposition needs n >= 2")
    host = grid(n) if host is None else host
    if host.n != n * n:
        raise InvalidInputError("host is not an n x n grid")
    bags = [grid_bag(n, i, j) for i in range(1, n) for j in range(1, n + 1)]
    edges = [(b, b + 1) for b in range(len(bags) - 1)]
    return TreeDecomposition.build(host, bags, edges, name=f"grid-paths:{n}")


def maximum_cardinality_search(g: Graph) -> list[int]:
    """Visit order of maximum cardinality search (ties to the lowest id)."""
    weight = [0] * g.n
    visited = [False] * g.n
    order = []
    for _ in range(g.n):
        v = max((u for u in range(g.n) if not visited[u]), key=lambda u: (weight[u], -u))
        visited[v] = True
        order.append(v)
        for w in g.adj[v]:
            if not visited[w]:
                weight[w] += 1
    return order


def clique_tree(g: Graph) -> TreeDecomposition | None:
    """Clique tree of a chordal graph, or None when `g` is not chordal.

    The reverse of an MCS order is a perfect elimination order iff the graph
    is chordal; maximal cliques are read off that order and joined by a
    maximum-weight spanning tree of the clique intersection graph.
    """
    if g.n == 0:
        return None
    order = maximum_cardinality_search(g)
    position = {v: i for i, v in enumerate(order)}
    candidates = []
    for v in order:
        earlier = {w for w in g.adj[v] if position[w] < position[v]}
        if earlier:
            # the latest-visited earlier neighbour must see all other earlier ones
            parent = max(earlier, key=position.__getitem__)
            if not (earlier - {parent}) <= g.adj[parent]:
                return None
        candidates.append(frozenset(earlier | {v}))
    cliques = sorted(
        {c for c in candidates if not any(c < d for d in candidates)},
        key=lambda c: sorted(c),
    )
    if len(cliques) == 1:
        return TreeDecomposition.build(g, cliques, [], name="clique-tree")
    ig = nx.Graph()
    ig.add_nodes_from(range(len(cliques)))
    for a in range(len(cliques)):
        for b in range(a + 1, len(cliques)):
            ig.add_edge(a, b, weight=len(cliques[a] & cliques[b]))
    tree = nx.maximum_spanning_tree(ig, algorithm="kruskal")
    t = TreeDecomposition.build(g, cliques, tree.edges(), name="clique-tree")
    if not validate_td(g, t):
        raise AssertionError("clique tree construction produced an invalid decomposition")
    return t


def decomposition_from_ordering(g: Graph, order: Sequence[int], name: str = "") -> TreeDecomposition:
    """Elimination-ordering decomposition with redundant bags contracted away."""
    position = {v: i for i, v in enumerate(order)}
    fill = [set(g.adj[v]) for v in range(g.n)]
    bags: list[set[int]] = []
    higher_of = []
    for v in order:
        higher = {w for w in fill[v] if position[w] > position[v]}
        bags.append(higher | {v})
        higher_of.append(higher)
        for a in higher:
            fill[a] |= higher - {a}
    edges = []
    for i, higher in enumerate(higher_of):
        if higher:
            edges.append((i, position[min(higher, key=position.__getitem__)]))
    roots = [i for i, higher in enumerate(higher_of) if not higher]
    edges.extend((r, roots[-1]) for r in roots[:-1])
    bags, edges = contract_redundant_bags(bags, edges)
    return TreeDecomposition.build(g, bags, edges, name=name)


def contract_redundant_bags(
    bags: Sequence[Iterable[int]], edges: Iterable[tuple[int, int]]
) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """Contract every tree edge whose one endpoint bag is a subset of the other.

    Contraction keeps a valid decomposition valid and never increases width.
    """
    content = {i: frozenset(b) for i, b in enumerate(bags)}
    nbrs: dict[int, set[int]] = {i: set() for i in content}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    changed = True
    while changed:
        changed = False
        for a in sorted(content):
            for b in sorted(nbrs[a]):
                if content[a] <= content[b]:
                    for c in nbrs[a] - {b}:
                        nbrs[c].discard(a)
                        nbrs[c].add(b)
                        nbrs[b].add(c)
                    nbrs[b].discard(a)
                    del nbrs[a], content[a]
                    changed = True
                    break
            if changed:
                break
    ids = sorted(content)
    index = {v: i for i, v in enumerate(ids)}
    out_edges = sorted({(min(index[a], index[b]), max(index[a], index[b])) for a in ids for b in nbrs[a]})
    return [content[i] for i in ids], out_edges
