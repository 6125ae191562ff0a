"""Deterministic graph families used as the test and benchmark corpus."""

from __future__ import annotations

import random
from itertools import combinations

from .errors import InvalidInputError
from .graph import Graph


def _positive(**params: int) -> None:
    for key, value in params.items():
        if value < 1:
            raise InvalidInputError(f"{key} must be positive, got {value}")


def path(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)), name=f"path:{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)), name=f"cycle:{n}")


def clique(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, combinations(range(n), 2), name=f"clique:{n}")


def grid_vertex(i: int, j: int, cols: int) -> int:
    """Vertex id of the 1-indexed grid cell (i, j)."""
    return (i - 1) * cols + (j - 1)


def grid(rows: int, cols: int | None = None) -> Graph:
    """Cartesian grid P_rows x P_cols; vertex (i, j) is 1-indexed, labelled "(i,j)"."""
    cols = rows if cols is None else cols
    _positive(rows=rows, cols=cols)
    edges = []
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            v = grid_vertex(i, j, cols)
            if j < cols:
                edges.append((v, v + 1))
            if i < rows:
                edges.append((v, v + cols))
    labels = [f"({i},{j})" for i in range(1, rows + 1) for j in range(1, cols + 1)]
    return Graph.from_edges(rows * cols, edges, labels, name=f"grid:{rows},{cols}")


def grid_shape(g: Graph) -> tuple[int, int] | None:
    """(rows, cols) when `g` came from `grid`, else None."""
    if g.name.startswith("grid:"):
        rows, cols = g.name[5:].split(",")
        return int(rows), int(cols)
    return None


def k_tree(k: int, n: int, seed: int = 0) -> Graph:
    """Random k-tree: a (k+1)-clique grown by vertices attached to existing k-cliques."""
    _positive(k=k, n=n)
    if k >= n:
        raise InvalidInputError(f"k-tree needs k < n (got k={k}, n={n})")
    rng = random.Random(seed)
    edges = list(combinations(range(k + 1), 2))
    kcliques = [c for c in combinations(range(k + 1), k)]
    for v in range(k + 1, n):
        base = kcliques[rng.randrange(len(kcliques))]
        edges.extend((u, v) for u in base)
        for u in base:
            kcliques.append(tuple(sorted((set(base) - {u}) | {v})))
    return Graph.from_edges(n, edges, name=f"ktree:{k},{n},{seed}")


def random_graph(n: int, p: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p). May be disconnected."""
    _positive(n=n)
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges, name=f"random:{n},{p},{seed}")


def random_connected(n: int, p: float, seed: int = 0) -> Graph:
    """Random spanning tree plus independent extra edges with probability p."""
    _positive(n=n)
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    for u, v in combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return Graph.from_edges(n, sorted(edges), name=f"rconn:{n},{p},{seed}")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, name="petersen")


def glued_cycles() -> Graph:
    """Two 4-cycles sharing the edge {0, 1}: 0-1-2-3-0 and 0-1-4-5-0."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 0)]
    return Graph.from_edges(6, edges, name="glued-c4")


FAMILIES = {
    "path": path,
    "cycle": cycle,
    "clique": clique,
    "grid": grid,
    "ktree": k_tree,
    "random": random_graph,
    "rconn": random_connected,
    "petersen": petersen,
    "glued-c4": glued_cycles,
}


def generate(spec: str, seed: int | None = None) -> Graph:
    """Parse a FAMILY:ARGS string such as "grid:4", "ktree:2,10" or "random:8,0.3".

    A trailing seed argument may be omitted for the seeded families, in which
    case `seed` (default 0) is used.
    """
    family, _, argtext = spec.partition(":")
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown graph family {family!r}; choose from {sorted(FAMILIES)}")
    raw = [a for a in argtext.split(",") if a.strip()] if argtext else []
    try:
        if family in ("random", "rconn"):
            args: list = [int(raw[0]), float(raw[1])]
            args.append(int(raw[2]) if len(raw) > 2 else (seed or 0))
        elif family == "ktree":
            args = [int(raw[0]), int(raw[1])]
            args.append(int(raw[2]) if len(raw) > 2 else (seed or 0))
        else:
            args = [int(a) for a in raw]
        return FAMILIES[family](*args)
    except (IndexError, ValueError, TypeError) as exc:
        raise InvalidInputError(f"bad generator arguments in {spec!r}: {exc}") from exc
