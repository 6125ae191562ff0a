"""Exact treewidth by dynamic programming over vertex subsets.

Uses the elimination-ordering recurrence

    TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)

where Q(S, v) is the set of vertices outside S + v reachable from v through
paths whose interior lies in S; these are v's neighbours in the fill graph
when the vertices of S have been eliminated before v. tw(G) = TW(V).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .decomposition import TreeDecomposition, decomposition_from_ordering, validate_td, width
from .graph import Graph

DEFAULT_EXACT_LIMIT = 16


def exact_limit() -> int:
    return int(os.environ.get("PURSUIT_TD_BUDGET", DEFAULT_EXACT_LIMIT))


@dataclass(frozen=True)
class TreewidthResult:
    width: int
    witness: TreeDecomposition
    optimal: bool
    ordering: tuple[int, ...]


def _q_size(g: Graph, inside: int, v: int, masks: list[int]) -> int:
    """|Q(S, v)| with S given as a bitmask."""
    seen = 1 << v
    frontier = [v]
    outside = 0
    while frontier:
        x = frontier.pop()
        nb = masks[x] & ~seen
        seen |= nb
        outside |= nb & ~inside
        rest = nb & inside
        while rest:
            low = rest & -rest
            frontier.append(low.bit_length() - 1)
            rest ^= low
    return bin(outside).count("1")


def treewidth_exact(g: Graph, limit: int | None = None) -> TreewidthResult:
    """Exact treewidth for n <= limit, else a min-degree upper-bound witness."""
    limit = exact_limit() if limit is None else limit
    if g.n == 0:
        raise ValueError("treewidth of the empty graph is undefined here")
    if g.n > limit:
        order = min_degree_ordering(g)
        t = decomposition_from_ordering(g, order, name="min-degree")
        return TreewidthResult(width(t), t, False, tuple(order))

    n = g.n
    masks = [sum(1 << w for w in g.adj[v]) for v in range(n)]
    full = (1 << n) - 1
    heuristic = min_degree_ordering(g)
    upper = _ordering_width(g, heuristic)
    # level-by-level over subsets S of eliminated vertices, keeping only those
    # whose partial width stays below the heuristic bound
    level: dict[int, int] = {0: -1}
    back: dict[int, tuple[int, int]] = {}
    best_full: tuple[int, int] | None = None  # (width, mask) of a completable prefix
    for size in range(n):
        nxt: dict[int, int] = {}
        for s, val in level.items():
            remaining = n - size
            # every remaining vertex fits one final bag: the rest costs remaining-1
            finish = max(val, remaining - 1)
            if finish < upper and (best_full is None or finish < best_full[0]):
                best_full = (finish, s)
            rest = full & ~s
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                cand = max(val, _q_size(g, s, v, masks))
                if cand >= upper:
                    continue
                t_mask = s | low
                if cand < nxt.get(t_mask, upper):
                    nxt[t_mask] = cand
                    back[t_mask] = (s, v)
        level = nxt
        if not level:
            break
    if best_full is None:
        order = heuristic
    else:
        _, s = best_full
        prefix = []
        while s:
            prev, v = back[s]
            prefix.append(v)
            s = prev
        prefix.reverse()
        order = prefix + [v for v in range(n) if v not in set(prefix)]
    t = decomposition_from_ordering(g, order, name="tw-exact")
    assert validate_td(g, t).valid
    return TreewidthResult(width(t), t, True, tuple(order))


def _ordering_width(g: Graph, order: list[int]) -> int:
    position = {v: i for i, v in enumerate(order)}
    fill = [set(g.adj[v]) for v in range(g.n)]
    best = 0
    for v in order:
        higher = {w for w in fill[v] if position[w] > position[v]}
        best = max(best, len(higher))
        for a in higher:
            fill[a] |= higher - {a}
    return best


def min_degree_ordering(g: Graph) -> list[int]:
    fill = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    while fill:
        v = min(fill, key=lambda u: (len(fill[u]), u))
        nbrs = fill.pop(v)
        for a in nbrs:
            fill[a] |= nbrs - {a}
            fill[a].discard(v)
        order.append(v)
    return order
