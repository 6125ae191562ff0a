"""PACE 2017 .gr / .td exchange formats and the JSON adjacency mirror.

Files are 1-indexed; everything in memory is 0-indexed.
"""

from __future__ import annotations

import io
import json
import logging
from pathlib import Path
from typing import IO, Union

from .decomposition import TreeDecomposition
from .errors import ParseError
from .graph import Graph

log = logging.getLogger(__name__)

Source = Union[str, Path, IO[str]]


def _lines(source: Source) -> list[str]:
    if isinstance(source, (str, Path)):
        return Path(source).read_text().splitlines()
    return source.read().splitlines()


def _emit(text: str, target: Source) -> None:
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)


def _ints(parts: list[str], lineno: int) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(parts)!r}", lineno) from None


def read_gr(source: Source) -> Graph:
    n = m = None
    edges: set[tuple[int, int]] = set()
    seen_lines = 0
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("second header line", lineno)
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError("header must read 'p tw <n> <m>'", lineno)
            n, m = _ints(parts[2:], lineno)
            continue
        if n is None:
            raise ParseError("edge line before the 'p tw' header", lineno)
        if len(parts) != 2:
            raise ParseError(f"edge line must hold two vertices, got {line!r}", lineno)
        u, v = _ints(parts, lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex out of range 1..{n} in {line!r}", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v) - 1, max(u, v) - 1)
        if key in edges:
            log.warning("line %d: duplicate edge %d %d ignored", lineno, u, v)
        edges.add(key)
        seen_lines += 1
    if n is None:
        raise ParseError("missing 'p tw <n> <m>' header")
    if seen_lines != m:
        log.warning("header announces %d edges, file lists %d", m, seen_lines)
    return Graph.from_edges(n, sorted(edges))


def write_gr(g: Graph, target: Source) -> None:
    out = io.StringIO()
    if g.name:
        out.write(f"c {g.name}\n")
    out.write(f"p tw {g.n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"{u + 1} {v + 1}\n")
    _emit(out.getvalue(), target)


def read_td(source: Source, host: Graph) -> TreeDecomposition:
    """Parse a .td file against `host`. Does not validate the decomposition."""
    header = None
    bags: dict[int, list[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ParseError("second solution line", lineno)
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError("header must read 's td <bags> <max bag size> <n>'", lineno)
            header = _ints(parts[2:], lineno)
            if header[2] != host.n:
                raise ParseError(f"file is for n={header[2]}, host has n={host.n}", lineno)
            continue
        if header is None:
            raise ParseError("content before the 's td' header", lineno)
        if parts[0] == "b":
            nums = _ints(parts[1:], lineno)
            if not nums:
                raise ParseError("bag line without an id", lineno)
            bid, verts = nums[0], nums[1:]
            if not 1 <= bid <= header[0]:
                raise ParseError(f"bag id {bid} out of range 1..{header[0]}", lineno)
            if bid in bags:
                raise ParseError(f"bag {bid} defined twice", lineno)
            for v in verts:
                if not 1 <= v <= host.n:
                    raise ParseError(f"vertex {v} out of range 1..{host.n}", lineno)
            bags[bid] = [v - 1 for v in verts]
            continue
        a, b = _ints(parts, lineno) if len(parts) == 2 else (None, None)
        if a is None:
            raise ParseError(f"unrecognised line {line!r}", lineno)
        for x in (a, b):
            if not 1 <= x <= header[0]:
                raise ParseError(f"bag id {x} out of range 1..{header[0]}", lineno)
        edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header")
    missing = [i for i in range(1, header[0] + 1) if i not in bags]
    if missing:
        raise ParseError(f"bags {missing} never defined")
    return TreeDecomposition.build(host, [bags[i] for i in range(1, header[0] + 1)], edges)


def write_td(t: TreeDecomposition, target: Source) -> None:
    out = io.StringIO()
    biggest = max((len(b) for b in t.bags), default=0)
    out.write(f"s td {len(t.bags)} {biggest} {t.host.n}\n")
    for i, bag in enumerate(t.bags, start=1):
        out.write(" ".join(["b", str(i)] + [str(v + 1) for v in bag]) + "\n")
    for a, b in t.tree_edges:
        out.write(f"{a + 1} {b + 1}\n")
    _emit(out.getvalue(), target)


def graph_to_json(g: Graph) -> dict:
    doc = {"n": g.n, "adjacency": [sorted(g.adj[v]) for v in range(g.n)]}
    if g.name:
        doc["name"] = g.name
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    return doc


def graph_from_json(doc: dict | str) -> Graph:
    if isinstance(doc, str):
        doc = json.loads(doc)
    edges = [(u, v) for u, nbrs in enumerate(doc["adjacency"]) for v in nbrs if u < v]
    return Graph.from_edges(doc["n"], edges, doc.get("labels"), doc.get("name", ""))


def td_to_json(t: TreeDecomposition) -> dict:
    return {"name": t.name, "bags": [list(b) for b in t.bags], "tree_edges": [list(e) for e in t.tree_edges]}
