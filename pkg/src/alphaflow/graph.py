"""Loopless multigraphs with oriented edges, edge-list I/O and a small catalog."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    EmptyGraph,
    EmptySubset,
    HasLoops,
    MalformedLine,
    NegativeIndex,
    UnknownName,
)


@dataclass(frozen=True)
class Multigraph:
    """Multigraph on vertices ``0..n_vertices-1``.

    ``edges[e] == (tail, head)``; repeated pairs are parallel edges. The
    orientation only fixes the sign convention of the incidence matrix.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.n_vertices < 1:
            raise EmptyGraph("a graph needs at least one vertex")
        for u, v in self.edges:
            if u < 0 or v < 0:
                raise NegativeIndex(f"edge ({u}, {v}) has a negative endpoint")
            if u >= self.n_vertices or v >= self.n_vertices:
                raise ValueError(f"edge ({u}, {v}) out of range for {self.n_vertices} vertices")
            if u == v:
                raise HasLoops(f"loop at vertex {u}")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def is_simple(self) -> bool:
        keys = [frozenset(e) for e in self.edges]
        return len(set(keys)) == len(keys)


VertexSubset = frozenset


def parse_edge_list(text: str) -> tuple[Multigraph, int]:
    """Parse ``u v`` lines; loops are dropped and counted.

    Returns the graph and the number of loops removed. Callers evaluating
    flow counts multiply by ``(q-1) ** loops``.
    """
    edges: list[tuple[int, int]] = []
    loops = 0
    max_index = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(lineno, raw)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(lineno, raw) from None
        if u < 0 or v < 0:
            raise NegativeIndex(f"line {lineno}: negative vertex index")
        max_index = max(max_index, u, v)
        if u == v:
            loops += 1
        else:
            edges.append((u, v))
    if max_index < 0:
        raise EmptyGraph("edge list contains no edges")
    return Multigraph(max_index + 1, tuple(edges)), loops


def read_edge_list(path) -> tuple[Multigraph, int]:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def to_edge_list(g: Multigraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def _complete(n: int) -> Multigraph:
    return Multigraph(n, tuple(itertools.combinations(range(n), 2)))


def _complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def _petersen() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, tuple(outer + spokes + inner))


def _k5_plus_pendant3() -> Multigraph:
    k5 = _complete(5)
    return Multigraph(6, k5.edges + ((0, 5), (1, 5), (2, 5)))


def _two_triangles_bridge() -> Multigraph:
    return Multigraph(6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)))


_CATALOG = {
    "k3": lambda: _complete(3),
    "k4": lambda: _complete(4),
    "k5": lambda: _complete(5),
    "k33": lambda: _complete_bipartite(3, 3),
    "k34": lambda: _complete_bipartite(3, 4),
    "k35": lambda: _complete_bipartite(3, 5),
    "petersen": _petersen,
    "k5_plus_pendant3": _k5_plus_pendant3,
    "two_triangles_bridge": _two_triangles_bridge,
}

CATALOG_NAMES = tuple(_CATALOG)


def named_graph(name: str) -> Multigraph:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise UnknownName(f"unknown graph {name!r}; choose from {', '.join(_CATALOG)}") from None


def contract(g: Multigraph, w: Iterable[int]) -> Multigraph:
    """Merge the vertices of ``w`` into one vertex and drop the edges inside ``w``.

    The merged vertex sits where ``min(w)`` was; the other surviving vertices
    keep their relative order. Edge order is preserved.
    """
    w = frozenset(w)
    if not w:
        raise EmptySubset("cannot contract an empty vertex set")
    if not w <= set(range(g.n_vertices)):
        raise ValueError("subset has vertices outside the graph")
    anchor = min(w)
    relabel: dict[int, int] = {}
    nxt = 0
    for v in range(g.n_vertices):
        if v in w and v != anchor:
            continue
        relabel[v] = nxt
        nxt += 1
    for v in w:
        relabel[v] = relabel[anchor]
    edges = tuple(
        (relabel[u], relabel[v]) for u, v in g.edges if not (u in w and v in w)
    )
    return Multigraph(nxt, edges)


def contract_edges_kept(g: Multigraph, w: Iterable[int]) -> list[int]:
    """Indices of the edges of ``g`` that survive :func:`contract` (in order)."""
    w = frozenset(w)
    return [i for i, (u, v) in enumerate(g.edges) if not (u in w and v in w)]


def incidence(g: Multigraph) -> np.ndarray:
    """|V| x |E| matrix with -1 at the tail and +1 at the head of each edge."""
    m = np.zeros((g.n_vertices, g.n_edges), dtype=np.int64)
    for e, (u, v) in enumerate(g.edges):
        m[u, e] = -1
        m[v, e] = 1
    return m


def components(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Component label per vertex."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    label = [-1] * n
    c = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = c
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if label[v] < 0:
                    label[v] = c
                    queue.append(v)
        c += 1
    return label


def is_connected(g: Multigraph) -> bool:
    return max(components(g.n_vertices, g.edges)) == 0
