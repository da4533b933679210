"""Brute-force tree and forest sums, independent of any determinant.

These are oracles: exponential in |E| and only meant for small graphs.
:func:`s_alpha_det` is the matrix-tree counterpart kept here so both routes
live side by side.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import Disconnected, EmptyRoots, TooLarge
from .ffield import FieldElem, FieldParams
from .graph import Multigraph, components, is_connected

WeightAssignment = Sequence[FieldElem]

FOREST_MAX_EDGES = 20


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def make_weights(fp: FieldParams, values: Iterable[int]) -> list[FieldElem]:
    return [fp(v) for v in values]


def _field_of(a: WeightAssignment, fp: FieldParams | None) -> FieldParams:
    if fp is not None:
        return fp
    if not a:
        raise ValueError("cannot infer the field from an empty weight assignment; pass fp")
    return a[0].field


def _check_weights(g: Multigraph, a: WeightAssignment) -> None:
    if len(a) != g.n_edges:
        raise ValueError(f"expected {g.n_edges} weights, got {len(a)}")


def spanning_trees(g: Multigraph) -> Iterator[frozenset[int]]:
    """Yield each spanning tree once, as a set of edge indices.

    Branches on every edge (keep it if it joins two components, else skip;
    skipping is pruned when the remaining edges can no longer connect the graph).
    """
    if not is_connected(g):
        raise Disconnected("spanning trees need a connected graph")
    n, edges = g.n_vertices, g.edges
    need = n - 1

    def can_still_connect(chosen: list[int], start: int) -> bool:
        pool = [edges[i] for i in chosen] + list(edges[start:])
        return max(components(n, pool)) == 0

    def rec(i: int, chosen: list[int]) -> Iterator[frozenset[int]]:
        if len(chosen) == need:
            yield frozenset(chosen)
            return
        if i == len(edges) or len(edges) - i < need - len(chosen):
            return
        dsu = _DSU(n)
        for j in chosen:
            dsu.union(*edges[j])
        u, v = edges[i]
        if dsu.find(u) != dsu.find(v):
            chosen.append(i)
            yield from rec(i + 1, chosen)
            chosen.pop()
        if can_still_connect(chosen, i + 1):
            yield from rec(i + 1, chosen)

    yield from rec(0, [])


def _product(fp: FieldParams, a: WeightAssignment, idx: Iterable[int]) -> int:
    acc = 1
    for i in idx:
        acc = fp.mul(acc, a[i].code)
    return acc


def s_alpha_bruteforce(g: Multigraph, a: WeightAssignment,
                       fp: FieldParams | None = None) -> FieldElem:
    """Sum over spanning trees of the product of edge weights."""
    _check_weights(g, a)
    fp = _field_of(a, fp)
    if g.n_vertices == 1:
        return fp.one
    total = 0
    for tree in spanning_trees(g):
        total = fp.add(total, _product(fp, a, tree))
    return fp.from_code(total)


def det_codes(fp: FieldParams, rows: list[list[int]]) -> int:
    """Determinant of a square matrix of element codes by Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = fp.neg(det)
        det = fp.mul(det, m[c][c])
        inv_p = fp.inv(m[c][c])
        for r in range(c + 1, n):
            if m[r][c]:
                f = fp.mul(m[r][c], inv_p)
                m[r] = [fp.sub(x, fp.mul(f, y)) for x, y in zip(m[r], m[c])]
    return det


def s_alpha_det(g: Multigraph, a: WeightAssignment,
                fp: FieldParams | None = None) -> FieldElem:
    """Determinant of the weighted Laplacian with row and column 0 removed."""
    from .lapmat import laplacian

    _check_weights(g, a)
    fp = _field_of(a, fp)
    if not is_connected(g):
        raise Disconnected("the matrix-tree theorem needs a connected graph")
    lap = laplacian(g, a, fp)
    keep = list(range(1, g.n_vertices))
    return fp.from_code(det_codes(fp, [[lap.codes[i][j] for j in keep] for i in keep]))


def forest_sum(g: Multigraph, a: WeightAssignment, roots: Iterable[int],
               fp: FieldParams | None = None) -> FieldElem:
    """Sum over spanning forests whose trees each contain exactly one root."""
    roots = frozenset(roots)
    if not roots:
        raise EmptyRoots("forest sum needs at least one root")
    _check_weights(g, a)
    fp = _field_of(a, fp)
    if not is_connected(g):
        raise Disconnected("forest sums are defined on connected graphs here")
    if g.n_edges > FOREST_MAX_EDGES:
        raise TooLarge(f"forest enumeration is capped at {FOREST_MAX_EDGES} edges")
    size = g.n_vertices - len(roots)
    total = 0
    for subset in itertools.combinations(range(g.n_edges), size):
        dsu = _DSU(g.n_vertices)
        if not all(dsu.union(*g.edges[i]) for i in subset):
            continue
        # k roots in k components: no two roots may share one
        if len({dsu.find(r) for r in roots}) != len(roots):
            continue
        total = fp.add(total, _product(fp, a, subset))
    return fp.from_code(total)
