"""Reference flow-polynomial computations that do not use edge weights at all.

* :func:`flow_poly` -- deletion/contraction, exact integer polynomial in q.
* :func:`flow_count_direct` -- counts nowhere-zero Z_q flows by enumeration.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import zip_longest

import numpy as np

from .errors import TooLarge
from .graph import Multigraph, incidence

FLOW_POLY_MAX_EDGES = 24
DIRECT_MAX_ASSIGNMENTS = 10**8


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in q; ``coefficients[k]`` multiplies ``q**k``."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(x) for x in c))

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, q: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * q + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial(tuple(a + b for a, b in
                                   zip_longest(self.coefficients, other.coefficients, fillvalue=0)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-a for a in self.coefficients))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __pow__(self, k: int) -> IntPolynomial:
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            body = {0: f"{mag}", 1: "q" if mag == 1 else f"{mag}q"}.get(
                k, f"q^{k}" if mag == 1 else f"{mag}q^{k}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f" {s} {b}" for s, b in terms[1:])


ZERO = IntPolynomial(())
ONE = IntPolynomial((1,))
Q_MINUS_ONE = IntPolynomial((-1, 1))


def _canonical(edges: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Relabel by a degree signature and return the sorted edge multiset.

    The key is exact for the labelled graph it produces, so two graphs
    sharing a key really are the same multigraph.
    """
    deg: dict[int, int] = {}
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    sig = {v: (deg[v], tuple(sorted(deg[w] for w in nbrs[v]))) for v in deg}
    order = sorted(deg, key=lambda v: (sig[v], v))
    label = {v: i for i, v in enumerate(order)}
    return tuple(sorted(tuple(sorted((label[u], label[v]))) for u, v in edges))


def _has_bridge(edges: tuple[tuple[int, int], ...]) -> bool:
    # Tarjan low-link over the multigraph; parallel edges are never bridges
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append((v, idx))
        adj.setdefault(v, []).append((u, idx))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    timer = 0
    for root in adj:
        if root in disc:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, parent_edge, it = stack[-1]
            advanced = False
            for w, idx in it:
                if idx == parent_edge:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, idx, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        return True
    return False


class _FlowPoly:
    def __init__(self):
        self.memo: dict[tuple, IntPolynomial] = {}

    def __call__(self, edges: tuple[tuple[int, int], ...]) -> IntPolynomial:
        if not edges:
            return ONE
        key = _canonical(list(edges))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._compute(key)
        self.memo[key] = result
        return result

    def _compute(self, edges: tuple[tuple[int, int], ...]) -> IntPolynomial:
        if _has_bridge(edges):
            return ZERO
        # pick an edge touching a minimum-degree vertex: short recursion
        deg: dict[int, int] = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        vmin = min(deg, key=lambda v: (deg[v], v))
        e = next(i for i, (u, v) in enumerate(edges) if vmin in (u, v))
        a, b = edges[e]
        rest = edges[:e] + edges[e + 1:]

        # contraction: merge b into a; the other a-b edges become loops
        loops = 0
        contracted = []
        for u, v in rest:
            u2 = a if u == b else u
            v2 = a if v == b else v
            if u2 == v2:
                loops += 1
            else:
                contracted.append((u2, v2))
        result = self(tuple(contracted)) * (Q_MINUS_ONE ** loops)
        if deg[vmin] > 2:
            # with degree 2 the deletion leaves a pendant edge, i.e. a bridge
            result = result - self(rest)
        return result


def flow_poly(g: Multigraph) -> IntPolynomial:
    """Flow polynomial of a loopless multigraph."""
    if g.n_edges > FLOW_POLY_MAX_EDGES:
        raise TooLarge(f"deletion/contraction is capped at {FLOW_POLY_MAX_EDGES} edges")
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        return _FlowPoly()(g.edges)
    finally:
        sys.setrecursionlimit(limit)


def flow_count_direct(g: Multigraph, q: int, chunk: int = 1 << 18) -> int:
    """Count k in (Z_q \\ {0})^E with zero net flow at every vertex."""
    if q < 2:
        raise ValueError("q must be at least 2")
    m = g.n_edges
    total = (q - 1) ** m
    if total > DIRECT_MAX_ASSIGNMENTS:
        raise TooLarge(f"(q-1)^|E| = {total} exceeds {DIRECT_MAX_ASSIGNMENTS}")
    if m == 0:
        return 1
    inc = incidence(g).T  # |E| x |V|
    radix = (q - 1) ** np.arange(m, dtype=np.int64)
    count = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        k = (idx[:, None] // radix[None, :]) % (q - 1) + 1
        net = (k @ inc) % q
        count += int(np.count_nonzero(~net.any(axis=1)))
    return count


def flow_value(g: Multigraph, q: int, loops: int = 0) -> int:
    """F_G(q) times the (q-1) factor contributed by stripped loops."""
    return flow_poly(g)(q) * (q - 1) ** loops

