"""Exhaustive weight enumeration: graded sums S(r, q), flow reassembly, N(G, q).

Two engines produce identical tables:

``"frontier"`` (default)
    Processes vertices in a fixed order. Once every edge at a vertex has a
    weight, its row of the Laplacian is final and the vertex can be pivoted
    out (Schur complement). Partial states that agree on the still-open part
    of the matrix are merged, so shared prefixes are eliminated only once.

``"direct"``
    Rebuilds and eliminates the full Laplacian for every assignment, walking
    the assignments with an odometer and patching the four entries touched by
    the changed edge.

Both rely on the fact that rank and the quadratic character of a maximal
nonsingular principal minor do not depend on which principal pivots are used.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import (
    Disconnected,
    HasLoops,
    NonIntegerResult,
    OddRankResidue,
    SearchSpaceTooLarge,
)
from .ffield import FieldParams, FieldTables
from .graph import Multigraph, is_connected

log = logging.getLogger(__name__)

REDUCED_GUARD = 10**10
NCOUNT_GUARD = 10**9
ENGINES = ("frontier", "direct")


@dataclass(frozen=True)
class STable:
    """Graded character sums of one graph at one q.

    ``s_values[r]`` is the sum of eta(maximal principal minor) over weight
    assignments whose Laplacian has rank r, for r = 0..|V|-1.
    """

    q: int
    graph_id: str
    s_values: tuple[int, ...]
    flow_value: int | None = None
    n_count: int | None = None
    rank_counts: tuple[int, ...] | None = None
    reduced: bool = True
    engine: str = "frontier"
    assignments: int = 0  # assignments actually enumerated (after reduction)

    def even_terms(self) -> list[tuple[int, int]]:
        return [(r, s) for r, s in enumerate(self.s_values) if r % 2 == 0]


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _check_graph(g: Multigraph) -> None:
    if any(u == v for u, v in g.edges):
        raise HasLoops("strip loops before enumerating")
    if not is_connected(g):
        raise Disconnected("the weight enumeration needs a connected graph")


def _tables_args(t: FieldTables):
    return t.add, t.sub, t.mul, t.inv, t.eta, t.eta_minus_one


# ---------------------------------------------------------------------------
# frontier plan
# ---------------------------------------------------------------------------

@dataclass
class FrontierPlan:
    order: list[int]
    slot_edges: list[tuple[np.ndarray, np.ndarray]]
    live: list[int]
    key_pairs: list[tuple[np.ndarray, np.ndarray]]
    first_step: int  # step holding the edge whose weight is pinned by the reduction
    edge_count: list[int] = field(default_factory=list)

    @property
    def max_key(self) -> int:
        return max((len(ki) for ki, _ in self.key_pairs), default=0)


def _open_sets(g: Multigraph, order: list[int]) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(order)}
    adj = g.adjacency()
    touched: set[int] = set()
    out = []
    for k, v in enumerate(order):
        touched.update(pos[w] for w in adj[v] if pos[w] > k)
        touched.discard(k)
        out.append(sorted(touched))
    return out


def _greedy_order(g: Multigraph, start: int) -> list[int]:
    adj = g.adjacency()
    order = [start]
    placed = {start}
    frontier = set(adj[start]) - placed
    while len(order) < g.n_vertices:
        def cost(v: int) -> tuple[int, int, int]:
            grown = len((frontier | set(adj[v])) - placed - {v})
            links = sum(1 for w in adj[v] if w in placed)
            return (grown, -links, v)
        candidates = frontier or (set(range(g.n_vertices)) - placed)
        v = min(candidates, key=cost)
        order.append(v)
        placed.add(v)
        frontier = (frontier | set(adj[v])) - placed
    return order


def _key_layout(open_now: list[int], k: int) -> tuple[np.ndarray, np.ndarray]:
    ki, kj = [], []
    for a, i in enumerate(open_now):
        for j in open_now[a:]:
            ki.append(i)
            kj.append(j)
    for c in range(k + 1):
        for j in open_now:
            ki.append(c)
            kj.append(j)
    return np.array(ki, dtype=np.int64), np.array(kj, dtype=np.int64)


def plan_frontier(g: Multigraph, order: list[int] | None = None) -> FrontierPlan:
    """Choose a vertex order (greedy, narrowest frontier) and lay out the DP keys."""
    if order is None:
        best = None
        for s in range(g.n_vertices):
            cand = _greedy_order(g, s)
            opens = _open_sets(g, cand)
            lens = [len(o) * (len(o) + 1) // 2 + (k + 1) * len(o) for k, o in enumerate(opens)]
            score = (max(lens), sum(lens), cand)
            if best is None or score < best:
                best = score
        order = best[2]
    pos = {v: i for i, v in enumerate(order)}
    opens = _open_sets(g, order)
    slot_edges, live, key_pairs, counts = [], [], [], []
    first_step = -1
    for k in range(g.n_vertices):
        eu, ev = [], []
        for u, v in g.edges:
            a, b = sorted((pos[u], pos[v]))
            if a == k:
                eu.append(a)
                ev.append(b)
        if eu and first_step < 0:
            first_step = k
        slot_edges.append((np.array(eu, dtype=np.int64), np.array(ev, dtype=np.int64)))
        counts.append(len(eu))
        live.append(max([k + 1] + [j + 1 for j in opens[k]]))
        key_pairs.append(_key_layout(opens[k], k))
    return FrontierPlan(order, slot_edges, live, key_pairs, first_step, counts)


def _pow2_at_least(x: int) -> int:
    return 1 << max(4, (max(1, x) - 1).bit_length())


def _frontier_chunk(g: Multigraph, plan: FrontierPlan, t: FieldTables, reduced: bool,
                    zero_ok: bool, chunk: tuple[int, int], track_counts: bool):
    n = g.n_vertices
    add, sub, mul, inv, eta, eta_m1 = _tables_args(t)
    q = t.q
    radix = q if zero_ok else q - 1
    offset = 0 if zero_ok else 1

    in_keys = np.zeros((1, 1), dtype=np.int32)
    in_vals = np.zeros((1, n), dtype=np.int64)
    in_vals[0, 0] = 1
    in_cnts = np.zeros((1, n), dtype=np.int64)
    in_cnts[0, 0] = 1
    in_used = np.ones(1, dtype=np.uint8)
    prev_pairs = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    occupied = 1

    for k in range(n):
        eu, ev = plan.slot_edges[k]
        fix = reduced and k == plan.first_step
        nfree = len(eu) - (1 if fix else 0)
        total = radix**nfree
        lo, hi = (chunk if k == plan.first_step else (0, total))
        ki, kj = plan.key_pairs[k]
        klen = len(ki)
        bound = min(occupied * (hi - lo), q**klen if klen < 40 else 1 << 62)
        cap = _pow2_at_least(min(bound, 1 << 22) * 10 // 7 + 1)
        while True:
            out_keys = np.zeros((cap, max(klen, 1)), dtype=np.int32 if q > 127 else np.int8)
            out_vals = np.zeros((cap, n), dtype=np.int64)
            out_cnts = np.zeros((cap if track_counts else 1, n), dtype=np.int64)
            out_used = np.zeros(cap, dtype=np.uint8)
            res = _kernels.dp_step(
                n, in_keys, in_vals, in_cnts, in_used, prev_pairs[0], prev_pairs[1], len(prev_pairs[0]),
                eu, ev, radix, offset, fix, lo, hi,
                0, k + 1, plan.live[k],
                out_keys, out_vals, out_cnts, out_used, ki, kj, klen,
                track_counts, add, sub, mul, inv, eta, eta_m1,
            )
            if res >= 0:
                break
            cap *= 2
            log.debug("step %d: growing state table to %d", k, cap)
        log.debug("step %d: %d states (key length %d)", k, res, klen)
        keep = np.nonzero(out_used)[0]
        in_keys = np.ascontiguousarray(out_keys[keep])
        in_vals = np.ascontiguousarray(out_vals[keep])
        in_cnts = np.ascontiguousarray(out_cnts[keep]) if track_counts else np.zeros((len(keep), n), dtype=np.int64)
        in_used = np.ones(len(keep), dtype=np.uint8)
        prev_pairs = (ki, kj)
        occupied = res

    assert len(in_used) == 1, "all vertices closed: exactly one empty state remains"
    return in_vals[0].copy(), in_cnts[0].copy()


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def _run_chunks(fn: Callable, chunks: list, threads: int):
    if threads <= 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))


def _enumerate(g: Multigraph, fp: FieldParams, *, reduced: bool, zero_ok: bool,
               threads: int, engine: str, track_counts: bool = True,
               plan: FrontierPlan | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """Signed sums and counts per rank over the chosen assignment space."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    t = fp.tables()
    n, m = g.n_vertices, g.n_edges
    radix = fp.q if zero_ok else fp.q - 1
    if m == 0:
        signed = np.zeros(n, dtype=np.int64)
        signed[0] = 1
        return signed, signed.copy(), 1

    if engine == "direct":
        free = m - (1 if reduced else 0)
        total = radix**free
        tails = np.array([u for u, _ in g.edges], dtype=np.int64)
        heads = np.array([v for _, v in g.edges], dtype=np.int64)
        add, sub, mul, inv, eta, eta_m1 = _tables_args(t)

        def work(c):
            s = np.zeros(n, dtype=np.int64)
            k = np.zeros(n, dtype=np.int64)
            _kernels.direct_enumerate(n, tails, heads, radix, reduced, c[0], c[1] - c[0],
                                      add, sub, mul, inv, eta, eta_m1, zero_ok, s, k)
            return s, k

        parts = _run_chunks(work, _split(total, threads * 4 if threads > 1 else 1), threads)
        return sum(p[0] for p in parts), sum(p[1] for p in parts), total

    plan = plan or plan_frontier(g)
    fs = plan.first_step
    nfirst = plan.edge_count[fs] - (1 if reduced else 0)
    first_total = radix**nfirst
    total = radix ** (m - (1 if reduced else 0))

    def work(c):
        return _frontier_chunk(g, plan, t, reduced, zero_ok, c, track_counts)

    parts = _run_chunks(work, _split(first_total, threads), threads)
    return sum(p[0] for p in parts), sum(p[1] for p in parts), total


def _guard(count: int, limit: int, force: bool, what: str) -> None:
    if count > limit and not force:
        raise SearchSpaceTooLarge(f"{what}: {count} assignments exceeds {limit} (use force)")


def s_table(g: Multigraph, fp: FieldParams, *, reduction: bool = True,
            threads: int | None = None, force: bool = False, engine: str = "frontier",
            graph_id: str = "", with_counts: bool = True) -> STable:
    """Graded sums S(r, q) over all nonzero weight assignments of ``g``.

    With ``reduction`` the weight of one edge is pinned to 1; every global
    rescaling orbit has exactly one such member, contributes (q-1) times its
    representative at even rank and cancels at odd rank.
    """
    _check_graph(g)
    m = g.n_edges
    reduced = reduction and m >= 1
    space = (fp.q - 1) ** (m - 1 if reduced else m)
    _guard(space, REDUCED_GUARD, force, "s_table")
    threads = threads or default_threads()
    signed, counts, done = _enumerate(g, fp, reduced=reduced, zero_ok=False,
                                      threads=threads, engine=engine, track_counts=with_counts)
    s = [int(x) for x in signed]
    c = [int(x) for x in counts]
    if reduced:
        s = [v * (fp.q - 1) if r % 2 == 0 else 0 for r, v in enumerate(s)]
        c = [v * (fp.q - 1) for v in c]
    table = STable(q=fp.q, graph_id=graph_id, s_values=tuple(s),
                   rank_counts=tuple(c) if with_counts else None,
                   reduced=reduced, engine=engine, assignments=done)
    return STable(**{**table.__dict__, "flow_value": flow_from_stable(table, fp)})


def scaling_reduction_enumerate(g: Multigraph, fp: FieldParams, **kw) -> STable:
    return s_table(g, fp, reduction=True, **kw)


def flow_from_stable(t: STable, fp: FieldParams) -> int:
    """Exact value of sum_r S(r,q) (g(q)/q)^r using g(q)^2 = eta(-1) q."""
    odd = [r for r, v in enumerate(t.s_values) if r % 2 == 1 and v != 0]
    if odd:
        raise OddRankResidue(f"nonzero S at odd ranks {odd}")
    q = fp.q
    big_r = max((r for r in range(len(t.s_values)) if r % 2 == 0), default=0)
    half = big_r // 2
    num = sum(v * fp.eta_minus_one ** (r // 2) * q ** (half - r // 2)
              for r, v in enumerate(t.s_values) if r % 2 == 0)
    den = q**half
    if num % den:
        raise NonIntegerResult(f"{num} / {den} is not an integer")
    return num // den


def rank_profile(g: Multigraph, fp: FieldParams, *, reduction: bool = True,
                 threads: int | None = None, force: bool = False,
                 engine: str = "frontier") -> dict[int, int]:
    """Number of nonzero weight assignments per Laplacian rank."""
    t = s_table(g, fp, reduction=reduction, threads=threads, force=force, engine=engine)
    return dict(enumerate(t.rank_counts))


def n_count(g: Multigraph, fp: FieldParams, *, threads: int | None = None,
            force: bool = False) -> int:
    """Number of alpha in F_q^E (zeros allowed) with nonzero spanning-tree sum."""
    if not is_connected(g):
        raise Disconnected("N(G, q) is defined for connected graphs")
    m, n = g.n_edges, g.n_vertices
    total = fp.q**m
    _guard(total, NCOUNT_GUARD, force, "n_count")
    if n == 1:
        return total
    t = fp.tables()
    tails = np.array([u for u, _ in g.edges], dtype=np.int64)
    heads = np.array([v for _, v in g.edges], dtype=np.int64)
    threads = threads or default_threads()

    def work(c):
        out = np.zeros(1, dtype=np.int64)
        _kernels.det_minor_nonzero_count(n, tails, heads, fp.q, c[0], c[1] - c[0],
                                         t.add, t.sub, t.mul, t.inv, out)
        return int(out[0])

    return sum(_run_chunks(work, _split(total, threads * 4 if threads > 1 else 1), threads))


def n_count_by_rank(g: Multigraph, fp: FieldParams, *, threads: int | None = None) -> int:
    """Same count through the rank route: s(alpha, G) != 0 iff rank L = |V| - 1."""
    _check_graph(g)
    _, counts, _ = _enumerate(g, fp, reduced=False, zero_ok=True,
                              threads=threads or default_threads(), engine="frontier")
    return int(counts[g.n_vertices - 1])
