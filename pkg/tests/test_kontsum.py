from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from alphaflow.errors import NonIntegerResult, OddRankResidue, SearchSpaceTooLarge
from alphaflow.ffield import field_make
from alphaflow.flowref import flow_poly
from alphaflow.graph import Multigraph, named_graph
from alphaflow.kontsum import (STable, flow_from_stable, n_count, n_count_by_rank, plan_frontier,
                               rank_profile, s_table, scaling_reduction_enumerate)
from alphaflow.lapmat import laplacian, max_nonsingular_principal
from alphaflow.treesum import s_alpha_det

PAR2 = Multigraph(2, ((0, 1), (0, 1)))
PAR3 = Multigraph(2, ((0, 1),) * 3)
SINGLE = Multigraph(2, ((0, 1),))


def python_stable(g, fp, zero_ok=False):
    """Pure-Python reference: one certificate per assignment, no reduction, no DP."""
    s = [0] * g.n_vertices
    counts = [0] * g.n_vertices
    lo = 0 if zero_ok else 1
    for codes in itertools.product(range(lo, fp.q), repeat=g.n_edges):
        cert = max_nonsingular_principal(laplacian(g, [fp.from_code(c) for c in codes]))
        s[cert.rank] += cert.eta_minor
        counts[cert.rank] += 1
    return tuple(s), tuple(counts)


@pytest.mark.parametrize("name,q", [("k3", 3), ("k3", 5), ("k3", 9), ("k4", 3), ("k4", 5),
                                    ("k33", 3), ("par3", 7), ("par2", 5)])
@pytest.mark.parametrize("engine", ["frontier", "direct"])
def test_engines_match_python_reference(name, q, engine):
    g = {"par2": PAR2, "par3": PAR3}.get(name) or named_graph(name)
    fp = field_make(*{9: (3, 2)}.get(q, (q, 1)))
    s, counts = python_stable(g, fp)
    t = s_table(g, fp, reduction=False, engine=engine)
    assert t.s_values == s and t.rank_counts == counts
    assert scaling_reduction_enumerate(g, fp, engine=engine).s_values == s


def test_k3_q5_table(f5):
    t = s_table(named_graph("k3"), f5, reduction=False)
    assert t.s_values == (0, 0, 20) and t.flow_value == 4
    assert t.assignments == 64


# values produced by both engines and matched to flow_poly through flow_from_stable
FROZEN = {
    ("k34", 3): ((0, 0, -6, 0, 174, 0, 414), (0, 0, 6, 82, 534, 1584, 1890), 6),
    ("k34", 5): ((0, 0, 156, 0, 26636, 0, -27580), (0, 0, 156, 8628, 269644, 3708576, 12790212), 876),
    ("k33", 5): ((0, 0, 36, 0, 1320, 0), (0, 0, 36, 2532, 52872, 206704), 60),
    ("k4", 5): ((0, 0, 120, 0), (0, 52, 888, 3156), 24),
    ("k5", 3): ((0, 0, -20, 0, 156), (0, 10, 100, 390, 524), 24),
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_tables(key):
    name, q = key
    s, counts, flow = FROZEN[key]
    t = s_table(named_graph(name), field_make(q))
    assert (t.s_values, t.rank_counts, t.flow_value) == (s, counts, flow)


def test_k35_q5_table(f5):
    t = s_table(named_graph("k35"), f5)
    assert t.s_values == (0, 0, 612, 0, 244860, 0, -8100, 0)
    assert t.flow_value == 9852 == flow_poly(named_graph("k35"))(5)


def test_k5_plus_pendant_table(f5):
    t = s_table(named_graph("k5_plus_pendant3"), f5)
    assert t.s_values[2] == -180 and t.s_values[4] == 513300
    assert t.flow_value == 20496


def test_flow_from_stable_arithmetic(f5):
    pet = STable(q=5, graph_id="petersen", s_values=(0, 0, 0, 0, 0, 0, -384, 0, 151920, 0))
    assert flow_from_stable(pet, f5) == 240
    pend = STable(q=5, graph_id="k5+", s_values=(0, 0, -180, 0, 513300, 0))
    assert flow_from_stable(pend, f5) == 20496
    with pytest.raises(OddRankResidue):
        flow_from_stable(STable(q=5, graph_id="", s_values=(0, 1, 0)), f5)
    with pytest.raises(NonIntegerResult):
        flow_from_stable(STable(q=5, graph_id="", s_values=(0, 0, 1)), f5)


def test_guard(f5):
    with pytest.raises(SearchSpaceTooLarge):
        s_table(named_graph("petersen"), field_make(11))
    with pytest.raises(SearchSpaceTooLarge):
        n_count(named_graph("petersen"), f5)


def test_n_count_examples(f3, f5):
    for q in (3, 5, 7):
        assert n_count(SINGLE, field_make(q)) == q - 1
    assert n_count(named_graph("k3"), f3) == 18
    assert n_count(named_graph("k3"), f5) == 100
    # the K3 tree sum is ab + ac + bc
    for fp in (f3, f5):
        brute = sum(1 for a, b, c in itertools.product(range(fp.q), repeat=3)
                    if (a * b + a * c + b * c) % fp.q)
        assert n_count(named_graph("k3"), fp) == brute


@pytest.mark.parametrize("name,q", [("k3", 3), ("k4", 3), ("k4", 5), ("k33", 3), ("par3", 5)])
def test_n_count_routes_agree(name, q):
    g = {"par3": PAR3}.get(name) or named_graph(name)
    fp = field_make(q)
    brute = sum(1 for codes in itertools.product(range(q), repeat=g.n_edges)
                if s_alpha_det(g, [fp.from_code(c) for c in codes]).code)
    assert n_count(g, fp) == n_count_by_rank(g, fp) == brute


def test_rank_profile_examples(f5):
    prof = rank_profile(named_graph("k3"), f5)
    assert prof[0] == 0 and sum(prof.values()) == 64
    assert rank_profile(PAR2, f5)[0] == 4


def test_threads_are_deterministic(f5):
    g = named_graph("k33")
    one = s_table(g, f5, threads=1)
    many = s_table(g, f5, threads=8)
    assert one == many
    assert s_table(g, f5, threads=1, engine="direct").s_values == \
        s_table(g, f5, threads=3, engine="direct").s_values


def test_frontier_plan_covers_every_edge():
    for name in ("k34", "petersen", "k5_plus_pendant3", "two_triangles_bridge"):
        g = named_graph(name)
        plan = plan_frontier(g)
        assert sorted(plan.order) == list(range(g.n_vertices))
        pos = {v: i for i, v in enumerate(plan.order)}
        placed = sorted((int(a), int(b)) for eu, ev in plan.slot_edges for a, b in zip(eu, ev))
        assert placed == sorted(tuple(sorted((pos[u], pos[v]))) for u, v in g.edges)
        assert sum(plan.edge_count) == g.n_edges


@st.composite
def connected_multigraphs(draw):
    n = draw(st.integers(2, 5))
    # a random spanning path keeps the graph connected; extras add cycles and parallels
    perm = draw(st.permutations(range(n)))
    edges = [(perm[i], perm[i + 1]) for i in range(n - 1)]
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    edges += draw(st.lists(pairs, max_size=4))
    return Multigraph(n, tuple(draw(st.permutations(edges))))


SMALL_FIELDS = [field_make(3), field_make(5), field_make(7), field_make(3, 2)]


@settings(max_examples=60, deadline=None)
@given(connected_multigraphs(), st.sampled_from(SMALL_FIELDS))
def test_engines_agree_and_reassemble_flow(g, fp):
    full = s_table(g, fp, reduction=False)
    direct = s_table(g, fp, reduction=False, engine="direct")
    reduced = s_table(g, fp)
    assert full.s_values == direct.s_values
    assert full.rank_counts == direct.rank_counts
    assert full.s_values == reduced.s_values and full.rank_counts == reduced.rank_counts
    assert all(v == 0 for r, v in enumerate(full.s_values) if r % 2)
    assert sum(full.rank_counts) == (fp.q - 1) ** g.n_edges
    assert full.flow_value == flow_poly(g)(fp.q)


@settings(max_examples=25, deadline=None)
@given(connected_multigraphs(), st.sampled_from(SMALL_FIELDS[:3]))
def test_frontier_matches_python_reference(g, fp):
    if (fp.q - 1) ** g.n_edges > 5000:
        return
    s, counts = python_stable(g, fp)
    t = s_table(g, fp, reduction=False)
    assert (t.s_values, t.rank_counts) == (s, counts)
