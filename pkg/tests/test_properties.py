"""Randomised checks on small graphs against the brute-force oracles."""

from hypothesis import given, settings, strategies as st

from oracles import kirchhoff_flows, pair_census, hamming, rank_poly_terms, tensions
from parcelforge import OrientedGraph, graph_instance, verify
from parcelforge.ground import orthogonal_dual, transformed, vertex_edge_matrix
from parcelforge.groups import cyclic
from parcelforge.flows import kernel_census
from parcelforge.invariants import flow_census_poly, rank_gen_poly
from parcelforge.parcels import FULL, NONZERO, PAIR, TUPLE, hamming_census, profile, tier1_size
from parcelforge.polynomials import UniPoly


@st.composite
def graphs(draw, max_vertices=4, max_edges=6):
    n = draw(st.integers(1, max_vertices))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=1, max_size=max_edges))
    return OrientedGraph(n, tuple(edges))


sides = st.sampled_from(["vertex", "cycle"])
settings.register_profile("parcels", max_examples=40, deadline=None)
settings.load_profile("parcels")


@given(graphs(), sides)
def test_dual_swaps_rank_polynomial(g, side):
    inst = graph_instance(g, side)
    swapped = {(j, i): c for (i, j), c in rank_gen_poly(inst).terms.items()}
    assert rank_gen_poly(orthogonal_dual(inst)).terms == swapped


@given(graphs(max_edges=5))
def test_rank_polynomial_matches_subset_ranks(g):
    inst = graph_instance(g, "vertex")
    assert rank_gen_poly(inst).terms == rank_poly_terms(vertex_edge_matrix(g), len(g.edges))


@given(graphs(max_edges=5), st.integers(2, 4))
def test_flow_census_matches_enumeration(g, q):
    inst = graph_instance(g, "cycle")
    census = {}
    for f in kirchhoff_flows(g.vertex_count, g.edges, q):
        k = sum(1 for x in f if x == 0)
        census[k] = census.get(k, 0) + 1
    assert kernel_census(inst, cyclic(q)) == census
    assert flow_census_poly(inst, q) == UniPoly(census)


@given(graphs(max_edges=5), st.integers(2, 3))
def test_tension_census_matches_enumeration(g, q):
    inst = graph_instance(g, "vertex")
    census = {}
    for f in tensions(g.vertex_count, g.edges, q):
        k = sum(1 for x in f if x == 0)
        census[k] = census.get(k, 0) + 1
    assert kernel_census(inst, cyclic(q)) == census


@given(graphs(max_vertices=3, max_edges=4), sides, st.integers(2, 3))
def test_hamming_census_matches_pair_oracle(g, side, q):
    inst = graph_instance(g, side)
    flows = kirchhoff_flows(g.vertex_count, g.edges, q) if side == "cycle" else tensions(g.vertex_count, g.edges, q)
    want = pair_census(flows, q, len(g.edges), hamming)
    assert hamming_census(inst, cyclic(q), None, tier=2).bins == want


@given(graphs(max_edges=5), sides, st.integers(2, 3))
def test_tiers_agree(g, side, q):
    inst = graph_instance(g, side)
    group = cyclic(q)
    for kind, domain, m in ((PAIR, FULL, 1), (PAIR, NONZERO, 1), (TUPLE, FULL, 2)):
        if tier1_size(inst, group, m, domain) > 1 << 16:
            continue
        assert profile(inst, group, kind, domain, m, 1) == profile(inst, group, kind, domain, m, 2)


@given(graphs(), sides, st.data())
def test_censuses_invariant_under_relabelling(g, side, data):
    inst = graph_instance(g, side)
    n = inst.ncols
    perm = data.draw(st.permutations(range(n)))
    flips = data.draw(st.lists(st.integers(0, n - 1), unique=True))
    other = transformed(inst, perm, flips)
    for q in (2, 3):
        for nonzero in (False, True):
            a = hamming_census(inst, cyclic(q), None, nonzero=nonzero)
            b = hamming_census(other, cyclic(q), None, nonzero=nonzero)
            assert a.bins == b.bins


@given(graphs(max_edges=5), sides, st.sampled_from([3, 4, 6]))
def test_root_sums_are_galois_stable(g, side, sigma):
    inst = graph_instance(g, side)
    census = hamming_census(inst, cyclic(3), sigma)
    base = census.root_sum()
    for rho in range(1, sigma):
        if all(rho % p for p in (2, 3) if sigma % p == 0):
            assert census.root_sum(rho=rho) == base.galois(rho)


@given(graphs(max_edges=5), sides, st.sampled_from([2, 3, 4, 6]))
def test_hamming_identity_on_random_graphs(g, side, sigma):
    inst = graph_instance(g, side)
    rep = verify(inst, "thm3.1", {"group": "cyclic:3", "sigma": sigma})
    assert rep.status == "pass"
