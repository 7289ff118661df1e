import json

import pytest

from parcelforge.corpus import GRAPHS, builtin, builtin_graph, corpus
from parcelforge.ground import (
    InstanceError,
    Matroid,
    OrientedGraph,
    fundamental_cycle_matrix,
    graph_instance,
    matrix_instance,
    orthogonal_dual,
    parse_instance,
    transformed,
    vertex_edge_matrix,
)

from oracles import rank_p, rank_q


def test_parse_graph_cycle_side():
    inst = parse_instance('{"kind":"graph","vertices":3,"edges":[[0,1],[1,2],[2,0]],"side":"cycle"}')
    assert inst.ncols == 3
    assert inst.rank == 1


def test_parse_gf2_identity():
    inst = parse_instance('{"kind":"matrix","ring":{"type":"gfp","p":2},"rows":[[1,0],[0,1]]}')
    assert (inst.ncols, inst.rank, inst.p) == (2, 2, 2)


@pytest.mark.parametrize("text, fragment", [
    ('{"kind":"matrix","ring":{"type":"int-tu"},"rows":[[1,2]]}', "rows[0][1]"),
    ('{"kind":"matrix","ring":{"type":"gfp","p":4},"rows":[[1]]}', "not prime"),
    ('{"kind":"graph","vertices":2,"edges":[[0,5]]}', "edges[0]"),
    ('{"kind":"graph", "vertices": 2,', "malformed JSON"),
    ('{"kind":"matrix","ring":{"type":"int-tu"},"rows":[[1,0],[1]]}', "rows[1]"),
    ('[1, 2]', "top level"),
])
def test_parse_errors_name_the_location(text, fragment):
    with pytest.raises(InstanceError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        parse_instance(text)


def test_non_tu_matrix_rejected():
    with pytest.raises(InstanceError, match="totally unimodular"):
        matrix_instance([[1, 1, 0], [0, 1, 1], [1, 0, 1]])


def test_incidence_columns():
    assert vertex_edge_matrix(OrientedGraph(2, ((0, 1),))) == [[-1], [1]]
    assert vertex_edge_matrix(OrientedGraph(1, ((0, 0),))) == [[0]]


def test_triangle_sides():
    g = builtin_graph("triangle")
    v = graph_instance(g, "vertex")
    assert v.rank == 2
    m = Matroid.from_instance(v)
    assert m.flats() == [0, 1, 2, 4, 7]
    rows = fundamental_cycle_matrix(g)
    assert len(rows) == 1 and all(abs(x) == 1 for x in rows[0])
    # a cycle row is orthogonal to every incidence row
    for r in vertex_edge_matrix(g):
        assert sum(a * b for a, b in zip(r, rows[0])) == 0


def test_tree_has_empty_cycle_matrix():
    g = OrientedGraph(4, ((0, 1), (1, 2), (1, 3)))
    inst = graph_instance(g, "cycle")
    assert inst.rows == () and inst.rank == 0


def test_bowtie_cycle_rank():
    assert builtin("bowtie-cycle").rank == 2
    assert len(builtin("bowtie-cycle").rows) == 2


@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_cycle_rows_orthogonal_to_incidence(name):
    g = builtin_graph(name)
    cyc = fundamental_cycle_matrix(g)
    inc = vertex_edge_matrix(g)
    for c in cyc:
        for r in inc:
            assert sum(a * b for a, b in zip(r, c)) == 0
    n = len(g.edges)
    assert len(cyc) == n - (g.vertex_count - g.component_count)


def test_loop_cycle_row_is_plus_one():
    assert builtin("loop-cycle").rows == ((1,),)
    assert builtin("loop-cycle").rank == 1


def test_subset_ranks():
    tri = builtin("triangle-cycle")
    m = Matroid.from_instance(tri)
    assert m.rk(0) == 0
    assert [m.rk(1 << e) for e in range(3)] == [1, 1, 1]
    assert m.closure(1) == 7
    assert m.closure(m.full) == m.full
    assert builtin("fano").rank == 3


def test_orthogonal_dual_examples():
    ident = matrix_instance([[1, 0], [0, 1]], 2)
    d = orthogonal_dual(ident)
    assert d.rank == 0
    ones = matrix_instance([[1, 1, 1]], 2)
    d = orthogonal_dual(ones)
    assert d.rank == 2
    assert all(sum(a * b for a, b in zip(r, (1, 1, 1))) % 2 == 0 for r in d.rows)
    fano_dual = orthogonal_dual(builtin("fano"))
    assert fano_dual.rank == 4 and len(fano_dual.rows) == 4


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_dual_is_orthogonal_with_complementary_rank(inst):
    d = orthogonal_dual(inst)
    assert d.rank == inst.ncols - inst.rank
    p = inst.p
    for r in inst.rows:
        for s in d.rows:
            dot = sum(a * b for a, b in zip(r, s))
            assert (dot % p == 0) if p else dot == 0


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_rank_matches_reference(inst):
    expected = rank_p(inst.rows, inst.p) if inst.p else rank_q(inst.rows)
    assert inst.rank == expected


def test_transformed_graph_reverses_edges():
    inst = builtin("triangle-vertex")
    t = transformed(inst, (), [0])
    assert t.graph.edges[0] == (1, 0)
    perm = transformed(inst, [2, 1, 0])
    assert perm.graph.edges == tuple(reversed(inst.graph.edges))


def test_instance_json_roundtrip():
    for inst in corpus():
        again = parse_instance(json.dumps(inst.to_json()))
        assert again == inst


def test_corpus_contents():
    names = [i.name for i in corpus()]
    assert len(names) >= 14 and len(set(names)) == len(names)
    assert builtin("k4-cycle").rank == 3
    with pytest.raises(InstanceError, match="unknown built-in"):
        builtin("k5")


def test_circuits_and_cocircuits_of_triangle():
    m = Matroid.from_instance(builtin("triangle-vertex"))
    assert m.circuits() == [7]
    assert m.cocircuits() == [3, 5, 6]
