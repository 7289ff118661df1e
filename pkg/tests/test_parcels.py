from fractions import Fraction

import pytest

from parcelforge.corpus import builtin, corpus
from parcelforge.cyclotomic import CycElem
from parcelforge.flows import flow_list
from parcelforge.ground import OrientedGraph, graph_instance, matrix_instance
from parcelforge.groups import cyclic, gfp
from parcelforge.invariants import char_poly
from parcelforge.parcels import (
    FULL,
    INNER,
    NONZERO,
    PAIR,
    SETOPS,
    TUPLE,
    bicycle_dimension,
    bicycle_dimension_bruteforce,
    gauss_sum,
    hamming_census,
    inner_product_census,
    profile,
    prop25_census,
    quadratic_flow_sum,
    setop_census,
    support_census,
    support_diff_enumerator,
    tuple_census,
    weight_enumerator,
)

from oracles import hamming, pair_census, supp

TRI = builtin("triangle-cycle")
TREE = graph_instance(OrientedGraph(4, ((0, 1), (1, 2), (1, 3))), "cycle")


def test_hamming_examples():
    assert hamming_census(TRI, cyclic(2), 2).bins == {0: 8, 1: 8}
    assert hamming_census(TREE, cyclic(3), 5).bins == {0: 27}
    assert hamming_census(TRI, cyclic(3), 1, nonzero=True).bins == {0: 10}
    assert hamming_census(TRI, cyclic(2), 3, nonzero=True).bins == {0: 1}


def test_support_examples():
    assert support_census(TREE, cyclic(2), 1, 1, 2).bins == {0: 8}
    c = support_census(TRI, cyclic(2), 1, 1, 4, tier=1)
    assert c.total() == 16 and c.tier == 1
    twisted = support_census(builtin("k4-cycle"), cyclic(3), 1, -1, 5)
    assert all(twisted[k] == twisted[(5 - k) % 5] for k in range(5))


def test_setop_examples():
    # a tree forces f = g, so the union has |supp f| elements
    c = setop_census(TREE, cyclic(3), "union", None)
    assert c.bins == {0: 1, 1: 6, 2: 12, 3: 8}
    for op in SETOPS:
        assert setop_census(TRI, cyclic(2), op, 2, tier=1).bins == setop_census(TRI, cyclic(2), op, 2, tier=2).bins
    assert setop_census(TRI, cyclic(2), "sheffer", 2).total() == 16
    assert setop_census(TRI, cyclic(2), "|", 2).bins == setop_census(TRI, cyclic(2), "sheffer", 2).bins


def test_inner_product_examples():
    free = matrix_instance([[1, 0], [0, 1]], 3)
    assert inner_product_census(free, gfp(3)).total() == 3 ** 4
    # a rank-0 instance has only f = g, so the inner product is sum f(e)^2
    zero = graph_instance(OrientedGraph(3, ((0, 1), (1, 2))), "cycle")
    expected = {}
    for a in range(3):
        for b in range(3):
            k = (a * a + b * b) % 3
            expected[k] = expected.get(k, 0) + 1
    assert inner_product_census(zero, cyclic(3)).bins == expected
    assert inner_product_census(TRI, cyclic(2)).bins == setop_census(TRI, cyclic(2), "intersection", 2).bins


def test_gauss_sum_examples():
    w = CycElem.omega(3)
    assert gauss_sum(3) == 1 + 2 * w
    for p in (3, 5, 7, 11):
        g = gauss_sum(p)
        assert g * g.conj() == p
    with pytest.raises(ValueError):
        gauss_sum(2)


def test_bicycle_examples():
    ident = matrix_instance([[1, 0], [0, 1]], 3)
    assert bicycle_dimension(ident, 3) == 0
    s = quadratic_flow_sum(ident, 3)
    assert s * s.conj() == 9
    ones = matrix_instance([[1, 1, 1]], 3)
    assert bicycle_dimension(ones, 3) == 1 == bicycle_dimension_bruteforce(ones, 3)
    s = quadratic_flow_sum(ones, 3)
    assert s * s.conj() == 9


def test_tuple_examples():
    assert tuple_census(TREE, cyclic(2), 2, 3).bins == {0: 8}
    c1 = tuple_census(TRI, cyclic(2), 2, 4, tier=1)
    c2 = tuple_census(TRI, cyclic(2), 2, 4, tier=2)
    assert c1.bins == c2.bins and c1.total() == 2 ** 5


def test_tuple_nonvanishing_tracks_chi4():
    k4 = tuple_census(builtin("k4-cycle"), cyclic(2), 2, 6).root_sum()
    bridge = tuple_census(builtin("bridge-cycle"), cyclic(2), 2, 6).root_sum()
    assert char_poly(builtin("k4-cycle")).evaluate(4) != 0 and not k4.is_zero()
    assert char_poly(builtin("bridge-cycle")).evaluate(4) == 0 and bridge.is_zero()


def test_rem_parity_examples():
    c = prop25_census(builtin("triangle-vertex"), 3, tier=1)
    assert c[1] - c[-1] == 6
    tree = graph_instance(OrientedGraph(3, ((0, 1), (1, 2))), "vertex")
    for q in (3, 5):
        c = prop25_census(tree, q)
        assert c[1] - c[-1] == (q - 1) ** 2
    with pytest.raises(ValueError):
        prop25_census(tree, 4)


def test_rem_parity_table_counts():
    # for q = 5 each nonzero a has (q + 1) / 2 pairs (b, c), b - c = a, with Rem(b + c, q) even
    q = 5
    for a in range(1, q):
        even = sum(1 for c in range(q) if (((c + a) % q + c) % q) % 2 == 0)
        assert even == (q + 1) // 2


def test_weight_enumerator_hamming_code():
    assert weight_enumerator(builtin("hamming74"), gfp(2)) == {0: 1, 3: 7, 4: 7, 7: 1}
    assert weight_enumerator(TREE, cyclic(3)) == {0: 1}


def test_support_difference_enumerator_is_symmetric():
    e = support_diff_enumerator(TRI, cyclic(2))
    assert e == e.reversed()
    assert e.coefficient_sum() == 2 ** 4


@pytest.mark.parametrize("inst", [i for i in corpus() if i.ncols <= 4], ids=lambda i: i.name)
def test_pair_censuses_against_brute_force(inst):
    q = inst.p or 3
    group = gfp(q) if inst.p else cyclic(q)
    flows = flow_list(inst, group)
    n = inst.ncols
    assert hamming_census(inst, group, None).bins == pair_census(flows, q, n, hamming)
    assert hamming_census(inst, group, None, nonzero=True).bins == pair_census(flows, q, n, hamming, nonzero=True)
    assert support_census(inst, group, 2, 3, 7).bins == pair_census(
        flows, q, n, lambda f, g: 2 * supp(f) + 3 * supp(g), 7)
    union = pair_census(flows, q, n, lambda f, g: sum(1 for a, b in zip(f, g) if a or b))
    assert setop_census(inst, group, "union", None).bins == union
    implication = pair_census(flows, q, n, lambda f, g: sum(1 for a, b in zip(f, g) if not a or b))
    assert setop_census(inst, group, "implication", None).bins == implication
    if inst.p or q == 3:
        inner = pair_census(flows, q, n, lambda f, g: sum(a * b for a, b in zip(f, g)), q)
        assert inner_product_census(inst, group).bins == inner


def _families(inst, group):
    fams = [(PAIR, FULL, 1), (PAIR, NONZERO, 1), (TUPLE, FULL, 2)]
    if group.is_prime_field:
        fams.append((INNER, FULL, 1))
    return fams


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_tiers_agree(inst):
    from parcelforge.parcels import tier1_size
    groups = [cyclic(q) for q in (2, 3, 4)] if inst.is_integral else [gfp(inst.p)]
    checked = 0
    for group in groups:
        for kind, domain, m in _families(inst, group):
            if tier1_size(inst, group, m, domain) > 1 << 14:
                continue
            assert profile(inst, group, kind, domain, m, 1) == profile(inst, group, kind, domain, m, 2)
            checked += 1
    if inst.ncols <= 4:
        assert checked > 0


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_universe_sizes(inst):
    group = gfp(inst.p) if inst.p else cyclic(3)
    q, n, r = group.order, inst.ncols, inst.rank
    assert hamming_census(inst, group, 4).total() == q ** (n + r)
    assert tuple_census(inst, group, 2, 5).total() == q ** (n + 2 * r)
    nz = hamming_census(inst, group, 4, nonzero=True).total()
    # nowhere-zero pairs: (q - 2)^(|E| - r) R(q(q - 2), 1/(q - 2)) for q >= 3
    from parcelforge.invariants import rank_gen_poly
    if q > 2:
        expect = (q - 2) ** (n - r) * rank_gen_poly(inst).evaluate(q * (q - 2), Fraction(1, q - 2))
        assert nz == expect


def test_census_json():
    c = hamming_census(TRI, cyclic(2), 2)
    data = c.to_json()
    assert data["bins"] == {"0": "8", "1": "8"} and data["universe"] == "16" and data["sigma"] == 2
    assert hamming_census(TRI, cyclic(2), None).to_json()["sigma"] == "inf"
