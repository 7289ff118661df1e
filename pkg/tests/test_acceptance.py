"""Acceptance gate: one test per criterion, each under its runtime limit.

Every test prints (and records for the terminal summary) a single
``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line.
"""

import time
from contextlib import contextmanager

from conftest import ACCEPTANCE_LINES
from oracles import kirchhoff_flows, pair_census
from parcelforge import builtin, corpus
from parcelforge.corpus import builtin_graph
from parcelforge.cyclotomic import coprime_residues
from parcelforge.flows import budget, kernel_census
from parcelforge.ground import orthogonal_dual
from parcelforge.groups import cyclic
from parcelforge.invariants import (char_poly, crapo_tutte_convolution, flow_census_from_rank_poly, flow_census_poly,
                                   rank_gen_poly)
from parcelforge.parcels import (FULL, INNER, NONZERO, PAIR, PROP25, TUPLE, gauss_sum, profile, tier1_size,
                                 weight_enumerator)
from parcelforge.polynomials import UniPoly
from parcelforge.registry import (REGISTRY, CheckError, binary_group, default_group, verify,
                                  verify_theorem_1_1)

SECTION4 = ("thm4.1", "thm4.2", "cor4.3", "cor4.4", "cor4.5", "cor4.6", "thm4.7", "cor4.8", "prop4.9",
            "cor4.10", "cor4.11", "cor4.12", "thm4.13", "cor4.14", "cor4.15",
            "thm4.16a", "thm4.16b", "thm4.16c", "thm4.16d", "thm4.16e", "cor4.17", "cor4.18")


@contextmanager
def criterion(n, text, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {text} ({elapsed:.2f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def run_grid(ids, instances=None, **overrides):
    """Run every grid cell of the given checks; returns the reports."""
    reports = []
    for cid in ids:
        for inst in instances or corpus():
            for cell in REGISTRY[cid].grid(inst):
                reports.append(verify(inst, cid, {**cell, **overrides}))
    return reports


def assert_all_pass(reports):
    failed = [(r.theorem, r.instance, r.params) for r in reports if r.status != "pass"]
    assert reports and not failed, failed


def test_flow_census_identity():
    with criterion(1, "flow census = kernel census = Crapo-Tutte sum, q in 2..5", 5):
        compared = 0
        for inst in corpus():
            for q in (2, 3, 4, 5):
                ct = crapo_tutte_convolution(inst, q)
                try:
                    group = default_group(inst, q)
                except CheckError:
                    # no module of order q: only the polynomial identity is meaningful
                    assert flow_census_from_rank_poly(rank_gen_poly(inst), inst.rank, q) == ct, (inst.name, q)
                    continue
                poly = flow_census_poly(inst, q)
                assert ct == poly, (inst.name, q)
                assert UniPoly(kernel_census(inst, group)) == poly, (inst.name, q)
                compared += 1
        assert compared >= 4 * 19


def test_hamming_parcels():
    with criterion(2, "Hamming parcels, sigma in {2,3,4,6}, q in {2,3,4}, all rho", 10):
        reports = run_grid(("thm3.1", "cor3.2"))
        assert_all_pass(reports)
        k4 = builtin("k4-cycle")
        cells = {(str(r.params["group"]), r.params["sigma"], r.params["rho"])
                 for r in reports if r.theorem == "thm3.1" and r.instance == k4.label()}
        want = {(f"cyclic:{q}", s, rho) for q in (2, 3, 4) for s in (2, 3, 4, 6) for rho in coprime_residues(s)}
        assert cells == want


def test_nowhere_zero_pair_count():
    with criterion(3, "triangle cycle side, q = 3: 10 nowhere-zero pairs"):
        inst = builtin("triangle-cycle")
        rep = verify(inst, "cor3.4", {"group": "cyclic:3"})
        assert rep.status == "pass" and rep.lhs == 10
        assert rank_gen_poly(inst).evaluate(3, 1) == 10
        (n, edges) = (3, [(0, 1), (1, 2), (2, 0)])
        brute = pair_census(kirchhoff_flows(n, edges, 3), 3, 3, lambda f, g: 0, nonzero=True)
        assert brute == {0: 10}


def test_support_and_set_operation_parcels():
    with criterion(4, "support and set-operation parcels with exceptional constants", 60):
        reports = run_grid(SECTION4)
        assert_all_pass(reports)
        seen = set()
        for r in reports:
            if r.theorem in ("thm4.2", "thm4.7") and "exceptional_value" in r.notes:
                key = (r.params["sigma"], r.params["group"].order)
                base = {(2, 4): 4, (3, 3): 3, (4, 2): 2}[key]
                inst = next(i for i in corpus() if i.label() == r.instance)
                assert r.lhs == base ** inst.ncols == r.notes["exceptional_value"]
                seen.add((r.theorem, key))
        assert {("thm4.2", (2, 4)), ("thm4.7", (3, 3)), ("thm4.7", (4, 2))} <= seen
        ops = {r.theorem for r in reports if r.theorem.startswith("thm4.16")}
        assert len(ops) == 5


def test_subset_pairs_of_graphs():
    with criterion(5, "subset pairs by |A| + |B| mod 4 on K4, C4, K23, bridge", 10):
        for name in ("k4", "c4", "k23", "bridge"):
            for rep in verify_theorem_1_1(builtin_graph(name), name):
                assert rep.status == "pass", (name, rep.instance)
                counts = rep.notes["parcels"]
                assert counts[1] == counts[3]


def test_rem_parity_parcels():
    with criterion(6, "signed Rem-parity parcels, q in {3,5}, tier 1 where feasible"):
        ran = 0
        for inst in corpus():
            if not inst.is_integral:
                continue
            for q in (3, 5):
                if tier1_size(orthogonal_dual(inst), cyclic(q), 1, FULL) > budget("tier1"):
                    continue
                rep = verify(inst, "prop2.5", {"q": q, "tier": 1})
                assert rep.status == "pass", (inst.name, q)
                assert rep.lhs == q ** (inst.ncols - inst.rank) * char_poly(inst).evaluate(q)
                ran += 1
        assert ran >= 10


def test_triple_parcels():
    with criterion(7, "binary triple parcels and the nowhere-zero 4-flow test", 30):
        binary = [i for i in corpus() if binary_group(i) is not None]
        assert_all_pass(run_grid(("thm5.2", "cor5.3", "cor5.4", "cor5.5"), binary))
        yes = verify(builtin("k4-cycle"), "thm5.6", {"m": 2})
        no = verify(builtin("bridge-cycle"), "thm5.6", {"m": 2})
        assert yes.status == no.status == "pass"
        assert yes.notes["nonzero"] and yes.notes["chi"] != 0
        assert not no.notes["nonzero"] and no.notes["chi"] == 0


def test_inner_product_parcels():
    with criterion(8, "Gauss sums, bicycle modulus, ternary inner products, p = 2 case"):
        for p in (3, 5, 7, 11):
            g = gauss_sum(p)
            assert g * g.conj() == p
        gfp35 = [i for i in corpus() if i.p in (3, 5)]
        assert len(gfp35) >= 4
        assert_all_pass(run_grid(("bicycle-modulus",), gfp35))
        assert_all_pass(run_grid(("bicycle-modulus", "cor6.2", "inner-p2")))


def test_hamming_code_enumerator():
    with criterion(9, "Hamming [7,4] weights and the enumerator substitution"):
        inst = builtin("hamming74")
        assert weight_enumerator(inst, default_group(inst, 2)) == {0: 1, 3: 7, 4: 7, 7: 1}
        assert_all_pass(run_grid(("thm7.3",), [inst]))


def test_invariance():
    with criterion(10, "censuses invariant under reorientation, sign flips, permutation"):
        reports = run_grid(("cor7.2",))
        assert_all_pass(reports)
        assert {r.instance for r in reports} == {i.label() for i in corpus()}


def tier_cells():
    """(instance, group, kind, domain, m) with a tier-1 universe of at most 2^20."""
    limit = 1 << 20
    for inst in corpus():
        for q in (2, 3, 4, 5):
            try:
                group = default_group(inst, q)
            except CheckError:
                continue
            kinds = [(PAIR, FULL, 1), (PAIR, NONZERO, 1), (TUPLE, FULL, 2), (TUPLE, FULL, 3)]
            if group.is_prime_field:
                kinds.append((INNER, FULL, 1))
            for kind, domain, m in kinds:
                if tier1_size(inst, group, m, domain) <= limit:
                    yield inst, group, kind, domain, m
            if inst.is_integral and q % 2:
                dual = orthogonal_dual(inst)
                if tier1_size(dual, group, 1, FULL) <= limit:
                    yield dual, group, PROP25, FULL, 1


def test_tier_agreement():
    with criterion(11, "tier 1 and tier 2 profiles agree on every cell up to 2^20", 300):
        cells = list(tier_cells())
        assert len(cells) >= 100
        for inst, group, kind, domain, m in cells:
            one = profile(inst, group, kind, domain, m, 1)
            two = profile(inst, group, kind, domain, m, 2)
            assert one == two, (inst.name, str(group), kind, domain, m)
