"""Flows of an instance over a finite abelian group, and censuses over them.

A flow is an element of the row module of the instance matrix with
coefficients in the group.  The module is generated by any row basis (over Q
for TU matrices every other row is an integer combination of a basis, since
the basis contains a unimodular square submatrix), so flows are the images of
all coefficient tuples on a basis; there are exactly q^r of them, which is
checked on every call.
"""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Callable, Dict, Mapping, Tuple, Union

import numpy as np

from .ground import Instance, Matroid, OrientedGraph, elems_of, mask_of
from .groups import GroupSpec, check_compatible
from .invariants import char_poly_signed_sum
from .linalg import rank_mod_p

DEFAULT_BUDGETS = {"flows": 1 << 24, "tier1": 1 << 20, "tier2": 1 << 22}
CHUNK = 1 << 15


class BudgetError(RuntimeError):
    """An enumeration would exceed its budget."""


def budget(key: str) -> int:
    """Budget for ``key``; PARCELFORGE_BUDGET may be a single integer (all
    budgets) or a comma list like ``flows=1000000,tier1=4096``."""
    raw = os.environ.get("PARCELFORGE_BUDGET", "").strip()
    try:
        if raw and "=" not in raw:
            return int(raw)
        for item in raw.split(",") if raw else ():
            name, _, value = item.partition("=")
            if name.strip() == key:
                return int(value)
    except ValueError:
        raise ValueError(f"PARCELFORGE_BUDGET={raw!r}: expected an integer or name=integer pairs") from None
    return DEFAULT_BUDGETS[key]


def _basis_rows(inst: Instance) -> np.ndarray:
    rows = [inst.rows[i] for i in inst.basis_row_indices]
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), inst.ncols)


@lru_cache(maxsize=128)
def _flows_cached(inst: Instance, group: GroupSpec) -> np.ndarray:
    check_compatible(inst, group)
    q = group.order
    basis = _basis_rows(inst)
    r = basis.shape[0]
    n = inst.ncols
    total = q ** r
    mods = np.asarray(group.components, dtype=np.int64)
    digits = group.digits
    out = np.empty((total, n), dtype=np.int64)
    place = q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        coeff_codes = (idx[:, None] // place[None, :]) % q  # (N, r)
        comps = digits[coeff_codes]  # (N, r, ncomp)
        vals = np.einsum("nik,ie->nek", comps, basis) % mods  # (N, n, ncomp)
        out[start:start + len(idx)] = group.encode_array(vals)
    flows = np.unique(out, axis=0) if n else out[:1]
    if len(flows) != total:
        raise ArithmeticError(
            f"expected {total} distinct flows, found {len(flows)}: basis is not unimodular over the group"
        )
    flows.setflags(write=False)
    return flows


def enumerate_flows(inst: Instance, group: GroupSpec) -> np.ndarray:
    """All flows as a read-only (q^r, |E|) array of element codes, rows sorted."""
    _check_flow_budget(inst, group)
    return _flows_cached(inst, group)


def _check_flow_budget(inst: Instance, group: GroupSpec) -> None:
    check_compatible(inst, group)
    total = group.order ** inst.rank
    if total > budget("flows"):
        raise BudgetError(f"{total} coefficient tuples exceed the flow budget {budget('flows')}")


def flow_list(inst: Instance, group: GroupSpec):
    return [tuple(int(x) for x in row) for row in enumerate_flows(inst, group)]


def kernel_census(inst: Instance, group: GroupSpec) -> Dict[int, int]:
    """{k: number of flows vanishing on exactly k elements}."""
    zeros = (enumerate_flows(inst, group) == 0).sum(axis=1)
    ks, counts = np.unique(zeros, return_counts=True)
    return {int(k): int(c) for k, c in zip(ks, counts)}


def value_profiles(inst: Instance, group: GroupSpec) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """Multiset of value histograms: ((count of each group element), #flows)."""
    _check_flow_budget(inst, group)
    return _value_profiles_cached(inst, group)


@lru_cache(maxsize=128)
def _value_profiles_cached(inst: Instance, group: GroupSpec):
    flows = _flows_cached(inst, group)
    q = group.order
    hist = np.zeros((len(flows), q), dtype=np.int64)
    for v in range(q):
        hist[:, v] = (flows == v).sum(axis=1)
    uniq, counts = np.unique(hist, axis=0, return_counts=True)
    return tuple((tuple(int(x) for x in row), int(c)) for row, c in zip(uniq, counts))


def weighted_profile_census(inst: Instance, group: GroupSpec,
                            weight: Union[Mapping[int, object], Callable[[int], object]]):
    """Sum over flows h of the product over elements e of weight(h(e)).

    ``weight`` maps element codes to ring values (ints, CycElem, polynomials).
    """
    w = weight if callable(weight) else weight.__getitem__
    values = [w(v) for v in range(group.order)]
    powers: Dict[Tuple[int, int], object] = {}
    total = None
    for hist, mult in value_profiles(inst, group):
        term = mult
        for v, n in enumerate(hist):
            if n:
                if (v, n) not in powers:
                    powers[(v, n)] = values[v] ** n
                term = term * powers[(v, n)]
        total = term if total is None else total + term
    return total


def closure_of_kernel_property(inst: Instance, group: GroupSpec) -> bool:
    """Every flow kernel is a flat of the matroid."""
    flows = enumerate_flows(inst, group)
    m = Matroid.from_instance(inst)
    bits = (1 << np.arange(inst.ncols, dtype=np.int64)) if inst.ncols else np.zeros(0, dtype=np.int64)
    masks = np.unique(((flows == 0) * bits).sum(axis=1)) if inst.ncols else [0]
    return all(m.closure(int(k)) == int(k) for k in masks)


def is_binary_affine(inst: Instance, mask: int) -> bool:
    """Whether the columns in ``mask`` avoid some hyperplane through 0, i.e.
    some linear functional is 1 on all of them.  Decided three independent
    ways; a disagreement raises."""
    inst = binary_reduction(inst)
    elems = elems_of(mask)
    cols = [list(inst.column(e)) for e in elems]
    # 1. solve x . v_e = 1 for all e in B
    if cols:
        augmented = [c + [1] for c in cols]
        solvable = rank_mod_p(augmented, 2) == rank_mod_p(cols, 2)
    else:
        solvable = True
    # 2. every circuit inside B has even size
    m = Matroid.from_instance(inst).restrict(mask)
    even = all(bin(c).count("1") % 2 == 0 for c in m.circuits())
    # 3. chi(M|B; 2) = 1
    sub = restriction_instance(inst, elems)
    chi_one = char_poly_signed_sum(sub).evaluate(2) == 1
    if not (solvable == even == chi_one):
        raise ArithmeticError(
            f"affinity criteria disagree on {elems}: system={solvable} circuits={even} chi={chi_one}"
        )
    return solvable


def binary_reduction(inst: Instance) -> Instance:
    """The instance itself over GF(2), or the mod-2 image of a graph or TU
    matrix (a TU matrix and its reduction have the same matroid)."""
    if inst.p == 2:
        return inst
    if inst.p is not None:
        raise ValueError("binary affinity needs a GF(2), graph or TU matrix")
    rows = tuple(tuple(x % 2 for x in r) for r in inst.rows)
    return Instance("gfp", rows, inst.ncols, 2, None, inst.name)


def restriction_instance(inst: Instance, elems) -> Instance:
    rows = tuple(tuple(r[e] for e in elems) for r in inst.rows)
    return Instance(inst.kind if not inst.is_graph else "tu-int", rows, len(elems), inst.p, None,
                     f"{inst.name}|{len(elems)}" if inst.name else "")


def graph_support_property(g: OrientedGraph, support_mask: int) -> Dict[str, bool]:
    """Classify a GF(2) function on the edges by its support.

    "flow": every vertex has even degree in the support (a union of cycles);
    "tension": the support is a cut, i.e. a disjoint union of minimal cutsets.
    """
    degree = [0] * g.vertex_count
    for e in elems_of(support_mask):
        t, h = g.edges[e]
        degree[t] += 1
        degree[h] += 1
    is_flow = all(d % 2 == 0 for d in degree)
    # 2-colour: support edges join different colours, other edges equal ones
    parent = list(range(g.vertex_count))
    parity = [0] * g.vertex_count

    def find(v):
        if parent[v] == v:
            return v, 0
        root, par = find(parent[v])
        parent[v] = root
        parity[v] ^= par
        return root, parity[v]

    is_tension = True
    for e, (t, h) in enumerate(g.edges):
        want = support_mask >> e & 1
        rt, pt = find(t)
        rh, ph = find(h)
        if rt == rh:
            if pt ^ ph != want:
                is_tension = False
                break
        else:
            parent[rt] = rh
            parity[rt] = pt ^ ph ^ want
    return {"flow": is_flow, "tension": is_tension}


def support_masks(flows: np.ndarray) -> np.ndarray:
    if flows.shape[1] == 0:
        return np.zeros(len(flows), dtype=np.int64)
    bits = 1 << np.arange(flows.shape[1], dtype=np.int64)
    return ((flows != 0) * bits).sum(axis=1)


__all__ = [
    "BudgetError", "budget", "enumerate_flows", "flow_list", "kernel_census", "value_profiles",
    "weighted_profile_census", "closure_of_kernel_property", "is_binary_affine",
    "graph_support_property", "support_masks", "binary_reduction", "restriction_instance", "mask_of",
]
