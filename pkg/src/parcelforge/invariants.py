"""Rank generating, Tutte, characteristic and flow-census polynomials.

Two independent routes compute R(M; lambda, x): a subset expansion that walks
every subset with an incrementally maintained echelon basis, and a memoized
deletion-contraction recursion.  For graph and TU instances the rank over the
rationals equals the rank modulo any prime (every minor is 0 or +-1), so both
routes work modulo a large prime; the exact Bareiss oracle in ``ground`` is
what the tests hold them to.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Tuple

from .ground import FLATS_LIMIT, Instance, Matroid, canonical_minor_key, orthogonal_dual
from .polynomials import BiPoly, UniPoly

SUBSET_LIMIT = 20
DELETION_CONTRACTION_LIMIT = 28
CROSS_CHECK_LIMIT = 12

# prime used for rank computations of integral (TU) instances
TU_PRIME = 2_147_483_647


class SizeCapError(ValueError):
    """The requested computation is beyond the configured size cap."""


def working_prime(inst: Instance) -> int:
    return inst.p if inst.p is not None else TU_PRIME


def _columns(inst: Instance) -> List[List[int]]:
    p = working_prime(inst)
    return [[x % p for x in inst.column(e)] for e in range(inst.ncols)]


def _reduce(vec: List[int], basis: List[Tuple[int, List[int]]], p: int) -> List[int]:
    v = list(vec)
    for piv, b in basis:
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, b)]
    return v


def _normalize(v: List[int], p: int) -> Optional[Tuple[int, List[int]]]:
    for i, x in enumerate(v):
        if x:
            inv = pow(x, -1, p)
            return i, [(y * inv) % p for y in v]
    return None


@lru_cache(maxsize=256)
def rank_size_profile(inst: Instance) -> Dict[Tuple[int, int], int]:
    """Counts of subsets B by (rk B, |B|), walking all 2^|E| subsets."""
    n = inst.ncols
    if n > SUBSET_LIMIT:
        raise SizeCapError(f"subset expansion capped at |E| <= {SUBSET_LIMIT} (got {n})")
    p = working_prime(inst)
    cols = _columns(inst)
    counts: Dict[Tuple[int, int], int] = {}
    basis: List[Tuple[int, List[int]]] = []

    def walk(e: int, size: int) -> None:
        if e == n:
            key = (len(basis), size)
            counts[key] = counts.get(key, 0) + 1
            return
        walk(e + 1, size)
        entry = _normalize(_reduce(cols[e], basis, p), p)
        if entry is None:
            walk(e + 1, size + 1)
        else:
            basis.append(entry)
            walk(e + 1, size + 1)
            basis.pop()

    walk(0, 0)
    return counts


def rank_gen_poly_subsets(inst: Instance) -> BiPoly:
    r = inst.rank
    terms: Dict[Tuple[int, int], int] = {}
    for (rk, size), c in rank_size_profile(inst).items():
        key = (r - rk, size - rk)
        terms[key] = terms.get(key, 0) + c
    return BiPoly(terms)


def _column_rank(cols: List[List[int]], p: int) -> int:
    basis: List[Tuple[int, List[int]]] = []
    for c in cols:
        entry = _normalize(_reduce(c, basis, p), p)
        if entry is not None:
            basis.append(entry)
    return len(basis)


def _contract(cols: List[List[int]], e: int, p: int) -> List[List[int]]:
    pivot_col = cols[e]
    i = next(k for k, x in enumerate(pivot_col) if x)
    inv = pow(pivot_col[i], -1, p)
    out = []
    for j, c in enumerate(cols):
        if j == e:
            continue
        f = (c[i] * inv) % p
        reduced = [(x - f * y) % p for x, y in zip(c, pivot_col)] if f else list(c)
        out.append(reduced[:i] + reduced[i + 1:])
    return out


_LAMBDA_PLUS_ONE = BiPoly({(1, 0): 1, (0, 0): 1})
_X_PLUS_ONE = BiPoly({(0, 1): 1, (0, 0): 1})


def rank_gen_poly_dc(inst: Instance) -> BiPoly:
    """R(M) by deletion-contraction, memoized on a canonical key of each minor."""
    n = inst.ncols
    if n > DELETION_CONTRACTION_LIMIT:
        raise SizeCapError(
            f"deletion-contraction capped at |E| <= {DELETION_CONTRACTION_LIMIT} (got {n})"
        )
    p = working_prime(inst)
    memo: Dict[tuple, BiPoly] = {}

    def rec(cols: List[List[int]]) -> BiPoly:
        if not cols:
            return BiPoly.const(1)
        # drop all-zero rows so keys of equal minors line up
        nrows = len(cols[0])
        live = [i for i in range(nrows) if any(c[i] for c in cols)]
        if len(live) < nrows:
            cols = [[c[i] for i in live] for c in cols]
        if not cols[0]:
            return _X_PLUS_ONE ** len(cols)
        key = canonical_minor_key([tuple(c) for c in cols], p)
        hit = memo.get(key)
        if hit is not None:
            return hit
        e = len(cols) - 1
        rest = cols[:e]
        if not any(cols[e]):
            out = _X_PLUS_ONE * rec(rest)
        elif _column_rank(rest, p) < _column_rank(cols, p):
            out = _LAMBDA_PLUS_ONE * rec(_contract(cols, e, p))
        else:
            out = rec(rest) + rec(_contract(cols, e, p))
        memo[key] = out
        return out

    return rec(_columns(inst))


@lru_cache(maxsize=256)
def rank_gen_poly(inst: Instance, method: str = "auto") -> BiPoly:
    """R(M; lambda, x) = sum over B of lambda^(r - rk B) x^(|B| - rk B).

    ``method`` is "subsets", "dc" or "auto" (subsets up to the cap, then
    deletion-contraction; both, compared, up to the cross-check size).
    """
    if method == "subsets":
        return rank_gen_poly_subsets(inst)
    if method == "dc":
        return rank_gen_poly_dc(inst)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    n = inst.ncols
    if n <= CROSS_CHECK_LIMIT:
        a = rank_gen_poly_subsets(inst)
        b = rank_gen_poly_dc(inst)
        if a != b:
            raise ArithmeticError(f"subset expansion and deletion-contraction disagree on {inst.label()}")
        return a
    if n <= SUBSET_LIMIT:
        return rank_gen_poly_subsets(inst)
    return rank_gen_poly_dc(inst)


def tutte(inst: Instance) -> BiPoly:
    """T(M; u, v) = R(M; u - 1, v - 1), keys read as (u-exponent, v-exponent)."""
    return rank_gen_poly(inst).shift(-1, -1)


def char_poly_from_rank_poly(rgp: BiPoly, r: int) -> UniPoly:
    """chi(M; lambda) = (-1)^r R(M; -lambda, -1)."""
    out: Dict[int, int] = {}
    for (i, j), c in rgp.terms.items():
        sign = -1 if (r + i + j) % 2 else 1
        out[i] = out.get(i, 0) + sign * c
    return UniPoly(out)


def char_poly_signed_sum(inst: Instance) -> UniPoly:
    """chi(M; lambda) = sum over B of (-1)^|B| lambda^(r - rk B)."""
    r = inst.rank
    out: Dict[int, int] = {}
    for (rk, size), c in rank_size_profile(inst).items():
        out[r - rk] = out.get(r - rk, 0) + (-c if size % 2 else c)
    return UniPoly(out)


@lru_cache(maxsize=256)
def char_poly(inst: Instance) -> UniPoly:
    a = char_poly_from_rank_poly(rank_gen_poly(inst), inst.rank)
    if inst.ncols <= SUBSET_LIMIT:
        b = char_poly_signed_sum(inst)
        if a != b:
            raise ArithmeticError(f"characteristic polynomial routes disagree on {inst.label()}")
    return a


def chi(inst: Instance, value: int) -> int:
    return char_poly(inst).evaluate(value)


def chromatic_poly(inst: Instance) -> UniPoly:
    """P(graph; lambda) = lambda^c chi(cycle matroid; lambda)."""
    if not inst.is_graph:
        raise ValueError("chromatic polynomial needs a graph instance")
    vertex_side = inst if inst.kind == "graph-vertex" else orthogonal_dual(inst)
    return UniPoly({inst.graph.component_count: 1}) * char_poly(vertex_side)


def flow_poly(inst: Instance) -> UniPoly:
    """F(graph; lambda) = chi(cocycle matroid; lambda)."""
    if not inst.is_graph:
        raise ValueError("flow polynomial needs a graph instance")
    cycle_side = inst if inst.kind == "graph-cycle" else orthogonal_dual(inst)
    return char_poly(cycle_side)


def flow_census_from_rank_poly(rgp: BiPoly, r: int, q: int) -> UniPoly:
    """(x - 1)^r R(q/(x - 1), x - 1) with the denominators cleared term by term.

    A term lambda^i x^j becomes q^i (x - 1)^(r - i + j); r - i >= 0 always.
    """
    out: Dict[int, int] = {}
    for (i, j), c in rgp.terms.items():
        e = r - i + j
        scale = c * q ** i
        for k in range(e + 1):
            t = scale * comb(e, k) * (-1) ** (e - k)
            out[k] = out.get(k, 0) + t
    return UniPoly(out)


def flow_census_poly(inst: Instance, q: int) -> UniPoly:
    """W(x) = sum_k N_k x^k, N_k the number of flows over a group of order q
    vanishing on exactly k elements."""
    if q < 1:
        raise ValueError("q must be >= 1")
    r = inst.rank
    w = flow_census_from_rank_poly(rank_gen_poly(inst), r, q)
    if any(c < 0 for c in w.terms.values()) or w.coefficient_sum() != q ** r:
        raise ArithmeticError(f"flow census polynomial is not a census on {inst.label()}")
    return w


def contraction_char_value(m: Matroid, flat: int, value: int) -> int:
    """chi(M/U; value) as the signed sum over subsets S of E minus U."""
    r = m.rank
    rest = m.full & ~flat
    total = 0
    s = rest
    while True:
        sign = -1 if bin(s).count("1") % 2 else 1
        total += sign * value ** (r - m.rk(s | flat))
        if s == 0:
            break
        s = (s - 1) & rest
    return total


def crapo_tutte_convolution(inst: Instance, q: int) -> UniPoly:
    """sum over flats U of chi(M/U; q) x^|U|."""
    if inst.ncols > FLATS_LIMIT:
        raise SizeCapError(f"flat enumeration capped at |E| <= {FLATS_LIMIT}")
    m = Matroid.from_instance(inst)
    out: Dict[int, int] = {}
    for flat in m.flats():
        k = bin(flat).count("1")
        out[k] = out.get(k, 0) + contraction_char_value(m, flat, q)
    return UniPoly(out)
