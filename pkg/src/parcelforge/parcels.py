"""Parcel censuses: pairs and tuples of functions with flow differences, binned
by a congruence statistic.

Every family is derived from one exact *profile*: the distribution of a small
additive statistic vector over all admissible tuples.  A profile is computed
either by

* tier 1 - enumerate every (m+1)-tuple of functions E -> B, keep those whose
  consecutive differences are flows, and accumulate the statistic; or
* tier 2 - enumerate the m-tuples of flows and, per flow tuple, multiply
  per-element generating tables of the statistic over the associated tuples
  (b_1, ..., b_{m+1}) with b_j - b_{j+1} = h_j(e).

Profiles are shared between families and moduli, so one enumeration serves
every sigma and every statistic built on the same counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .cyclotomic import CycElem
from .flows import BudgetError, budget, enumerate_flows, value_profiles
from .ground import Instance, matrix_rank, orthogonal_dual
from .groups import GroupSpec, check_compatible, cyclic, product_group
from .linalg import rank_mod_p
from .polynomials import LaurentPoly

FULL = "full"
NONZERO = "nonzero"

# statistic kinds
PAIR = "pair"  # (n10, n01, n_eq, n_ne): per element, which of f, g vanish and whether f = g
INNER = "inner"  # (f . g mod p,)
TUPLE = "tuple"  # (total support size over the m+1 functions,)
PROP25 = "prop25"  # (#(0,0), #off-diagonal with even Rem(b+c), #diagonal nonzero with even Rem(2b))

SETOPS = ("union", "intersection", "symdiff", "sheffer", "implication")
SETOP_ALIASES = {
    "∪": "union", "cup": "union", "union": "union",
    "∩": "intersection", "cap": "intersection", "intersection": "intersection",
    "Δ": "symdiff", "delta": "symdiff", "symdiff": "symdiff",
    "|": "sheffer", "sheffer": "sheffer", "nand": "sheffer",
    "→": "implication", "->": "implication", "implication": "implication",
}


@dataclass
class Census:
    """Residue (or raw value when sigma is None) -> count."""

    family: str
    sigma: Optional[int]
    bins: Dict[int, int]
    tier: int
    universe: int
    params: Dict[str, object] = field(default_factory=dict)

    def __getitem__(self, k: int) -> int:
        return self.bins.get(k, 0)

    def total(self) -> int:
        return sum(self.bins.values())

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "sigma": self.sigma if self.sigma is not None else "inf",
            "bins": {str(k): str(v) for k, v in sorted(self.bins.items())},
            "tier": self.tier,
            "universe": str(self.universe),
        }
        if self.params:
            out["params"] = {k: (str(v) if not isinstance(v, (int, str)) else v) for k, v in self.params.items()}
        return out

    def root_sum(self, sigma: Optional[int] = None, rho: int = 1, shift: int = 0) -> CycElem:
        """sum_k w^(rho (k - shift)) census(k) in Z[w_sigma]."""
        s = sigma or self.sigma
        return CycElem.from_exponent_counts(s, [((rho * (k - shift)) % s, c) for k, c in self.bins.items()])


# -- statistics -----------------------------------------------------------

def _edge_stat(kind: str, group: GroupSpec) -> Tuple[Callable[[Tuple[int, ...]], Tuple[int, ...]], Tuple[int, ...]]:
    """Per-element statistic on an associated tuple (b_1, ..., b_{m+1}) and the
    moduli of its components (0: plain integer)."""
    if kind == PAIR:
        def stat(bs):
            b, c = bs
            if b and not c:
                return (1, 0, 0, 0)
            if c and not b:
                return (0, 1, 0, 0)
            if b and c:
                return (0, 0, 1, 0) if b == c else (0, 0, 0, 1)
            return (0, 0, 0, 0)
        return stat, (0, 0, 0, 0)
    if kind == INNER:
        if not group.is_prime_field:
            raise ValueError("inner products need GF(p) coefficients")
        p = group.order

        def stat(bs):
            return ((bs[0] * bs[1]) % p,)
        return stat, (p,)
    if kind == TUPLE:
        return (lambda bs: (sum(1 for b in bs if b),)), (0,)
    if kind == PROP25:
        if group.kind != "cyclic" or group.q % 2 == 0:
            raise ValueError("the Rem-parity weight needs Z_q with q odd")
        q = group.q

        def stat(bs):
            b, c = bs
            if b == 0 and c == 0:
                return (1, 0, 0)
            even = ((b + c) % q) % 2 == 0
            if b == c:
                return (0, 0, 1 if even else 0)
            return (0, 1 if even else 0, 0)
        return stat, (0, 0, 0)
    raise ValueError(f"unknown statistic {kind!r}")


def _domain(group: GroupSpec, domain: str):
    return list(range(group.order)) if domain == FULL else list(range(1, group.order))


def _add_stats(a, b, mods):
    return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, mods))


def tier1_size(inst: Instance, group: GroupSpec, m: int, domain: str) -> int:
    return len(_domain(group, domain)) ** ((m + 1) * inst.ncols)


def profile(inst: Instance, group: GroupSpec, kind: str, domain: str = FULL, m: int = 1,
            tier: int = 2) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """Sorted ((statistic vector), count) pairs over all admissible tuples."""
    check_compatible(inst, group)
    if domain not in (FULL, NONZERO):
        raise ValueError(f"unknown domain {domain!r}")
    if tier == 1:
        size = tier1_size(inst, group, m, domain)
        if size > budget("tier1"):
            raise BudgetError(f"tier 1 would enumerate {size} tuples (budget {budget('tier1')})")
    elif tier == 2:
        flow_count = group.order ** (inst.rank * m)
        if flow_count > budget("tier2"):
            raise BudgetError(f"tier 2 would enumerate {flow_count} flow tuples (budget {budget('tier2')})")
    else:
        raise ValueError(f"unknown tier {tier}")
    # budgets are checked outside the cache so an override always takes effect
    return _profile_cached(inst, group, kind, domain, m, tier)


@lru_cache(maxsize=512)
def _profile_cached(inst, group, kind, domain, m, tier):
    if tier == 1:
        counts = _profile_tier1(inst, group, kind, domain, m)
    else:
        counts = _profile_tier2(inst, group, kind, domain, m)
    return tuple(sorted(counts.items()))


def _profile_tier1(inst, group, kind, domain, m) -> Dict[Tuple[int, ...], int]:
    stat, mods = _edge_stat(kind, group)
    dom = np.asarray(_domain(group, domain), dtype=np.int64)
    n = inst.ncols
    q = group.order
    # all functions E -> B, one per row
    if n:
        grids = np.meshgrid(*([dom] * n), indexing="ij")
        funcs = np.stack([g.ravel() for g in grids], axis=1)
    else:
        funcs = np.zeros((1, 0), dtype=np.int64)
    # membership table for flows, keyed by the base-q code of the vector
    place = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    flows = enumerate_flows(inst, group)
    is_flow = np.zeros(q ** n, dtype=bool)
    is_flow[flows @ place if n else np.zeros(1, dtype=np.int64)] = True
    sub = group.add_table[:, group.neg_table]  # sub[a, b] = a - b
    # per-element statistic table over B^(m+1), flattened with radix q
    k = len(mods)
    table = np.zeros((q ** (m + 1), k), dtype=np.int64)
    for idx in np.ndindex(*([q] * (m + 1))):
        code = 0
        for b in idx:
            code = code * q + b
        table[code] = stat(idx)
    mod_arr = np.asarray([mm if mm else 0 for mm in mods], dtype=np.int64)
    counts: Dict[Tuple[int, ...], int] = {}
    nf = len(funcs)
    # fix f_1 in a python loop, vectorize over f_2, ..., f_{m+1}
    rest_index = np.stack([g.ravel() for g in np.meshgrid(*([np.arange(nf)] * m), indexing="ij")], axis=1)
    for i in range(nf):
        tup = [np.broadcast_to(funcs[i], (len(rest_index), n))] + [funcs[rest_index[:, j]] for j in range(m)]
        ok = np.ones(len(rest_index), dtype=bool)
        for j in range(m):
            diff = sub[tup[j], tup[j + 1]]
            ok &= is_flow[diff @ place] if n else True
        if not ok.any():
            continue
        code = np.zeros((int(ok.sum()), n), dtype=np.int64)
        for j in range(m + 1):
            code = code * q + tup[j][ok]
        stats = table[code].sum(axis=1) if n else np.zeros((int(ok.sum()), k), dtype=np.int64)
        for c in range(k):
            if mod_arr[c]:
                stats[:, c] %= mod_arr[c]
        uniq, cnt = np.unique(stats, axis=0, return_counts=True)
        for row, c in zip(uniq, cnt):
            key = tuple(int(x) for x in row)
            counts[key] = counts.get(key, 0) + int(c)
    return counts


def _profile_tier2(inst, group, kind, domain, m) -> Dict[Tuple[int, ...], int]:
    stat, mods = _edge_stat(kind, group)
    dom = _domain(group, domain)
    in_dom = set(dom)
    big = product_group(group, m) if m > 1 else group
    # per-value generating tables: value of A^m -> {stat: count}
    tables = []
    for v in range(big.order):
        diffs = big.split(v) if m > 1 else (v,)
        tab: Dict[Tuple[int, ...], int] = {}
        for last in dom:
            bs = [last]
            for d in reversed(diffs):
                bs.append(group.add(bs[-1], d))
            bs.reverse()
            if all(b in in_dom for b in bs):
                s = stat(tuple(bs))
                tab[s] = tab.get(s, 0) + 1
        tables.append(tab)
    zero = tuple(0 for _ in mods)
    power_memo: Dict[Tuple[int, int], Dict] = {}

    def mul(a, b):
        out: Dict[Tuple[int, ...], int] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                key = _add_stats(ka, kb, mods)
                out[key] = out.get(key, 0) + ca * cb
        return out

    def power(v, e):
        hit = power_memo.get((v, e))
        if hit is None:
            if e == 0:
                hit = {zero: 1}
            elif e == 1:
                hit = tables[v]
            else:
                half = power(v, e // 2)
                hit = mul(half, half)
                if e % 2:
                    hit = mul(hit, tables[v])
            power_memo[(v, e)] = hit
        return hit

    counts: Dict[Tuple[int, ...], int] = {}
    for hist, mult in value_profiles(inst, big):
        acc = {zero: mult}
        for v, e in enumerate(hist):
            if e:
                acc = mul(acc, power(v, e))
                if not acc:
                    break
        for key, c in acc.items():
            counts[key] = counts.get(key, 0) + c
    return {k: v for k, v in counts.items() if v}


def tuple_universe(inst: Instance, group: GroupSpec, m: int = 1, domain: str = FULL) -> int:
    """Size of the set of admissible tuples (from the profile itself for A^x)."""
    if domain == FULL:
        return group.order ** (inst.ncols + m * inst.rank)
    return sum(c for _, c in profile(inst, group, PAIR if m == 1 else TUPLE, domain, m, 2))


def _bin(prof, value_of: Callable[[Tuple[int, ...]], int], sigma: Optional[int]) -> Dict[int, int]:
    bins: Dict[int, int] = {}
    for key, c in prof:
        v = value_of(key)
        if sigma is not None:
            v %= sigma
        bins[v] = bins.get(v, 0) + c
    return bins


def _resolve_tier(inst, group, m, domain, tier) -> int:
    if tier in (1, 2):
        return tier
    if tier in (None, "auto", 0):
        return 2
    raise ValueError(f"unknown tier {tier!r}")


def hamming_value(key) -> int:
    n10, n01, neq, nne = key
    return n10 + n01 + nne


def supp_f(key) -> int:
    n10, n01, neq, nne = key
    return n10 + neq + nne


def supp_g(key) -> int:
    n10, n01, neq, nne = key
    return n01 + neq + nne


def setop_value(op: str, ncols: int) -> Callable[[Tuple[int, ...]], int]:
    op = SETOP_ALIASES.get(op, op)
    if op == "union":
        return lambda k: k[0] + k[1] + k[2] + k[3]
    if op == "intersection":
        return lambda k: k[2] + k[3]
    if op == "symdiff":
        return lambda k: k[0] + k[1]
    if op == "sheffer":
        return lambda k: ncols - (k[0] + k[1] + k[2] + k[3])
    if op == "implication":
        return lambda k: ncols - k[0]
    raise ValueError(f"unknown set operation {op!r}; expected one of {', '.join(SETOPS)}")


def hamming_census(inst: Instance, group: GroupSpec, sigma: Optional[int], nonzero: bool = False,
                   tier="auto") -> Census:
    """Pairs (f, g) with f - g a flow, binned by |supp(f - g)| mod sigma."""
    domain = NONZERO if nonzero else FULL
    t = _resolve_tier(inst, group, 1, domain, tier)
    prof = profile(inst, group, PAIR, domain, 1, t)
    bins = _bin(prof, hamming_value, sigma)
    family = "hamming-nonzero" if nonzero else "hamming"
    return Census(family, sigma, bins, t, sum(bins.values()))


def support_census(inst: Instance, group: GroupSpec, alpha: int, beta: int, sigma: Optional[int],
                   tier="auto") -> Census:
    """Pairs binned by alpha |supp f| + beta |supp g| mod sigma."""
    t = _resolve_tier(inst, group, 1, FULL, tier)
    prof = profile(inst, group, PAIR, FULL, 1, t)
    bins = _bin(prof, lambda k: alpha * supp_f(k) + beta * supp_g(k), sigma)
    return Census("support", sigma, bins, t, sum(bins.values()), {"alpha": alpha, "beta": beta})


def setop_census(inst: Instance, group: GroupSpec, op: str, sigma: Optional[int], tier="auto") -> Census:
    """Pairs binned by |supp f  op  supp g| mod sigma."""
    name = SETOP_ALIASES.get(op, op)
    value = setop_value(name, inst.ncols)
    t = _resolve_tier(inst, group, 1, FULL, tier)
    prof = profile(inst, group, PAIR, FULL, 1, t)
    bins = _bin(prof, value, sigma)
    return Census("setop", sigma, bins, t, sum(bins.values()), {"op": name})


def inner_product_census(inst: Instance, group: GroupSpec, tier="auto") -> Census:
    """Pairs binned by <f, g> in GF(p) (keys 0..p-1)."""
    t = _resolve_tier(inst, group, 1, FULL, tier)
    prof = profile(inst, group, INNER, FULL, 1, t)
    p = group.order
    bins = _bin(prof, lambda k: k[0], p)
    return Census("inner-product", p, bins, t, sum(bins.values()), {"p": p})


def tuple_census(inst: Instance, group: GroupSpec, m: int, sigma: Optional[int], tier="auto") -> Census:
    """(m+1)-tuples with flow differences, binned by total support size mod sigma."""
    if m < 1:
        raise ValueError("m must be >= 1")
    t = _resolve_tier(inst, group, m, FULL, tier)
    prof = profile(inst, group, TUPLE, FULL, m, t)
    bins = _bin(prof, lambda k: k[0], sigma)
    return Census("tuple", sigma, bins, t, sum(bins.values()), {"m": m})


def flow_weight_census(inst: Instance, group: GroupSpec, sigma: Optional[int]) -> Census:
    """Flows binned by support size mod sigma (raw sizes when sigma is None)."""
    zeros = (enumerate_flows(inst, group) == 0).sum(axis=1)
    sizes, counts = np.unique(inst.ncols - zeros, return_counts=True)
    bins: Dict[int, int] = {}
    for s, c in zip(sizes, counts):
        k = int(s) % sigma if sigma is not None else int(s)
        bins[k] = bins.get(k, 0) + int(c)
    return Census("flow-weight", sigma, bins, 2, sum(bins.values()))


def weight_enumerator(inst: Instance, group: GroupSpec) -> Dict[int, int]:
    """Number of flows (codewords) of each support size."""
    return dict(sorted(flow_weight_census(inst, group, None).bins.items()))


def support_diff_enumerator(inst: Instance, group: GroupSpec, tier="auto") -> LaurentPoly:
    """sum over pairs of X^(|supp f| - |supp g|)."""
    census = support_census(inst, group, 1, -1, None, tier)
    return LaurentPoly(census.bins)


def prop25_census(inst: Instance, q: int, tier="auto", literal_table: bool = False) -> Census:
    """Three parcels P(0), P(1), P(-1) of pairs (f, g) over Z_q with f - g a
    flow of the orthogonal dual of ``inst``.

    A pair lands in P(0) when some element has (f(e), g(e)) = (0, 0);
    otherwise its sign is (-1)^(number of elements with weight -1).  The
    weight -1 goes to off-diagonal pairs with Rem(b + c, q) even; diagonal
    nonzero pairs (a, a) weigh +1, which makes the diagonal sum q - 1 as the
    identity needs.  ``literal_table=True`` instead gives -1 to every pair
    with Rem(b + c, q) even, diagonal included; its diagonal sum is 0.
    """
    if not inst.is_integral:
        raise ValueError("the Rem-parity parcels need a graph or TU instance")
    if q < 3 or q % 2 == 0:
        raise ValueError("the Rem-parity parcels are defined for odd q >= 3 only")
    dual = orthogonal_dual(inst)
    group = cyclic(q)
    t = _resolve_tier(dual, group, 1, FULL, tier)
    prof = profile(dual, group, PROP25, FULL, 1, t)

    def sign(key):
        zeros, off_even, diag_even = key
        if zeros:
            return 0
        minus = off_even + (diag_even if literal_table else 0)
        return -1 if minus % 2 else 1

    bins = _bin(prof, sign, None)
    return Census("prop25", None, bins, t, sum(bins.values()), {"q": q, "literal_table": literal_table})


# -- inner-product sums ---------------------------------------------------

def quadratic_residues(p: int):
    return sorted({(b * b) % p for b in range(1, p)})


def gauss_sum(p: int) -> CycElem:
    """1 + 2 * sum of w^b over the nonzero squares b of GF(p)."""
    if p < 3 or p % 2 == 0:
        raise ValueError("the Gauss sum is taken for odd primes")
    return CycElem.from_exponent_counts(p, [(0, 1)] + [(b, 2) for b in quadratic_residues(p)])


def _prime_field_group(inst: Instance, p: int) -> GroupSpec:
    if inst.p is not None and inst.p != p:
        raise ValueError(f"instance is over GF({inst.p}), not GF({p})")
    from .groups import gfp
    return gfp(p, 1) if inst.p is not None else cyclic(p)


def quadratic_flow_sum(inst: Instance, p: int, exponent_scale: int = 1) -> CycElem:
    """sum over flows h of w^(scale <h, h>), exponent taken mod p."""
    flows = enumerate_flows(inst, _prime_field_group(inst, p))
    norms = (flows * flows).sum(axis=1) % p
    vals, counts = np.unique((norms * exponent_scale) % p, return_counts=True)
    return CycElem.from_exponent_counts(p, [(int(v), int(c)) for v, c in zip(vals, counts)])


def bicycle_dimension(inst: Instance, p: int) -> int:
    """dim(U intersect U-perp) for U the row space over GF(p)."""
    basis = [[x % p for x in inst.rows[i]] for i in inst.basis_row_indices]
    if inst.p is None:
        # for TU rows the rank mod p equals the rational rank, so the basis stays a basis
        basis = [[x % p for x in r] for r in basis]
    r = len(basis)
    if r == 0:
        return 0
    gram = [[sum(a * b for a, b in zip(u, v)) % p for v in basis] for u in basis]
    return r - rank_mod_p(gram, p)


def bicycle_dimension_bruteforce(inst: Instance, p: int) -> int:
    flows = enumerate_flows(inst, _prime_field_group(inst, p))
    ortho = (flows @ flows.T) % p
    count = int((ortho == 0).all(axis=1).sum())
    d = 0
    while p ** d < count:
        d += 1
    if p ** d != count:
        raise ArithmeticError("bicycle space size is not a power of p")
    return d


def rank_over(inst: Instance, p: int) -> int:
    return matrix_rank(inst.rows, p if inst.p is None else inst.p)
