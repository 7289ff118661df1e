"""Exact elimination over the integers (fraction-free) and over GF(p)."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    prev = 1
    rank = 0
    for col in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                a[i][j] = (a[i][j] * p - a[i][col] * a[rank][j]) // prev
            a[i][col] = 0
        prev = p
        rank += 1
    return rank


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    for col in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(rank + 1, m):
            f = a[i][col]
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def rref(rows: Sequence[Sequence[int]], p: Optional[int] = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form, nonzero rows only, plus pivot columns.

    Over GF(p) when ``p`` is given, otherwise over Q (entries come back as
    Fractions reduced to ints where integral).
    """
    if p is None:
        a = [[Fraction(x) for x in r] for r in rows]
    else:
        a = [[x % p for x in r] for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots: List[int] = []
    rank = 0
    for col in range(n):
        if rank == m:
            break
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        lead = a[rank][col]
        if p is None:
            a[rank] = [x / lead for x in a[rank]]
        else:
            inv = pow(lead, -1, p)
            a[rank] = [(x * inv) % p for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col] != 0:
                f = a[i][col]
                if p is None:
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
                else:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
    out = []
    for r in a[:rank]:
        row = []
        for x in r:
            if isinstance(x, Fraction) and x.denominator == 1:
                x = int(x)
            row.append(x)
        out.append(row)
    return out, pivots


def dual_basis(rows: Sequence[Sequence[int]], ncols: int, p: Optional[int] = None) -> Matrix:
    """Rows spanning the orthogonal complement of the row space.

    With the reduced form [I | D] (up to column order) the dual is [-D^T | I].
    Over the integers this needs every pivot to be a unit, which holds for
    totally unimodular input; anything else raises ``ValueError``.
    """
    reduced, pivots = rref(rows, p)
    for r in reduced:
        for x in r:
            if isinstance(x, Fraction):
                raise ValueError("matrix is not totally unimodular: non-integral pivot")
    free = [c for c in range(ncols) if c not in pivots]
    dual: Matrix = []
    for fc in free:
        row = [0] * ncols
        row[fc] = 1
        for i, pc in enumerate(pivots):
            v = -reduced[i][fc]
            row[pc] = v % p if p is not None else v
        dual.append(row)
    return dual


def independent_rows(rows: Sequence[Sequence[int]], p: Optional[int] = None) -> List[int]:
    """Indices of a maximal independent subset of rows, greedy in order."""
    chosen: List[int] = []
    basis: List[Sequence[int]] = []
    rank_fn = (lambda m: rank_mod_p(m, p)) if p is not None else bareiss_rank
    for i, r in enumerate(rows):
        if rank_fn(basis + [r]) > len(basis):
            basis.append(r)
            chosen.append(i)
    return chosen


def is_totally_unimodular(rows: Sequence[Sequence[int]]) -> bool:
    """Exhaustive check that every square subdeterminant lies in {-1, 0, 1}."""
    if any(x not in (-1, 0, 1) for r in rows for x in r):
        return False
    m = len(rows)
    n = len(rows[0]) if rows else 0
    for k in range(2, min(m, n) + 1):
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                d = bareiss_det([[rows[i][j] for j in ci] for i in ri])
                if d not in (-1, 0, 1):
                    return False
    return True
