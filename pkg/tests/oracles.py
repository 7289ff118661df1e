"""Slow reference computations that share no code with the package.

Flows are found by testing every function against the defining linear
conditions (conservation at vertices, or orthogonality to a null-space
basis), ranks by fraction elimination, polynomials by brute-force colouring
and subset sums.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def rank_q(rows):
    """Rank over Q of an integer matrix (list of rows)."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def rank_p(rows, p):
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def subset_rank(rows, cols, p=None):
    if not cols or not rows:
        return 0
    sub = [[r[c] for c in cols] for r in rows]
    return rank_p(sub, p) if p else rank_q(sub)


def rank_poly_terms(rows, ncols, p=None):
    """{(r - rk B, |B| - rk B): count} by subset expansion."""
    r = subset_rank(rows, list(range(ncols)), p)
    out = {}
    for mask in range(1 << ncols):
        cols = [c for c in range(ncols) if mask >> c & 1]
        rk = subset_rank(rows, cols, p)
        key = (r - rk, len(cols) - rk)
        out[key] = out.get(key, 0) + 1
    return out


def kirchhoff_flows(n_vertices, edges, q):
    """Z_q flows of a graph: conservation at every vertex."""
    out = []
    for f in product(range(q), repeat=len(edges)):
        net = [0] * n_vertices
        for (t, h), x in zip(edges, f):
            net[t] -= x
            net[h] += x
        if all(v % q == 0 for v in net):
            out.append(f)
    return out


def tensions(n_vertices, edges, q):
    """Z_q tensions: differences of vertex potentials along edges."""
    seen = set()
    for pot in product(range(q), repeat=n_vertices):
        seen.add(tuple((pot[h] - pot[t]) % q for t, h in edges))
    return sorted(seen)


def proper_colourings(n_vertices, edges, k):
    count = 0
    for col in product(range(k), repeat=n_vertices):
        if all(col[t] != col[h] for t, h in edges):
            count += 1
    return count


def nowhere_zero_flows(n_vertices, edges, q):
    return sum(1 for f in kirchhoff_flows(n_vertices, edges, q) if all(f))


def row_span(rows, p, q=None):
    """All combinations of the rows with coefficients mod q (q = p by default)."""
    q = q or p
    n = len(rows[0]) if rows else 0
    seen = set()
    for coeffs in product(range(q), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(n)))
    return sorted(seen) if rows else [tuple([0] * n)]


def functions(q, n):
    return list(product(range(q), repeat=n))


def pair_census(flowset, q, n, stat, sigma=None, nonzero=False):
    """Count pairs (f, g) with f - g in flowset, binned by stat(f, g) (mod sigma)."""
    dom = range(1, q) if nonzero else range(q)
    flows = set(flowset)
    out = {}
    for f in product(dom, repeat=n):
        for g in product(dom, repeat=n):
            if tuple((a - b) % q for a, b in zip(f, g)) in flows:
                k = stat(f, g)
                if sigma is not None:
                    k %= sigma
                out[k] = out.get(k, 0) + 1
    return out


def hamming(f, g):
    return sum(1 for a, b in zip(f, g) if a != b)


def supp(f):
    return sum(1 for a in f if a)
