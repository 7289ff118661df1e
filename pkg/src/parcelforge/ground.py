"""Ground sets: oriented graphs and matrices, their matroids, and instance files.

An ``Instance`` is a matrix whose columns are indexed by the ground set E.
Graphs enter through one of two derived matrices: the vertex-edge (incidence)
matrix, whose matroid is the cycle matroid, or a fundamental-cycle matrix,
whose matroid is the cocycle matroid.  Flows of the vertex side are the
tensions of the graph; flows of the cycle side are its ordinary flows.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import (
    bareiss_rank,
    dual_basis,
    independent_rows,
    is_totally_unimodular,
    rank_mod_p,
    rref,
)

GRAPH_VERTEX = "graph-vertex"
GRAPH_CYCLE = "graph-cycle"
TU_INT = "tu-int"
GFP = "gfp"

TU_CHECK_LIMIT = 10
FLATS_LIMIT = 16


class InstanceError(ValueError):
    """Malformed or unsupported instance input."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class OrientedGraph:
    vertex_count: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for i, (t, h) in enumerate(self.edges):
            if not (0 <= t < self.vertex_count and 0 <= h < self.vertex_count):
                raise InstanceError(f"edges[{i}]: endpoint out of range 0..{self.vertex_count - 1}")

    @cached_property
    def component_count(self) -> int:
        parent = list(range(self.vertex_count))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for t, h in self.edges:
            a, b = find(t), find(h)
            if a != b:
                parent[a] = b
        return len({find(v) for v in range(self.vertex_count)})

    def reoriented(self, edge_indices) -> "OrientedGraph":
        flip = set(edge_indices)
        return OrientedGraph(
            self.vertex_count,
            tuple((h, t) if i in flip else (t, h) for i, (t, h) in enumerate(self.edges)),
        )


def vertex_edge_matrix(g: OrientedGraph) -> List[List[int]]:
    """|V| x |E| incidence matrix: +1 where the edge enters, -1 where it leaves."""
    rows = [[0] * len(g.edges) for _ in range(g.vertex_count)]
    for e, (t, h) in enumerate(g.edges):
        if t == h:
            continue  # loops give an all-zero column
        rows[h][e] = 1
        rows[t][e] = -1
    return rows


def spanning_forest(g: OrientedGraph):
    """BFS forest grown from the lowest unvisited vertex, edges scanned in order.

    Returns (parent_edge, parent_vertex, depth, tree_edges).
    """
    adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(g.vertex_count)}
    for e, (t, h) in enumerate(g.edges):
        if t == h:
            continue
        adj[t].append((e, h))
        adj[h].append((e, t))
    for v in adj:
        adj[v].sort()
    parent_edge = [-1] * g.vertex_count
    parent_vertex = [-1] * g.vertex_count
    depth = [-1] * g.vertex_count
    tree = set()
    for root in range(g.vertex_count):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e, w in adj[v]:
                if depth[w] < 0:
                    depth[w] = depth[v] + 1
                    parent_edge[w] = e
                    parent_vertex[w] = v
                    tree.add(e)
                    queue.append(w)
    return parent_edge, parent_vertex, depth, tree


def fundamental_cycle_matrix(g: OrientedGraph) -> List[List[int]]:
    """One row per non-tree edge: its fundamental cycle, signed by traversal.

    Edges traversed along their orientation get +1, against it -1, with the
    traversal chosen so the defining non-tree edge gets +1.  A loop is its own
    cycle and gets +1 (the incidence sign of a loop is 0, which would make the
    row vanish and break duality with the vertex side).
    """
    parent_edge, parent_vertex, depth, tree = spanning_forest(g)
    rows: List[List[int]] = []
    m = len(g.edges)
    for e, (t, h) in enumerate(g.edges):
        if e in tree:
            continue
        row = [0] * m
        row[e] = 1
        if t != h:
            # traverse t -> h along e, then back from h to t through the tree
            up_from_h: List[Tuple[int, int, int]] = []  # (edge, from, to)
            up_from_t: List[Tuple[int, int, int]] = []
            a, b = h, t
            while a != b:
                if depth[a] >= depth[b]:
                    up_from_h.append((parent_edge[a], a, parent_vertex[a]))
                    a = parent_vertex[a]
                else:
                    up_from_t.append((parent_edge[b], b, parent_vertex[b]))
                    b = parent_vertex[b]
            path = up_from_h + [(pe, to, fr) for pe, fr, to in reversed(up_from_t)]
            for pe, fr, to in path:
                pt, ph = g.edges[pe]
                row[pe] += 1 if (pt, ph) == (fr, to) else -1
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Instance:
    """A matrix over the integers (totally unimodular) or over GF(p)."""

    kind: str
    rows: Tuple[Tuple[int, ...], ...]
    ncols: int
    p: Optional[int] = None
    graph: Optional[OrientedGraph] = None
    name: str = field(default="", compare=False)

    @property
    def ground_size(self) -> int:
        return self.ncols

    @property
    def is_graph(self) -> bool:
        return self.kind in (GRAPH_VERTEX, GRAPH_CYCLE)

    @property
    def is_integral(self) -> bool:
        """True for graph sides and TU integer matrices (flows over any group)."""
        return self.kind != GFP

    @cached_property
    def rank(self) -> int:
        return matrix_rank(self.rows, self.p)

    def column(self, e: int) -> Tuple[int, ...]:
        return tuple(r[e] for r in self.rows)

    @cached_property
    def basis_row_indices(self) -> Tuple[int, ...]:
        return tuple(independent_rows(self.rows, self.p))

    def label(self) -> str:
        return self.name or f"{self.kind}[{len(self.rows)}x{self.ncols}]"

    def to_json(self) -> dict:
        if self.is_graph:
            return {
                "kind": "graph",
                "vertices": self.graph.vertex_count,
                "edges": [list(e) for e in self.graph.edges],
                "side": "vertex" if self.kind == GRAPH_VERTEX else "cycle",
            }
        ring = {"type": "int-tu"} if self.kind == TU_INT else {"type": "gfp", "p": self.p}
        return {"kind": "matrix", "ring": ring, "rows": [list(r) for r in self.rows], "cols": self.ncols}


def matrix_rank(rows, p: Optional[int] = None) -> int:
    if not rows:
        return 0
    return rank_mod_p(rows, p) if p is not None else bareiss_rank(rows)


def graph_instance(g: OrientedGraph, side: str, name: str = "") -> Instance:
    if side == "vertex":
        rows = vertex_edge_matrix(g)
        kind = GRAPH_VERTEX
    elif side == "cycle":
        rows = fundamental_cycle_matrix(g)
        kind = GRAPH_CYCLE
    else:
        raise InstanceError(f"side must be 'vertex' or 'cycle', got {side!r}")
    return Instance(kind, tuple(tuple(r) for r in rows), len(g.edges), None, g, name)


def matrix_instance(rows, p: Optional[int] = None, ncols: Optional[int] = None,
                    name: str = "", trust_tu: bool = False) -> Instance:
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise InstanceError("an empty matrix needs an explicit column count")
        ncols = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != ncols:
            raise InstanceError(f"rows[{i}]: expected {ncols} entries, got {len(r)}")
        for j, x in enumerate(r):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InstanceError(f"rows[{i}][{j}]: entry {x!r} is not an integer")
    if p is None:
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x not in (-1, 0, 1):
                    raise InstanceError(f"rows[{i}][{j}]: entry {x} not in {{-1,0,1}}")
        if len(rows) <= TU_CHECK_LIMIT and ncols <= TU_CHECK_LIMIT:
            if not is_totally_unimodular(rows):
                raise InstanceError("matrix is not totally unimodular")
        elif not trust_tu:
            raise InstanceError(
                f"matrix larger than {TU_CHECK_LIMIT}x{TU_CHECK_LIMIT}: total unimodularity "
                "is not checked; pass the trust flag to accept it"
            )
        return Instance(TU_INT, tuple(tuple(r) for r in rows), ncols, None, None, name)
    if not is_prime(p):
        raise InstanceError(f"ring.p: {p} is not prime")
    return Instance(GFP, tuple(tuple(x % p for x in r) for r in rows), ncols, p, None, name)


def parse_instance(text: str, name: str = "", trust_tu: bool = False) -> Instance:
    """Parse the JSON instance format (graph or matrix)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InstanceError("top level: expected a JSON object")
    kind = data.get("kind")
    if kind == "graph":
        n = data.get("vertices")
        if not isinstance(n, int) or n < 0:
            raise InstanceError("vertices: expected a nonnegative integer")
        edges = data.get("edges")
        if not isinstance(edges, list):
            raise InstanceError("edges: expected a list of [tail, head] pairs")
        parsed = []
        for i, e in enumerate(edges):
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
                raise InstanceError(f"edges[{i}]: expected [tail, head]")
            parsed.append((e[0], e[1]))
        g = OrientedGraph(n, tuple(parsed))
        return graph_instance(g, data.get("side", "cycle"), name)
    if kind == "matrix":
        ring = data.get("ring")
        if not isinstance(ring, dict):
            raise InstanceError("ring: expected an object")
        rows = data.get("rows")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InstanceError("rows: expected a list of lists")
        ncols = data.get("cols")
        if ring.get("type") == "int-tu":
            return matrix_instance(rows, None, ncols, name, trust_tu)
        if ring.get("type") == "gfp":
            p = ring.get("p")
            if not isinstance(p, int):
                raise InstanceError("ring.p: expected an integer")
            return matrix_instance(rows, p, ncols, name)
        raise InstanceError(f"ring.type: unknown ring {ring.get('type')!r}")
    raise InstanceError(f"kind: expected 'graph' or 'matrix', got {kind!r}")


def orthogonal_dual(inst: Instance) -> Instance:
    """A matrix orthogonal to ``inst`` whose rank is |E| - r.

    Graph sides swap (cycle <-> vertex); matrices get [-D^T | I] from their
    reduced form [I | D].
    """
    if inst.kind == GRAPH_VERTEX:
        return graph_instance(inst.graph, "cycle", _dual_name(inst))
    if inst.kind == GRAPH_CYCLE:
        return graph_instance(inst.graph, "vertex", _dual_name(inst))
    rows = dual_basis(inst.rows, inst.ncols, inst.p) if inst.rows else [
        [1 if i == j else 0 for j in range(inst.ncols)] for i in range(inst.ncols)
    ]
    return Instance(inst.kind, tuple(tuple(r) for r in rows), inst.ncols, inst.p, None, _dual_name(inst))


def _dual_name(inst: Instance) -> str:
    return f"{inst.name}*" if inst.name else ""


def transformed(inst: Instance, perm: Sequence[int] = (), flips: Sequence[int] = ()) -> Instance:
    """Relabel columns by ``perm`` (new column j is old column perm[j]) and
    negate the columns in ``flips`` (graph sides: reverse those edges)."""
    n = inst.ncols
    perm = list(perm) if perm else list(range(n))
    flips = set(flips)
    if inst.is_graph:
        g = inst.graph
        edges = []
        for j, old in enumerate(perm):
            t, h = g.edges[old]
            edges.append((h, t) if j in flips else (t, h))
        side = "vertex" if inst.kind == GRAPH_VERTEX else "cycle"
        return graph_instance(OrientedGraph(g.vertex_count, tuple(edges)), side, inst.name)
    rows = []
    for r in inst.rows:
        row = []
        for j, old in enumerate(perm):
            x = -r[old] if j in flips else r[old]
            row.append(x % inst.p if inst.p else x)
        rows.append(tuple(row))
    return Instance(inst.kind, tuple(rows), n, inst.p, None, inst.name)


class Matroid:
    """Rank oracle on bitmask subsets of range(n), memoized."""

    def __init__(self, n: int, rank_of_mask):
        self.n = n
        self._rank_fn = rank_of_mask
        self._memo: Dict[int, int] = {0: 0}

    @classmethod
    def from_instance(cls, inst: Instance) -> "Matroid":
        cols = [inst.column(e) for e in range(inst.ncols)]
        p = inst.p

        def rank_of(mask: int) -> int:
            chosen = [cols[e] for e in range(inst.ncols) if mask >> e & 1]
            if not chosen or not chosen[0]:
                return 0
            # chosen holds columns; rank of the transpose is the same
            return matrix_rank(chosen, p)

        return cls(inst.ncols, rank_of)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def rk(self, mask: int) -> int:
        r = self._memo.get(mask)
        if r is None:
            r = self._rank_fn(mask)
            self._memo[mask] = r
        return r

    @property
    def rank(self) -> int:
        return self.rk(self.full)

    def closure(self, mask: int) -> int:
        r = self.rk(mask)
        out = mask
        for e in range(self.n):
            bit = 1 << e
            if not mask & bit and self.rk(mask | bit) == r:
                out |= bit
        return out

    def flats(self) -> List[int]:
        if self.n > FLATS_LIMIT:
            raise ValueError(f"flat enumeration capped at |E| <= {FLATS_LIMIT}")
        return sorted({self.closure(s) for s in range(1 << self.n)})

    def _relabeled(self, elems: List[int], rank_fn) -> "Matroid":
        def sub_rank(mask: int) -> int:
            big = 0
            for i, e in enumerate(elems):
                if mask >> i & 1:
                    big |= 1 << e
            return rank_fn(big)

        return Matroid(len(elems), sub_rank)

    def restrict(self, mask: int) -> "Matroid":
        elems = [e for e in range(self.n) if mask >> e & 1]
        return self._relabeled(elems, self.rk)

    def contract(self, mask: int) -> "Matroid":
        elems = [e for e in range(self.n) if not mask >> e & 1]
        base = self.rk(mask)
        return self._relabeled(elems, lambda s: self.rk(s | mask) - base)

    def is_loop(self, e: int) -> bool:
        return self.rk(1 << e) == 0

    def is_coloop(self, e: int) -> bool:
        return self.rk(self.full & ~(1 << e)) < self.rank

    def circuits(self) -> List[int]:
        """Minimal dependent sets (exhaustive; small ground sets only)."""
        out = []
        for s in sorted(range(1, 1 << self.n), key=lambda m: bin(m).count("1")):
            if self.rk(s) < bin(s).count("1") and not any(c & s == c for c in out):
                out.append(s)
        return out

    def cocircuits(self) -> List[int]:
        """Complements of hyperplanes."""
        r = self.rank
        return sorted(self.full & ~f for f in self.flats() if self.rk(f) == r - 1)


def mask_of(elems) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def elems_of(mask: int) -> List[int]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def canonical_minor_key(cols: Sequence[Tuple[int, ...]], p: Optional[int]) -> tuple:
    """A key determining the matroid of the columns (not an isomorphism invariant).

    Columns are scaled to a canonical representative of their line, sorted,
    and the matrix is brought to reduced row echelon form; equal keys imply
    equal matroids.
    """
    def norm(c):
        lead = next((x for x in c if x % p != 0), None) if p else next((x for x in c if x), None)
        if lead is None:
            return tuple(0 for _ in c)
        if p:
            inv = pow(lead % p, -1, p)
            return tuple((x * inv) % p for x in c)
        return tuple(x if lead > 0 else -x for x in c)

    sorted_cols = sorted(norm(c) for c in cols)
    if not sorted_cols or not sorted_cols[0]:
        return (len(sorted_cols),)
    rows = [list(r) for r in zip(*sorted_cols)]
    reduced, _ = rref(rows, p)
    key_cols = sorted(norm(c) for c in zip(*reduced)) if reduced else [()] * len(sorted_cols)
    return (len(sorted_cols), tuple(key_cols))
