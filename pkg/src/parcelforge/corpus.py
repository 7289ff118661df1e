"""Built-in instances: small graphs (both sides) and a few matrices over GF(2),
GF(3), GF(5) and the integers."""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

from .ground import Instance, InstanceError, OrientedGraph, graph_instance, matrix_instance

GRAPHS: Dict[str, Tuple[int, Tuple[Tuple[int, int], ...]]] = {
    "single-edge": (2, ((0, 1),)),
    "loop": (1, ((0, 0),)),
    "triangle": (3, ((0, 1), (1, 2), (2, 0))),
    "c4": (4, ((0, 1), (1, 2), (2, 3), (3, 0))),
    "c5": (5, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))),
    "k4": (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
    "k23": (5, ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4))),
    "bowtie": (5, ((0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0))),
    # two triangles joined by the bridge 2 -> 3
    "bridge": (6, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3))),
}

MATRICES = {
    "fano": (2, ((1, 0, 0, 1, 1, 0, 1),
                 (0, 1, 0, 1, 0, 1, 1),
                 (0, 0, 1, 0, 1, 1, 1))),
    "hamming74": (2, ((1, 0, 0, 0, 1, 1, 0),
                      (0, 1, 0, 0, 1, 0, 1),
                      (0, 0, 1, 0, 0, 1, 1),
                      (0, 0, 0, 1, 1, 1, 1))),
    "ternary-2x4": (3, ((1, 0, 1, 1),
                        (0, 1, 1, 2))),
    "ternary-3x5": (3, ((1, 0, 0, 1, 1),
                        (0, 1, 0, 1, 2),
                        (0, 0, 1, 1, 1))),
    "gf3-identity": (3, ((1, 0), (0, 1))),
    "gf5-identity": (5, ((1, 0), (0, 1))),
    # network matrix of a directed path against a few chords: totally unimodular
    "tu-network": (None, ((1, 0, 0, 1, 0),
                          (0, 1, 0, 1, 1),
                          (0, 0, 1, 0, 1))),
}


@lru_cache(maxsize=None)
def corpus() -> Tuple[Instance, ...]:
    """All built-in instances in a fixed order (graphs first, vertex side
    before cycle side, then matrices)."""
    out: List[Instance] = []
    for name, (n, edges) in GRAPHS.items():
        g = OrientedGraph(n, edges)
        out.append(graph_instance(g, "vertex", f"{name}-vertex"))
        out.append(graph_instance(g, "cycle", f"{name}-cycle"))
    for name, (p, rows) in MATRICES.items():
        out.append(matrix_instance(rows, p, name=name))
    return tuple(out)


def builtin(name: str) -> Instance:
    for inst in corpus():
        if inst.name == name:
            return inst
    known = ", ".join(i.name for i in corpus())
    raise InstanceError(f"unknown built-in instance {name!r}; known: {known}")


def builtin_graph(name: str) -> OrientedGraph:
    n, edges = GRAPHS[name]
    return OrientedGraph(n, edges)
