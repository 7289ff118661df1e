"""Exact censuses of flow-difference parcels over matroids represented by
graphs, totally unimodular matrices and GF(p) matrices, with executable
checks of their rank-polynomial identities."""

__version__ = "0.1.0"

from .corpus import builtin, corpus
from .cyclotomic import CycElem
from .ground import Instance, InstanceError, OrientedGraph, graph_instance, matrix_instance, parse_instance
from .groups import GroupSpec, cyclic, gfp, parse_group, product_group
from .invariants import char_poly, flow_census_poly, rank_gen_poly, tutte
from .registry import REGISTRY, IdentityReport, verify, verify_theorem_1_1

__all__ = [
    "CycElem", "GroupSpec", "IdentityReport", "Instance", "InstanceError", "OrientedGraph", "REGISTRY",
    "builtin", "char_poly", "corpus", "cyclic", "flow_census_poly", "gfp", "graph_instance", "matrix_instance",
    "parse_group", "parse_instance", "product_group", "rank_gen_poly", "tutte", "verify", "verify_theorem_1_1",
]
