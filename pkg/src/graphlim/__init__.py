"""Finite graphs with quotient maps, their limit sequences, and clopen tools."""

from .builder import (BuildReport, Requirement, build_comma_prefix,
                      build_prefix, disjoint_union, replay_ledger,
                      split_cover, verify_A, verify_U)
from .category import (CommaObject, ProfiniteBase, comma_amalgamate,
                       comma_arrow_check, constant_base, discrete_base,
                       factor_through_level, product, pullback)
from .core import (FiniteGraph, are_isomorphic, canonical_form,
                   discrete_graph, edge_graph, enumerate_graphs,
                   induced_subgraph, isolated_vertices, new_graph,
                   terminal_graph)
from .errors import CapExceeded, DepthExhausted, GraphlimError, PreconditionError
from .kr import (LiftInstance, LiftResult, Rung, SquareTower, TowerAudit,
                 extend_isomorphism, lift, verify_tower)
from .limits import (Clopen, EdgeWitness, EmbeddingReport, edge_possible,
                     embedding_report, find_edge_in_clopen, refine, separate,
                     star_solve)
from .maps import (Classification, GraphMap, classify, compose, constant_map,
                   elementary_decompose, enumerate_quotients, identity_map,
                   inverse_of_isomorphism, is_quotient, merge_vertices,
                   search_quotients)

__version__ = "0.1.0"

__all__ = [
    "BuildReport", "CapExceeded", "Classification", "Clopen", "CommaObject",
    "DepthExhausted", "EdgeWitness", "EmbeddingReport", "FiniteGraph",
    "GraphMap", "GraphlimError", "LiftInstance", "LiftResult",
    "PreconditionError", "ProfiniteBase", "Requirement", "Rung",
    "SquareTower", "TowerAudit", "are_isomorphic", "build_comma_prefix",
    "build_prefix", "canonical_form", "classify", "comma_amalgamate",
    "comma_arrow_check", "compose", "constant_base", "constant_map",
    "discrete_base", "discrete_graph", "disjoint_union", "edge_graph",
    "edge_possible", "elementary_decompose", "embedding_report",
    "enumerate_graphs", "enumerate_quotients", "extend_isomorphism",
    "factor_through_level", "find_edge_in_clopen", "identity_map",
    "induced_subgraph", "inverse_of_isomorphism", "is_quotient",
    "isolated_vertices", "lift", "merge_vertices", "new_graph", "product",
    "pullback", "refine", "replay_ledger", "search_quotients", "separate",
    "split_cover", "star_solve", "terminal_graph", "verify_A", "verify_U",
    "verify_tower",
]
