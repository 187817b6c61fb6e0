"""Canonical (lexicographically first) global minimum cuts.

The solver packs spanning trees, finds the best cut that crosses at most
two edges of each tree, and compares candidates by ``(value, LN, P)``, so
every seed returns the same cut with high probability.
"""

from .contraction import (Contraction, CutQueryOracle, contract, exact_nmc_provider,
                          karger_half_provider, meta_select, min_degree_vertex,
                          tuple_consistency_check)
from .errors import CanonCutError
from .graph import CutTuple, Graph, TieBreakConfig, lex_tuple, parse_graph, read_graph
from .oracle import oracle_check_uniqueness, oracle_lex_first
from .solver import SolveParams, SolveResult, canonical_min_cut

__all__ = [
    "CanonCutError", "Contraction", "CutQueryOracle", "CutTuple", "Graph", "SolveParams",
    "SolveResult", "TieBreakConfig", "canonical_min_cut", "contract", "exact_nmc_provider",
    "karger_half_provider", "lex_tuple", "meta_select", "min_degree_vertex",
    "oracle_check_uniqueness", "oracle_lex_first", "parse_graph", "read_graph",
    "tuple_consistency_check",
]
__version__ = "0.1.0"
