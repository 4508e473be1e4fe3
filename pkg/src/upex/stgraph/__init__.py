"""Extension problems over st-graphs: fixed embedding and free embedding."""

from .base import StGraph, as_st_graph, embedding_problem, faces, restrict_embedding, st_poles
from .conditions import AuxGraph, build_aux_graph, check_condition1, check_condition2_fixed
from .dominance import DominanceIndex, Relation, build_dominance_index
from .fue import solve_st_fue
from .reduction import transitive_edges, transitive_reduction
from .spqr import SpqrNode, SpqrTree, build_spqr_tree
from .upe import solve_st_upe
from .witness import build_witness_drawing_st

__all__ = [
    "AuxGraph",
    "DominanceIndex",
    "Relation",
    "SpqrNode",
    "SpqrTree",
    "StGraph",
    "as_st_graph",
    "build_aux_graph",
    "build_dominance_index",
    "build_spqr_tree",
    "build_witness_drawing_st",
    "check_condition1",
    "check_condition2_fixed",
    "embedding_problem",
    "faces",
    "restrict_embedding",
    "solve_st_fue",
    "solve_st_upe",
    "st_poles",
    "transitive_edges",
    "transitive_reduction",
]
