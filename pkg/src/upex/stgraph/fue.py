"""Extension with a fixed upward embedding of an st-graph."""

from __future__ import annotations

from ..core import Decision, PreconditionError, UpeInstance, gc_paused, require_valid
from ..transforms import eliminate_partial_edges
from .base import StGraph, as_st_graph
from .conditions import check_condition1, condition2_violation, height_groups
from .dominance import build_dominance_index


def prepare_st_instance(inst: UpeInstance) -> tuple[UpeInstance, StGraph]:
    """Validate, check the st structure and make H edgeless."""
    require_valid(inst)
    st = as_st_graph(inst.graph, inst.embedding)
    if inst.h_edges:
        inst, _ = eliminate_partial_edges(inst)
        st = StGraph(inst.graph, st.s, st.t)
    return inst, st


def solve_st_fue(inst: UpeInstance) -> Decision:
    if inst.embedding is None:
        raise PreconditionError("st-fue needs an upward embedding")
    with gc_paused():
        return _solve(inst)


def _solve(inst: UpeInstance) -> Decision:
    flat, st = prepare_st_instance(inst)
    groups = height_groups(flat)
    if not check_condition1(flat, groups):
        return Decision(False, "st-fue", {"condition": 1})
    idx = build_dominance_index(st, flat.embedding)
    bad = condition2_violation(flat, idx, groups)
    if bad is not None:
        return Decision(False, "st-fue", {"condition": 2, "pair": list(bad)})
    return Decision(True, "st-fue")
