"""The two conditions characterizing extendable instances over an st-graph
with edgeless H: heights respect reachability, and equal heights respect
left-to-right order."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

from ..core import DirectedGraph, PreconditionError, UpeInstance
from ..geometry import integer_keys
from .dominance import DominanceIndex


@dataclass(frozen=True)
class AuxGraph:
    graph: DirectedGraph
    connectors: tuple[int, ...]


def height_groups(inst: UpeInstance) -> list[list[int]]:
    """Pinned vertices grouped by height (bottom-up), each group sorted by x."""
    vpos = inst.drawing.vertex_pos
    pinned = list(inst.h_vertices)
    ky = dict(zip(pinned, integer_keys(vpos[v].y for v in pinned)))
    kx = dict(zip(pinned, integer_keys(vpos[v].x for v in pinned)))
    ordered = sorted(pinned, key=lambda v: (ky[v], kx[v]))
    return [list(grp) for _, grp in groupby(ordered, key=ky.__getitem__)]


def build_aux_graph(inst: UpeInstance, groups: list[list[int]] | None = None) -> AuxGraph:
    """G plus one connector per pair of consecutive height groups, with edges
    from the lower group into the connector and out of it into the upper one."""
    if inst.h_edges:
        raise PreconditionError("H must be edgeless; eliminate its edges first")
    edges = list(inst.graph.edges)
    if groups is None:
        groups = height_groups(inst)
    connectors = []
    next_id = inst.n
    for lower, upper in zip(groups, groups[1:]):
        connectors.append(next_id)
        edges.extend((v, next_id) for v in lower)
        edges.extend((next_id, v) for v in upper)
        next_id += 1
    return AuxGraph(DirectedGraph(next_id, tuple(edges)), tuple(connectors))


def check_condition1(inst: UpeInstance, groups: list[list[int]] | None = None) -> bool:
    return build_aux_graph(inst, groups).graph.topological_order() is not None


def condition2_violation(inst: UpeInstance, idx: DominanceIndex,
                         groups: list[list[int]] | None = None) -> tuple[int, int] | None:
    """First consecutive equal-height pair (u, v), u left of v in the drawing,
    for which u is not to the left of v in the embedding."""
    if inst.h_edges:
        raise PreconditionError("H must be edgeless; eliminate its edges first")
    for group in groups if groups is not None else height_groups(inst):
        for u, v in zip(group, group[1:]):
            if not idx.is_left_of(u, v):
                return u, v
    return None


def check_condition2_fixed(inst: UpeInstance, idx: DominanceIndex) -> bool:
    return condition2_violation(inst, idx) is None
