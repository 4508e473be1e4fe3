"""st-graphs, rotation systems and faces of an upward embedding."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from ..core import DirectedGraph, PreconditionError, UpwardEmbedding


@dataclass(frozen=True)
class StGraph:
    graph: DirectedGraph
    s: int
    t: int

    @property
    def n(self) -> int:
        return self.graph.n


def st_poles(graph: DirectedGraph) -> tuple[int, int] | None:
    """Return (s, t) when the graph is an acyclic digraph with one source and one sink."""
    if graph.n < 2 or graph.structural_problem() is not None:
        return None
    sources, sinks = graph.sources(), graph.sinks()
    if len(sources) != 1 or len(sinks) != 1 or graph.topological_order() is None:
        return None
    return sources[0], sinks[0]


def as_st_graph(graph: DirectedGraph, embedding: UpwardEmbedding | None = None) -> StGraph:
    """Wrap graph as an StGraph; with an embedding the rotation system is checked,
    without one the graph plus (s, t) must be planar."""
    poles = st_poles(graph)
    if poles is None:
        raise PreconditionError("not an st-graph (need one source, one sink, no cycles)")
    st = StGraph(graph, *poles)
    if embedding is not None:
        problem = embedding_problem(st, embedding)
        if problem:
            raise PreconditionError(f"embedding is not upward planar: {problem}")
    else:
        und = nx.Graph(graph.edges)
        und.add_edge(st.s, st.t)
        if not nx.check_planarity(und)[0]:
            raise PreconditionError("st-graph is not upward planar")
    return st


# ---------------------------------------------------------------------------
# rotations and faces
# ---------------------------------------------------------------------------

def rotation(emb: UpwardEmbedding, v: int) -> list[int]:
    """Clockwise neighbour order: successors left to right, then predecessors right to left."""
    return list(emb.succ[v]) + list(reversed(emb.pred[v]))


def faces(graph: DirectedGraph, emb: UpwardEmbedding) -> list[list[tuple[int, int, int]]]:
    """Faces as lists of angles (v, x, y): at v, from neighbour x clockwise to neighbour y."""
    return _faces(graph, emb)


@lru_cache(maxsize=4)
def _faces(graph: DirectedGraph, emb: UpwardEmbedding) -> list[list[tuple[int, int, int]]]:
    n = graph.n
    rot = [rotation(emb, v) for v in range(n)]
    owner = [v for v in range(n) for _ in rot[v]]
    start_at = [x for r in rot for x in r]
    end_at = [x for r in rot for x in r[1:] + r[:1]]
    total = len(owner)
    # angle id keyed by (vertex, neighbour it starts from)
    angle_of = dict(zip([v * n + x for v, x in zip(owner, start_at)], range(total)))
    seen = bytearray(total)
    out: list[list[tuple[int, int, int]]] = []
    for first in range(total):
        if seen[first]:
            continue
        face = []
        a = first
        while not seen[a]:
            seen[a] = 1
            v, y = owner[a], end_at[a]
            face.append((v, start_at[a], y))
            a = angle_of[y * n + v]
        out.append(face)
    return out


def outer_angles(st: StGraph, emb: UpwardEmbedding) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """The angles at s and t that must lie on the outer face."""
    succ_s, pred_t = emb.succ[st.s], emb.pred[st.t]
    return (st.s, succ_s[-1], succ_s[0]), (st.t, pred_t[0], pred_t[-1])


def embedding_problem(st: StGraph, emb: UpwardEmbedding) -> str | None:
    """None when the lists form a planar rotation with s and t on a common face."""
    problem = emb.problem(st.graph)
    if problem:
        return problem
    all_faces = faces(st.graph, emb)
    if st.n - len(st.graph.edges) + len(all_faces) != 2:
        return "rotation system is not planar"
    at_s, at_t = outer_angles(st, emb)
    for face in all_faces:
        angles = set(face)
        if at_s in angles:
            return None if at_t in angles else "s and t do not share the outer face"
    return "outer angle at s not found"


def restrict_embedding(emb: UpwardEmbedding, graph: DirectedGraph) -> UpwardEmbedding:
    """Drop neighbours that are not adjacent in graph (graph is a spanning subgraph)."""
    keep = graph.edge_set
    succ = tuple(tuple(w for w in emb.succ[v] if (v, w) in keep) for v in range(graph.n))
    pred = tuple(tuple(u for u in emb.pred[v] if (u, v) in keep) for v in range(graph.n))
    return UpwardEmbedding(succ, pred)
