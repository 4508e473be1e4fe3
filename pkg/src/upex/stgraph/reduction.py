"""Transitive reduction of an embedded st-graph, one face at a time."""

from __future__ import annotations

from ..core import DirectedGraph, UpwardEmbedding
from .base import StGraph, faces


def transitive_edges(st: StGraph, emb: UpwardEmbedding) -> set[tuple[int, int]]:
    """An edge is transitive exactly when it joins the source and the sink of an
    incident face whose boundary has more than that one edge on the other side."""
    out_sets = [set(emb.succ[v]) for v in range(st.n)]
    found: set[tuple[int, int]] = set()
    for face in faces(st.graph, emb):
        if len(face) <= 2:
            continue
        source = sink = None
        for v, x, y in face:
            if x in out_sets[v] and y in out_sets[v]:
                source = v
            elif x not in out_sets[v] and y not in out_sets[v]:
                sink = v
        if source is not None and sink is not None and sink in out_sets[source]:
            found.add((source, sink))
    return found


def transitive_reduction(st: StGraph, emb: UpwardEmbedding) -> StGraph:
    drop = transitive_edges(st, emb)
    kept = tuple(e for e in st.graph.edges if e not in drop)
    return StGraph(DirectedGraph(st.n, kept), st.s, st.t)
