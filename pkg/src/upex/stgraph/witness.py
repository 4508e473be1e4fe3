"""Explicit drawings for YES instances with a fixed embedding.

Free vertices get heights between their drawn predecessors and successors,
then every horizontal line through a vertex is ordered left to right by the
dominance x-coordinate of a copy of the graph with one dummy per edge.  That
yields a certificate, which the generic materializer turns into coordinates.
"""

from __future__ import annotations

from bisect import bisect_right, insort
from fractions import Fraction

from ..core import (
    DirectedGraph,
    Edge,
    FullDrawing,
    PartialDrawing,
    PreconditionError,
    UpeInstance,
    UpwardEmbedding,
    verify_drawing,
)
from ..oracle import Certificate, materialize
from ..transforms import eliminate_partial_edges
from .base import StGraph
from .dominance import build_dominance_index
from .fue import solve_st_fue


def place_free_vertices(inst: UpeInstance) -> dict[int, Fraction]:
    """Heights for every vertex: pinned ones keep theirs, free ones go strictly
    above all predecessors, below all pinned successors, on a fresh height."""
    g = inst.graph
    vpos = inst.drawing.vertex_pos
    order = g.topological_order()
    ceiling: dict[int, Fraction | None] = {}
    for v in reversed(order):
        best = None
        for w in g.out_adj[v]:
            cand = vpos[w].y if w in vpos else ceiling[w]
            if cand is not None and (best is None or cand < best):
                best = cand
        ceiling[v] = best
    ys = {v: p.y for v, p in vpos.items()}
    taken = sorted(set(ys.values()))
    for v in order:
        if v in ys:
            continue
        below = [ys[u] for u in g.in_adj[v]]
        lo = max(below) if below else None
        k = 0 if lo is None else bisect_right(taken, lo)
        nxt = taken[k] if k < len(taken) else None
        hi = ceiling[v]
        if nxt is None or (hi is not None and hi < nxt):
            nxt = hi
        if lo is None and nxt is None:
            y = Fraction(0)
        elif lo is None:
            y = nxt - 1
        elif nxt is None:
            y = lo + 1
        else:
            y = (lo + nxt) / 2
        ys[v] = y
        insort(taken, y)
    return ys


def _dominance_keys(st: StGraph, emb: UpwardEmbedding) -> tuple[list[int], dict[Edge, int]]:
    """dom_x of every vertex and of one dummy per edge."""
    g = st.graph
    dummy = {e: g.n + k for k, e in enumerate(g.edges)}
    succ = [[dummy[(v, w)] for w in emb.succ[v]] for v in range(g.n)]
    pred = [[dummy[(u, v)] for u in emb.pred[v]] for v in range(g.n)]
    edges = []
    for (u, v), d in dummy.items():
        edges += [(u, d), (d, v)]
        succ.append([v])
        pred.append([u])
    sub = StGraph(DirectedGraph(g.n + len(dummy), tuple(edges)), st.s, st.t)
    idx = build_dominance_index(sub, UpwardEmbedding(tuple(map(tuple, succ)), tuple(map(tuple, pred))))
    return list(idx.dom_x[:g.n]), {e: idx.dom_x[d] for e, d in dummy.items()}


def certificate_from_heights(st: StGraph, emb: UpwardEmbedding, ys: dict[int, Fraction]) -> Certificate:
    heights = sorted(set(ys.values()))
    rank = {y: k for k, y in enumerate(heights)}
    labels = {v: rank[y] for v, y in ys.items()}
    vx, ex = _dominance_keys(st, emb)
    lines: list[list] = [[] for _ in heights]
    for v, lab in labels.items():
        lines[lab].append(v)
    for u, v in st.graph.edges:
        for k in range(labels[u] + 1, labels[v]):
            lines[k].append((u, v))

    def key(item):
        return ex[item] if isinstance(item, tuple) else vx[item]

    return Certificate(labels, tuple(tuple(sorted(line, key=key)) for line in lines))


def build_witness_drawing_st(inst: UpeInstance) -> FullDrawing:
    if not solve_st_fue(inst).answer:
        raise PreconditionError("no drawing exists for this instance")
    flat, emap = eliminate_partial_edges(inst)
    st = StGraph(flat.graph, *_poles(flat.graph))
    ys = place_free_vertices(flat)
    cert = certificate_from_heights(st, flat.embedding, ys)

    # fixed edges come back as straight pieces so the materializer keeps them
    def origin(e: Edge) -> Edge:
        return emap.of_edge(e)[1]

    pieces = [e for e in flat.graph.edges if origin(e) in inst.h_edges]
    vpos = flat.drawing.vertex_pos
    pinned = UpeInstance(
        flat.graph, flat.h_vertices, frozenset(pieces),
        PartialDrawing(vpos, {e: (vpos[e[0]], vpos[e[1]]) for e in pieces}),
        flat.embedding,
    )
    drawn = materialize(pinned, cert)
    positions = {v: drawn.vertex_pos[v] for v in range(inst.n)}
    routes = {}
    for e in inst.graph.edges:
        routes[e] = inst.drawing.edge_routes[e] if e in inst.h_edges else drawn.edge_routes[e]
    out = FullDrawing(positions, routes)
    if not verify_drawing(inst, out):
        raise AssertionError("witness drawing failed verification")
    return out


def _poles(graph: DirectedGraph) -> tuple[int, int]:
    return graph.sources()[0], graph.sinks()[0]
