"""Equivalence-preserving rewrites of instances.

* :func:`eliminate_partial_edges` turns every fixed edge into a path of
  fixed vertices, so the partial drawing becomes a point set.
* :func:`make_distinct_y` additionally splits fixed vertices sharing a
  height into short vertical fixed edges.
* :func:`upe_to_olp` / :func:`olp_to_upe` translate between point-set
  instances and ordered level graphs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    DirectedGraph,
    Edge,
    PartialDrawing,
    PreconditionError,
    UpeInstance,
    UpwardEmbedding,
    require_valid,
)
from .geometry import Point, x_at


# ---------------------------------------------------------------------------
# element maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementMap:
    """Where each element of a transformed instance came from.

    Origins are tuples: ``("vertex", v)`` or ``("edge", (u, w), segment)``,
    where ``segment`` indexes the polyline segment of the original route.
    Elements without an entry are unchanged originals.
    """

    original_n: int
    vertex_origin: dict[int, tuple] = field(default_factory=dict)
    edge_origin: dict[Edge, tuple] = field(default_factory=dict)

    def of_vertex(self, v: int) -> tuple:
        return self.vertex_origin.get(v, ("vertex", v))

    def of_edge(self, e: Edge) -> tuple:
        return self.edge_origin.get(e, ("edge", e, 0))

    def is_identity(self) -> bool:
        return not self.vertex_origin and not self.edge_origin

    def then(self, later: "ElementMap") -> "ElementMap":
        """Compose with a map applied after this one."""

        def lift(origin: tuple) -> tuple:
            if origin[0] == "vertex":
                return self.of_vertex(origin[1])
            return self.of_edge(origin[1])

        verts = {v: lift(o) for v, o in later.vertex_origin.items()}
        for v, o in self.vertex_origin.items():
            verts.setdefault(v, o)
        edges = {e: lift(o) for e, o in later.edge_origin.items()}
        return ElementMap(self.original_n, verts, edges)


# ---------------------------------------------------------------------------
# removing partial edges
# ---------------------------------------------------------------------------

@dataclass
class SweepState:
    """Per-line orders computed by the sweep (kept for inspection and tests)."""

    interesting_ys: list[Fraction]
    line_orders: list[list[tuple]] = field(default_factory=list)
    between_orders: list[list[tuple]] = field(default_factory=list)


def _segments_and_nodes(inst: UpeInstance):
    """Split fixed routes at their bends.

    Nodes are original fixed vertices (ints) or bends ``("b", edge, k)``;
    segments are ``(edge, k)`` for the k-th piece of an edge's route.
    """
    node_pos: dict = {v: inst.drawing.vertex_pos[v] for v in inst.h_vertices}
    seg_ends: dict = {}
    for e in sorted(inst.h_edges):
        route = inst.drawing.edge_routes[e]
        nodes = [e[0]] + [("b", e, k) for k in range(1, len(route) - 1)] + [e[1]]
        for k in range(1, len(route) - 1):
            node_pos[("b", e, k)] = route[k]
        for k in range(len(route) - 1):
            seg_ends[(e, k)] = (nodes[k], nodes[k + 1])
    return node_pos, seg_ends


def _sweep_fast(ys, node_pos, seg_ends, line_of):
    nodes_on = [[] for _ in ys]
    for node, p in node_pos.items():
        nodes_on[line_of[p.y]].append(node)
    for lst in nodes_on:
        lst.sort(key=lambda nd: node_pos[nd].x)
    out_segs: dict = {}
    for seg, (a, b) in seg_ends.items():
        out_segs.setdefault(a, []).append(seg)
    for a, segs in out_segs.items():
        pa = node_pos[a]
        segs.sort(key=lambda s: (node_pos[seg_ends[s][1]].x - pa.x) / (node_pos[seg_ends[s][1]].y - pa.y))

    state = SweepState(list(ys))
    current = [("v", nd) for nd in nodes_on[0]]
    for i in range(len(ys)):
        state.line_orders.append(current)
        if i == len(ys) - 1:
            break
        between: list = []
        for kind, el in current:
            if kind == "v":
                between.extend(("e", s) for s in out_segs.get(el, ()))
            else:
                between.append((kind, el))
        state.between_orders.append(between)
        nxt: list = []
        for kind, seg in between:
            head = seg_ends[seg][1]
            if line_of[node_pos[head].y] == i + 1:
                if not (nxt and nxt[-1] == ("v", head)):
                    nxt.append(("v", head))
            else:
                nxt.append(("e", seg))
        y = ys[i + 1]
        present = {el for kind, el in nxt if kind == "v"}

        def key(element, y=y):
            kind, el = element
            if kind == "v":
                return node_pos[el].x
            a, b = seg_ends[el]
            return x_at(node_pos[a], node_pos[b], y)

        inserts = []
        for nd in nodes_on[i + 1]:
            if nd not in present:
                inserts.append((bisect.bisect_left(nxt, node_pos[nd].x, key=key), nd))
        if inserts:
            merged: list = []
            last = 0
            for idx, nd in inserts:  # nodes arrive in x order, so indices are monotone
                merged.extend(nxt[last:idx])
                merged.append(("v", nd))
                last = idx
            merged.extend(nxt[last:])
            nxt = merged
        current = nxt
    return state


def _sweep_slow(ys, node_pos, seg_ends, line_of):
    state = SweepState(list(ys))
    for i, y in enumerate(ys):
        row = []
        for node, p in node_pos.items():
            if p.y == y:
                row.append((p.x, ("v", node)))
        for seg, (a, b) in seg_ends.items():
            pa, pb = node_pos[a], node_pos[b]
            if pa.y < y < pb.y:
                row.append((x_at(pa, pb, y), ("e", seg)))
        row.sort(key=lambda t: t[0])
        state.line_orders.append([el for _, el in row])
    return state


def sweep_lines(inst: UpeInstance, fast: bool = True) -> tuple[SweepState, dict, dict]:
    node_pos, seg_ends = _segments_and_nodes(inst)
    ys = sorted({p.y for p in node_pos.values()})
    line_of = {y: k for k, y in enumerate(ys)}
    state = (_sweep_fast if fast else _sweep_slow)(ys, node_pos, seg_ends, line_of)
    return state, node_pos, seg_ends


def eliminate_partial_edges(inst: UpeInstance, fast: bool = True) -> tuple[UpeInstance, ElementMap]:
    """Replace each fixed edge by a monotone path of fixed dummy vertices.

    Dummies go on every bend, and on a line through a fixed vertex wherever
    the edge is next to a fixed vertex on that line or the edge ends on an
    adjacent line.  Coincident insertions are merged.
    """
    require_valid(inst)
    if not inst.h_edges:
        return inst, ElementMap(inst.n)
    state, node_pos, seg_ends = sweep_lines(inst, fast)
    ys = state.interesting_ys
    line_of = {y: k for k, y in enumerate(ys)}

    cuts: dict = {seg: set() for seg in seg_ends}
    for i, order in enumerate(state.line_orders):
        for idx, (kind, el) in enumerate(order):
            if kind != "v":
                continue
            for nb in (idx - 1, idx + 1):
                if 0 <= nb < len(order) and order[nb][0] == "e":
                    cuts[order[nb][1]].add(i)
    for seg, (a, b) in seg_ends.items():
        lo, hi = line_of[node_pos[a].y], line_of[node_pos[b].y]
        if hi - lo >= 2:
            cuts[seg].update((lo + 1, hi - 1))

    g = inst.graph
    next_id = g.n
    positions = dict(inst.drawing.vertex_pos)
    vertex_origin: dict[int, tuple] = {}
    edge_origin: dict[Edge, tuple] = {}
    paths: dict[Edge, list[int]] = {}
    for e in sorted(inst.h_edges):
        route = inst.drawing.edge_routes[e]
        stops: list[tuple[Fraction, Point, int]] = []
        for k in range(len(route) - 1):
            a, b = route[k], route[k + 1]
            if k > 0:
                stops.append((a.y, a, k))
            for i in sorted(cuts[(e, k)]):
                y = ys[i]
                stops.append((y, Point(x_at(a, b, y), y), k))
        stops.sort(key=lambda t: t[0])
        if not stops:
            continue
        path = [e[0]]
        for _, p, k in stops:
            positions[next_id] = p
            vertex_origin[next_id] = ("edge", e, k)
            path.append(next_id)
            next_id += 1
        path.append(e[1])
        paths[e] = path

    edges: list[Edge] = []
    for e in g.edges:
        if e in paths:
            path = paths[e]
            for a, b in zip(path, path[1:]):
                edges.append((a, b))
                # a piece lies on the route segment its lower end starts
                seg = vertex_origin[a][2] if a in vertex_origin else 0
                edge_origin[(a, b)] = ("edge", e, seg)
        else:
            edges.append(e)
    graph = DirectedGraph(next_id, tuple(edges))

    embedding = None
    if inst.embedding is not None:
        succ = [list(s) for s in inst.embedding.succ] + [[] for _ in range(next_id - g.n)]
        pred = [list(p) for p in inst.embedding.pred] + [[] for _ in range(next_id - g.n)]
        for (u, v), path in paths.items():
            succ[u][succ[u].index(v)] = path[1]
            pred[v][pred[v].index(u)] = path[-2]
            for k in range(1, len(path) - 1):
                succ[path[k]] = [path[k + 1]]
                pred[path[k]] = [path[k - 1]]
        embedding = UpwardEmbedding(tuple(map(tuple, succ)), tuple(map(tuple, pred)))

    out = UpeInstance(graph, frozenset(positions), frozenset(),
                      PartialDrawing(positions, {}), embedding)
    return out, ElementMap(g.n, vertex_origin, edge_origin)


# ---------------------------------------------------------------------------
# distinct heights
# ---------------------------------------------------------------------------

def strip_heights(ys: list[Fraction]) -> list[Fraction]:
    """Height of the strip around each interesting line: min(1, gap/2)."""
    heights = []
    for i, y in enumerate(ys):
        gaps = []
        if i > 0:
            gaps.append(y - ys[i - 1])
        if i + 1 < len(ys):
            gaps.append(ys[i + 1] - y)
        heights.append(min([Fraction(1)] + [gap / 2 for gap in gaps]))
    return heights


def make_distinct_y(inst: UpeInstance, fast: bool = True) -> tuple[UpeInstance, ElementMap]:
    """Remove fixed edges, then split every fixed vertex that shares its
    height with another fixed vertex into a short vertical fixed edge."""
    base, first = eliminate_partial_edges(inst, fast)
    vpos = base.drawing.vertex_pos
    by_y: dict[Fraction, list[int]] = {}
    for v in base.h_vertices:
        by_y.setdefault(vpos[v].y, []).append(v)
    ys = sorted(by_y)
    shared = [y for y in ys if len(by_y[y]) > 1]
    if not shared:
        return base, first
    heights = dict(zip(ys, strip_heights(ys)))

    g = base.graph
    upper: dict[int, int] = {}
    positions = dict(vpos)
    routes: dict[Edge, tuple[Point, ...]] = {}
    vertex_origin: dict[int, tuple] = {}
    edge_origin: dict[Edge, tuple] = {}
    next_id = g.n
    for y in shared:
        row = sorted(by_y[y], key=lambda v: vpos[v].x)
        for j, v in enumerate(row, start=1):
            half = j * heights[y] / (6 * len(row))
            x = vpos[v].x
            low, high = Point(x, y - half), Point(x, y + half)
            upper[v] = next_id
            positions[v] = low
            positions[next_id] = high
            vertex_origin[next_id] = ("vertex", v)
            routes[(v, next_id)] = (low, high)
            edge_origin[(v, next_id)] = ("vertex", v)
            next_id += 1

    edges: list[Edge] = []
    for u, w in g.edges:
        new = (upper.get(u, u), w)
        edges.append(new)
        if new != (u, w):
            edge_origin[new] = ("edge", (u, w), 0)
    edges.extend(routes)
    graph = DirectedGraph(next_id, tuple(edges))

    embedding = None
    if base.embedding is not None:
        succ = [list(s) for s in base.embedding.succ] + [[] for _ in range(next_id - g.n)]
        pred = [list(p) for p in base.embedding.pred] + [[] for _ in range(next_id - g.n)]
        for v, hi in upper.items():
            succ[hi] = succ[v]
            pred[hi] = [v]
            succ[v] = [hi]
            for w in succ[hi]:
                pred[w] = [hi if x == v else x for x in pred[w]]
        embedding = UpwardEmbedding(tuple(map(tuple, succ)), tuple(map(tuple, pred)))

    out = UpeInstance(graph, frozenset(positions), frozenset(routes),
                      PartialDrawing(positions, routes), embedding)
    return out, first.then(ElementMap(g.n, vertex_origin, edge_origin))


# ---------------------------------------------------------------------------
# ordered level graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderedLevelGraph:
    graph: DirectedGraph
    level: tuple[int, ...]
    xi: dict[int, tuple[int, ...]]

    @property
    def upward(self) -> bool:
        """Whether every edge climbs strictly; downward edges make the instance a NO."""
        return all(self.level[u] < self.level[v] for u, v in self.graph.edges)

    def problem(self) -> str | None:
        if len(self.level) != self.graph.n:
            return "every vertex needs a level"
        if any(lv < 1 for lv in self.level):
            return "levels are positive integers"
        members: dict[int, set] = {}
        for v, lv in enumerate(self.level):
            members.setdefault(lv, set()).add(v)
        if set(members) != set(self.xi):
            return "within-level orders must cover exactly the used levels"
        for lv, order in self.xi.items():
            if len(order) != len(set(order)) or set(order) != members[lv]:
                return f"order of level {lv} is not a permutation of its vertices"
        return None


def upe_to_olp(inst: UpeInstance) -> OrderedLevelGraph:
    """Levels are the height classes in increasing order; the within-level
    order is left to right."""
    require_valid(inst)
    if inst.h_edges:
        raise PreconditionError("instance has fixed edges")
    if set(inst.h_vertices) != set(range(inst.n)):
        raise PreconditionError("every vertex must be fixed")
    if inst.embedding is not None:
        raise PreconditionError("ordered level graphs carry no embedding")
    vpos = inst.drawing.vertex_pos
    rank = {y: k + 1 for k, y in enumerate(sorted({p.y for p in vpos.values()}))}
    level = tuple(rank[vpos[v].y] for v in range(inst.n))
    xi: dict[int, list[int]] = {}
    for v in sorted(range(inst.n), key=lambda v: vpos[v].x):
        xi.setdefault(level[v], []).append(v)
    return OrderedLevelGraph(inst.graph, level, {lv: tuple(o) for lv, o in sorted(xi.items())})


def olp_to_upe(olg: OrderedLevelGraph) -> UpeInstance:
    """Place each vertex at (position within its level, level)."""
    problem = olg.problem()
    if problem:
        raise PreconditionError(problem)
    positions = {}
    for lv, order in olg.xi.items():
        for k, v in enumerate(order, start=1):
            positions[v] = Point(Fraction(k), Fraction(lv))
    return UpeInstance(olg.graph, frozenset(positions), frozenset(),
                       PartialDrawing(positions, {}), None)
