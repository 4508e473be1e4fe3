"""Instance model, validation and the full-drawing verifier.

An instance is a directed graph ``G``, a subgraph ``H`` and a fixed polyline
drawing of ``H``, optionally together with a prescribed upward embedding of
``G`` (left-to-right successor and predecessor lists at every vertex).
"""

from __future__ import annotations

import gc
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .geometry import Point, on_segment, orientation, point, segments_intersect

Edge = tuple[int, int]
Route = tuple[Point, ...]


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class UpexError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(UpexError):
    """The instance violates one of the model invariants."""


class MalformedDrawing(UpexError):
    """A candidate full drawing is missing vertices or edges."""


class PreconditionError(UpexError):
    """An engine was called on an instance outside its scope."""


# ---------------------------------------------------------------------------
# graphs and embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectedGraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))

    @cached_property
    def out_adj(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
        return adj

    @cached_property
    def in_adj(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[v].append(u)
        return adj

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @property
    def n(self) -> int:
        return self.vertex_count

    def sources(self) -> list[int]:
        return [v for v in range(self.vertex_count) if not self.in_adj[v]]

    def sinks(self) -> list[int]:
        return [v for v in range(self.vertex_count) if not self.out_adj[v]]

    def topological_order(self) -> list[int] | None:
        """Kahn order, or None when the graph has a directed cycle."""
        indeg = [len(p) for p in self.in_adj]
        order = [v for v in range(self.vertex_count) if indeg[v] == 0]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for w in self.out_adj[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        return order if len(order) == self.vertex_count else None

    def structural_problem(self) -> tuple[str, object] | None:
        seen: set[Edge] = set()
        for u, v in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                return "edge endpoint out of range", (u, v)
            if u == v:
                return "self-loop", (u, v)
            if (u, v) in seen:
                return "parallel edge", (u, v)
            seen.add((u, v))
        return None


@dataclass(frozen=True)
class UpwardEmbedding:
    """Left-to-right successor and predecessor lists, indexed by vertex."""

    succ: tuple[tuple[int, ...], ...]
    pred: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "succ", tuple(tuple(s) for s in self.succ))
        object.__setattr__(self, "pred", tuple(tuple(p) for p in self.pred))

    @classmethod
    def from_lists(cls, n: int, succ: Mapping[int, Sequence[int]],
                   pred: Mapping[int, Sequence[int]]) -> "UpwardEmbedding":
        return cls(tuple(tuple(succ.get(v, ())) for v in range(n)),
                   tuple(tuple(pred.get(v, ())) for v in range(n)))

    def problem(self, graph: DirectedGraph) -> str | None:
        """Describe why the lists do not match the graph, or return None."""
        if len(self.succ) != graph.n or len(self.pred) != graph.n:
            return "embedding has wrong number of vertices"
        for v in range(graph.n):
            if sorted(self.succ[v]) != sorted(graph.out_adj[v]):
                return f"successor list of {v} does not match its out-neighbours"
            if sorted(self.pred[v]) != sorted(graph.in_adj[v]):
                return f"predecessor list of {v} does not match its in-neighbours"
        return None


# ---------------------------------------------------------------------------
# drawings and instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialDrawing:
    vertex_pos: Mapping[int, Point] = field(default_factory=dict)
    edge_routes: Mapping[Edge, Route] = field(default_factory=dict)

    def segment_count(self) -> int:
        return sum(len(r) - 1 for r in self.edge_routes.values())


@dataclass(frozen=True)
class FullDrawing(PartialDrawing):
    """A drawing of every vertex and edge of G."""


@dataclass(frozen=True)
class UpeInstance:
    graph: DirectedGraph
    h_vertices: frozenset[int]
    h_edges: frozenset[Edge]
    drawing: PartialDrawing
    embedding: UpwardEmbedding | None = None

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    def pos(self, v: int) -> Point | None:
        return self.drawing.vertex_pos.get(v)

    def size(self) -> int:
        return self.graph.n + len(self.graph.edges) + self.drawing.segment_count()

    def with_embedding(self, embedding: UpwardEmbedding | None) -> "UpeInstance":
        return replace(self, embedding=embedding)

    def edgeless_h(self) -> bool:
        return not self.h_edges

    def distinct_pinned_y(self) -> bool:
        ys = [p.y for p in self.drawing.vertex_pos.values()]
        return len(set(ys)) == len(ys)


def make_instance(n: int, edges: Iterable[Sequence[int]],
                  positions: Mapping[int, Sequence] | None = None,
                  routes: Mapping[Edge, Sequence[Sequence]] | None = None,
                  embedding: UpwardEmbedding | tuple | None = None,
                  h_vertices: Iterable[int] | None = None) -> UpeInstance:
    """Convenience constructor taking plain numbers.

    ``positions`` maps vertices to ``(x, y)``; ``routes`` maps H-edges to the
    full list of polyline points.  H is the set of positioned vertices and
    routed edges unless ``h_vertices`` is given explicitly.
    """
    positions = positions or {}
    routes = routes or {}
    graph = DirectedGraph(n, tuple(tuple(e) for e in edges))
    vpos = {int(v): point(*xy) for v, xy in positions.items()}
    eroutes = {(int(u), int(w)): tuple(point(*xy) for xy in r) for (u, w), r in routes.items()}
    if isinstance(embedding, tuple):
        embedding = UpwardEmbedding(*embedding)
    hv = frozenset(vpos) if h_vertices is None else frozenset(h_vertices)
    return UpeInstance(graph, hv, frozenset(eroutes), PartialDrawing(vpos, eroutes), embedding)


def straight_routes(edges: Iterable[Edge], positions: Mapping[int, Point]) -> dict[Edge, Route]:
    return {e: (positions[e[0]], positions[e[1]]) for e in edges}


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problem: str | None
    element: object
    size: int


def _route_problem(edge: Edge, route: Route, vertex_pos: Mapping[int, Point]) -> str | None:
    if len(route) < 2:
        return "route has fewer than two points"
    if route[0] != vertex_pos.get(edge[0]) or route[-1] != vertex_pos.get(edge[1]):
        return "route endpoints differ from endpoint positions"
    for a, b in zip(route, route[1:]):
        if not b.y > a.y:
            return "non-y-monotone polyline"
    return None


def planarity_violation(vertex_pos: Mapping[int, Point],
                        edge_routes: Mapping[Edge, Route]) -> tuple[str, object] | None:
    """First crossing, overlap or vertex collision in a drawing, or None.

    Routes are assumed to be strictly y-monotone already.  Two segments of
    different edges may only meet at a point drawn for a vertex common to
    both edges; a vertex may only touch the edges incident to it.
    """
    seen: dict[Point, int] = {}
    for v, p in vertex_pos.items():
        if p in seen:
            return "two vertices share a point", (seen[p], v)
        seen[p] = v
    if not edge_routes:
        return None

    # items: (ymin, ymax, a, b, kind, owner); vertices are degenerate segments
    items = []
    for e, route in edge_routes.items():
        for a, b in zip(route, route[1:]):
            items.append((a.y, b.y, a, b, 1, e))
    for v, p in vertex_pos.items():
        items.append((p.y, p.y, p, p, 0, v))
    items.sort(key=lambda it: it[0])

    active: list = []
    for item in items:
        ymin = item[0]
        active = [it for it in active if it[1] >= ymin]
        for other in active:
            bad = _pair_conflict(item, other, vertex_pos)
            if bad is not None:
                return bad
        active.append(item)
    return None


def _pair_conflict(first, second, vertex_pos):
    _, _, a, b, kind1, own1 = first
    _, _, c, d, kind2, own2 = second
    if kind1 == 0 and kind2 == 0:
        return None  # distinct points checked already
    if kind1 == 1 and kind2 == 1 and own1 == own2:
        return None
    if not segments_intersect(a, b, c, d):
        return None
    if kind1 == 0 or kind2 == 0:
        vertex, edge = (own1, own2) if kind1 == 0 else (own2, own1)
        if vertex in edge:
            return None
        return "vertex lies on an edge", (vertex, edge)
    shared = set(own1) & set(own2)
    for v in shared:
        p = vertex_pos.get(v)
        if p is None or p not in (a, b) or p not in (c, d):
            continue
        far1 = b if a == p else a
        far2 = d if c == p else c
        same_side = (far1.y > p.y) == (far2.y > p.y)
        if same_side and orientation(p, far1, far2) == 0:
            return "edges overlap", (own1, own2)
        return None
    return "edges cross", (own1, own2)


def validate_instance(inst: UpeInstance) -> ValidationReport:
    """Check the model invariants; report the first violation found."""
    size = inst.size()

    def bad(problem: str, element: object) -> ValidationReport:
        return ValidationReport(False, problem, element, size)

    g = inst.graph
    issue = g.structural_problem()
    if issue:
        return bad(*issue)
    for v in inst.h_vertices:
        if not (isinstance(v, int) and 0 <= v < g.n):
            return bad("H vertex not in G", v)
    for e in inst.h_edges:
        if e not in g.edge_set:
            return bad("H edge not in G", e)
        if e[0] not in inst.h_vertices or e[1] not in inst.h_vertices:
            return bad("H edge endpoint not in H", e)
    vpos = inst.drawing.vertex_pos
    if set(vpos) != set(inst.h_vertices):
        return bad("drawn vertices differ from V(H)", sorted(set(vpos) ^ set(inst.h_vertices)))
    if set(inst.drawing.edge_routes) != set(inst.h_edges):
        return bad("drawn edges differ from E(H)", sorted(set(inst.drawing.edge_routes) ^ inst.h_edges))
    for e, route in inst.drawing.edge_routes.items():
        problem = _route_problem(e, route, vpos)
        if problem:
            return bad(problem, e)
    clash = planarity_violation(vpos, inst.drawing.edge_routes)
    if clash:
        return bad(*clash)
    if inst.embedding is not None:
        problem = inst.embedding.problem(g)
        if problem:
            return bad(problem, None)
    return ValidationReport(True, None, None, size)


def require_valid(inst: UpeInstance) -> None:
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstance(f"{report.problem}: {report.element}")


# ---------------------------------------------------------------------------
# full drawings
# ---------------------------------------------------------------------------

def extract_embedding(graph: DirectedGraph, drawing: PartialDrawing) -> UpwardEmbedding | None:
    """Read successor/predecessor lists off the tangent order of a drawing.

    Returns None when two edges leave (or enter) a vertex along the same
    direction, which makes the rotation order undefined.
    """
    succ: list[tuple[int, ...]] = []
    pred: list[tuple[int, ...]] = []
    routes = drawing.edge_routes
    for v in range(graph.n):
        outs = []
        for w in graph.out_adj[v]:
            r = routes[(v, w)]
            outs.append(((r[1].x - r[0].x) / (r[1].y - r[0].y), w))
        ins = []
        for u in graph.in_adj[v]:
            r = routes[(u, v)]
            ins.append(((r[-2].x - r[-1].x) / (r[-1].y - r[-2].y), u))
        outs.sort()
        ins.sort()
        for group in (outs, ins):
            if any(group[k][0] == group[k + 1][0] for k in range(len(group) - 1)):
                return None
        succ.append(tuple(w for _, w in outs))
        pred.append(tuple(u for _, u in ins))
    return UpwardEmbedding(tuple(succ), tuple(pred))


def verify_drawing(inst: UpeInstance, d: PartialDrawing) -> bool:
    """Decide whether ``d`` is an upward planar drawing of G extending the
    partial drawing (and realizing the prescribed embedding, if any).

    Raises MalformedDrawing when ``d`` does not cover exactly G.
    """
    g = inst.graph
    missing_v = [v for v in range(g.n) if v not in d.vertex_pos]
    if missing_v or len(d.vertex_pos) != g.n:
        raise MalformedDrawing(f"drawing does not place exactly the vertices of G: {missing_v}")
    if set(d.edge_routes) != g.edge_set:
        raise MalformedDrawing("drawing does not route exactly the edges of G")
    for e, route in d.edge_routes.items():
        if _route_problem(e, route, d.vertex_pos):
            return False
    for v in inst.h_vertices:
        if d.vertex_pos[v] != inst.drawing.vertex_pos[v]:
            return False
    for e in inst.h_edges:
        if tuple(d.edge_routes[e]) != tuple(inst.drawing.edge_routes[e]):
            return False
    if planarity_violation(d.vertex_pos, d.edge_routes):
        return False
    if inst.embedding is not None:
        found = extract_embedding(g, d)
        if found is None or found != inst.embedding:
            return False
    return True


def point_on_route(p: Point, route: Route) -> bool:
    return any(on_segment(p, a, b) for a, b in zip(route, route[1:]))


# ---------------------------------------------------------------------------
# decisions
# ---------------------------------------------------------------------------

@dataclass
class Decision:
    answer: bool
    engine: str
    witness: object = None

    @property
    def label(self) -> str:
        return "yes" if self.answer else "no"


@contextmanager
def gc_paused() -> Iterator[None]:
    """Suspend cyclic garbage collection; the linear-time engines allocate many
    small acyclic objects and full collections would make them super-linear."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()
