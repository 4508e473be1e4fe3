"""Brute-force decision by enumerating combinatorial certificates.

A certificate fixes a vertical order of the vertices (an ordered partition
into classes that share a horizontal line) and, for every line, the
left-to-right order of the vertices on it together with the edges crossing
it.  The search below builds certificates line by line, so every partial
certificate is already locally consistent, and remembers dead states.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence, Union

from .core import (
    Decision,
    Edge,
    FullDrawing,
    PreconditionError,
    UpeInstance,
    UpexError,
    require_valid,
    verify_drawing,
)
from .geometry import Point, polyline_x_at

Item = Union[int, Edge]

DEFAULT_CAP = 7
EMBEDDING_CHECK = 8


class MalformedCertificate(UpexError):
    """The certificate does not describe classes and line orders for the instance."""


def oracle_cap() -> int:
    raw = os.environ.get("UPEX_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class Certificate:
    y_assignment: dict[int, int]
    sigma: tuple[tuple[Item, ...], ...]

    def classes(self) -> list[list[int]]:
        labels = sorted(set(self.y_assignment.values()))
        rank = {lab: k for k, lab in enumerate(labels)}
        out: list[list[int]] = [[] for _ in labels]
        for v in sorted(self.y_assignment):
            out[rank[self.y_assignment[v]]].append(v)
        return out

    def class_index(self) -> dict[int, int]:
        labels = sorted(set(self.y_assignment.values()))
        rank = {lab: k for k, lab in enumerate(labels)}
        return {v: rank[lab] for v, lab in self.y_assignment.items()}


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed_check: int | None = None
    detail: str = ""


def _is_edge(item: Item) -> bool:
    return isinstance(item, tuple)


# ---------------------------------------------------------------------------
# certificate checking
# ---------------------------------------------------------------------------

def _line_items(inst: UpeInstance, cls: dict[int, int], i: int, members: list[int]) -> set:
    items: set = set(members)
    for u, v in inst.graph.edges:
        a, b = cls[u], cls[v]
        if min(a, b) < i < max(a, b):
            items.add((u, v))
    return items


def check_certificate(inst: UpeInstance, cert: Certificate) -> CheckResult:
    """Run the seven certificate checks (plus the embedding check, numbered 8)."""
    g = inst.graph
    if set(cert.y_assignment) != set(range(g.n)):
        raise MalformedCertificate("y_assignment must label every vertex exactly once")
    classes = cert.classes()
    cls = cert.class_index()
    if len(cert.sigma) != len(classes):
        raise MalformedCertificate("need one line order per class")
    pos: list[dict] = []
    for i, members in enumerate(classes):
        order = list(cert.sigma[i])
        if len(set(order)) != len(order) or set(order) != _line_items(inst, cls, i, members):
            raise MalformedCertificate(f"line order {i} does not list its vertices and crossing edges")
        pos.append({item: k for k, item in enumerate(order)})

    # 1: edges go strictly up
    for u, v in g.edges:
        if not cls[u] < cls[v]:
            return CheckResult(False, 1, f"edge {(u, v)} not upward")

    # 2: consistent order of edges spanning consecutive lines
    def rep(edge: Edge, i: int) -> Item:
        if cls[edge[0]] == i:
            return edge[0]
        if cls[edge[1]] == i:
            return edge[1]
        return edge

    for i in range(len(classes) - 1):
        spanning = [e for e in g.edges if cls[e[0]] <= i and cls[e[1]] >= i + 1]
        for a in range(len(spanning)):
            for b in range(a + 1, len(spanning)):
                e, f = spanning[a], spanning[b]
                lo_e, lo_f = rep(e, i), rep(f, i)
                hi_e, hi_f = rep(e, i + 1), rep(f, i + 1)
                if lo_e == lo_f or hi_e == hi_f:
                    continue
                if (pos[i][lo_e] < pos[i][lo_f]) != (pos[i + 1][hi_e] < pos[i + 1][hi_f]):
                    return CheckResult(False, 2, f"edges {e} and {f} swap between lines")

    vpos = inst.drawing.vertex_pos
    pinned = sorted(inst.h_vertices)
    # 3 and 4: pinned heights agree with the classes
    for a in pinned:
        for b in pinned:
            if cls[a] < cls[b] and not vpos[a].y < vpos[b].y:
                return CheckResult(False, 3, f"{a} below {b} in classes but not in the drawing")
    for a in pinned:
        for b in pinned:
            if cls[a] == cls[b] and vpos[a].y != vpos[b].y:
                return CheckResult(False, 4, f"{a} and {b} share a line but not a height")
    # 5: left-to-right order of pinned vertices on a line
    for a in pinned:
        for b in pinned:
            i = cls[a]
            if a != b and cls[b] == i and pos[i][a] < pos[i][b] and not vpos[a].x < vpos[b].x:
                return CheckResult(False, 5, f"{a} precedes {b} but lies right of it")

    routes = inst.drawing.edge_routes
    for i, members in enumerate(classes):
        anchors = [v for v in members if v in inst.h_vertices]
        if not anchors:
            continue
        y = vpos[anchors[0]].y
        h_crossing = [item for item in cert.sigma[i] if _is_edge(item) and item in inst.h_edges]
        cross_x = {e: polyline_x_at(routes[e], y) for e in h_crossing}
        # 6: pinned vertex against crossing partial edges
        for u in anchors:
            for e in h_crossing:
                if (pos[i][e] < pos[i][u]) != (cross_x[e] < vpos[u].x):
                    return CheckResult(False, 6, f"edge {e} on the wrong side of {u}")
        # 7: crossing partial edges among themselves
        for e in h_crossing:
            for f in h_crossing:
                if e != f and (pos[i][e] < pos[i][f]) != (cross_x[e] < cross_x[f]):
                    return CheckResult(False, 7, f"edges {e} and {f} in the wrong order")

    if inst.embedding is not None:
        emb = inst.embedding
        for v in range(g.n):
            i = cls[v]
            outs = sorted(g.out_adj[v], key=lambda w: pos[i + 1][rep((v, w), i + 1)])
            if tuple(outs) != emb.succ[v]:
                return CheckResult(False, EMBEDDING_CHECK, f"successor order at {v}")
            ins = sorted(g.in_adj[v], key=lambda u: pos[i - 1][rep((u, v), i - 1)])
            if tuple(ins) != emb.pred[v]:
                return CheckResult(False, EMBEDDING_CHECK, f"predecessor order at {v}")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def _pinned_groups(inst: UpeInstance) -> list[tuple[Fraction, tuple[int, ...]]]:
    by_y: dict[Fraction, list[int]] = {}
    for v in inst.h_vertices:
        by_y.setdefault(inst.drawing.vertex_pos[v].y, []).append(v)
    return [(y, tuple(sorted(vs))) for y, vs in sorted(by_y.items())]


def _linear_extensions(items: list, arcs: dict) -> Iterator[list]:
    indeg = {x: 0 for x in items}
    for a, targets in arcs.items():
        for b in targets:
            indeg[b] += 1
    order: list = []
    total = len(items)

    def rec() -> Iterator[list]:
        if len(order) == total:
            yield list(order)
            return
        for x in items:
            if indeg[x] == 0:
                indeg[x] = -1
                for b in arcs.get(x, ()):
                    indeg[b] -= 1
                order.append(x)
                yield from rec()
                order.pop()
                for b in arcs.get(x, ()):
                    indeg[b] += 1
                indeg[x] = 0

    yield from rec()


class _Search:
    def __init__(self, inst: UpeInstance, canonical: bool):
        self.inst = inst
        self.g = inst.graph
        self.canonical = canonical
        self.groups = _pinned_groups(inst)
        self.free = [v for v in range(self.g.n) if v not in inst.h_vertices]
        self.emb = inst.embedding
        self.dead: set = set()
        self.trail: list[tuple[tuple[int, ...], list]] = []

    def candidate_classes(self, placed: frozenset, gidx: int) -> Iterator[tuple[tuple[int, ...], int]]:
        g = self.g
        avail = [v for v in self.free if v not in placed and all(u in placed for u in g.in_adj[v])]
        group_ok = gidx < len(self.groups) and all(
            all(u in placed for u in g.in_adj[v]) for v in self.groups[gidx][1])
        if self.canonical:
            if group_ok:
                yield self.groups[gidx][1], gidx + 1
            for v in avail:
                yield (v,), gidx
            return
        # every nonempty subset of available free vertices, optionally with the next group
        extras = [()] + [c for r in range(1, len(avail) + 1) for c in combinations(avail, r)]
        if group_ok:
            for c in extras:
                yield tuple(sorted(self.groups[gidx][1] + c)), gidx + 1
        for c in extras[1:]:
            yield c, gidx

    def line_orders(self, cls_members: tuple[int, ...], interface: tuple) -> Iterator[list]:
        members = set(cls_members)
        items: list = list(cls_members)
        rep: dict = {}
        for group in interface:
            for e in group:
                if e[1] in members:
                    rep[e] = e[1]
                else:
                    rep[e] = e
                    items.append(e)
        arcs: dict = {}

        def arc(a, b):
            if a != b:
                arcs.setdefault(a, set()).add(b)

        groups = list(interface)
        for a, b in zip(groups, groups[1:]):
            for x in a:
                for y in b:
                    arc(rep[x], rep[y])
        for grp in groups:
            if isinstance(grp, tuple):
                for x, y in zip(grp, grp[1:]):
                    arc(rep[x], rep[y])
        inst = self.inst
        anchors = [v for v in cls_members if v in inst.h_vertices]
        if anchors:
            y = inst.drawing.vertex_pos[anchors[0]].y
            fixed = [(inst.drawing.vertex_pos[v].x, v) for v in anchors]
            for x in items:
                if _is_edge(x) and x in inst.h_edges:
                    fixed.append((polyline_x_at(inst.drawing.edge_routes[x], y), x))
            fixed.sort(key=lambda t: t[0])
            for (_, a), (_, b) in zip(fixed, fixed[1:]):
                arc(a, b)
        if self.emb is not None:
            # predecessor lists are read off the incoming order on this line
            for v in cls_members:
                ins = [e[0] for grp in groups for e in grp if e[1] == v]
                if tuple(ins) != self.emb.pred[v]:
                    return
        yield from _linear_extensions(items, arcs)

    def next_interface(self, order: list) -> tuple:
        out = []
        for item in order:
            if _is_edge(item):
                out.append((item,))
            else:
                succ = self.g.out_adj[item]
                if not succ:
                    continue
                if self.emb is not None:
                    out.append(tuple((item, w) for w in self.emb.succ[item]))
                elif len(succ) == 1:
                    out.append(((item, succ[0]),))
                else:
                    out.append(frozenset((item, w) for w in succ))
        return tuple(out)

    def run(self, placed: frozenset, gidx: int, interface: tuple) -> bool:
        if len(placed) == self.g.n:
            return not interface
        key = (placed, gidx, interface)
        if key in self.dead:
            return False
        for members, nidx in self.candidate_classes(placed, gidx):
            for order in self.line_orders(members, interface):
                self.trail.append((members, order))
                if self.run(placed | set(members), nidx, self.next_interface(order)):
                    return True
                self.trail.pop()
        self.dead.add(key)
        return False


def find_certificate(inst: UpeInstance, canonical: bool = True) -> Certificate | None:
    """Search for a passing certificate; None when there is none.

    With ``canonical`` set, every unpinned vertex gets a line of its own and
    pinned vertices of equal height form one class; a small vertical nudge
    turns any drawing into one of this shape, so nothing is lost.
    """
    search = _Search(inst, canonical)
    if not search.run(frozenset(), 0, ()):
        return None
    labels = {}
    sigma = []
    for k, (members, order) in enumerate(search.trail):
        for v in members:
            labels[v] = k + 1
        sigma.append(tuple(order))
    return Certificate(labels, tuple(sigma))


def brute_force_decide(inst: UpeInstance, cap: int | None = None, canonical: bool = True,
                       draw: bool = True) -> Decision:
    """Exhaustive decision; on YES the witness is ``(certificate, drawing)``."""
    cap = oracle_cap() if cap is None else cap
    if inst.n > cap:
        raise PreconditionError(f"oracle cap exceeded: {inst.n} vertices > {cap}")
    require_valid(inst)
    cert = find_certificate(inst, canonical)
    if cert is None:
        return Decision(False, "oracle")
    drawing = None
    if draw:
        drawing = materialize(inst, cert)
        assert verify_drawing(inst, drawing), "materialized drawing rejected"
    return Decision(True, "oracle", (cert, drawing))


# ---------------------------------------------------------------------------
# materialization
# ---------------------------------------------------------------------------

def _spread(order: Sequence, fixed: dict) -> dict:
    """Assign x values: fixed ones kept, free ones evenly between neighbours."""
    xs: dict = {}
    anchors = [k for k, item in enumerate(order) if item in fixed]
    for a, b in zip(anchors, anchors[1:]):
        if not fixed[order[a]] < fixed[order[b]]:
            raise AssertionError("fixed positions contradict the line order")
    for k in anchors:
        xs[order[k]] = fixed[order[k]]
    bounds = [-1] + anchors + [len(order)]
    for lo, hi in zip(bounds, bounds[1:]):
        run = list(range(lo + 1, hi))
        if not run:
            continue
        left = fixed[order[lo]] if lo >= 0 else None
        right = fixed[order[hi]] if hi < len(order) else None
        r = len(run)
        for step, k in enumerate(run, start=1):
            if left is not None and right is not None:
                xs[order[k]] = left + (right - left) * Fraction(step, r + 1)
            elif right is not None:
                xs[order[k]] = right - (r + 1 - step)
            elif left is not None:
                xs[order[k]] = left + step
            else:
                xs[order[k]] = Fraction(step)
    return xs


def _class_heights(inst: UpeInstance, classes: list[list[int]]) -> list[Fraction]:
    vpos = inst.drawing.vertex_pos
    bends = sorted({p.y for r in inst.drawing.edge_routes.values() for p in r[1:-1]})
    heights: list = []
    for members in classes:
        anchors = [v for v in members if v in inst.h_vertices]
        heights.append(vpos[anchors[0]].y if anchors else None)
    k = 0
    while k < len(classes):
        if heights[k] is not None:
            k += 1
            continue
        j = k
        while j < len(classes) and heights[j] is None:
            j += 1
        lo = heights[k - 1] if k > 0 else None
        hi = heights[j] if j < len(classes) else None
        if lo is not None:
            above = [b for b in bends if b > lo]
            if above and (hi is None or above[0] < hi):
                hi = above[0]
        r = j - k
        for step in range(1, r + 1):
            if lo is not None and hi is not None:
                heights[k + step - 1] = lo + (hi - lo) * Fraction(step, r + 1)
            elif hi is not None:
                heights[k + step - 1] = hi - (r + 1 - step)
            elif lo is not None:
                heights[k + step - 1] = lo + step
            else:
                heights[k + step - 1] = Fraction(step)
        k = j
    return heights


def materialize(inst: UpeInstance, cert: Certificate) -> FullDrawing:
    """Turn a passing certificate into a drawing by the horizontal-lines
    construction; extra lines at bend heights keep partial edges intact."""
    g = inst.graph
    classes = cert.classes()
    cls = cert.class_index()
    heights = _class_heights(inst, classes)
    vpos = inst.drawing.vertex_pos
    routes = inst.drawing.edge_routes
    pos = [{item: k for k, item in enumerate(order)} for order in cert.sigma]

    def rep(edge: Edge, i: int) -> Item:
        if cls[edge[0]] == i:
            return edge[0]
        if cls[edge[1]] == i:
            return edge[1]
        return edge

    lines: list[tuple[Fraction, list]] = []
    for i, order in enumerate(cert.sigma):
        lines.append((heights[i], list(order)))
    class_ys = set(heights)
    for y in sorted({p.y for r in routes.values() for p in r[1:-1]} - class_ys):
        i = max(k for k, h in enumerate(heights) if h < y)
        spanning = [e for e in g.edges if cls[e[0]] <= i and cls[e[1]] >= i + 1]
        spanning.sort(key=lambda e: (pos[i][rep(e, i)], pos[i + 1][rep(e, i + 1)]))
        lines.append((y, spanning))
    lines.sort(key=lambda t: t[0])

    points: dict[Edge, list[Point]] = {e: [] for e in g.edges}
    vertex_xy: dict[int, Point] = {}
    for y, order in lines:
        fixed = {}
        for item in order:
            if _is_edge(item):
                if item in inst.h_edges:
                    fixed[item] = polyline_x_at(routes[item], y)
            elif item in inst.h_vertices:
                fixed[item] = vpos[item].x
        xs = _spread(order, fixed)
        for item in order:
            p = Point(xs[item], y)
            if _is_edge(item):
                points[item].append(p)
            else:
                vertex_xy[item] = p
                for w in g.out_adj[item]:
                    points[(item, w)].append(p)
                for u in g.in_adj[item]:
                    points[(u, item)].append(p)

    edge_routes = {}
    for e in g.edges:
        if e in inst.h_edges:
            edge_routes[e] = tuple(routes[e])
        else:
            edge_routes[e] = tuple(points[e])
    for v in inst.h_vertices:
        assert vertex_xy[v] == vpos[v]
    return FullDrawing(vertex_xy, edge_routes)
