"""JSON serialization of instances, drawings, level graphs and certificates.

Rationals are stored as integer numerator/denominator pairs so files are
bit-exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import DirectedGraph, Edge, FullDrawing, PartialDrawing, UpeInstance, UpwardEmbedding
from .geometry import Point
from .oracle import Certificate
from .transforms import ElementMap, OrderedLevelGraph


def _pt_out(p: Point) -> list[int]:
    return [p.x.numerator, p.x.denominator, p.y.numerator, p.y.denominator]


def _pt_in(raw) -> Point:
    xn, xd, yn, yd = raw
    return Point(Fraction(int(xn), int(xd)), Fraction(int(yn), int(yd)))


def _edge_key(e: Edge) -> str:
    return f"{e[0]}-{e[1]}"


def _edge_from_key(key: str) -> Edge:
    tail, head = key.split("-")
    return int(tail), int(head)


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

def embedding_to_json(emb: UpwardEmbedding) -> dict:
    return {
        "succ": {str(v): list(s) for v, s in enumerate(emb.succ)},
        "pred": {str(v): list(p) for v, p in enumerate(emb.pred)},
    }


def embedding_from_json(n: int, raw: dict) -> UpwardEmbedding:
    succ = {int(k): [int(x) for x in v] for k, v in raw.get("succ", {}).items()}
    pred = {int(k): [int(x) for x in v] for k, v in raw.get("pred", {}).items()}
    return UpwardEmbedding.from_lists(n, succ, pred)


def instance_to_json(inst: UpeInstance) -> dict:
    data: dict[str, Any] = {
        "n": inst.n,
        "edges": [list(e) for e in inst.graph.edges],
        "H_vertices": sorted(inst.h_vertices),
        "H_edges": [list(e) for e in sorted(inst.h_edges)],
        "positions": {str(v): _pt_out(p) for v, p in sorted(inst.drawing.vertex_pos.items())},
        "routes": {_edge_key(e): [_pt_out(p) for p in r]
                   for e, r in sorted(inst.drawing.edge_routes.items())},
    }
    if inst.embedding is not None:
        data["embedding"] = embedding_to_json(inst.embedding)
    return data


def instance_from_json(data: dict) -> UpeInstance:
    n = int(data["n"])
    graph = DirectedGraph(n, tuple((int(u), int(v)) for u, v in data.get("edges", [])))
    positions = {int(k): _pt_in(v) for k, v in data.get("positions", {}).items()}
    routes = {_edge_from_key(k): tuple(_pt_in(p) for p in v) for k, v in data.get("routes", {}).items()}
    h_vertices = frozenset(int(v) for v in data.get("H_vertices", positions.keys()))
    h_edges = frozenset((int(u), int(v)) for u, v in data.get("H_edges", routes.keys()))
    embedding = embedding_from_json(n, data["embedding"]) if data.get("embedding") else None
    return UpeInstance(graph, h_vertices, h_edges, PartialDrawing(positions, routes), embedding)


def drawing_to_json(d: PartialDrawing) -> dict:
    return {
        "positions": {str(v): _pt_out(p) for v, p in sorted(d.vertex_pos.items())},
        "routes": {_edge_key(e): [_pt_out(p) for p in r] for e, r in sorted(d.edge_routes.items())},
    }


def drawing_from_json(data: dict) -> FullDrawing:
    return FullDrawing(
        {int(k): _pt_in(v) for k, v in data["positions"].items()},
        {_edge_from_key(k): tuple(_pt_in(p) for p in v) for k, v in data["routes"].items()},
    )


def element_map_to_json(m: ElementMap) -> dict:
    def origin(o: tuple) -> dict:
        if o[0] == "vertex":
            return {"vertex": o[1]}
        return {"edge": list(o[1]), "segment": o[2]}

    return {
        "original_n": m.original_n,
        "vertices": {str(v): origin(o) for v, o in sorted(m.vertex_origin.items())},
        "edges": {_edge_key(e): origin(o) for e, o in sorted(m.edge_origin.items())},
    }


# ---------------------------------------------------------------------------
# level graphs and certificates
# ---------------------------------------------------------------------------

def olg_to_json(olg: OrderedLevelGraph) -> dict:
    return {
        "n": olg.graph.n,
        "edges": [list(e) for e in olg.graph.edges],
        "level": {str(v): lv for v, lv in enumerate(olg.level)},
        "xi": {str(lv): list(order) for lv, order in sorted(olg.xi.items())},
    }


def olg_from_json(data: dict) -> OrderedLevelGraph:
    n = int(data["n"])
    graph = DirectedGraph(n, tuple((int(u), int(v)) for u, v in data.get("edges", [])))
    level = tuple(int(data["level"][str(v)]) for v in range(n))
    if "xi" in data:
        xi = {int(lv): tuple(int(v) for v in order) for lv, order in data["xi"].items()}
    else:
        grouped: dict[int, list[int]] = {}
        for v, lv in enumerate(level):
            grouped.setdefault(lv, []).append(v)
        xi = {lv: tuple(vs) for lv, vs in grouped.items()}
    return OrderedLevelGraph(graph, level, xi)


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "y_assignment": {str(v): lab for v, lab in sorted(cert.y_assignment.items())},
        "sigma": [[list(item) if isinstance(item, tuple) else item for item in line]
                  for line in cert.sigma],
    }


def certificate_from_json(data: dict) -> Certificate:
    labels = {int(k): int(v) for k, v in data["y_assignment"].items()}
    sigma = tuple(tuple((int(it[0]), int(it[1])) if isinstance(it, list) else int(it) for it in line)
                  for line in data["sigma"])
    return Certificate(labels, sigma)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(data: Any, path: str | Path | None = None) -> str:
    text = json.dumps(data, sort_keys=True, separators=(",", ":"))
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def load_instance(path: str | Path) -> UpeInstance:
    return instance_from_json(load_json(path))


def save_instance(inst: UpeInstance, path: str | Path) -> None:
    dump_json(instance_to_json(inst), path)
