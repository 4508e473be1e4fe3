from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from upex import (
    FullDrawing,
    InvalidInstance,
    extract_embedding,
    make_instance,
    point,
    validate_instance,
    verify_drawing,
)
from upex.core import DirectedGraph, UpwardEmbedding, require_valid
from upex.generators import random_st_instance
from upex.stgraph import build_witness_drawing_st

from conftest import DIAMOND_EDGES, diamond_embedding


def _drawing(positions, edges, bends=None):
    bends = bends or {}
    pts = {v: point(*p) for v, p in positions.items()}
    routes = {e: (pts[e[0]], *(point(*b) for b in bends.get(e, ())), pts[e[1]]) for e in edges}
    return FullDrawing(pts, routes)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_single_edge_is_valid_with_size_three():
    report = validate_instance(make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 1)}))
    assert report.ok and report.size == 3


def test_downward_bend_is_rejected():
    inst = make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 1)}, {(0, 1): [(0, 0), (0, -1), (0, 1)]})
    report = validate_instance(inst)
    assert not report.ok and report.problem == "non-y-monotone polyline"


def test_fixed_vertex_outside_graph_is_rejected():
    report = validate_instance(make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 1), 2: (3, 3)}))
    assert not report.ok and report.problem == "H vertex not in G"


def test_coincident_vertices_are_rejected():
    inst = make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 0)})
    assert not validate_instance(inst).ok
    with pytest.raises(InvalidInstance):
        require_valid(inst)


def test_parallel_edges_are_rejected():
    assert DirectedGraph(2, ((0, 1), (0, 1))).structural_problem()[0] == "parallel edge"


def test_crossing_fixed_edges_are_rejected():
    pos = {0: (0, 0), 1: (1, 1), 2: (1, 0), 3: (0, 1)}
    routes = {(0, 1): [pos[0], pos[1]], (2, 3): [pos[2], pos[3]]}
    assert not validate_instance(make_instance(4, [(0, 1), (2, 3)], pos, routes)).ok


# ---------------------------------------------------------------------------
# drawing verification
# ---------------------------------------------------------------------------

def test_straight_diamond_verifies():
    inst = make_instance(4, DIAMOND_EDGES)
    d = _drawing({0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, 2)}, DIAMOND_EDGES)
    assert verify_drawing(inst, d)


def test_diamond_with_low_sink_fails():
    inst = make_instance(4, DIAMOND_EDGES)
    d = _drawing({0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, -1)}, DIAMOND_EDGES)
    assert not verify_drawing(inst, d)


def test_crossing_edges_fail():
    edges = [(0, 1), (2, 3)]
    d = _drawing({0: (0, 0), 1: (1, 1), 2: (1, 0), 3: (0, 1)}, edges)
    assert not verify_drawing(make_instance(4, edges), d)


def test_drawing_must_keep_fixed_part():
    inst = make_instance(4, DIAMOND_EDGES, {1: (-1, 1)})
    moved = _drawing({0: (0, 0), 1: (-2, 1), 2: (1, 1), 3: (0, 2)}, DIAMOND_EDGES)
    assert not verify_drawing(inst, moved)


def test_embedding_is_checked():
    d = _drawing({0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, 2)}, DIAMOND_EDGES)
    assert verify_drawing(make_instance(4, DIAMOND_EDGES, embedding=diamond_embedding(True)), d)
    assert not verify_drawing(make_instance(4, DIAMOND_EDGES, embedding=diamond_embedding(False)), d)


def test_bent_route_verifies():
    inst = make_instance(2, [(0, 1)])
    d = _drawing({0: (0, 0), 1: (0, 2)}, [(0, 1)], {(0, 1): [(1, 1)]})
    assert verify_drawing(inst, d)


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def test_extract_embedding_reads_left_to_right():
    d = _drawing({0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, 2)}, DIAMOND_EDGES)
    assert extract_embedding(DirectedGraph(4, tuple(DIAMOND_EDGES)), d) == diamond_embedding(True)


def test_embedding_problem_reports_mismatch():
    g = DirectedGraph(4, tuple(DIAMOND_EDGES))
    bad = UpwardEmbedding.from_lists(4, {0: (1,)}, {})
    assert bad.problem(g) is not None
    assert diamond_embedding().problem(g) is None


@given(st.integers(min_value=2, max_value=14), st.integers(min_value=0, max_value=10_000))
def test_witness_drawings_realize_their_embedding(n, seed):
    inst = random_st_instance(n, seed, pin_fraction=0.4)
    drawing = build_witness_drawing_st(inst)
    assert verify_drawing(inst, drawing)
    assert extract_embedding(inst.graph, drawing) == inst.embedding


@given(st.integers(min_value=0, max_value=10_000))
def test_instance_size_counts_segments(seed):
    rng = random.Random(seed)
    bends = rng.randint(0, 3)
    route = [(0, 0)] + [(rng.randint(-3, 3), k + 1) for k in range(bends)] + [(0, bends + 1)]
    inst = make_instance(2, [(0, 1)], {0: route[0], 1: route[-1]}, {(0, 1): route})
    assert inst.size() == 2 + 1 + bends + 1
