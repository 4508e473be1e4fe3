from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from upex import PreconditionError, make_instance, point, validate_instance
from upex.core import DirectedGraph
from upex.oracle import brute_force_decide
from upex.transforms import (
    OrderedLevelGraph,
    eliminate_partial_edges,
    make_distinct_y,
    olp_to_upe,
    strip_heights,
    sweep_lines,
    upe_to_olp,
)

from families import random_partial_instance


# ---------------------------------------------------------------------------
# removing fixed edges
# ---------------------------------------------------------------------------

def test_point_set_instance_is_unchanged():
    inst = make_instance(3, [(0, 1), (1, 2)], {0: (0, 0), 2: (1, 4)})
    out, emap = eliminate_partial_edges(inst)
    assert out == inst and emap.is_identity()


def test_bend_becomes_fixed_vertex():
    inst = make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 2)}, {(0, 1): [(0, 0), (1, 1), (0, 2)]})
    out, emap = eliminate_partial_edges(inst)
    assert out.n == 3 and not out.h_edges
    assert set(out.graph.edges) == {(0, 2), (2, 1)}
    assert out.pos(2) == point(1, 1)
    assert emap.of_vertex(2)[0] == "edge" and emap.of_vertex(2)[1] == (0, 1)


def test_crossing_of_an_interesting_line_is_subdivided_once():
    inst = make_instance(3, [(0, 1)], {0: (0, 0), 1: (0, 3), 2: (5, Fraction(3, 2))},
                         {(0, 1): [(0, 0), (0, 3)]})
    out, _ = eliminate_partial_edges(inst)
    assert out.n == 4 and set(out.graph.edges) == {(0, 3), (3, 1)}
    assert out.pos(3) == point(0, Fraction(3, 2))


def test_sweep_fast_and_slow_agree():
    rng = random.Random(3)
    for _ in range(50):
        inst = random_partial_instance(rng, with_edges=True)
        assert sweep_lines(inst, fast=True)[1:] == sweep_lines(inst, fast=False)[1:]


# ---------------------------------------------------------------------------
# separating equal heights
# ---------------------------------------------------------------------------

def test_distinct_heights_edgeless_is_unchanged():
    inst = make_instance(3, [(0, 1)], {0: (0, 0), 1: (1, 1), 2: (2, 2)})
    out, emap = make_distinct_y(inst)
    assert out == inst and emap.is_identity()


def test_split_lengths_follow_rank_in_row():
    # the vertex at height 5 + 6/5 makes the strip height 3/5
    inst = make_instance(3, [], {0: (1, 5), 1: (2, 5), 2: (0, Fraction(31, 5))})
    assert strip_heights([Fraction(5), Fraction(31, 5)])[0] == Fraction(3, 5)
    out, _ = make_distinct_y(inst)
    assert out.pos(0) == point(1, 5 - Fraction(1, 20))
    assert out.pos(3) == point(1, 5 + Fraction(1, 20))
    assert out.pos(1) == point(2, 5 - Fraction(1, 10))
    assert out.pos(4) == point(2, 5 + Fraction(1, 10))
    assert out.h_edges == {(0, 3), (1, 4)}


def test_full_pinning_is_preserved():
    inst = make_instance(3, [(0, 2), (1, 2)], {0: (0, 0), 1: (1, 0), 2: (0, 1)})
    out, _ = make_distinct_y(inst)
    assert out.h_vertices == frozenset(range(out.n))
    ys = [out.pos(v).y for v in range(out.n)]
    assert len(set(ys)) == len(ys)


@settings(max_examples=40)
@given(st.integers(min_value=0, max_value=100_000), st.booleans())
def test_transforms_preserve_the_answer(seed, with_edges):
    inst = random_partial_instance(random.Random(seed), with_edges)
    expected = brute_force_decide(inst, draw=False).answer
    for transform in (eliminate_partial_edges, make_distinct_y):
        out, emap = transform(inst)
        assert validate_instance(out).ok
        assert emap.original_n == inst.n
        assert brute_force_decide(out, cap=64, draw=False).answer == expected
        assert out.size() <= 8 * inst.size()


@given(st.integers(min_value=0, max_value=100_000))
def test_elimination_leaves_a_point_set(seed):
    inst = random_partial_instance(random.Random(seed), with_edges=True)
    out, emap = eliminate_partial_edges(inst)
    assert not out.h_edges
    for v in range(inst.n, out.n):
        assert emap.of_vertex(v)[0] == "edge"
    for e in out.graph.edges:
        origin = emap.of_edge(e)
        assert origin[1] in inst.graph.edge_set


# ---------------------------------------------------------------------------
# ordered level graphs
# ---------------------------------------------------------------------------

def test_levels_are_height_ranks():
    olg = upe_to_olp(make_instance(3, [(0, 2)], {0: (3, Fraction(1, 2)), 1: (1, Fraction(1, 2)), 2: (0, 2)}))
    assert olg.level == (1, 1, 2)
    assert olg.xi[1] == (1, 0)


def test_single_vertex_level_graph():
    olg = upe_to_olp(make_instance(1, [], {0: (7, 7)}))
    assert olg.level == (1,) and olg.xi == {1: (0,)}


def test_olp_to_upe_places_vertices_at_rank_and_level():
    olg = OrderedLevelGraph(DirectedGraph(2, ((0, 1),)), (1, 2), {1: (0,), 2: (1,)})
    inst = olp_to_upe(olg)
    assert inst.pos(0) == point(1, 1) and inst.pos(1) == point(1, 2)
    assert inst.pos(1).y == 2


def test_empty_level_graph():
    inst = olp_to_upe(OrderedLevelGraph(DirectedGraph(0, ()), (), {}))
    assert inst.n == 0 and not inst.h_vertices


def test_upe_to_olp_requires_full_pinning():
    with pytest.raises(PreconditionError):
        upe_to_olp(make_instance(2, [(0, 1)], {0: (0, 0)}))


@given(st.integers(min_value=0, max_value=100_000))
def test_level_round_trip_is_identity_on_level_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    pos = {v: (rng.randint(0, 9), rng.randint(0, 3)) for v in range(n)}
    if len(set(pos.values())) < n:
        return
    edges = [(u, v) for u in range(n) for v in range(n) if pos[u][1] < pos[v][1] and rng.random() < 0.3]
    olg = upe_to_olp(make_instance(n, edges, pos))
    assert upe_to_olp(olp_to_upe(olg)) == olg
