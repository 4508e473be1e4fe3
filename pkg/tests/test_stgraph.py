from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from upex import PreconditionError, make_instance, verify_drawing
from upex.core import DirectedGraph, UpwardEmbedding
from upex.generators import random_st_instance, st_embeddings
from upex.oracle import brute_force_decide
from upex.stgraph import (
    Relation,
    StGraph,
    as_st_graph,
    build_aux_graph,
    build_dominance_index,
    build_witness_drawing_st,
    check_condition1,
    check_condition2_fixed,
    embedding_problem,
    solve_st_fue,
    solve_st_upe,
    transitive_edges,
    transitive_reduction,
)

from conftest import DIAMOND_EDGES, diamond_embedding
from families import small_st_graphs
from oracles import all_embeddings, brute_relation, reachable


def _st(n, edges):
    return StGraph(DirectedGraph(n, tuple(edges)), 0, n - 1)


def _first_embedding(n, edges):
    return st_embeddings(DirectedGraph(n, tuple(edges)))[0]


# ---------------------------------------------------------------------------
# transitive reduction
# ---------------------------------------------------------------------------

def test_triangle_loses_its_long_edge():
    edges = [(0, 1), (1, 2), (0, 2)]
    assert transitive_edges(_st(3, edges), _first_embedding(3, edges)) == {(0, 2)}


def test_diamond_has_no_transitive_edge():
    assert transitive_edges(_st(4, DIAMOND_EDGES), diamond_embedding()) == set()


def test_two_shortcuts_are_removed():
    edges = [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)]
    for emb in st_embeddings(DirectedGraph(4, tuple(edges))):
        assert transitive_edges(_st(4, edges), emb) == {(0, 2), (1, 3)}


@pytest.mark.parametrize("graph", small_st_graphs()[::7])
def test_reduction_keeps_reachability(graph):
    st_graph = as_st_graph(graph)
    for emb in st_embeddings(graph)[:4]:
        reduced = transitive_reduction(st_graph, emb).graph
        for u in range(graph.n):
            assert reachable(reduced, u) == reachable(graph, u)


# ---------------------------------------------------------------------------
# dominance queries
# ---------------------------------------------------------------------------

def test_diamond_sides():
    idx = build_dominance_index(_st(4, DIAMOND_EDGES), diamond_embedding(True))
    assert idx.relation(1, 2) == Relation.RIGHT
    assert idx.relation(2, 1) == Relation.LEFT
    assert idx.is_left_of(1, 2) and not idx.is_left_of(2, 1)


def test_poles_relations():
    for graph in small_st_graphs()[:30]:
        st_graph = as_st_graph(graph)
        idx = build_dominance_index(st_graph, st_embeddings(graph)[0])
        assert idx.relation(st_graph.s, st_graph.t) == Relation.SUCCESSOR
        assert idx.relation(st_graph.t, st_graph.s) == Relation.PREDECESSOR


def test_path_successor():
    edges = [(0, 1), (1, 2)]
    idx = build_dominance_index(_st(3, edges), _first_embedding(3, edges))
    assert idx.relation(0, 1) == Relation.SUCCESSOR


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=10**6))
def test_relations_match_path_definitions(seed):
    rng = random.Random(seed)
    graphs = small_st_graphs()
    graph = graphs[rng.randrange(len(graphs))]
    embs = st_embeddings(graph)
    emb = embs[rng.randrange(len(embs))]
    st_graph = as_st_graph(graph, emb)
    idx = build_dominance_index(st_graph, emb)
    for u in range(graph.n):
        for v in range(graph.n):
            if u != v:
                expected = brute_relation(graph, emb, st_graph.s, u, v)
                assert idx.relation(u, v).value == expected
                # exactly one of the four relations holds
                assert expected != "None"


def test_embedding_validity_matches_realizability():
    for graph in small_st_graphs():
        if graph.n > 4:
            continue
        st_graph = as_st_graph(graph)
        for emb in all_embeddings(graph):
            valid = embedding_problem(st_graph, emb) is None
            free = make_instance(graph.n, graph.edges, embedding=emb)
            assert valid == brute_force_decide(free, draw=False).answer


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------

def test_condition1_examples():
    assert check_condition1(make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 1)}))
    assert not check_condition1(make_instance(2, [(0, 1)], {0: (0, 1), 1: (0, 0)}))
    inst = make_instance(3, [(0, 1), (1, 2)], {0: (0, 0), 2: (1, 0), 1: (0, 1)})
    assert not check_condition1(inst)


def test_aux_graph_has_connectors_between_groups():
    inst = make_instance(3, [(0, 1), (1, 2)], {0: (0, 0), 1: (0, 1), 2: (0, 2)})
    aux = build_aux_graph(inst)
    assert len(aux.connectors) == 2
    assert aux.graph.topological_order() is not None


def test_condition2_examples():
    st_graph = _st(4, DIAMOND_EDGES)
    emb = diamond_embedding(True)
    idx = build_dominance_index(st_graph, emb)
    ok = make_instance(4, DIAMOND_EDGES, {1: (1, 5), 2: (2, 5)}, embedding=emb)
    bad = make_instance(4, DIAMOND_EDGES, {1: (2, 5), 2: (1, 5)}, embedding=emb)
    distinct = make_instance(4, DIAMOND_EDGES, {1: (2, 5), 2: (1, 6)}, embedding=emb)
    assert check_condition2_fixed(ok, idx)
    assert not check_condition2_fixed(bad, idx)
    assert check_condition2_fixed(distinct, idx)


def test_conditions_refuse_fixed_edges():
    inst = make_instance(2, [(0, 1)], {0: (0, 0), 1: (0, 1)}, {(0, 1): [(0, 0), (0, 1)]})
    with pytest.raises(PreconditionError):
        check_condition1(inst)


# ---------------------------------------------------------------------------
# fixed embedding
# ---------------------------------------------------------------------------

def test_fixed_embedding_examples():
    edge = make_instance(2, [(0, 1)], embedding=_first_embedding(2, [(0, 1)]))
    assert solve_st_fue(edge).answer
    down = make_instance(2, [(0, 1)], {0: (0, 1), 1: (0, 0)}, embedding=_first_embedding(2, [(0, 1)]))
    assert solve_st_fue(down).witness == {"condition": 1}
    bad = make_instance(4, DIAMOND_EDGES, {1: (2, 5), 2: (1, 5)}, embedding=diamond_embedding(True))
    result = solve_st_fue(bad)
    assert not result.answer and result.witness["condition"] == 2


def test_fixed_embedding_needs_an_embedding():
    with pytest.raises(PreconditionError):
        solve_st_fue(make_instance(2, [(0, 1)]))


def test_non_st_graph_is_refused():
    inst = make_instance(3, [(0, 2), (1, 2)], embedding=UpwardEmbedding.from_lists(
        3, {0: (2,), 1: (2,)}, {2: (0, 1)}))
    with pytest.raises(PreconditionError):
        solve_st_fue(inst)


@settings(max_examples=30)
@given(st.integers(min_value=2, max_value=200), st.integers(min_value=0, max_value=10**6),
       st.floats(min_value=0.0, max_value=1.0))
def test_generated_instances_are_yes(n, seed, fraction):
    inst = random_st_instance(n, seed, pin_fraction=fraction)
    assert solve_st_fue(inst).answer
    assert solve_st_upe(inst.with_embedding(None)).answer


# ---------------------------------------------------------------------------
# free embedding
# ---------------------------------------------------------------------------

def test_diamond_can_swap_its_branches():
    inst = make_instance(4, DIAMOND_EDGES, {1: (2, 5), 2: (1, 5)})
    result = solve_st_upe(inst)
    assert result.answer
    assert result.witness["embedding"].succ[0] == (2, 1)


def test_crossed_parallel_paths_are_no():
    edges = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
    inst = make_instance(6, edges, {1: (1, 3), 3: (2, 3), 4: (1, 4), 2: (2, 4)})
    result = solve_st_upe(inst)
    assert not result.answer and result.witness["condition"] == 2
    assert not brute_force_decide(inst, draw=False).answer


def test_path_with_consistent_pin_is_yes():
    assert solve_st_upe(make_instance(3, [(0, 1), (1, 2)], {0: (0, 0), 1: (0, 1), 2: (0, 2)})).answer


def test_free_embedding_handles_fixed_edges():
    for seed in range(20):
        inst = random_st_instance(12, seed, pin_fraction=0.3, edge_fraction=0.3)
        assert solve_st_upe(inst.with_embedding(None)).answer
        assert solve_st_fue(inst).answer


@settings(max_examples=40)
@given(st.integers(min_value=0, max_value=10**6))
def test_emitted_embedding_is_accepted(seed):
    rng = random.Random(seed)
    graphs = small_st_graphs()
    graph = graphs[rng.randrange(len(graphs))]
    k = rng.randint(0, graph.n)
    chosen = rng.sample(range(graph.n), k)
    cells = rng.sample([(x, y) for x in range(4) for y in range(3)], k)
    inst = make_instance(graph.n, graph.edges, dict(zip(chosen, cells)))
    result = solve_st_upe(inst)
    assert result.answer == brute_force_decide(inst, draw=False).answer
    if result.answer:
        assert solve_st_fue(inst.with_embedding(result.witness["embedding"])).answer


# ---------------------------------------------------------------------------
# witness drawings
# ---------------------------------------------------------------------------

def test_pinned_diamond_witness():
    inst = make_instance(4, DIAMOND_EDGES, {0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, 2)},
                         embedding=diamond_embedding(True))
    assert verify_drawing(inst, build_witness_drawing_st(inst))


def test_single_fixed_edge_witness():
    inst = make_instance(2, [(0, 1)], {0: (0, 0), 1: (1, 3)}, {(0, 1): [(0, 0), (2, 1), (1, 3)]},
                         embedding=_first_embedding(2, [(0, 1)]))
    drawing = build_witness_drawing_st(inst)
    assert drawing.edge_routes[(0, 1)] == inst.drawing.edge_routes[(0, 1)]
    assert verify_drawing(inst, drawing)


def test_no_instance_has_no_witness():
    bad = make_instance(4, DIAMOND_EDGES, {1: (2, 5), 2: (1, 5)}, embedding=diamond_embedding(True))
    with pytest.raises(PreconditionError):
        build_witness_drawing_st(bad)
