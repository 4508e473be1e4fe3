from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from upex import validate_instance
from upex.generators import (
    bridge_graphs,
    random_cycle_instance,
    random_path_instance,
    random_st_graph,
    random_st_instance,
    sp_st_graphs,
    st_embeddings,
)
from upex.io import instance_from_json, instance_to_json
from upex.stgraph import as_st_graph, embedding_problem, st_poles


def test_small_family_is_duplicate_free_st_graphs():
    graphs = sp_st_graphs(6)
    assert len(graphs) > 50
    seen = []
    for g in graphs:
        assert st_poles(g) is not None
        nxg = nx.DiGraph(list(g.edges))
        assert not any(nx.is_isomorphic(nxg, other) for other in seen if len(other) == len(nxg))
        seen.append(nxg)


def test_family_contains_diamond_with_and_without_pole_edge():
    sizes = {(g.n, len(g.edges)) for g in sp_st_graphs(4)}
    assert (4, 4) in sizes and (4, 5) in sizes


def test_every_listed_embedding_is_valid():
    for g in sp_st_graphs(5) + bridge_graphs():
        embs = st_embeddings(g)
        assert embs
        st_graph = as_st_graph(g)
        assert all(embedding_problem(st_graph, e) is None for e in embs)


@settings(max_examples=40)
@given(st.integers(min_value=2, max_value=120), st.integers(min_value=0, max_value=10**6))
def test_random_st_graph_is_embedded(n, seed):
    graph, emb = random_st_graph(n, random.Random(seed))
    assert graph.n == n
    st_graph = as_st_graph(graph, emb)
    assert embedding_problem(st_graph, emb) is None
    # vertices are numbered in a topological order
    assert all(u < v for u, v in graph.edges)


@settings(max_examples=30)
@given(st.integers(min_value=2, max_value=60), st.integers(min_value=0, max_value=10**6),
       st.booleans(), st.booleans())
def test_generated_instances_are_valid(n, seed, embedded, adversarial):
    for make in (random_st_instance, random_path_instance):
        inst = make(n, seed, pin_fraction=0.7, embedded=embedded, adversarial=adversarial)
        assert validate_instance(inst).ok
        assert (inst.embedding is not None) == embedded
    if n >= 3:
        assert validate_instance(random_cycle_instance(n, seed, embedded=False)).ok


def test_generation_is_deterministic():
    a = instance_to_json(random_st_instance(30, 5, adversarial=True))
    b = instance_to_json(random_st_instance(30, 5, adversarial=True))
    assert a == b
    assert instance_from_json(a) == random_st_instance(30, 5, adversarial=True)


def test_fixed_edges_come_from_a_drawing():
    inst = random_st_instance(15, 2, pin_fraction=0.2, edge_fraction=0.5)
    assert inst.h_edges and validate_instance(inst).ok


def test_size_limits():
    with pytest.raises(ValueError):
        random_st_instance(1, 0)
    with pytest.raises(ValueError):
        random_path_instance(1, 0)
    with pytest.raises(ValueError):
        random_cycle_instance(2, 0)
