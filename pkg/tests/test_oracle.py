from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from upex import PreconditionError, make_instance, verify_drawing
from upex.io import certificate_from_json, certificate_to_json
from upex.oracle import (
    EMBEDDING_CHECK,
    Certificate,
    MalformedCertificate,
    brute_force_decide,
    check_certificate,
    find_certificate,
    materialize,
)

from conftest import DIAMOND_EDGES, diamond_embedding
from families import grid_pins, random_partial_instance, small_st_graphs


# ---------------------------------------------------------------------------
# certificate checks
# ---------------------------------------------------------------------------

def test_edge_inside_one_class_fails_check_one():
    inst = make_instance(2, [(0, 1)])
    result = check_certificate(inst, Certificate({0: 0, 1: 0}, ((0, 1),)))
    assert not result.ok and result.failed_check == 1


def test_edges_swapping_between_lines_fail_check_two():
    inst = make_instance(6, [(0, 4), (1, 5)])
    labels = {0: 0, 1: 0, 2: 1, 3: 2, 4: 3, 5: 3}
    sigma = ((0, 1), (2, (0, 4), (1, 5)), (3, (1, 5), (0, 4)), (4, 5))
    result = check_certificate(inst, Certificate(labels, sigma))
    assert not result.ok and result.failed_check == 2


def test_single_edge_certificate_passes():
    assert check_certificate(make_instance(2, [(0, 1)]), Certificate({0: 0, 1: 1}, ((0,), (1,)))).ok


def test_pinned_heights_are_checked():
    inst = make_instance(2, [(0, 1)], {0: (0, 1), 1: (0, 0)})
    result = check_certificate(inst, Certificate({0: 0, 1: 1}, ((0,), (1,))))
    assert not result.ok and result.failed_check == 3


def test_embedding_check_has_its_own_number():
    inst = make_instance(4, DIAMOND_EDGES, embedding=diamond_embedding(True))
    cert = Certificate({0: 0, 1: 1, 2: 1, 3: 2}, ((0,), (2, 1), (3,)))
    result = check_certificate(inst, cert)
    assert not result.ok and result.failed_check == EMBEDDING_CHECK


def test_malformed_certificate_is_rejected():
    with pytest.raises(MalformedCertificate):
        check_certificate(make_instance(2, [(0, 1)]), Certificate({0: 0}, ((0,),)))


def test_certificate_json_round_trip():
    cert = Certificate({0: 0, 1: 0, 2: 1, 3: 2, 4: 3, 5: 3},
                       ((0, 1), (2, (0, 4), (1, 5)), (3, (0, 4), (1, 5)), (4, 5)))
    assert certificate_from_json(certificate_to_json(cert)) == cert


# ---------------------------------------------------------------------------
# exhaustive decisions
# ---------------------------------------------------------------------------

def test_free_single_edge_is_yes():
    assert brute_force_decide(make_instance(2, [(0, 1)])).answer


def test_reversed_pins_are_no():
    assert not brute_force_decide(make_instance(2, [(0, 1)], {0: (0, 1), 1: (0, 0)})).answer


def test_diamond_answer_depends_on_the_embedding():
    pins = {1: (2, 5), 2: (1, 5)}
    fixed = make_instance(4, DIAMOND_EDGES, pins, embedding=diamond_embedding(True))
    free = make_instance(4, DIAMOND_EDGES, pins)
    assert not brute_force_decide(fixed).answer
    assert brute_force_decide(free).answer


def test_cap_is_enforced(monkeypatch):
    big = make_instance(9, [(k, k + 1) for k in range(8)])
    with pytest.raises(PreconditionError, match="cap"):
        brute_force_decide(big)
    monkeypatch.setenv("UPEX_ORACLE_CAP", "9")
    assert brute_force_decide(big).answer


def test_yes_witness_is_a_checked_certificate_and_drawing():
    inst = make_instance(4, DIAMOND_EDGES, {0: (0, 0), 3: (0, 3)}, embedding=diamond_embedding(False))
    decision = brute_force_decide(inst)
    cert, drawing = decision.witness
    assert check_certificate(inst, cert).ok
    assert verify_drawing(inst, drawing)


@settings(max_examples=40)
@given(st.integers(min_value=0, max_value=100_000))
def test_canonical_search_matches_full_search(seed):
    rng = random.Random(seed)
    graphs = small_st_graphs()
    g = graphs[rng.randrange(len(graphs))]
    if g.n > 5:
        return
    inst = make_instance(g.n, g.edges, grid_pins(g.n, rng, size=4))
    fast = find_certificate(inst, canonical=True)
    full = find_certificate(inst, canonical=False)
    assert (fast is None) == (full is None)


@settings(max_examples=40)
@given(st.integers(min_value=0, max_value=100_000), st.booleans())
def test_materialized_drawings_verify(seed, with_edges):
    inst = random_partial_instance(random.Random(seed), with_edges)
    cert = find_certificate(inst)
    if cert is not None:
        assert verify_drawing(inst, materialize(inst, cert))
