import itertools

import pytest
from hypothesis import given, strategies as st

from gverma import build_basic, build_block, classify_basic_systems, filtrations_from_kl
from gverma.block import (
    Poset,
    ext1_poset,
    gk_dimension,
    graded_decomposition,
    graded_inverse,
    inverse_defect,
    module_degrees,
    simple_degrees,
    socular_data,
    ungraded,
)


def test_classification_list():
    systems = classify_basic_systems()
    assert len(systems) == 42
    assert len({(str(s.cartan_type), s.i, s.k) for s in systems}) == 42
    non = {str(s) for s in systems if not s.semisimple}
    assert non == {"(A1,1,1)", "(B3,2,2)", "(C3,2,2)", "(E7,4,4)", "(E8,4,5)", "(E8,5,4)", "(E8,4,4)"}


def test_block_weights_are_distinct_and_in_the_orbit():
    b = build_basic("B3", 2, 2)
    assert len(set(b.labels)) == b.size
    for y, mu in zip(b.quotient, b.weights):
        assert b.index_of(mu) == b.quotient.index(y) + 1


def test_bad_indices_are_rejected():
    with pytest.raises(ValueError):
        build_basic("A2", 3, 1)
    with pytest.raises(ValueError):
        build_block("A2", [4], [])


def test_lengths_are_nonincreasing():
    for bs in classify_basic_systems():
        if bs.cartan_type.rank <= 4:
            L = build_basic(str(bs.cartan_type), bs.i, bs.k).lengths
            assert list(L) == sorted(L, reverse=True)


@pytest.mark.parametrize("name,I,J", [("A3", [1], [3]), ("B3", [2], []), ("C3", [2], [2]), ("G2", [], [])])
def test_graded_matrices_are_mutually_inverse(name, I, J):
    b = build_block(name, I, J)
    D, Dinv = graded_decomposition(b), graded_inverse(b)
    assert D.is_unitriangular()
    assert inverse_defect(D, Dinv) == []


def test_bernstein_degrees_of_a_verma_block():
    b = build_block("A2", [], [])
    # ordinary Verma modules all have degree 1 and only the antidominant simple is socular
    assert module_degrees(b) == [1] * 6
    assert gk_dimension(b) == 3
    assert simple_degrees(b, ungraded(b)) == [0, 0, 0, 0, 0, 1]
    assert socular_data(b, ungraded(b)) == [(6, 1)]


def test_two_module_socular_data():
    b = build_basic("B3", 2, 2)
    assert socular_data(b, ungraded(b)) == [(2, 1)]


def test_hasse_edges_drop_implied_edges():
    p = Poset((3, 2, 1, 0), [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4)])
    assert p.hasse_edges() == [(1, 2), (2, 3), (3, 4)]


@given(st.sets(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(lambda e: e[0] < e[1])))
def test_hasse_edges_generate_the_same_order(edges):
    p = Poset((6, 5, 4, 3, 2, 1), sorted(edges))
    cover = p.hasse_edges()
    assert set(cover) <= set(edges)

    def closure(es):
        reach = {(a, b) for a, b in es}
        for k, a, b in itertools.product(range(1, 7), repeat=3):
            if (a, k) in reach and (k, b) in reach:
                reach.add((a, b))
        return reach

    assert closure(cover) == closure(edges)
    # nothing in the cover is implied by the rest
    for e in cover:
        assert e not in closure([f for f in cover if f != e])


def test_dot_output_is_deterministic():
    b = build_basic("B3", 2, 2)
    poset = ext1_poset(b, filtrations_from_kl(b))
    text = poset.to_dot()
    assert text == poset.to_dot()
    assert "1 -- 2;" in text
    assert text.startswith("graph ext1 {")
    assert poset.to_json()["covering"] == [{"from": 1, "to": 2}]


def test_describe():
    b = build_basic("E7", 4, 4)
    assert b.describe() == {"type": "E", "rank": 7, "I": [1, 2, 3, 5, 6, 7], "J": [1, 2, 3, 5, 6, 7]}
    assert b.size == 6
