from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gverma.root_system import CartanType, RootDatum, RootSystemError, build, weyl_group_order

POSITIVE_ROOTS = {"A1": 1, "A3": 6, "B3": 9, "C3": 9, "D4": 12, "G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}
ORDERS = {"A1": 2, "A3": 24, "B3": 48, "C3": 48, "D4": 192, "G2": 12, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}


@pytest.mark.parametrize("name", sorted(POSITIVE_ROOTS))
def test_root_counts(name):
    R = build(name)
    assert len(R.positive_roots) == POSITIVE_ROOTS[name]


@pytest.mark.parametrize("name", sorted(ORDERS))
def test_group_orders(name):
    R = build(name)
    assert weyl_group_order(R, R.index_set()) == ORDERS[name]


def test_parabolic_order():
    R = build("E8")
    # the Levi of node 4 in E8 is A1 x A2 x A4
    assert weyl_group_order(R, R.index_set() - {4}) == 2 * 6 * 120


@pytest.mark.parametrize("text", ["X3", "A0", "E5", "D2", "B1", "G3", "", "A"])
def test_bad_types_are_rejected(text):
    with pytest.raises((RootSystemError, ValueError)):
        CartanType.parse(text)


def test_fundamental_weights_are_dual_to_simple_coroots():
    R = build("B2")
    assert R.int_labels(R.fundamental_weight(1)) == (1, 0)
    assert R.int_labels(R.fundamental_weight(2)) == (0, 1)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "F4"])
def test_rho_has_all_labels_one(name):
    R = build(name)
    assert set(R.int_labels(R.rho)) == {1}


@pytest.mark.parametrize("name", ["B3", "G2", "F4"])
@given(data=st.data())
def test_reflection_is_an_involution_preserving_pairings(name, data):
    R = build(name)
    n = R.cartan_type.rank
    lam = [Fraction(data.draw(st.integers(-4, 4))) for _ in range(n)]
    lam = R.from_labels([int(x) for x in lam])
    beta = data.draw(st.sampled_from(R.positive_roots))
    mu = R.reflect(lam, beta)
    assert tuple(R.reflect(mu, beta)) == tuple(lam)
    assert R.pairing(mu, beta) == -R.pairing(lam, beta)


def test_weyl_dimension_of_adjoint():
    R = build("A2")
    assert R.weyl_dim(R.from_labels([2, 2]), R.index_set()) == 8
    assert R.weyl_dim(R.from_labels([1, 1]), R.index_set()) == 1


def test_root_datum_type():
    assert isinstance(build("A2"), RootDatum)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "D4", "F4"])
def test_parabolic_orders_match_enumeration(name):
    import itertools

    from gverma import weyl_group

    W = weyl_group(name)
    R = W.root_datum
    for r in range(W.rank + 1):
        for I in itertools.combinations(range(1, W.rank + 1), r):
            assert weyl_group_order(R, I) == len(W.parabolic_elements(I))
