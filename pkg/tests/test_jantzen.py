import pytest

from gverma import build_basic, build_block, jantzen_coefficients
from gverma.block import ungraded
from gverma.jantzen import JantzenError, psi_plus, sum_formula_rhs, theta_normalize

BLOCKS = [
    ("A2", [1], []),
    ("A3", [1], [3]),
    ("A3", [2], []),
    ("B3", [1, 3], [2]),
    ("G2", [1], []),
]
BASIC = [("A1", 1, 1), ("B3", 2, 2), ("C3", 2, 2), ("B2", 1, 2), ("G2", 2, 2), ("D4", 2, 2)]


def brute_force_table(b):
    """Sum over reflections done with explicit weight vectors and W_I elements."""
    R, W = b.root_datum, b.group
    WI = W.parabolic_elements(b.I)
    inside = {r.index for r in R.positive_roots_of(b.I)}
    table = {}
    for s, mu in enumerate(b.weights, start=1):
        for beta in R.positive_roots:
            if beta.index in inside or R.pairing(mu, beta) <= 0:
                continue
            nu = R.reflect(mu, beta)
            for w in WI:
                img = w.act(nu)
                labels = R.labels(img)
                if all(labels[i - 1] > 0 for i in b.I):
                    t = b.index_of(img)
                    table[(s, t)] = table.get((s, t), 0) + (-1) ** w.length
                    break
    return {k: v for k, v in table.items() if v}


@pytest.mark.parametrize("name,I,J", BLOCKS)
def test_table_matches_brute_force(name, I, J):
    b = build_block(name, I, J)
    assert jantzen_coefficients(b).coeffs == brute_force_table(b)


@pytest.mark.parametrize("name,i,k", BASIC)
def test_basic_tables_match_brute_force(name, i, k):
    b = build_basic(name, i, k)
    assert jantzen_coefficients(b).coeffs == brute_force_table(b)


def test_a2_worked_example():
    b = build_block("A2", [1], [])
    assert jantzen_coefficients(b).items() == [(1, 2, 1), (1, 3, -1), (2, 3, 1)]


def test_theta_of_a_singular_weight_vanishes():
    b = build_block("A2", [1], [])
    R = b.root_datum
    # labels (0, *) are singular for the Levi of node 1
    assert theta_normalize(R, R.from_labels([0, -1]), b.I).sign == 0


def test_theta_reflects_into_the_dominant_chamber():
    b = build_block("A2", [1], [])
    R = b.root_datum
    term = theta_normalize(R, R.from_labels([-1, 2]), b.I)
    assert term.sign == -1
    assert R.int_labels(term.target) == (1, 1)


def test_psi_plus_requires_an_i_dominant_weight():
    b = build_block("A2", [1], [])
    R = b.root_datum
    with pytest.raises(JantzenError):
        psi_plus(R, R.from_labels([-1, 0]), b.I)
    assert psi_plus(R, b.weights[0], b.I)


@pytest.mark.parametrize("name,i,k", BASIC)
def test_targets_are_lower_in_the_order(name, i, k):
    b = build_basic(name, i, k)
    for s, t, c in jantzen_coefficients(b).items():
        assert s < t and c != 0


@pytest.mark.parametrize("name,i,k", BASIC)
def test_rhs_is_nonnegative_and_misses_the_head(name, i, k):
    b = build_basic(name, i, k)
    dec = ungraded(b)
    table = jantzen_coefficients(b)
    for s in range(1, b.size + 1):
        rhs = sum_formula_rhs(b, s, table, dec)
        assert all(v >= 0 for v in rhs)
        assert rhs[s - 1] == 0
