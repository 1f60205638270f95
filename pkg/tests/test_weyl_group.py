import itertools

import pytest
from hypothesis import given, strategies as st

from gverma import weyl_group
from gverma.weyl_group import WeylGroupError, format_word, parse_word

TYPES = ["A2", "A3", "B3", "C3", "G2", "D4", "F4"]


def words(rank, max_len=24):
    return st.lists(st.integers(1, rank), max_size=max_len)


@pytest.mark.parametrize("name,order", [("A2", 6), ("A3", 24), ("B3", 48), ("G2", 12), ("D4", 192)])
def test_element_counts(name, order):
    elems = weyl_group(name).elements()
    assert len(elems) == order
    assert len(set(elems)) == order


def test_word_text_round_trip():
    assert parse_word("1,2,1") == (1, 2, 1)
    assert parse_word("e") == ()
    assert parse_word(format_word((3, 1))) == (3, 1)


def test_longest_element():
    W = weyl_group("B3")
    assert W.w0.length == W.N == 9
    assert W.w0 * W.w0 == W.identity
    assert W.longest_element([1, 2]).length == 3


@pytest.mark.parametrize("name", TYPES)
@given(data=st.data())
def test_group_axioms(name, data):
    W = weyl_group(name)
    a, b, c = (W.from_word(data.draw(words(W.rank))) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == W.identity
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert a.length == len(a.word)
    assert W.from_word(a.word) == a


@pytest.mark.parametrize("name", TYPES)
@given(data=st.data())
def test_length_changes_by_one(name, data):
    W = weyl_group(name)
    w = W.from_word(data.draw(words(W.rank)))
    for s in range(1, W.rank + 1):
        ws = W.right_mul(w, s)
        assert abs(ws.length - w.length) == 1
        assert (ws.length < w.length) == (s in w.right_descents())
        sw = W.left_mul(s, w)
        assert (sw.length < w.length) == (s in w.left_descents())


@pytest.mark.parametrize("name", ["A3", "B3", "G2"])
@given(data=st.data())
def test_subwords_are_bruhat_below(name, data):
    W = weyl_group(name)
    y = W.from_word(data.draw(words(W.rank)))
    mask = data.draw(st.lists(st.booleans(), min_size=len(y.word), max_size=len(y.word)))
    x = W.from_word(s for s, keep in zip(y.word, mask) if keep)
    assert W.bruhat_leq(x, y)
    assert W.bruhat_leq(W.identity, y)
    assert W.bruhat_leq(y, W.w0)


def test_bruhat_order_matches_subword_criterion_in_a3():
    W = weyl_group("A3")
    elems = W.elements()
    below = {}
    for y in elems:
        subs = set()
        for mask in itertools.product([0, 1], repeat=y.length):
            subs.add(W.from_word(s for s, k in zip(y.word, mask) if k))
        below[y] = subs
    for x in elems:
        for y in elems:
            assert W.bruhat_leq(x, y) == (x in below[y])


@pytest.mark.parametrize("name,I,J", [("A3", [1], [3]), ("B3", [2], []), ("G2", [1], [2]), ("D4", [2], [1, 3])])
def test_double_quotient_enumeration(name, I, J):
    W = weyl_group(name)
    Q = W.enumerate_quotient(I, J)
    brute = [w for w in W.elements() if W.in_double_quotient(w, I, J)]
    assert set(Q) == set(brute) and len(Q) == len(brute)
    assert list(Q.lengths) == sorted(Q.lengths, reverse=True)
    for k, w in enumerate(Q):
        assert Q.index(w) == k


def test_coset_space_representatives():
    W = weyl_group("B3")
    # nodes 1 and 2 of B3 span a subsystem of type A2
    space = W.coset_space([1, 2])
    assert len(space) == 48 // 6
    for i in range(len(space)):
        lo, hi = space.min_rep(i), space.max_rep(i)
        assert space.coset_of(lo) == space.coset_of(hi) == i
        assert hi.length - lo.length == 3


def test_bad_generator_is_rejected():
    W = weyl_group("A2")
    with pytest.raises((WeylGroupError, ValueError)):
        W.from_word([3])
