import pytest
from hypothesis import given, settings, strategies as st
from math import lcm

from ocmc.periodic import UltimatelyPeriodicSet as UPS, complement, equal, intersect, member, normalize, union

evens = UPS(0, 2, (), (True, False))
odds = UPS(0, 2, (), (False, True))


def test_membership_examples():
    assert member(evens, 10 ** 6)
    s = UPS(3, 2, (False, True, False), (False, True))
    assert member(s, 1) and not member(s, 2) and member(s, 4)
    assert not any(member(UPS.empty(), n) for n in (0, 1, 99, 2 ** 70))
    assert 2 ** 80 in UPS.full()


def test_operation_examples():
    assert equal(complement(evens), odds)
    assert member(complement(evens), 7)
    assert equal(union(evens, odds), UPS.full())
    six = intersect(UPS.periodic(2, [0]), UPS.periodic(3, [0]))
    assert six.period == 6
    assert all(member(six, n) == (n % 6 == 0) for n in range(101))


def test_normalize_and_equal_examples():
    assert equal(evens, UPS(4, 4, (True, False, True, False), (True, False, True, False)))
    assert normalize(UPS(0, 4, (), (True, False, True, False))) == UPS(0, 2, (), (True, False))
    assert normalize(UPS(5, 3, (True,) * 5, (True,) * 3)) == UPS.full()
    # prefix entry that differs from the periodic continuation stays
    assert normalize(UPS(2, 1, (False, True), (True,))) == UPS(1, 1, (False,), (True,))


def test_invalid_shapes():
    with pytest.raises(ValueError):
        UPS(2, 1, (True,), (True,))
    with pytest.raises(ValueError):
        UPS(0, 0, (), ())


def test_json_round_trip():
    s = UPS(3, 2, (False, True, False), (False, True))
    assert s.to_json() == {"threshold": 3, "period": 2, "prefix": [0, 1, 0], "residues": [0, 1]}
    assert UPS.from_json(s.to_json()) == s


@st.composite
def sets(draw):
    t = draw(st.integers(0, 7))
    k = draw(st.integers(1, 7))
    return UPS(t, k, tuple(draw(st.lists(st.booleans(), min_size=t, max_size=t))),
               tuple(draw(st.lists(st.booleans(), min_size=k, max_size=k))))


def _window(*ss):
    return range(max(s.threshold for s in ss) + 3 * lcm(*(s.period for s in ss)) + 1)


@settings(max_examples=300)
@given(sets())
def test_normalize_preserves_membership_and_is_canonical(s):
    n = normalize(s)
    assert equal(s, n)
    assert all(member(s, x) == member(n, x) for x in _window(s))
    assert normalize(n) == n
    assert n.period <= s.period and s.period % n.period == 0


@settings(max_examples=300)
@given(sets(), sets())
def test_equal_iff_same_normal_form(a, b):
    assert equal(a, b) == (normalize(a) == normalize(b))
    assert equal(a, b) == all(member(a, x) == member(b, x) for x in _window(a, b))


@settings(max_examples=200)
@given(sets(), sets(), sets())
def test_equal_is_an_equivalence(a, b, c):
    assert equal(a, a)
    assert equal(a, b) == equal(b, a)
    if equal(a, b) and equal(b, c):
        assert equal(a, c)


@settings(max_examples=300)
@given(sets(), sets())
def test_operations_pointwise(a, b):
    u, i, na = union(a, b), intersect(a, b), complement(a)
    for x in _window(a, b):
        assert member(u, x) == (member(a, x) or member(b, x))
        assert member(i, x) == (member(a, x) and member(b, x))
        assert member(na, x) != member(a, x)
