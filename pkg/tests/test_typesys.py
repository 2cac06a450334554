import pytest
from hypothesis import given, strategies as st

from hyperbasis.typesys import (
    InvalidType, SimilarityType, all_types, downward_closure, lower_covers,
    parse_type, strict_lt, type_leq,
)

arities = st.lists(st.integers(1, 4), min_size=1, max_size=4)


def test_parse_forms():
    assert parse_type("2,1").arities == (2, 1)
    assert parse_type("<1,2>").arities == (2, 1)
    t = parse_type("dot:2,circ:2")
    assert t.names == ("circ", "dot") and t.arity("dot") == 2
    assert str(t) == "<2,2>"


@pytest.mark.parametrize("bad", ["", "0", "2,-1", "x", "a b:2", "f:2,f:1"])
def test_parse_rejects(bad):
    with pytest.raises(InvalidType):
        parse_type(bad)


def test_constants_rejected():
    with pytest.raises(InvalidType):
        SimilarityType((("c", 0),))


def test_lower_covers_of_21():
    got = {t.arities for t in lower_covers(parse_type("2,1"))}
    assert got == {(2,), (1,), (1, 1)}


def test_lower_covers_keep_one_symbol():
    assert lower_covers(parse_type("1")) == set()


def test_named_examples():
    assert type_leq(parse_type("2"), parse_type("2,2"))
    assert type_leq(parse_type("1"), parse_type("2"))
    a, b = parse_type("2,1"), parse_type("1,1,1")
    assert not type_leq(a, b) and not type_leq(b, a)


def test_leq_matches_closure_exhaustively():
    types = all_types(3, 3)
    for tau in types:
        down = downward_closure(tau)
        for sigma in types:
            assert type_leq(sigma, tau) == (sigma.arities in down), (sigma, tau)


@given(arities, arities, arities)
def test_partial_order(a, b, c):
    s, t, u = (SimilarityType.of(*x) for x in (a, b, c))
    assert type_leq(s, s)
    if type_leq(s, t) and type_leq(t, s):
        assert s.arities == t.arities
    if type_leq(s, t) and type_leq(t, u):
        assert type_leq(s, u)


@given(arities)
def test_covers_are_strictly_below(a):
    tau = SimilarityType.of(*a)
    for low in lower_covers(tau):
        assert strict_lt(low, tau)
