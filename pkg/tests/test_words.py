import pytest
from hypothesis import given, strategies as st

from hyperbasis.term import App, Var, op_count, substitute
from hyperbasis.typesys import parse_type
from hyperbasis.words import (
    has_overlap, is_square_free, square_factors, ternary_squarefree, thue_morse,
    word_to_unary_term,
)

MAP = {"a": "f", "b": "g", "c": "h"}
T111 = parse_type("f:1,g:1,h:1")


def brute_square(w):
    return any(w[i:i + p] == w[i + p:i + 2 * p]
               for i in range(len(w)) for p in range(1, (len(w) - i) // 2 + 1))


def test_thue_morse_prefix():
    assert thue_morse(8) == [0, 1, 1, 0, 1, 0, 0, 1]
    assert thue_morse(0) == []


def test_thue_morse_recurrences():
    t = thue_morse(1000)
    for i in range(500):
        assert t[2 * i] == t[i]
        assert t[2 * i + 1] == 1 - t[i]


def test_thue_morse_overlap_free():
    assert not has_overlap(thue_morse(1000))
    assert has_overlap("abababa") and has_overlap("aaa") and not has_overlap("aabaab")


def test_squarefree_prefixes():
    assert ternary_squarefree(6) == "abcacb"
    assert ternary_squarefree(1) == "a"
    assert ternary_squarefree(0) == ""
    w = ternary_squarefree(300)
    assert not brute_square(w)


def test_squares():
    assert square_factors("aa") == [(0, "a")]
    assert is_square_free("abcacb")
    assert square_factors("abcabc") == [(0, "abc")]
    assert not is_square_free("abcabc")


@given(st.text(alphabet="abc", max_size=14))
def test_square_scan_matches_brute_force(w):
    assert is_square_free(w) == (not brute_square(w))
    assert bool(square_factors(w)) == brute_square(w)


@given(st.text(alphabet="ab", max_size=12))
def test_overlap_matches_brute_force(w):
    brute = any(w[i] == w[i + p] == w[i + 2 * p] and w[i:i + p] == w[i + p:i + 2 * p]
                for i in range(len(w)) for p in range(1, (len(w) - i - 1) // 2 + 1))
    assert has_overlap(w) == brute


def test_unary_terms():
    assert word_to_unary_term("ab", MAP, T111) == App("f", (App("g", (Var(1),)),))
    assert word_to_unary_term("", MAP) == Var(1)
    assert op_count(word_to_unary_term(ternary_squarefree(5), MAP)) == 5
    with pytest.raises(ValueError):
        word_to_unary_term("a", {"a": "f"}, parse_type("f:2"))


@given(st.text(alphabet="abc", max_size=8), st.text(alphabet="abc", max_size=8))
def test_unary_terms_compose_and_separate(u, v):
    tu, tv = word_to_unary_term(u, MAP), word_to_unary_term(v, MAP)
    assert word_to_unary_term(u + v, MAP) == substitute(tu, {1: tv})
    assert (tu == tv) == (u == v)
