import pytest
from hypothesis import given, strategies as st

from hyperbasis.term import (
    SEMIGROUP, App, FApp, Identity, TermSyntaxError, Var, apply_hypersubstitution,
    canonical_identity, enumerate_terms, evaluate, format_term, match, op_count,
    parse_hyperterm, parse_law, parse_term, replace_at, subterm_at,
    subterm_occurrences, substitute, term_to_word, variables, word_to_term,
)
from hyperbasis.typesys import parse_type

T21 = parse_type("f:2,g:1")


def terms(sig=SEMIGROUP, n=3, ops=4):
    pool = enumerate_terms(sig, n, ops)
    return st.sampled_from(pool)


def test_parse_and_print_roundtrip():
    t = parse_term("x1*(x2*x3)", SEMIGROUP)
    assert format_term(t) == "x1*(x2*x3)"
    assert op_count(t) == 2


def test_shorthand_and_powers():
    eq = parse_law("x^2y^2z = xxyxxyz")
    assert term_to_word(eq.lhs) == (1, 1, 2, 2, 3)
    assert term_to_word(eq.rhs) == (1, 1, 2, 1, 1, 2, 3)


def test_prefix_terms():
    t = parse_term("f(g(x1),x2)", T21)
    assert t == App("f", (App("g", (Var(1),)), Var(2)))
    assert format_term(t) == "f(g(x1),x2)"


def test_hyperterm_function_variables():
    h = parse_hyperterm("F(x1,F(x2,x3))")
    assert type(h) is FApp and type(h.args[1]) is FApp


@pytest.mark.parametrize("bad", ["x1*(x2", "f(x1,)", "x1 x y", ""])
def test_syntax_errors(bad):
    with pytest.raises(TermSyntaxError):
        parse_term(bad, T21)


def test_enumeration_counts():
    # one binary symbol, 3 variables: 3 projections + 9 one-op terms
    assert len(enumerate_terms(SEMIGROUP, 3, 1)) == 12
    assert len(enumerate_terms(SEMIGROUP, 2, 1, include_projections=False)) == 4
    assert len([t for t in enumerate_terms(SEMIGROUP, 2, 2) if op_count(t) == 2]) == 16


@given(terms(), terms())
def test_match_then_substitute(p, t):
    b = match(p, t)
    if b is not None:
        assert substitute(p, b) == t


@given(terms())
def test_match_self_instance(t):
    sub = {v: App("*", (Var(v), Var(v))) for v in variables(t)}
    inst = substitute(t, sub)
    assert substitute(t, match(t, inst)) == inst


@given(terms(), st.data())
def test_replace_at_subterm_at(t, data):
    pos, sub = data.draw(st.sampled_from(subterm_occurrences(t)))
    assert subterm_at(t, pos) == sub
    assert replace_at(t, pos, sub) == t


def test_replace_at_bad_position():
    with pytest.raises(IndexError):
        replace_at(Var(1), (0,), Var(2))


def test_hypersubstitution_projection_and_swap():
    h = parse_hyperterm("F(x1,F(x2,x3))")
    assert apply_hypersubstitution(h, {"F": Var(1)}) == Var(1)
    swapped = apply_hypersubstitution(h, {"F": App("*", (Var(2), Var(1)))})
    assert format_term(swapped) == "x3*x2*x1"


def test_hypersubstitution_arity_check():
    with pytest.raises(ValueError):
        apply_hypersubstitution(parse_hyperterm("F(x1)"), {"F": Var(2)})


@given(terms(), terms())
def test_canonical_identity_is_orientation_free(a, b):
    assert canonical_identity(Identity(a, b)) == canonical_identity(Identity(b, a))


@given(terms())
def test_canonical_identity_renaming(t):
    shifted = substitute(t, {v: Var(v + 5) for v in variables(t)})
    assert canonical_identity(Identity(t, t)) == canonical_identity(Identity(shifted, shifted))


@given(st.lists(st.integers(1, 3), min_size=1, max_size=8))
def test_word_roundtrip(w):
    assert term_to_word(word_to_term(w)) == tuple(w)


def test_evaluate_table():
    table = [[0, 1], [1, 0]]
    t = parse_term("x1*(x2*x2)", SEMIGROUP)
    assert evaluate(t, {"*": table}, {1: 1, 2: 1}) == 1
