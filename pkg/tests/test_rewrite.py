import itertools

import pytest
from hypothesis import given, strategies as st

from hyperbasis.freealg import evaluate_word, free_semigroup, search_models
from hyperbasis.rewrite import (
    Budget, Proof, Step, apply_rule_at, check_proof, check_word_proof, derive_bounded,
    first_failure, proof_from_json, proof_to_json, word_derive_bounded,
)
from hyperbasis.term import SEMIGROUP, Identity, Var, evaluate, parse_law, parse_term, word_to_term

ASSOC = parse_law("(xy)z=x(yz)")
X2X4 = parse_law("xx=xxxx")
XXYYZ = [("xxyyz", "xxyxxyz")]


def law_term(s):
    return parse_term(s, SEMIGROUP)


def test_apply_rule_examples():
    aaaa = parse_law("xxxx=xxxx").lhs
    assert apply_rule_at(aaaa, X2X4, "RL", ()) == parse_law("xx=xx").lhs
    assert apply_rule_at(law_term("x1*x2"), X2X4, "LR", ()) is None
    out = apply_rule_at(law_term("(x1*x2)*x3"), ASSOC, "LR", ())
    assert out == law_term("x1*(x2*x3)")


def test_apply_rule_bad_position():
    with pytest.raises(IndexError):
        apply_rule_at(law_term("x1*x2"), ASSOC, "LR", (0, 0))


def test_x5_x7():
    goal = parse_law("x^5=x^7")
    proof = derive_bounded([X2X4, ASSOC], goal)
    assert proof is not None and check_proof([X2X4, ASSOC], goal, proof)


def test_x5_x7_tree_search_only():
    goal = parse_law("x^5=x^7")
    proof = derive_bounded([X2X4, ASSOC], goal, associative=False)
    assert proof is not None and check_proof([X2X4, ASSOC], goal, proof)


def test_no_axioms_unknown():
    assert derive_bounded([], parse_law("xy=yx")) is None
    assert word_derive_bounded([], ("ab", "ba")) is None


def test_reflexive_goals():
    assert len(derive_bounded([ASSOC], parse_law("xy=xy"))) == 0
    assert len(word_derive_bounded(XXYYZ, ("aab", "aab"))) == 0


def test_check_proof_rejects_bad_position():
    goal = parse_law("x^5=x^7")
    proof = derive_bounded([X2X4, ASSOC], goal)
    bad = Proof([Step(s.axiom, s.direction, s.position + (0, 0, 0, 0, 0, 0), s.substitution)
                 for s in proof.steps])
    assert not check_proof([X2X4, ASSOC], goal, bad)
    assert first_failure([X2X4, ASSOC], goal, bad)[0] == 0


def test_reversed_proof_checks():
    goal = parse_law("x^5=x^7")
    proof = derive_bounded([X2X4, ASSOC], goal)
    assert check_proof([X2X4, ASSOC], goal.reversed(), proof.reversed())


def test_proof_json_roundtrip():
    goal = parse_law("x^5=x^7")
    proof = derive_bounded([X2X4, ASSOC], goal)
    back = proof_from_json(proof_to_json(proof), SEMIGROUP)
    assert check_proof([X2X4, ASSOC], goal, back)


@pytest.mark.parametrize("goal", [("aabbaac", "aabbaaaac"), ("aabbbc", "aabbbbbc")])
def test_xxyyz_word_goals(goal):
    proof = word_derive_bounded(XXYYZ, goal)
    assert proof is not None and check_word_proof(XXYYZ, goal, proof)


def test_separated_goal_unknown():
    laws = [("xyxzxyx", "xyzyx")]
    assert word_derive_bounded(laws, ("aab", "aba"), Budget(max_visited=5000)) is None
    # and a small model really separates the two words
    sep = [T for T in search_models(laws, 3)
           if any(evaluate_word(T, "aab", {"a": a, "b": b}) != evaluate_word(T, "aba", {"a": a, "b": b})
                  for a in range(3) for b in range(3))]
    assert sep


SMALL = [parse_law(s) for s in ("xx=xxxx", "xyx=xxy")]


@given(st.sampled_from(["xy", "xx", "xxx", "xyx", "xxy", "xyy", "yxx"]),
       st.sampled_from(["xxxx", "xxxxx", "xyxx", "xxxy", "xxyy", "xyxy", "yx"]))
def test_derive_symmetry(u, v):
    goal = parse_law(f"{u}={v}")
    budget = Budget(max_visited=3000)
    a = derive_bounded(SMALL, goal, budget, associative=True)
    b = derive_bounded(SMALL, goal.reversed(), budget, associative=True)
    assert (a is None) == (b is None)
    if a is not None:
        assert check_proof(SMALL + [ASSOC], goal, a)


def _holds_in(T, u, v):
    vs = sorted(set(u + v))
    for vals in itertools.product(range(len(T)), repeat=len(vs)):
        asg = dict(zip(vs, vals))
        if evaluate_word(T, u, asg) != evaluate_word(T, v, asg):
            return False
    return True


def test_derived_goals_hold_in_models():
    models = search_models(XXYYZ, 3)
    for goal in [("aabbaac", "aabbaaaac"), ("aabbbc", "aabbbbbc"), ("aabbc", "aabaabc")]:
        assert word_derive_bounded(XXYYZ, goal) is not None
        for T in models:
            assert _holds_in(T, *goal)


def _pairs_within_classes(limit):
    rep = free_semigroup(XXYYZ, 2)
    words = ["".join(p) for n in range(5, 9) for p in itertools.product("ab", repeat=n)]
    classes = {}
    for w in words:
        classes.setdefault(rep.class_of(w), []).append(w)
    pairs = [(g[0], x) for g in classes.values() for x in g[1:]]
    return pairs[:limit]


def test_word_path_agrees_with_tree_path():
    axioms = [parse_law("xxyyz=xxyxxyz"), ASSOC]
    for u, v in _pairs_within_classes(30):
        goal = Identity(word_to_term([ord(c) - 96 for c in u]), word_to_term([ord(c) - 96 for c in v]))
        wp = word_derive_bounded(XXYYZ, (u, v), Budget(max_visited=100_000))
        tp = derive_bounded(axioms, goal, Budget(max_visited=5_000), associative=False)
        assert wp is not None, (u, v)
        lifted = derive_bounded(axioms, goal, Budget(max_visited=100_000))
        assert lifted is not None and check_proof(axioms, goal, lifted)
        if tp is not None:
            assert check_proof(axioms, goal, tp)
