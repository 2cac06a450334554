"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that is printed at the end of the pytest run (and by ``python3 tests/test_acceptance.py``)."""
import functools
import itertools
import random
import time

import pytest

from hyperbasis.freealg import evaluate_word, free_semigroup, search_models
from hyperbasis.hyper import TAYLOR, builtin, expand, triviality_probe, word_form
from hyperbasis.rewrite import associativity_law, check_proof, check_word_proof, derive_bounded, word_derive_bounded
from hyperbasis.term import SEMIGROUP, App, Identity, Var, canonical_identity, enumerate_terms, op_count, parse_law
from hyperbasis.typesys import all_types, downward_closure, parse_type, type_leq
from hyperbasis.witness import CIRC, DOT, TWO_OPS, assoc_instance, dual, format_two_op, instance_census, naive_census, t_family
from hyperbasis.words import ternary_squarefree, thue_morse

try:
    from conftest import ACCEPTANCE
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE = {}

XYX = "xyxzxyx=xyzyx"
XXYYZ = "xxyyz=xxyxxyz"
SUB = "xxyyz=xxyxxyz, xyyzz=xyzzyzz"
FIVE_LAWS = ["(xy)z=x(yz)", "xx=xxxx", "xyxzxyx=xyzyx", "xxyyz=xxyxxyz", "xyyzz=xyzzyzz"]
PROOFS = []   # (axioms, goal, proof) for the soundness criterion


def criterion(n, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            t0 = time.perf_counter()
            try:
                detail = fn(*a, **kw) or ""
            except AssertionError as e:
                ACCEPTANCE[n] = ("FAIL", f"{title}: {str(e).splitlines()[0] if str(e) else 'assertion failed'}")
                raise
            ACCEPTANCE[n] = ("PASS", f"{title} ({detail}{'; ' if detail else ''}{time.perf_counter() - t0:.1f}s)")
        return run
    return wrap


@functools.lru_cache(maxsize=None)
def report(laws, k=2):
    return free_semigroup(laws, k)


@criterion(1, "free semigroup of xyxzxyx=xyzyx on 2 generators has 94 elements")
def test_c1_free_semigroup_94():
    t0 = time.perf_counter()
    rep = report(XYX)
    elapsed = time.perf_counter() - t0
    assert rep.stable, f"not stable: census {rep.census}"
    L = rep.bound
    assert rep.census[L - 1] == rep.census[L]
    assert free_semigroup(XYX, 2, L + 2).cardinality == rep.cardinality
    assert elapsed <= 300
    size = rep.cardinality
    assert size == 94, f"got Stable({size}), certified={rep.certified}, expected 94"
    return f"Stable(94) at L={L}"


@criterion(2, "hyperassociativity over <2> expands to the five laws")
def test_c2_expansion_ground_truth():
    out = expand(builtin("hyperassociativity"), SEMIGROUP, TAYLOR, 3)
    assert canonical_identity(parse_law("(xy)z=x(yz)")) in set(out)
    forms = {word_form(e) for e in out}
    for law in ("xx=xxxx", "xyzyx=xyxzxyx", "xxyyz=xxyxxyz", "xyyzz=xyzzyzz"):
        assert tuple(law.split("=")) in forms, law
    return f"{len(out)} identities"


@criterion(3, "five laws derive t(x,t(y,z)) = t(t(x,y),z) for all t with <= 4 ops")
def test_c3_five_law_sufficiency():
    axioms = [parse_law(s) for s in FIVE_LAWS]
    terms = enumerate_terms(SEMIGROUP, 2, 4)
    for t in terms:
        goal = Identity(*assoc_instance(t))
        proof = derive_bounded(axioms, goal)
        assert proof is not None, f"no proof for t = {t}"
        PROOFS.append((axioms, goal, proof))
        assert check_proof(axioms, goal, proof)
    return f"{len(terms)} terms"


@criterion(4, "consequences of xxyyz = xxyxxyz within 30 s each")
def test_c4_xxyyz_consequences():
    goals = [("xxyyxxz", "xxyyxxxxz"), ("xxyyyz", "xxyyyyyz")]
    goals += [("xx" + "y" * b + "z", "xxy" * b + "z") for b in range(1, 5)]
    axioms = [("xxyyz", "xxyxxyz")]
    worst = 0.0
    for g in goals:
        t0 = time.perf_counter()
        proof = word_derive_bounded(axioms, g)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        assert proof is not None, f"no proof of {g}"
        assert check_word_proof(axioms, g, proof)
        assert dt <= 30, f"{g} took {dt:.1f}s"
        term_goal = Identity(parse_law("=".join(g)).lhs, parse_law("=".join(g)).rhs)
        tree = derive_bounded([parse_law(XXYYZ)], term_goal, associative=True)
        assert tree is not None
        PROOFS.append(([parse_law(XXYYZ), associativity_law()], term_goal, tree))
    return f"{len(goals)} goals, slowest {worst:.2f}s"


# frozen on the first certified run (raw closure count 1618 at L=18 and 366 at
# L=16, reduced by the model check to these exact values)
XXYYZ_N = 1282
SUB_M = 318


@criterion(5, "xxyyz variety and its subvariety are finite on 2 generators")
def test_c5_xxyyz_finite():
    n = report(XXYYZ)
    m = report(SUB)
    assert n.stable and n.certified and n.cardinality == XXYYZ_N
    assert m.stable and m.certified and m.cardinality == SUB_M
    assert m.cardinality <= n.cardinality
    return f"n={n.cardinality}, m={m.cardinality}"


@criterion(6, "square-free ternary word and Thue-Morse recurrences at length 1000")
def test_c6_words():
    w = ternary_squarefree(1000)
    assert len(w) == 1000
    for i in range(len(w)):
        for p in range(1, (len(w) - i) // 2 + 1):
            assert w[i:i + p] != w[i + p:i + 2 * p], (i, p)
    t = thue_morse(1000)
    for i in range(1000):
        if 2 * i < 1000:
            assert t[2 * i] == t[i]
        if 2 * i + 1 < 1000:
            assert t[2 * i + 1] == 1 - t[i]


def _random_two_op(rng, ops):
    if ops == 0:
        return Var(rng.randint(1, 3))
    left = rng.randint(0, ops - 1)
    return App(rng.choice([DOT, CIRC]), (_random_two_op(rng, left), _random_two_op(rng, ops - 1 - left)))


@criterion(7, "witness towers, dual involution and census oracle")
def test_c7_witness():
    assert format_two_op(t_family(1, 1, True)) == "(x · x) ∘ ((x · y) ∘ (y · y))"
    for n in range(7):
        for k in range(4):
            assert op_count(t_family(n, k)) == 2 * 3 ** n - 1
    rng = random.Random(2024)
    for _ in range(1000):
        t = _random_two_op(rng, rng.randint(0, 20))
        assert dual(dual(t)) == t
    HA = builtin("hyperassociativity")
    for _ in range(200):
        host = _random_two_op(rng, rng.randint(0, 12))
        for proj in (False, True):
            assert instance_census(host, HA, TWO_OPS, 2, proj) == naive_census(host, HA, TWO_OPS, 2, proj)


@criterion(8, "type order agrees with generator closure")
def test_c8_type_order():
    types = all_types(3, 3)
    for tau in types:
        down = downward_closure(tau)
        for sigma in types:
            assert type_leq(sigma, tau) == (sigma.arities in down)
    assert type_leq(parse_type("2"), parse_type("2,2"))
    assert type_leq(parse_type("1"), parse_type("2"))
    a, b = parse_type("2,1"), parse_type("1,1,1")
    assert not type_leq(a, b) and not type_leq(b, a)
    return f"{len(types) ** 2} pairs"


@criterion(9, "hypercommutativity over <2> is trivial with a checked proof")
def test_c9_triviality():
    res = triviality_probe(builtin("hypercommutativity"), parse_type("2"), TAYLOR, 0)
    assert res.trivial
    assert check_proof(res.axioms, res.goal, res.proof)
    PROOFS.append((res.axioms, res.goal, res.proof))


def _sample_merged_pairs(rep, rng, count):
    words = ["".join(p) for n in range(1, 10) for p in itertools.product("ab", repeat=n)]
    groups = {}
    for w in words:
        groups.setdefault(rep.class_of(w), []).append(w)
    pairs = [(g[0], w) for g in groups.values() for w in g[1:]]
    return rng.sample(pairs, min(count, len(pairs)))


@criterion(10, "proofs check and merged words agree in small models")
def test_c10_soundness():
    if not PROOFS:  # run on its own
        test_c4_xxyyz_consequences()
        test_c9_triviality()
    for axioms, goal, proof in PROOFS:
        assert check_proof(axioms, goal, proof)
    rng = random.Random(10)
    pool = []
    for laws in (XYX, XXYYZ, SUB, ", ".join(FIVE_LAWS[1:])):
        rep = report(laws)
        if rep.stable:
            pool += [(laws, u, v) for u, v in _sample_merged_pairs(rep, rng, 500)]
    sample = rng.sample(pool, min(500, len(pool)))
    models = {laws: search_models(laws, 2) + search_models(laws, 3) for laws, _, _ in sample}
    for laws, u, v in sample:
        for T in models[laws]:
            for a, b in itertools.product(range(len(T)), repeat=2):
                asg = {"a": a, "b": b}
                assert evaluate_word(T, u, asg) == evaluate_word(T, v, asg), (laws, u, v)
    checked = len(sample)
    return f"{len(PROOFS)} proofs, {checked} pairs"


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[1][1:]))
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
    for n in sorted(ACCEPTANCE):
        print(f"criterion {n:>2}: {ACCEPTANCE[n][0]}  {ACCEPTANCE[n][1]}")
