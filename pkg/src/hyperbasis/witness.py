"""Witness term towers over two binary symbols and small-instance censuses."""
from __future__ import annotations

import itertools
from functools import lru_cache

from .hyper import Hyperidentity
from .term import (
    App, Term, Var, apply_hypersubstitution, enumerate_terms, match, op_count,
    subterm_occurrences, substitute, variables,
)
from .typesys import SimilarityType

__all__ = [
    "DOT", "CIRC", "TWO_OPS", "t_family", "dual", "assoc_instance",
    "instance_census", "naive_census", "format_two_op", "TRIPLES",
]

DOT, CIRC = "dot", "circ"
TWO_OPS = SimilarityType(((DOT, 2), (CIRC, 2)))
TRIPLES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
_BASE = ((1, 1), (1, 2), (2, 1), (2, 2))


@lru_cache(maxsize=None)
def t_family(n: int, k: int, starred: bool = False) -> Term:
    """Level-n term number k (0..3).  Level 0 is x·x, x·y, y·x, y·y (∘ when
    starred); level n+1 joins three level-n terms of the other kind as
    a·(b·c) over the index triple for k, with the symbol swapped likewise."""
    if k not in range(4):
        raise ValueError("k must be in 0..3")
    if n < 0:
        raise ValueError("level must be >= 0")
    op = CIRC if starred else DOT
    if n == 0:
        i, j = _BASE[k]
        return App(op, (Var(i), Var(j)))
    a, b, c = (t_family(n - 1, i, not starred) for i in TRIPLES[k])
    return App(op, (a, App(op, (b, c))))


def dual(t: Term) -> Term:
    """Swap · and ∘ throughout."""
    if type(t) is Var:
        return t
    if t.op not in (DOT, CIRC):
        raise ValueError(f"foreign symbol {t.op!r}")
    return App(CIRC if t.op == DOT else DOT, tuple(dual(a) for a in t.args))


def assoc_instance(t: Term) -> tuple[Term, Term]:
    """(t(x1, t(x2, x3)), t(t(x1, x2), x3)) for a term t in x1, x2."""
    if any(v > 2 for v in variables(t)):
        raise ValueError("assoc_instance needs a term in x1, x2 only")
    x1, x2, x3 = Var(1), Var(2), Var(3)
    inner_r = substitute(t, {1: x2, 2: x3})
    inner_l = substitute(t, {1: x1, 2: x2})
    return substitute(t, {1: x1, 2: inner_r}), substitute(t, {1: inner_l, 2: x3})


def format_two_op(t: Term) -> str:
    """Fully bracketed infix with · and ∘, variables x, y, z, w beyond which x5..."""
    names = {1: "x", 2: "y", 3: "z", 4: "w"}
    if type(t) is Var:
        return names.get(t.index, f"x{t.index}")
    sym = {DOT: "·", CIRC: "∘"}.get(t.op, t.op)
    if len(t.args) != 2:
        return f"{sym}(" + ",".join(format_two_op(a) for a in t.args) + ")"
    a, b = (format_two_op(s) if type(s) is Var else f"({format_two_op(s)})" for s in t.args)
    return f"{a} {sym} {b}"


# ---------------------------------------------------------------- census

def _hypersubstitutions(E: Hyperidentity, tau, max_ops, include_projections):
    names = [n for n, _ in E.function_variables]
    pools = [enumerate_terms(tau, a, max_ops, include_projections) for _, a in E.function_variables]
    for images in itertools.product(*pools):
        yield dict(zip(names, images))


def instance_census(host: Term, E: Hyperidentity, tau: SimilarityType, max_ops: int,
                    include_projections: bool = False) -> list[tuple[tuple, str, dict]]:
    """Occurrences in host of a side of E under a small hypersubstitution
    followed by any variable substitution.

    Entries are (position, "L" or "R", hypersubstitution), ordered by preorder
    position, then side, then the hypersubstitution's enumeration order.
    """
    if max_ops < 0:
        raise ValueError("max_ops must be >= 0")
    patterns = []
    for idx, s in enumerate(_hypersubstitutions(E, tau, max_ops, include_projections)):
        for side, h in (("L", E.lhs), ("R", E.rhs)):
            p = apply_hypersubstitution(h, s)
            patterns.append((side, idx, p, s))
    by_root = {}
    for side, idx, p, s in patterns:
        key = None if type(p) is Var else (p.op, len(p.args))
        by_root.setdefault(key, []).append((side, idx, p, s))
    out = []
    for pos, sub in subterm_occurrences(host):
        cands = list(by_root.get(None, []))
        if type(sub) is not Var:
            cands += by_root.get((sub.op, len(sub.args)), [])
        hits = [(side, idx, s) for side, idx, p, s in cands
                if op_count(p) <= op_count(sub) and match(p, sub) is not None]
        hits.sort(key=lambda h: (h[0], h[1]))
        out.extend((pos, side, s) for side, idx, s in hits)
    return out


def naive_census(host: Term, E: Hyperidentity, tau: SimilarityType, max_ops: int,
                 include_projections: bool = False) -> list[tuple[tuple, str, dict]]:
    """Reference census: every subterm against every side instance, with its own
    term generator and matcher."""
    pools = [_all_terms(tau, a, max_ops, include_projections) for _, a in E.function_variables]
    names = [n for n, _ in E.function_variables]
    subs = [dict(zip(names, imgs)) for imgs in itertools.product(*pools)]
    out = []
    for pos, sub in _preorder(host, ()):
        for side in ("L", "R"):
            h = E.lhs if side == "L" else E.rhs
            for s in subs:
                if _naive_match(_hyper_apply(h, s), sub, {}):
                    out.append((pos, side, s))
    return out


def _all_terms(tau, n, max_ops, include_projections):
    """All terms with at most max_ops symbols, generated by size then by a plain
    recursive product (no caching), sorted like enumerate_terms."""
    def exact(ops):
        if ops == 0:
            return [Var(i) for i in range(1, n + 1)]
        res = []
        for name, ar in tau.symbols:
            for split in itertools.product(range(ops), repeat=ar):
                if sum(split) == ops - 1:
                    for kids in itertools.product(*(exact(c) for c in split)):
                        res.append(App(name, kids))
        return res
    from .term import sort_key
    out = []
    for ops in range(0 if include_projections else 1, max_ops + 1):
        out.extend(sorted(exact(ops), key=sort_key))
    return out


def _preorder(t, pos):
    yield pos, t
    if type(t) is not Var:
        for i, a in enumerate(t.args):
            yield from _preorder(a, pos + (i,))


def _hyper_apply(h, s):
    if type(h) is Var:
        return h
    args = [_hyper_apply(a, s) for a in h.args]
    if h.op in s:
        return _plug(s[h.op], args)
    return App(h.op, tuple(args))


def _plug(t, args):
    if type(t) is Var:
        return args[t.index - 1]
    return App(t.op, tuple(_plug(a, args) for a in t.args))


def _naive_match(p, t, env):
    if type(p) is Var:
        if p.index in env:
            return env[p.index] == t
        env[p.index] = t
        return True
    if type(t) is Var or p.op != t.op or len(p.args) != len(t.args):
        return False
    return all(_naive_match(a, b, env) for a, b in zip(p.args, t.args))
