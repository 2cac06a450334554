"""Hyperidentities, a catalog of standard ones, and their expansion into identities."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .rewrite import Budget, Proof, derive_bounded
from .term import (
    App, FApp, Identity, Term, Var, apply_hypersubstitution, canonical_identity,
    enumerate_terms, format_term, function_variables, op_count, parse_identity,
    sort_key, term_to_word, variables,
)
from .typesys import SimilarityType

__all__ = [
    "Hyperidentity", "ExpansionMode", "TAYLOR", "PREHYPER", "restricted",
    "parse_hyperidentity", "builtin", "BUILTINS", "expand", "denecke_form",
    "triviality_probe", "ProbeResult", "word_form", "expansion_to_json",
]


@dataclass(frozen=True)
class Hyperidentity:
    lhs: Term
    rhs: Term
    function_variables: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        both = dict(function_variables(self.lhs))
        for name, ar in function_variables(self.rhs).items():
            if both.setdefault(name, ar) != ar:
                raise ValueError(f"function variable {name} used with arities {both[name]} and {ar}")
        declared = dict(self.function_variables)
        if declared:
            for name, ar in both.items():
                if declared.get(name) != ar:
                    raise ValueError(f"function variable {name}/{ar} is not declared")
        else:
            object.__setattr__(self, "function_variables", tuple(sorted(both.items())))

    def __str__(self):
        return f"{format_term(self.lhs, infix=False)} = {format_term(self.rhs, infix=False)}"


def parse_hyperidentity(text: str) -> Hyperidentity:
    """``F(x1,F(x2,x3)) = F(F(x1,x2),x3)``; capitalized names are function variables."""
    eq = parse_identity(text, None, hyper=True)
    return Hyperidentity(eq.lhs, eq.rhs)


# ---------------------------------------------------------------- catalog

def _F(name, *args):
    return FApp(name, tuple(args))


def _power(name, n, arg):
    for _ in range(n):
        arg = _F(name, arg)
    return arg


def _entropic(n):
    x = lambda i, j: Var((i - 1) * n + j)
    lhs = _F("F", *(_F("G", *(x(i, j) for j in range(1, n + 1))) for i in range(1, n + 1)))
    rhs = _F("G", *(_F("F", *(x(i, j) for i in range(1, n + 1))) for j in range(1, n + 1)))
    return Hyperidentity(lhs, rhs)


def builtin(name: str, *params: int) -> Hyperidentity:
    """Catalog entry by name.

    ``entropic n`` and ``burnside n`` take n >= 2; ``unary_power p q`` takes
    distinct p, q >= 1.
    """
    x1, x2, x3, x4 = (Var(i) for i in range(1, 5))
    simple = {
        "hyperassociativity": lambda: Hyperidentity(_F("F", x1, _F("F", x2, x3)),
                                                    _F("F", _F("F", x1, x2), x3)),
        "hyperidempotency": lambda: Hyperidentity(_F("F", x1), x1),
        "hypermediality": lambda: Hyperidentity(_F("F", _F("G", x1, x2), _F("G", x3, x4)),
                                                _F("G", _F("F", x1, x3), _F("F", x2, x4))),
        "hypercommutativity": lambda: Hyperidentity(_F("F", x1, x2), _F("F", x2, x1)),
    }
    if name in simple:
        if params:
            raise ValueError(f"{name} takes no parameters")
        return simple[name]()
    if name == "entropic":
        if len(params) != 1 or params[0] < 2:
            raise ValueError("entropic needs one parameter n >= 2")
        return _entropic(params[0])
    if name == "burnside":
        if len(params) != 1 or params[0] < 2:
            raise ValueError("burnside needs one parameter n >= 2")
        return Hyperidentity(_power("F", params[0], x1), _F("F", x1))
    if name == "unary_power":
        if len(params) != 2 or min(params) < 1 or params[0] == params[1]:
            raise ValueError("unary_power needs distinct p, q >= 1")
        p, q = params
        return Hyperidentity(_power("F", p, x1), _power("F", q, x1))
    raise ValueError(f"unknown hyperidentity {name!r}; known: {', '.join(BUILTINS)}")


BUILTINS = ("hyperassociativity", "hyperidempotency", "hypermediality", "entropic",
            "hypercommutativity", "unary_power", "burnside")


# ---------------------------------------------------------------- modes

@dataclass(frozen=True)
class ExpansionMode:
    """Which terms a function variable may become.

    ``taylor``: all terms, projections included.  ``prehyper``: no bare
    variables.  ``restricted``: only the listed terms for each arity.
    """
    kind: str = "taylor"
    allowed: tuple = field(default=())   # ((arity, (term, ...)), ...)

    def __post_init__(self):
        if self.kind not in ("taylor", "prehyper", "restricted"):
            raise ValueError(f"unknown expansion mode {self.kind!r}")
        for arity, terms in self.allowed:
            for t in terms:
                bad = [v for v in variables(t) if v > arity]
                if bad:
                    raise ValueError(f"restricted term {format_term(t)} uses x{bad[0]} at arity {arity}")

    def candidates(self, tau: SimilarityType, arity: int, max_ops: int) -> list:
        if self.kind == "restricted":
            terms = dict(self.allowed).get(arity, ())
            return sorted((t for t in terms if op_count(t) <= max_ops), key=sort_key)
        return enumerate_terms(tau, arity, max_ops, include_projections=self.kind == "taylor")


TAYLOR = ExpansionMode("taylor")
PREHYPER = ExpansionMode("prehyper")


def restricted(allowed: dict) -> ExpansionMode:
    """Restricted mode from ``{arity: [terms]}``."""
    return ExpansionMode("restricted", tuple((a, tuple(ts)) for a, ts in sorted(allowed.items())))


# ---------------------------------------------------------------- expansion

def denecke_form(E: Hyperidentity, tau: SimilarityType) -> Identity:
    """Read E's function variables as tau's own symbols (matched by arity, in order).

    The variable count and arity multiset must agree with tau exactly.
    """
    fvs = sorted(E.function_variables, key=lambda s: (-s[1], s[0]))
    if sorted(a for _, a in fvs) != sorted(tau.arities):
        raise ValueError(f"function variables {fvs} do not match type {tau}")
    rename = {f: sym for (f, _), (sym, _) in zip(fvs, tau.symbols)}

    def conv(t):
        if type(t) is Var:
            return t
        return App(rename.get(t.op, t.op), tuple(conv(a) for a in t.args))

    return Identity(conv(E.lhs), conv(E.rhs))


def expand(E: Hyperidentity, tau: SimilarityType, mode: ExpansionMode = TAYLOR,
           max_ops: int = 2, denecke: bool = False) -> list[Identity]:
    """All instances of E under hypersubstitutions with images of at most max_ops
    symbols, canonicalized, deduplicated, reflexive ones dropped, sorted."""
    if max_ops < 0:
        raise ValueError("max_ops must be >= 0")
    names = [n for n, _ in E.function_variables]
    pools = [mode.candidates(tau, a, max_ops) for _, a in E.function_variables]
    if denecke:
        base = denecke_form(E, tau)
        fvs = sorted(E.function_variables, key=lambda s: (-s[1], s[0]))
        keys = {f: sym for (f, _), (sym, _) in zip(fvs, tau.symbols)}
        names = [keys[n] for n in names]
        lhs, rhs = base.lhs, base.rhs
    else:
        lhs, rhs = E.lhs, E.rhs
    out = {}
    for images in itertools.product(*pools):
        s = dict(zip(names, images))
        eq = Identity(apply_hypersubstitution(lhs, s), apply_hypersubstitution(rhs, s))
        if eq.lhs == eq.rhs:
            continue
        c = canonical_identity(eq)
        if c.lhs == c.rhs:
            continue
        out.setdefault(c, None)
    return sorted(out, key=lambda e: (sort_key(e.lhs), sort_key(e.rhs)))


def word_form(eq: Identity) -> tuple[str, str] | None:
    """An identity over one binary symbol as a canonical pair of variable words
    (letters x, y, z, ... by first occurrence; shorter side, then lexicographically
    smaller, on the left).  None for other identities."""
    sides = [term_to_word(eq.lhs), term_to_word(eq.rhs)]
    if None in sides:
        return None
    best = None
    for a, b in (sides, sides[::-1]):
        order = list(dict.fromkeys(a + b))
        letters = "xyzwuvstpqrabcdefghijklmno"
        m = {v: letters[i] for i, v in enumerate(order)}
        pair = ("".join(m[v] for v in a), "".join(m[v] for v in b))
        key = (len(pair[0]), pair[0], len(pair[1]), pair[1])
        if best is None or key < best[0]:
            best = (key, pair)
    return best[1]


def expansion_to_json(identities) -> list[dict]:
    return [{"lhs": format_term(e.lhs), "rhs": format_term(e.rhs)} for e in identities]


# ---------------------------------------------------------------- triviality

@dataclass
class ProbeResult:
    status: str                 # "trivial" or "unknown"
    proof: Proof | None
    axioms: list[Identity]
    goal: Identity

    @property
    def trivial(self) -> bool:
        return self.status == "trivial"


def triviality_probe(E: Hyperidentity, tau: SimilarityType, mode: ExpansionMode = TAYLOR,
                     expansion_bound: int = 2, budget: Budget | None = None) -> ProbeResult:
    """Try to derive x1 = x2 from the bounded expansion.  "unknown" is not a
    claim of nontriviality."""
    axioms = expand(E, tau, mode, expansion_bound)
    goal = Identity(Var(1), Var(2))
    if not axioms:
        return ProbeResult("unknown", None, axioms, goal)
    proof = derive_bounded(axioms, goal, budget or Budget(max_visited=200_000))
    return ProbeResult("trivial" if proof is not None else "unknown", proof, axioms, goal)
