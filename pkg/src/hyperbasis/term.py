"""First-order terms, hyperterms and identities.

Terms are immutable trees.  ``Var(k)`` is the variable x_k (k >= 1), ``App`` is an
operation symbol applied to children, and ``FApp`` is an application of a
function variable (capitalised name), which only occurs in hyperterms.

Text syntax::

    f(x1,f(x2,x3))        prefix applications, indexed variables
    x1*(x2*x3)            infix product, when the type has one binary symbol
    xxyyz, x^2y^2z        semigroup shorthand: letters numbered by first
                          appearance, juxtaposition is the product, left-associated
    F(x1,F(x2,x3))        capitalised names are function variables
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .typesys import SimilarityType

__all__ = [
    "Var", "App", "FApp", "Term", "Identity", "TermSyntaxError", "SEMIGROUP", "parse_law",
    "parse_term", "parse_hyperterm", "parse_identity", "format_term",
    "op_count", "variables", "function_variables", "substitute",
    "apply_hypersubstitution", "enumerate_terms", "subterm_occurrences",
    "subterm_at", "replace_at", "match", "canonical_identity",
    "term_to_word", "word_to_term", "evaluate", "uses_all_variables",
    "sort_key",
]


class TermSyntaxError(ValueError):
    pass


SEMIGROUP = SimilarityType((("*", 2),))


class Var:
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 1:
            raise ValueError("variable indices start at 1")
        self.index = index

    size = 0

    def __eq__(self, other):
        return type(other) is Var and other.index == self.index

    def __hash__(self):
        return hash(("x", self.index))

    def __repr__(self):
        return f"x{self.index}"


class App:
    """Operation symbol applied to children.  ``size`` is the op count."""

    __slots__ = ("op", "args", "size", "_hash")

    def __init__(self, op: str, args):
        self.op = op
        self.args = tuple(args)
        self.size = 1 + sum(a.size for a in self.args)
        self._hash = hash((type(self).__name__, op, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is type(self) and other._hash == self._hash
                and other.op == self.op and other.args == self.args)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.op}({', '.join(map(repr, self.args))})"


class FApp(App):
    """Function-variable application (hyperterms only)."""

    __slots__ = ()


Term = Var | App


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"

    def reversed(self) -> Identity:
        return Identity(self.rhs, self.lhs)

    def variables(self) -> list[int]:
        return sorted(set(variables(self.lhs)) | set(variables(self.rhs)))


# ---------------------------------------------------------------- basics

def op_count(t) -> int:
    return t.size


def variables(t) -> list[int]:
    """Variable indices in order of first occurrence."""
    seen = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Var:
            seen.setdefault(s.index, None)
        else:
            stack.extend(reversed(s.args))
    return list(seen)


def function_variables(h) -> dict[str, int]:
    """Function-variable names with their arity; raises on inconsistent arity."""
    out: dict[str, int] = {}
    for _, s in subterm_occurrences(h):
        if type(s) is FApp:
            n = out.setdefault(s.op, len(s.args))
            if n != len(s.args):
                raise TermSyntaxError(f"function variable {s.op} used with arities {n} and {len(s.args)}")
    return out


def uses_all_variables(t, n: int) -> bool:
    return set(variables(t)) == set(range(1, n + 1))


def subterm_occurrences(t) -> list[tuple[tuple[int, ...], Term]]:
    """Preorder list of (path, subterm); the root has the empty path."""
    out = []
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        out.append((path, s))
        if type(s) is not Var:
            for i in range(len(s.args) - 1, -1, -1):
                stack.append((path + (i,), s.args[i]))
    return out


def subterm_at(t, path):
    for i in path:
        if type(t) is Var or not 0 <= i < len(t.args):
            raise IndexError(f"invalid position {path}")
        t = t.args[i]
    return t


def replace_at(t, path, new):
    if not path:
        return new
    if type(t) is Var or not 0 <= path[0] < len(t.args):
        raise IndexError(f"invalid position {path}")
    i = path[0]
    args = list(t.args)
    args[i] = replace_at(args[i], path[1:], new)
    return type(t)(t.op, args)


def substitute(t, assignment):
    """Replace each variable x_k by ``assignment[k]``."""
    if type(t) is Var:
        try:
            return assignment[t.index]
        except KeyError:
            raise KeyError(f"no assignment for x{t.index}") from None
    return type(t)(t.op, [substitute(a, assignment) for a in t.args])


def match(pattern, term, binding=None):
    """Extend ``binding`` so that pattern instantiates to term; None if impossible."""
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, term)]
    while stack:
        p, s = stack.pop()
        if type(p) is Var:
            old = binding.get(p.index)
            if old is None:
                binding[p.index] = s
            elif old != s:
                return None
        elif type(s) is not type(p) or s.op != p.op or len(s.args) != len(p.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return binding


def apply_hypersubstitution(h, s):
    """Replace every function-variable node F(u1..un) by s[F] with x_i := u_i.

    Keys of ``s`` naming signature symbols replace those App nodes too
    (hypersubstitution of a type's own symbols).
    """
    if type(h) is Var:
        return h
    args = [apply_hypersubstitution(a, s) for a in h.args]
    if type(h) is FApp or h.op in s:
        try:
            image = s[h.op]
        except KeyError:
            raise KeyError(f"hypersubstitution undefined on {h.op}") from None
        bad = [v for v in variables(image) if v > len(args)]
        if bad:
            raise ValueError(f"image of {h.op} uses x{bad[0]} but {h.op} has arity {len(args)}")
        return substitute(image, {i + 1: a for i, a in enumerate(args)})
    return App(h.op, args)


# ---------------------------------------------------------------- printing

def _single_binary(t) -> str | None:
    ops = set()
    for _, s in subterm_occurrences(t):
        if type(s) is not Var:
            if type(s) is FApp or len(s.args) != 2:
                return None
            ops.add(s.op)
    return ops.pop() if len(ops) == 1 else None


def format_term(t, signature: SimilarityType | None = None, infix: bool | None = None) -> str:
    """Print a term.  A term over a single binary symbol prints as a minimally
    bracketed left-associated product ``x1*(x2*x3)``; everything else is prefix."""
    if infix is None:
        if signature is not None:
            infix = signature.arities == (2,)
        else:
            infix = _single_binary(t) is not None and t.size > 0
    if infix:
        return _fmt_infix(t)
    return _fmt_prefix(t)


def _fmt_prefix(t) -> str:
    if type(t) is Var:
        return f"x{t.index}"
    return f"{t.op}({','.join(_fmt_prefix(a) for a in t.args)})"


def _fmt_infix(t) -> str:
    if type(t) is Var:
        return f"x{t.index}"
    left, right = t.args
    ls = _fmt_infix(left)
    rs = _fmt_infix(right)
    if type(right) is not Var:
        rs = f"({rs})"
    return f"{ls}*{rs}"


def sort_key(t):
    return (t.size, format_term(t))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>\d+)|(?P<sym>[()*·^,]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r} at {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


_INDEXED = re.compile(r"(?:x\d+)+$")
_LETTERS = re.compile(r"[a-z]+$")


class _Parser:
    def __init__(self, text, signature, hyper, scope):
        self.toks = _tokenize(text)
        if not self.toks:
            raise TermSyntaxError("empty term")
        self.i = 0
        self.sig = signature
        self.hyper = hyper
        self.scope = scope
        self.binary = None
        if signature is not None and len(signature.binary_symbols()) == 1:
            self.binary = signature.binary_symbols()[0]
        elif signature is None:
            self.binary = "*"

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise TermSyntaxError(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        t = self.product()
        if self.i != len(self.toks):
            raise TermSyntaxError(f"trailing input at {self.peek()[1]!r}")
        return t

    def _mul(self, a, b):
        if self.binary is None:
            raise TermSyntaxError("juxtaposition/product needs a type with exactly one binary symbol")
        return App(self.binary, (a, b))

    def product(self):
        items = self.factor()
        while True:
            kind, val = self.peek()
            if val in ("*", "·"):
                self.take()
            elif kind != "name" and val != "(":
                break
            items.extend(self.factor())
        t = items[0]
        for u in items[1:]:
            t = self._mul(t, u)
        return t

    def factor(self):
        """Left-to-right factors; ``^k`` repeats the preceding letter or group."""
        items = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or int(val) < 1:
                raise TermSyntaxError("exponent must be a positive integer")
            items = items[:-1] + [items[-1]] * int(val)
        return items

    def atom(self):
        kind, val = self.take()
        if val == "(":
            t = self.product()
            self.take(")")
            return [t]
        if kind != "name":
            raise TermSyntaxError(f"unexpected {val!r}")
        if self.peek()[1] == "(" and self._is_function(val):
            return [self.application(val)]
        return self.word(val)

    def _is_function(self, name):
        if name[0].isupper():
            return True
        if self.sig is not None:
            return name in self.sig.names
        return not _INDEXED.match(name)

    def application(self, name):
        self.take("(")
        args = [self.product()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.product())
        self.take(")")
        if name[0].isupper():
            if not self.hyper:
                raise TermSyntaxError(f"function variable {name} is not allowed in a first-order term")
            return FApp(name, args)
        if self.sig is not None:
            try:
                n = self.sig.arity(name)
            except KeyError:
                raise TermSyntaxError(f"unknown symbol {name!r}") from None
            if n != len(args):
                raise TermSyntaxError(f"wrong child count for {name}: expected {n}, got {len(args)}")
        return App(name, args)

    def word(self, name):
        """A run of variables: x1x2 or shorthand letters like xxy."""
        scope = self.scope
        if _INDEXED.match(name):
            if scope.letters:
                raise TermSyntaxError("cannot mix indexed variables with shorthand letters")
            scope.indexed = True
            vs = [Var(int(d)) for d in re.findall(r"x(\d+)", name)]
        elif _LETTERS.match(name):
            if scope.indexed:
                raise TermSyntaxError("cannot mix indexed variables with shorthand letters")
            vs = [Var(scope.letters.setdefault(ch, len(scope.letters) + 1)) for ch in name]
        else:
            raise TermSyntaxError(f"cannot read {name!r} as variables")
        return vs


class _Scope:
    """Variable naming shared by both sides of an identity."""

    def __init__(self):
        self.letters = {}
        self.indexed = False


def _parse(text, signature, hyper, scope=None):
    return _Parser(text, signature, hyper, scope or _Scope()).parse()


def parse_term(text: str, signature: SimilarityType | None = None) -> Term:
    """Parse a first-order term.  Without a signature, symbols are unchecked and
    ``*``/juxtaposition build the binary symbol ``*``."""
    return _parse(text, signature, hyper=False)


def parse_hyperterm(text: str, signature: SimilarityType | None = None):
    return _parse(text, signature, hyper=True)


def parse_identity(text: str, signature: SimilarityType | None = None, hyper: bool = False) -> Identity:
    """``lhs = rhs`` (``≈`` also accepted); shorthand letters are shared by both sides."""
    parts = re.split(r"≈|=", text)
    if len(parts) != 2:
        raise TermSyntaxError(f"an identity needs exactly one '=': {text!r}")
    scope = _Scope()
    lhs = _parse(parts[0], signature, hyper, scope)
    rhs = _parse(parts[1], signature, hyper, scope)
    return Identity(lhs, rhs)


def parse_law(text: str) -> Identity:
    """Semigroup identity in shorthand, e.g. ``"xyxzxyx=xyzyx"`` or ``"(xy)z=x(yz)"``."""
    return parse_identity(text, SEMIGROUP)


# ---------------------------------------------------------------- identities

def _rename(t, mapping):
    if type(t) is Var:
        return Var(mapping[t.index])
    return type(t)(t.op, [_rename(a, mapping) for a in t.args])


def canonical_identity(eq: Identity) -> Identity:
    """Rename variables by first occurrence across lhs then rhs, and put the
    smaller side (op count, then printed form) on the left."""
    best = None
    for a, b in ((eq.lhs, eq.rhs), (eq.rhs, eq.lhs)):
        order = variables(a) + [v for v in variables(b) if v not in variables(a)]
        mapping = {v: i + 1 for i, v in enumerate(order)}
        a2, b2 = _rename(a, mapping), _rename(b, mapping)
        key = (sort_key(a2), sort_key(b2))
        if best is None or key < best[0]:
            best = (key, Identity(a2, b2))
    return best[1]


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _terms_exact(signature: SimilarityType, n: int, ops: int) -> tuple:
    if ops == 0:
        return tuple(Var(i) for i in range(1, n + 1))
    out = []
    for name, arity in signature.symbols:
        for split in _compositions(ops - 1, arity):
            for kids in product(*(_terms_exact(signature, n, c) for c in split)):
                out.append(App(name, kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(total, parts):
    if parts == 1:
        return ((total,),)
    return tuple((first,) + rest for first in range(total + 1)
                 for rest in _compositions(total - first, parts - 1))


def enumerate_terms(signature: SimilarityType, n: int, max_ops: int,
                    include_projections: bool = True) -> list:
    """All terms over x1..xn with at most ``max_ops`` operation symbols, sorted
    by (op count, printed form).  Bare variables appear iff include_projections."""
    if n < 1 or max_ops < 0:
        raise ValueError("need n >= 1 and max_ops >= 0")
    out = []
    for ops in range(0 if include_projections else 1, max_ops + 1):
        out.extend(sorted(_terms_exact(signature, n, ops), key=sort_key))
    return out


# ---------------------------------------------------------------- semigroup words

def term_to_word(t, op: str | None = None) -> tuple[int, ...] | None:
    """Leaf sequence of a term built from one binary symbol (None otherwise)."""
    out = []
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Var:
            out.append(s.index)
        elif type(s) is FApp or len(s.args) != 2 or (op is not None and s.op != op):
            return None
        else:
            op = s.op
            stack.append(s.args[1])
            stack.append(s.args[0])
    return tuple(out)


def word_to_term(word, op: str = "*"):
    """Left-associated product of variables x_{w[0]} x_{w[1]} ..."""
    if not word:
        raise ValueError("semigroup words are nonempty")
    t = Var(word[0])
    for v in word[1:]:
        t = App(op, (t, Var(v)))
    return t


def evaluate(t, ops, assignment):
    """Value of t when symbol ``name`` is interpreted by ``ops[name]`` (a callable
    or a nested table indexable by argument values)."""
    if type(t) is Var:
        return assignment[t.index]
    f = ops[t.op]
    vals = [evaluate(a, ops, assignment) for a in t.args]
    if callable(f):
        return f(*vals)
    for v in vals:
        f = f[v]
    return f
