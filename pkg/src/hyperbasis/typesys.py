"""Nice similarity types and the arity-preserving order between them.

A type is a finite collection of named operation symbols, each of arity >= 1.
The order is generated by two moves: delete a symbol, or lower one arity by 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

__all__ = [
    "SimilarityType",
    "InvalidType",
    "parse_type",
    "lower_covers",
    "type_leq",
    "strict_lt",
    "downward_closure",
    "all_types",
]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class InvalidType(ValueError):
    """Malformed similarity type."""


@dataclass(frozen=True)
class SimilarityType:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.symbols:
            raise InvalidType("a similarity type needs at least one symbol")
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InvalidType(f"duplicate symbol names in {names}")
        for name, arity in self.symbols:
            if not isinstance(arity, int) or arity < 1:
                raise InvalidType(f"symbol {name!r} has arity {arity}; constants are not allowed")
        canon = tuple(sorted(self.symbols, key=lambda s: (-s[1], s[0])))
        object.__setattr__(self, "symbols", canon)

    @classmethod
    def of(cls, *arities: int) -> SimilarityType:
        """Auto-named type, e.g. ``SimilarityType.of(2, 1)``."""
        return cls(tuple((f"f{i + 1}", a) for i, a in enumerate(arities)))

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.symbols)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise KeyError(name)

    def symbols_of_arity(self, n: int) -> list[str]:
        return [s for s, a in self.symbols if a == n]

    def binary_symbols(self) -> list[str]:
        return self.symbols_of_arity(2)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "<" + ",".join(str(a) for a in self.arities) + ">"

    def describe(self) -> str:
        return "<" + ", ".join(f"{n}:{a}" for n, a in self.symbols) + ">"


def parse_type(text: str) -> SimilarityType:
    """Parse ``"2,1"`` or ``"dot:2,circ:2"``; unnamed symbols become f1, f2, ..."""
    text = text.strip().strip("<>").strip()
    if not text:
        raise InvalidType("empty type")
    symbols = []
    for i, item in enumerate(text.split(",")):
        item = item.strip()
        if ":" in item:
            name, _, ar = item.partition(":")
            name = name.strip()
            if not _NAME.match(name):
                raise InvalidType(f"bad symbol name {name!r}")
        else:
            name, ar = f"f{i + 1}", item
        try:
            arity = int(ar)
        except ValueError:
            raise InvalidType(f"bad arity {ar!r}") from None
        if arity < 1:
            raise InvalidType(f"zero or negative arity {arity} (no constants allowed)")
        symbols.append((name, arity))
    return SimilarityType(tuple(symbols))


def _from_arities(arities) -> SimilarityType:
    return SimilarityType.of(*sorted(arities, reverse=True))


def lower_covers(tau: SimilarityType) -> set[SimilarityType]:
    """One generator move down: drop a symbol (keeping >= 1) or decrement an arity (keeping >= 1).

    Results are returned auto-named, since the order only sees arities.
    """
    ars = list(tau.arities)
    out = set()
    for i in range(len(ars)):
        if len(ars) >= 2:
            out.add(_from_arities(ars[:i] + ars[i + 1:]))
        if ars[i] >= 2:
            out.add(_from_arities(ars[:i] + [ars[i] - 1] + ars[i + 1:]))
    return out


def type_leq(sigma: SimilarityType, tau: SimilarityType) -> bool:
    """sigma below-or-equal tau: an arity-nondecreasing injection of sigma's symbols into tau's.

    Greedy on descending-sorted arities decides the injection.
    """
    s, t = sigma.arities, tau.arities
    if len(s) > len(t):
        return False
    return all(a <= b for a, b in zip(s, t))


def strict_lt(sigma: SimilarityType, tau: SimilarityType) -> bool:
    return type_leq(sigma, tau) and sigma.arities != tau.arities


def downward_closure(tau: SimilarityType) -> set[tuple[int, ...]]:
    """Arity signatures reachable from tau by repeated lower_covers (tau included)."""
    seen = {tau.arities}
    stack = [tau]
    while stack:
        cur = stack.pop()
        for low in lower_covers(cur):
            if low.arities not in seen:
                seen.add(low.arities)
                stack.append(low)
    return seen


def all_types(max_symbols: int, max_arity: int) -> list[SimilarityType]:
    """Every type (up to renaming) with 1..max_symbols symbols of arity 1..max_arity."""
    seen = set()
    out = []
    for n in range(1, max_symbols + 1):
        for ars in product(range(1, max_arity + 1), repeat=n):
            key = tuple(sorted(ars, reverse=True))
            if key not in seen:
                seen.add(key)
                out.append(_from_arities(key))
    return out
