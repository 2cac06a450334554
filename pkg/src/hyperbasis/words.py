"""Finite words: Thue-Morse, square-free ternary words, squares, unary-term bridge."""
from __future__ import annotations

from .term import App, Term, Var
from .typesys import SimilarityType

__all__ = [
    "thue_morse", "ternary_squarefree", "is_square_free", "square_factors",
    "has_overlap", "word_to_unary_term", "SQUAREFREE_MORPHISM",
]

SQUAREFREE_MORPHISM = {"a": "abc", "b": "ac", "c": "b"}


def thue_morse(n: int) -> list[int]:
    """First n letters: t(i) is the parity of the number of 1 bits of i."""
    if n < 0:
        raise ValueError("length must be >= 0")
    return [bin(i).count("1") & 1 for i in range(n)]


def ternary_squarefree(n: int) -> str:
    """Prefix of length n of the fixed point of a->abc, b->ac, c->b.

    The prefix is scanned for squares before it is returned.
    """
    if n < 0:
        raise ValueError("length must be >= 0")
    w = "a"
    while len(w) < n:
        w = "".join(SQUAREFREE_MORPHISM[c] for c in w)
    w = w[:n]
    if not is_square_free(w):
        raise AssertionError(f"morphism produced a square in a prefix of length {n}")
    return w


def square_factors(w) -> list[tuple[int, object]]:
    """Every occurrence (start, root) of a factor root·root, by start then root length."""
    out = []
    n = len(w)
    for i in range(n):
        for p in range(1, (n - i) // 2 + 1):
            if w[i:i + p] == w[i + p:i + 2 * p]:
                out.append((i, w[i:i + p]))
    return out


def is_square_free(w) -> bool:
    """No factor vv with v nonempty.

    Linear-space scan: for each period p, count the run of positions i with
    w[i] == w[i+p]; a run of length p is a square of period p.
    """
    n = len(w)
    for p in range(1, n // 2 + 1):
        run = 0
        for i in range(n - p):
            if w[i] == w[i + p]:
                run += 1
                if run >= p:
                    return False
            else:
                run = 0
    return True


def has_overlap(w) -> bool:
    """Whether w contains a factor c v c v c (c a letter, v possibly empty)."""
    n = len(w)
    for p in range(1, (n - 1) // 2 + 1):
        run = 0
        for i in range(n - p):
            if w[i] == w[i + p]:
                run += 1
                if run >= p + 1:
                    return True
            else:
                run = 0
    return False


def word_to_unary_term(w, letter_map: dict, signature: SimilarityType | None = None) -> Term:
    """Read w left to right as outermost to innermost unary symbols applied to x1."""
    if signature is not None:
        for sym in set(letter_map[c] for c in w):
            if signature.arity(sym) != 1:
                raise ValueError(f"symbol {sym!r} is not unary")
    t: Term = Var(1)
    for c in reversed(w):
        if c not in letter_map:
            raise KeyError(f"letter {c!r} has no symbol")
        t = App(letter_map[c], (t,))
    return t
