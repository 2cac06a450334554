"""Relatively free finitely generated semigroups by bounded instance closure.

Words over the generators a, b, c, ... of length at most L are put into
union-find.  Every instance of an identity (variables := nonempty words) whose
two sides fit in the bound is merged, and merges are propagated to one-letter
left and right extensions, which makes the partition the congruence generated
by the instances inside the bound.  Every merge is a valid consequence of the
identities, so the class count can only overestimate the true cardinality.

When the representatives are closed under right multiplication, the classes
carry a multiplication table.  If that table is associative and satisfies the
identities it is a model generated by the generators, which bounds the
cardinality from below; together with sound merges this makes the count
exact.  Table violations are themselves sound merges, so they are folded back
in ("repair") until the table is a model.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .rewrite import Budget, word_derive_bounded

__all__ = [
    "FreeAlgebraReport", "BoundExceeded", "parse_laws", "instance_merges",
    "free_semigroup", "closure_census", "multiplication_table", "cayley_table",
    "search_models", "satisfies", "evaluate_word", "xxyyz_reductions",
    "format_cayley", "LETTERS",
]

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class BoundExceeded(RuntimeError):
    pass


def parse_laws(text) -> list[tuple[str, str]]:
    """``"xxyyz=xxyxxyz; xyyzz=xyzzyzz"`` -> word pairs (exponents like x^2 allowed)."""
    if not isinstance(text, str):
        return [tuple(p) for p in text]
    out = []
    for part in text.replace(";", ",").split(","):
        part = part.strip()
        if not part:
            continue
        sides = part.replace("≈", "=").split("=")
        if len(sides) != 2:
            raise ValueError(f"a law needs exactly one '=': {part!r}")
        out.append(tuple(_expand_powers(s.strip()) for s in sides))
    if not out:
        raise ValueError("no laws given")
    return out


def _expand_powers(s):
    out = []
    i = 0
    while i < len(s):
        c = s[i]
        if not c.isalpha():
            raise ValueError(f"bad character {c!r} in law side {s!r}")
        i += 1
        if i < len(s) and s[i] == "^":
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            if j == i + 1:
                raise ValueError(f"missing exponent in {s!r}")
            out.append(c * int(s[i + 1:j]))
            i = j
        else:
            out.append(c)
    if not out:
        raise ValueError("empty law side")
    return "".join(out)


# ---------------------------------------------------------------- instances

def _instances(laws, alphabet, L):
    """Bare instances (sigma(lhs), sigma(rhs)) with both sides of length <= L."""
    for lhs, rhs in laws:
        vs = list(dict.fromkeys(lhs + rhs))
        cl = [lhs.count(v) for v in vs]
        cr = [rhs.count(v) for v in vs]
        for lens in _length_vectors(cl, cr, L):
            pools = [list(itertools.product(alphabet, repeat=n)) for n in lens]
            for images in itertools.product(*pools):
                sub = {v: "".join(img) for v, img in zip(vs, images)}
                yield "".join(sub[c] for c in lhs), "".join(sub[c] for c in rhs)


def _length_vectors(cl, cr, L):
    def rec(k, used_l, used_r, acc):
        if k == len(cl):
            yield tuple(acc)
            return
        n = 1
        while used_l + cl[k] * n + sum(cl[k + 1:]) <= L and used_r + cr[k] * n + sum(cr[k + 1:]) <= L:
            yield from rec(k + 1, used_l + cl[k] * n, used_r + cr[k] * n, acc + [n])
            n += 1
    yield from rec(0, 0, 0, [])


def instance_merges(laws, alphabet, L):
    """Pairs (u, v) of words of length <= L where v is u with one factor
    sigma(lhs) replaced by sigma(rhs), sigma nonempty.  Each pair once."""
    laws = parse_laws(laws)
    seen = set()
    for sl, sr in _instances(laws, alphabet, L):
        room = L - max(len(sl), len(sr))
        for plen in range(room + 1):
            for slen in range(room - plen + 1):
                for p in itertools.product(alphabet, repeat=plen):
                    for q in itertools.product(alphabet, repeat=slen):
                        u = "".join(p) + sl + "".join(q)
                        v = "".join(p) + sr + "".join(q)
                        if u != v and (u, v) not in seen and (v, u) not in seen:
                            seen.add((u, v))
                            yield u, v


# ---------------------------------------------------------------- closure

class _Closure:
    """Union-find over all words of length 1..L, words encoded as integers."""

    def __init__(self, k, L, max_words):
        self.k, self.L = k, L
        off = [0, 0]
        for n in range(1, L + 1):
            off.append(off[-1] + k ** n)
        if off[L + 1] > max_words:
            raise BoundExceeded(f"{off[L + 1]} words exceed the budget of {max_words}")
        self.off = off
        self.N = off[L + 1]
        self.parent = list(range(self.N))
        self.size = [1] * self.N
        self.minrep = list(range(self.N))
        self.pow = [k ** n for n in range(L + 2)]

    def length(self, i):
        n = 1
        while self.off[n + 1] <= i:
            n += 1
        return n

    def wid(self, w):
        v = 0
        for ch in w:
            v = v * self.k + (ord(ch) - 97)
        return self.off[len(w)] + v

    def word(self, i):
        n = self.length(i)
        v = i - self.off[n]
        out = []
        for _ in range(n):
            out.append(LETTERS[v % self.k])
            v //= self.k
        return "".join(reversed(out))

    def find(self, x):
        parent = self.parent
        r = x
        while parent[r] != r:
            r = parent[r]
        while parent[x] != r:
            parent[x], x = r, parent[x]
        return r

    def union(self, a, b):
        parent, size, minrep, off, pow_, k, L = (
            self.parent, self.size, self.minrep, self.off, self.pow, self.k, self.L)
        find = self.find
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            ma, mb = minrep[ra], minrep[rb]
            parent[rb] = ra
            size[ra] += size[rb]
            if mb < ma:
                minrep[ra] = mb
            # ids are shortlex ordered, so minrep is the shortest member
            na, nb = self.length(ma), self.length(mb)
            if na < L and nb < L:
                va, vb = ma - off[na], mb - off[nb]
                for g in range(k):
                    queue.append((off[na + 1] + va * k + g, off[nb + 1] + vb * k + g))
                    queue.append((off[na + 1] + g * pow_[na] + va, off[nb + 1] + g * pow_[nb] + vb))

    def roots(self):
        return [i for i in range(self.N) if self.parent[i] == i]


def closure_census(laws, k, L, max_words=20_000_000):
    """Closure at bound L: (closure object, sorted representative ids)."""
    cl = _Closure(k, L, max_words)
    alphabet = LETTERS[:k]
    for u, v in _instances(parse_laws(laws), alphabet, L):
        cl.union(cl.wid(u), cl.wid(v))
    reps = sorted(cl.minrep[r] for r in cl.roots())
    return cl, reps


# ---------------------------------------------------------------- tables & models

def _right_table(cl, reps):
    """Class x generator -> class, or None if some product leaves the bound."""
    index = {cl.find(r): i for i, r in enumerate(reps)}
    table = []
    for r in reps:
        n = cl.length(r)
        if n >= cl.L:
            return None
        v = r - cl.off[n]
        row = []
        for g in range(cl.k):
            c = index[cl.find(cl.off[n + 1] + v * cl.k + g)]
            if cl.length(reps[c]) >= cl.L:
                return None
            row.append(c)
        table.append(row)
    return table


def _full_table(right, rep_words, gen_classes):
    n = len(right)
    T = np.empty((n, n), dtype=np.int64)
    R = np.asarray(right, dtype=np.int64)
    for j, w in enumerate(rep_words):
        col = np.arange(n)
        for ch in w:
            col = R[col, ord(ch) - 97]
        T[:, j] = col
    return T


def evaluate_word(table, word, assignment):
    """Value of a variable word under ``assignment`` (var -> element or index array)."""
    T = np.asarray(table)
    c = assignment[word[0]]
    for ch in word[1:]:
        c = T[c, assignment[ch]]
    return c


def _violations(T, laws, limit):
    """Sound merge pairs (i, j) where a law fails in the table T."""
    n = len(T)
    out = []
    idx = np.arange(n)
    for lhs, rhs in laws:
        tail = lhs[-1]
        stripped = (len(lhs) > 1 and len(rhs) > 1 and rhs[-1] == tail
                    and lhs.count(tail) == 1 and rhs.count(tail) == 1)
        lw, rw = (lhs[:-1], rhs[:-1]) if stripped else (lhs, rhs)
        vs = list(dict.fromkeys(lw + rw))
        if stripped:
            _, row_label = np.unique(T, axis=0, return_inverse=True)
            row_label = row_label.reshape(-1)
        lead, last = vs[:-2], vs[-2:]
        grids = np.meshgrid(*([idx] * len(last)), indexing="ij")
        for vals in itertools.product(range(n), repeat=len(lead)):
            asg = dict(zip(lead, vals))
            asg.update(zip(last, grids))
            a = np.asarray(evaluate_word(T, lw, asg)).reshape(-1)
            b = np.asarray(evaluate_word(T, rw, asg)).reshape(-1)
            if stripped:
                bad = row_label[a] != row_label[b]
                for x, y in zip(a[bad].tolist(), b[bad].tolist()):
                    diff = np.nonzero(T[x] != T[y])[0]
                    out.extend(zip(T[x, diff].tolist(), T[y, diff].tolist()))
                    if len(out) >= limit:
                        return out
            else:
                bad = a != b
                out.extend(zip(a[bad].tolist(), b[bad].tolist()))
                if len(out) >= limit:
                    return out
    return out


def _is_associative(T):
    T = np.asarray(T)
    return all(np.array_equal(T[T[a]], T[a][T]) for a in range(len(T)))


def _quotient(T, gens, pairs):
    """Quotient of the table by the congruence generated by ``pairs``.

    Returns (new table, old-class -> new-class map)."""
    n = len(T)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = list(pairs)
    while queue:
        a, b = queue.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = ra
        for g in gens:
            queue.append((int(T[a, g]), int(T[b, g])))
            queue.append((int(T[g, a]), int(T[g, b])))
    roots = sorted({find(i) for i in range(n)})
    new = {r: i for i, r in enumerate(roots)}
    m = np.array([new[find(i)] for i in range(n)], dtype=np.int64)
    r = np.array(roots)
    return m[T[r][:, r]], m


def satisfies(table, laws) -> bool:
    """Whether the table is associative and satisfies every law for all assignments."""
    T = np.asarray(table, dtype=np.int64)
    return _is_associative(T) and not _violations(T, parse_laws(laws), 1)


# ---------------------------------------------------------------- report

@dataclass
class FreeAlgebraReport:
    laws: list
    generators: int
    bound: int
    classes: list[str] = field(repr=False)
    status: str                      # "stable" or "bound_exceeded"
    census: dict = field(default_factory=dict)   # bound -> raw class count
    raw_count: int | None = None     # classes before table repair
    repair_rounds: int = 0
    certified: bool = False
    right_table: list | None = field(default=None, repr=False)  # class x generator -> class
    table: np.ndarray | None = field(default=None, repr=False)  # full Cayley table
    _label: object = field(default=None, repr=False)
    _closure: object = field(default=None, repr=False)

    @property
    def stable(self) -> bool:
        return self.status == "stable"

    @property
    def cardinality(self) -> int | None:
        return len(self.classes) if self.stable else None

    def class_of(self, word: str) -> int:
        """Class index of a word of length <= bound."""
        cl = self._closure
        if not 1 <= len(word) <= cl.L:
            raise ValueError(f"word length must be in 1..{cl.L}")
        return int(self._label[cl.find(cl.wid(word))])

    def same_class(self, u: str, v: str) -> bool:
        return self.class_of(u) == self.class_of(v)

    def to_json(self) -> dict:
        return {
            "laws": ["=".join(l) for l in self.laws],
            "generators": self.generators,
            "bound": self.bound,
            "status": self.status,
            "cardinality": self.cardinality,
            "certified": self.certified,
            "raw_count": self.raw_count,
            "repair_rounds": self.repair_rounds,
            "census": {str(k): v for k, v in self.census.items()},
            "classes": self.classes,
            "right_table": self.right_table,
            "table": None if self.table is None else self.table.tolist(),
        }


def free_semigroup(laws, k: int, L: int | None = None, max_words: int = 20_000_000,
                   max_bound: int = 40, repair_limit: int = 200_000) -> FreeAlgebraReport:
    """k-generated relatively free semigroup of the variety defined by ``laws``.

    With ``L=None`` the bound starts at twice the longest law side and grows by
    2 until the census agrees at L-1 and L and the representatives are closed
    under the generators.  The class table is then certified as a model,
    folding any law violations back in as sound merges.
    """
    if k < 1:
        raise ValueError("need at least one generator")
    laws = parse_laws(laws)
    longest = max(max(len(a), len(b)) for a, b in laws)
    bounds = [L] if L is not None else range(2 * longest, max_bound + 1, 2)
    census = {}
    last = None
    for bound in bounds:
        try:
            if bound - 1 not in census and bound - 1 >= 1:
                census[bound - 1] = len(closure_census(laws, k, bound - 1, max_words)[1])
            cl, reps = closure_census(laws, k, bound, max_words)
        except BoundExceeded:
            break
        census[bound] = len(reps)
        last = (bound, cl, reps)
        right = _right_table(cl, reps)
        if right is not None and census[bound - 1] == census[bound]:
            return _certify(laws, k, bound, cl, reps, right, census, repair_limit)
    bound, cl, reps = last if last else (bounds[0], None, [])
    return FreeAlgebraReport(laws, k, bound, [cl.word(r) for r in reps] if cl else [],
                             "bound_exceeded", census, raw_count=len(reps), _closure=cl)


def _certify(laws, k, bound, cl, reps, right, census, repair_limit):
    words = [cl.word(r) for r in reps]
    gens = [words.index(LETTERS[g]) for g in range(k)]
    T = _full_table(right, words, gens)
    label = np.full(cl.N, -1, dtype=np.int64)
    roots = {cl.find(r): i for i, r in enumerate(reps)}
    for root, i in roots.items():
        label[root] = i
    mapping = np.arange(len(reps))
    rounds = 0
    while True:
        pairs = _violations(T, laws, repair_limit)
        if not pairs:
            break
        rounds += 1
        T, m = _quotient(T, gens, pairs)
        mapping = m[mapping]
        gens = [int(m[g]) for g in gens]
    # shortlex-least word in each final class (rep ids are shortlex ordered)
    final_words = [None] * len(T)
    for i, w in enumerate(words):
        c = mapping[i]
        if final_words[c] is None:
            final_words[c] = w
    order = sorted(range(len(T)), key=lambda c: (len(final_words[c]), final_words[c]))
    perm = np.empty(len(T), dtype=np.int64)
    perm[order] = np.arange(len(T))
    T = perm[T[np.ix_(order, order)]]
    mapping = perm[mapping]
    label[label >= 0] = mapping[label[label >= 0]]
    classes = [final_words[c] for c in order]
    gen_cls = [classes.index(LETTERS[g]) for g in range(k)]
    right_table = T[:, gen_cls].tolist()
    certified = _is_associative(T) and not _violations(T, laws, 1)
    return FreeAlgebraReport(laws, k, bound, classes, "stable", census,
                             raw_count=len(reps), repair_rounds=rounds, certified=certified,
                             right_table=right_table, table=T, _label=label, _closure=cl)


def multiplication_table(report: FreeAlgebraReport) -> list[list[int]]:
    """Class x generator -> class (rows follow report.classes, columns a, b, ...)."""
    if not report.stable:
        raise ValueError("report is not stable")
    return report.right_table


def cayley_table(report: FreeAlgebraReport) -> np.ndarray:
    if not report.stable:
        raise ValueError("report is not stable")
    return report.table


def format_cayley(report: FreeAlgebraReport, full: bool = False) -> str:
    """Plain-text table: one row per class, ``rep: products``."""
    if not report.stable:
        raise ValueError("report is not stable")
    cols = report.classes if full else list(LETTERS[:report.generators])
    rows = report.table.tolist() if full else report.right_table
    width = max(len(c) for c in report.classes)
    lines = [" " * width + " | " + " ".join(cols)]
    for rep, row in zip(report.classes, rows):
        lines.append(rep.rjust(width) + " | " + " ".join(str(x) for x in row))
    return "\n".join(lines)


# ---------------------------------------------------------------- small models

def search_models(laws, n: int) -> list[list[list[int]]]:
    """Every associative n x n table (n <= 4) satisfying the laws, unreduced."""
    if not 1 <= n <= 4:
        raise ValueError("exhaustive model search supports 1 <= n <= 4")
    laws = parse_laws(laws)
    T = [[-1] * n for _ in range(n)]
    cells = [(i, j) for i in range(n) for j in range(n)]
    out = []

    def consistent():
        for x in range(n):
            for y in range(n):
                xy = T[x][y]
                if xy < 0:
                    continue
                for z in range(n):
                    yz = T[y][z]
                    if yz < 0:
                        continue
                    a, b = T[xy][z], T[x][yz]
                    if a >= 0 and b >= 0 and a != b:
                        return False
        return True

    def rec(c):
        if c == len(cells):
            if _satisfies_small(T, laws, n):
                out.append([row[:] for row in T])
            return
        i, j = cells[c]
        for v in range(n):
            T[i][j] = v
            if consistent():
                rec(c + 1)
        T[i][j] = -1

    rec(0)
    return out


def _satisfies_small(T, laws, n):
    for lhs, rhs in laws:
        vs = list(dict.fromkeys(lhs + rhs))
        for vals in itertools.product(range(n), repeat=len(vs)):
            a = dict(zip(vs, vals))
            x = a[lhs[0]]
            for ch in lhs[1:]:
                x = T[x][a[ch]]
            y = a[rhs[0]]
            for ch in rhs[1:]:
                y = T[y][a[ch]]
            if x != y:
                return False
    return True


# ---------------------------------------------------------------- xxyyz reductions

XXYYZ = [("xxyyz", "xxyxxyz")]


def _runs(w):
    return [(c, len(list(g))) for c, g in itertools.groupby(w)]


def _reduce_tail(z):
    """All but the last run of z reduced modulo 2 (vanishing runs dropped)."""
    runs = _runs(z)
    parts = [c * (e % 2) for c, e in runs[:-1]] + [runs[-1][0] * runs[-1][1]]
    return "".join(parts)


def _candidate_steps(w):
    """Rewrites proposed by the reduction rules, leftmost trigger first."""
    for x, y in (("a", "b"), ("b", "a")):
        # x^2 y^5 z -> x^2 y^3 z
        t = x * 2 + y * 5
        i = w.find(t)
        if i >= 0 and i + len(t) < len(w):
            yield w[:i] + x * 2 + y * 3 + w[i + len(t):]
    triggers = []
    for x, y in (("a", "b"), ("b", "a")):
        for t in (x * 2 + y * 3, x * 2 + y * 2 + x * 2):
            i = w.find(t)
            if i >= 0 and i + len(t) < len(w):
                triggers.append((i + len(t), t))
    for end, _ in sorted(triggers):
        z = w[end:]
        z2 = _reduce_tail(z)
        if z2 and z2 != z:
            yield w[:end] + z2


def xxyyz_reductions(w: str, certify: bool = True, budget: Budget | None = None,
                     return_steps: bool = False):
    """Shorten a word over {a, b} in the variety xxyyz = xxyxxyz.

    After a factor x^2y^3 or x^2y^2x^2 (x, y the two letters in either order)
    the remaining suffix Z has every run except its last reduced modulo 2, and
    x^2y^5 before a nonempty suffix shrinks to x^2y^3.  Rules apply until none
    fires.  With ``certify`` each step must be proved by word search or it is
    not taken; if no certified step remains the word is returned as is.
    """
    if not w or set(w) - {"a", "b"}:
        raise ValueError("xxyyz_reductions works on nonempty words over {a, b}")
    budget = budget or Budget(max_visited=200_000)
    steps = []
    while True:
        for cand in _candidate_steps(w):
            if len(cand) >= len(w):
                continue
            if certify:
                proof = word_derive_bounded(XXYYZ, (w, cand), budget)
                if proof is None:
                    continue
                steps.append((w, cand, proof))
            else:
                steps.append((w, cand, None))
            w = cand
            break
        else:
            return (w, steps) if return_steps else w
