"""Bounded equational derivation with checkable proofs.

Two search spaces share one contract:

* terms: rules are applied at any position in either direction;
* flat semigroup words: associativity is implicit, variables range over
  nonempty words, and a rule instance rewrites one factor.

A word proof can be lifted to a term proof that uses an explicit
associativity axiom, so every semigroup derivation is also checkable by
``check_proof``.  Search results are a proof or ``None`` (unknown within
budget); ``None`` is never a refutation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .term import (App, Identity, Var, canonical_identity, format_term, match,
                   replace_at, sort_key, subterm_at, subterm_occurrences,
                   substitute, term_to_word, variables, word_to_term)

__all__ = [
    "Budget", "Step", "Proof", "WordStep", "WordProof",
    "apply_rule_at", "derive_bounded", "check_proof", "first_failure",
    "word_derive_bounded", "check_word_proof", "word_rule_matches",
    "is_associativity", "associativity_law", "lift_word_proof", "proof_to_json", "proof_from_json",
    "format_proof",
]

LR, RL = "LR", "RL"


@dataclass(frozen=True)
class Budget:
    """Search limits.  ``max_term_ops=None`` means goal size + 8."""

    max_term_ops: int | None = None
    max_visited: int = 2_000_000
    max_depth: int = 40

    def __post_init__(self):
        for name in ("max_visited", "max_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_term_ops is not None and self.max_term_ops < 1:
            raise ValueError("max_term_ops must be positive")

    def term_limit(self, goal: Identity) -> int:
        if self.max_term_ops is not None:
            return self.max_term_ops
        return max(goal.lhs.size, goal.rhs.size) + 8


@dataclass(frozen=True)
class Step:
    axiom: int
    direction: str
    position: tuple[int, ...]
    substitution: dict = field(hash=False, compare=True)

    def flipped(self) -> Step:
        return Step(self.axiom, RL if self.direction == LR else LR, self.position, self.substitution)


@dataclass
class Proof:
    steps: list[Step]

    def reversed(self) -> Proof:
        return Proof([s.flipped() for s in reversed(self.steps)])

    def __len__(self):
        return len(self.steps)


def _sides(rule: Identity, direction: str):
    if direction == LR:
        return rule.lhs, rule.rhs
    if direction == RL:
        return rule.rhs, rule.lhs
    raise ValueError(f"direction must be LR or RL, not {direction!r}")


def _free_target_vars(rule, direction):
    src, dst = _sides(rule, direction)
    bound = set(variables(src))
    return [v for v in variables(dst) if v not in bound]


def apply_rule_at(t, rule: Identity, direction: str, position, extra=None):
    """Rewrite the subterm at ``position`` with ``rule``; None when it does not match.

    Target-side variables absent from the source side take their values from
    ``extra`` (default: themselves).
    """
    sub = subterm_at(t, position)
    src, dst = _sides(rule, direction)
    sigma = match(src, sub)
    if sigma is None:
        return None
    for v in _free_target_vars(rule, direction):
        sigma[v] = (extra or {}).get(v, Var(v))
    return replace_at(t, position, substitute(dst, sigma))


def first_failure(axioms, goal: Identity, proof: Proof):
    """None if the proof replays goal.lhs to goal.rhs, else (step index, reason)."""
    cur = goal.lhs
    for k, step in enumerate(proof.steps):
        if not 0 <= step.axiom < len(axioms):
            return k, f"no axiom {step.axiom}"
        try:
            src, dst = _sides(axioms[step.axiom], step.direction)
            sub = subterm_at(cur, step.position)
        except (ValueError, IndexError) as exc:
            return k, str(exc)
        try:
            lhs_inst = substitute(src, step.substitution)
            rhs_inst = substitute(dst, step.substitution)
        except KeyError as exc:
            return k, f"substitution incomplete: {exc}"
        if lhs_inst != sub:
            return k, f"subterm {format_term(sub)} is not an instance of the rule's source side"
        cur = replace_at(cur, step.position, rhs_inst)
    if cur != goal.rhs:
        return len(proof.steps), f"proof ends at {format_term(cur)}, not {format_term(goal.rhs)}"
    return None


def check_proof(axioms, goal: Identity, proof: Proof) -> bool:
    return first_failure(axioms, goal, proof) is None


# ---------------------------------------------------------------- term search

def _term_neighbors(t, axioms, limit, fillers):
    """Deterministic (axiom, direction, position) order; yields (step, term)."""
    occs = subterm_occurrences(t)
    for i, rule in enumerate(axioms):
        for d in (LR, RL):
            src, dst = _sides(rule, d)
            free = _free_target_vars(rule, d)
            for path, sub in occs:
                sigma = match(src, sub)
                if sigma is None:
                    continue
                for fill in _fillings(free, fillers):
                    s2 = dict(sigma)
                    s2.update(fill)
                    new = replace_at(t, path, substitute(dst, s2))
                    if new.size <= limit:
                        yield Step(i, d, path, s2), new


def _fillings(free, fillers):
    if not free:
        yield {}
        return
    from itertools import product
    for combo in product(fillers, repeat=len(free)):
        yield dict(zip(free, combo))


def _bidirectional(start, goal, neighbors, max_visited, max_depth, reverse_step):
    """Meet-in-the-middle BFS over a symmetric step relation.

    Returns (steps start -> goal or None, nodes visited).
    """
    if start == goal:
        return [], 1
    parents = [{start: None}, {goal: None}]
    frontiers = [[start], [goal]]
    depths = [0, 0]
    visited = 2
    while frontiers[0] and frontiers[1] and depths[0] + depths[1] < max_depth:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = parents[side], parents[1 - side]
        nxt = []
        for node in frontiers[side]:
            for step, new in neighbors(node):
                if new in mine:
                    continue
                mine[new] = (node, step)
                visited += 1
                if new in other:
                    return _join(parents, new, reverse_step), visited
                if visited >= max_visited:
                    return None, visited
                nxt.append(new)
        frontiers[side] = nxt
        depths[side] += 1
    return None, visited


def _widening(base, limit):
    """Size caps tried in turn: base, base+2, ... up to limit."""
    caps = list(range(min(base, limit), limit, 2))
    return caps + [limit]


def _widened_search(start, goal, make_neighbors, base, limit, budget, reverse_step):
    """Run complete searches under growing size caps; visits count cumulatively."""
    spent = 0
    for cap in _widening(base, limit):
        steps, used = _bidirectional(start, goal, make_neighbors(cap),
                                     budget.max_visited - spent, budget.max_depth, reverse_step)
        spent += used
        if steps is not None:
            return steps
        if spent >= budget.max_visited:
            return None
    return None


def _join(parents, meet, reverse_step):
    fwd, bwd = parents
    left = []
    node = meet
    while fwd[node] is not None:
        prev, step = fwd[node]
        left.append(step)
        node = prev
    left.reverse()
    right = []
    node = meet
    while bwd[node] is not None:
        prev, step = bwd[node]
        right.append(reverse_step(step))
        node = prev
    return left + right


def associativity_law(op: str = "*") -> Identity:
    """x1 op (x2 op x3) = (x1 op x2) op x3, the form appended by ``associative=True``."""
    return Identity(App(op, (Var(1), App(op, (Var(2), Var(3))))),
                    App(op, (App(op, (Var(1), Var(2))), Var(3))))


def is_associativity(rule: Identity) -> str | None:
    """Binary symbol name if ``rule`` is the associative law for it (either orientation)."""
    t = rule.lhs if type(rule.lhs) is App else rule.rhs
    if type(t) is not App or len(t.args) != 2:
        return None
    if canonical_identity(rule) == canonical_identity(associativity_law(t.op)):
        return t.op
    return None


def derive_bounded(axioms, goal: Identity, budget: Budget | None = None,
                   associative: bool | None = None) -> Proof | None:
    """Search for a derivation of ``goal`` from ``axioms`` (both directions, any position).

    ``associative=None`` switches to the flat-word search when all terms use one
    binary symbol and an associativity axiom for it is listed; ``True`` forces it,
    appending the associative law as an extra axiom (index ``len(axioms)``) that
    the returned proof refers to.  Results are oriented lhs -> rhs regardless of
    which side the search started from.
    """
    budget = budget or Budget()
    axioms = list(axioms)
    if goal.lhs == goal.rhs:
        return Proof([])
    op = _common_binary(axioms, goal)
    assoc_index = None
    if op is not None and associative is not False:
        for i, ax in enumerate(axioms):
            if is_associativity(ax) == op:
                assoc_index = i
                break
        if assoc_index is None and associative:
            axioms.append(associativity_law(op))
            assoc_index = len(axioms) - 1
    elif associative:
        raise ValueError("associative search needs all terms over a single binary symbol")
    if not axioms:
        return None

    # search from the canonically smaller side so that s=t and t=s behave alike
    flip = (sort_key(goal.rhs), format_term(goal.rhs)) < (sort_key(goal.lhs), format_term(goal.lhs))
    a, b = (goal.rhs, goal.lhs) if flip else (goal.lhs, goal.rhs)

    if assoc_index is not None:
        proof = _derive_via_words(axioms, assoc_index, op, Identity(a, b), budget)
    else:
        limit = budget.term_limit(goal)
        fillers = [Var(v) for v in sorted(set(variables(goal.lhs)) | set(variables(goal.rhs)))]
        base = max(goal.lhs.size, goal.rhs.size)
        steps = _widened_search(
            a, b, lambda cap: (lambda t: _term_neighbors(t, axioms, cap, fillers)),
            base, limit, budget, Step.flipped)
        proof = None if steps is None else Proof(steps)
    if proof is None:
        return None
    return proof.reversed() if flip else proof


def _common_binary(axioms, goal):
    op = None
    for t in [goal.lhs, goal.rhs] + [s for ax in axioms for s in (ax.lhs, ax.rhs)]:
        for _, s in subterm_occurrences(t):
            if type(s) is Var:
                continue
            if len(s.args) != 2 or (op is not None and s.op != op):
                return None
            op = s.op
    return op


# ---------------------------------------------------------------- word search

_ALPHA = "abcdefghijklmnopqrstuvwyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _as_str(word):
    if isinstance(word, str):
        return word
    return "".join(_ALPHA[i - 1] for i in word)


@dataclass(frozen=True)
class WordStep:
    axiom: int
    direction: str
    start: int
    substitution: dict = field(hash=False)


@dataclass
class WordProof:
    """Rewrite steps with the intermediate words (``words[0]`` is the start)."""

    steps: list[WordStep]
    words: list[str]

    def __len__(self):
        return len(self.steps)


def _word_axioms(axioms):
    out = []
    for ax in axioms:
        if isinstance(ax, Identity):
            lw, rw = term_to_word(ax.lhs), term_to_word(ax.rhs)
            if lw is None or rw is None:
                raise ValueError(f"{ax} is not a semigroup identity")
            ax = (lw, rw)
        out.append((tuple(ax[0]) if not isinstance(ax[0], str) else tuple(ax[0]),
                    tuple(ax[1]) if not isinstance(ax[1], str) else tuple(ax[1])))
    return out


def word_rule_matches(pattern, w: str, start: int, binding=None):
    """All (end, binding) with pattern instantiated to w[start:end]; images nonempty."""
    binding = dict(binding or {})
    out = []
    n = len(w)

    def rec(k, p):
        if k == len(pattern):
            out.append((p, dict(binding)))
            return
        var = pattern[k]
        img = binding.get(var)
        if img is not None:
            if w.startswith(img, p):
                rec(k + 1, p + len(img))
            return
        rest = 0
        for later in pattern[k + 1:]:
            b = binding.get(later)
            rest += len(b) if b is not None else 1
        for end in range(p + 1, n - rest + 1):
            binding[var] = w[p:end]
            rec(k + 1, end)
        binding.pop(var, None)

    rec(0, start)
    return out


def _instantiate(pattern, binding):
    return "".join(binding[v] for v in pattern)


def _word_neighbors(w, axioms, max_len, letters):
    for i, (lhs, rhs) in enumerate(axioms):
        for d, (src, dst) in ((LR, (lhs, rhs)), (RL, (rhs, lhs))):
            free = [v for v in dict.fromkeys(dst) if v not in src]
            for start in range(len(w)):
                for end, binding in word_rule_matches(src, w, start):
                    for fill in _fillings(free, letters):
                        b = dict(binding)
                        b.update(fill)
                        new = w[:start] + _instantiate(dst, b) + w[end:]
                        if len(new) <= max_len:
                            yield WordStep(i, d, start, b), new


def check_word_proof(axioms, goal, proof: WordProof) -> bool:
    """Replay a word proof: each step must rewrite a factor by an axiom instance."""
    axioms = _word_axioms(axioms)
    u, v = _as_str(goal[0]), _as_str(goal[1])
    if not proof.words or proof.words[0] != u or proof.words[-1] != v:
        return False
    if len(proof.words) != len(proof.steps) + 1:
        return False
    for step, w, nxt in zip(proof.steps, proof.words, proof.words[1:]):
        if not 0 <= step.axiom < len(axioms):
            return False
        lhs, rhs = axioms[step.axiom]
        src, dst = (lhs, rhs) if step.direction == LR else (rhs, lhs)
        b = step.substitution
        if any(not b.get(x) for x in set(src) | set(dst)):
            return False
        s_inst, d_inst = _instantiate(src, b), _instantiate(dst, b)
        if w[step.start:step.start + len(s_inst)] != s_inst:
            return False
        if w[:step.start] + d_inst + w[step.start + len(s_inst):] != nxt:
            return False
    return True


def word_derive_bounded(axioms, goal, budget: Budget | None = None) -> WordProof | None:
    """Bounded search over flat words.

    ``axioms`` are pairs of variable words (strings such as ``("xx", "xxxx")``,
    tuples of ints, or semigroup ``Identity`` objects); ``goal`` is a pair of
    words.  A word of length n counts as n - 1 operations for the budget.
    """
    budget = budget or Budget()
    axioms = _word_axioms(axioms)
    u, v = _as_str(goal[0]), _as_str(goal[1])
    if u == v:
        return WordProof([], [u])
    if not axioms:
        return None
    if budget.max_term_ops is None:
        max_len = max(len(u), len(v)) + 8
    else:
        max_len = budget.max_term_ops + 1
    flip = (len(v), v) < (len(u), u)
    a, b = (v, u) if flip else (u, v)
    letters = sorted(set(u) | set(v))
    steps = _widened_search(
        a, b, lambda cap: (lambda w: _word_neighbors(w, axioms, cap, letters)),
        max(len(u), len(v)), max_len, budget, _flip_word_step)
    if steps is None:
        return None
    words = [a]
    for st in steps:
        words.append(_apply_word_step(words[-1], axioms, st))
    proof = WordProof(steps, words)
    if flip:
        proof = _reverse_word_proof(proof, axioms)
    return proof


def _flip_word_step(step: WordStep) -> WordStep:
    # start position is unchanged by reversal: both sides begin at the same index
    return WordStep(step.axiom, RL if step.direction == LR else LR, step.start, step.substitution)


def _apply_word_step(w, axioms, step):
    lhs, rhs = axioms[step.axiom]
    src, dst = (lhs, rhs) if step.direction == LR else (rhs, lhs)
    s = _instantiate(src, step.substitution)
    assert w[step.start:step.start + len(s)] == s
    return w[:step.start] + _instantiate(dst, step.substitution) + w[step.start + len(s):]


def _reverse_word_proof(proof, axioms):
    steps = [_flip_word_step(s) for s in reversed(proof.steps)]
    return WordProof(steps, list(reversed(proof.words)))


# ---------------------------------------------------------------- lifting

def _left_comb(word, op):
    return word_to_term([_ALPHA.index(c) + 1 for c in word], op)


def _to_left_comb_steps(t, op, assoc_index, assoc_dir):
    """Rotations x*(y*z) -> (x*y)*z turning t into its left comb."""
    steps = []
    while True:
        for path, s in subterm_occurrences(t):
            if type(s) is not Var and type(s.args[1]) is not Var:
                a, (b, c) = s.args[0], s.args[1].args
                sub = {1: a, 2: b, 3: c}
                steps.append(Step(assoc_index, assoc_dir, path, sub))
                t = replace_at(t, path, App(op, (App(op, (a, b)), c)))
                break
        else:
            return steps, t


def _rebracket(src, dst, op, assoc_index, assoc_dir):
    s1, comb1 = _to_left_comb_steps(src, op, assoc_index, assoc_dir)
    s2, comb2 = _to_left_comb_steps(dst, op, assoc_index, assoc_dir)
    assert comb1 == comb2
    return s1 + [s.flipped() for s in reversed(s2)]


def lift_word_proof(wproof: WordProof, word_axioms_idx, axioms, assoc_index, op,
                    start_term, end_term) -> Proof:
    """Turn a flat-word proof into a term proof from start_term to end_term."""
    assoc_dir = _assoc_dir(axioms[assoc_index], op)
    steps = []
    cur = start_term
    for wstep, w, nxt in zip(wproof.steps, wproof.words, wproof.words[1:]):
        ax_i = word_axioms_idx[wstep.axiom]
        rule = axioms[ax_i]
        src, dst = _sides(rule, wstep.direction)
        tsub = {v: _left_comb(img, op) for v, img in wstep.substitution.items()}
        inst = substitute(src, tsub)
        prefix, suffix = w[:wstep.start], w[wstep.start + len(term_to_word(inst)):]
        shaped, pos = _embed(prefix, inst, suffix, op)
        steps += _rebracket(cur, shaped, op, assoc_index, assoc_dir)
        steps.append(Step(ax_i, wstep.direction, pos, tsub))
        cur = replace_at(shaped, pos, substitute(dst, tsub))
    steps += _rebracket(cur, end_term, op, assoc_index, assoc_dir)
    return Proof(steps)


def _embed(prefix, inst, suffix, op):
    """Tree (prefix * inst) * s1 * s2 ... and the path of inst inside it."""
    if prefix:
        t = App(op, (_left_comb(prefix, op), inst))
        pos = (1,)
    else:
        t = inst
        pos = ()
    for c in suffix:
        t = App(op, (t, _left_comb(c, op)))
        pos = (0,) + pos
    return t, pos


def _derive_via_words(axioms, assoc_index, op, goal, budget):
    word_idx = [i for i in range(len(axioms)) if i != assoc_index]
    waxioms = []
    for i in word_idx:
        lw, rw = term_to_word(axioms[i].lhs, op), term_to_word(axioms[i].rhs, op)
        waxioms.append((lw, rw))
    gl, gr = term_to_word(goal.lhs, op), term_to_word(goal.rhs, op)
    wgoal = (_as_str(gl), _as_str(gr))
    if wgoal[0] == wgoal[1]:
        return Proof(_rebracket(goal.lhs, goal.rhs, op, assoc_index, _assoc_dir(axioms[assoc_index], op)))
    if not waxioms:
        return None
    if budget.max_term_ops is None:
        wbudget = Budget(max(goal.lhs.size, goal.rhs.size) + 8, budget.max_visited, budget.max_depth)
    else:
        wbudget = budget
    wproof = word_derive_bounded(waxioms, wgoal, wbudget)
    if wproof is None:
        return None
    return lift_word_proof(wproof, word_idx, axioms, assoc_index, op, goal.lhs, goal.rhs)


def _assoc_dir(assoc, op):
    right_nested = App(op, (Var(1), App(op, (Var(2), Var(3)))))
    left_nested = App(op, (App(op, (Var(1), Var(2))), Var(3)))
    return LR if apply_rule_at(right_nested, assoc, LR, ()) == left_nested else RL


# ---------------------------------------------------------------- serialization

def proof_to_json(proof: Proof) -> list[dict]:
    return [{"axiom": s.axiom, "dir": s.direction, "pos": list(s.position),
             "sub": {f"x{k}": format_term(v, infix=False) for k, v in sorted(s.substitution.items())}}
            for s in proof.steps]


def proof_from_json(data, signature=None) -> Proof:
    from .term import parse_term
    steps = []
    for d in data:
        sub = {int(k[1:]): parse_term(v, signature) for k, v in d["sub"].items()}
        steps.append(Step(d["axiom"], d["dir"], tuple(d["pos"]), sub))
    return Proof(steps)


def format_proof(axioms, goal: Identity, proof: Proof) -> str:
    lines = [f"   {format_term(goal.lhs)}"]
    cur = goal.lhs
    for s in proof.steps:
        src, dst = _sides(axioms[s.axiom], s.direction)
        cur = replace_at(cur, s.position, substitute(dst, s.substitution))
        where = ".".join(map(str, s.position)) or "root"
        lines.append(f"=  {format_term(cur)}    [axiom {s.axiom} {s.direction} at {where}]")
    return "\n".join(lines)
