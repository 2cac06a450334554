"""Command-line interface: ``python3 -m hyperbasis <command> ...``.

Exit codes: 0 success, 1 an honest unknown / bound-exceeded outcome, 2 usage
or parse errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .freealg import format_cayley, free_semigroup, parse_laws, search_models
from .hyper import BUILTINS, ExpansionMode, builtin, expand, parse_hyperidentity, triviality_probe, word_form
from .rewrite import (Budget, associativity_law, check_proof, derive_bounded, format_proof,
                      proof_to_json, word_derive_bounded)
from .term import (SEMIGROUP, TermSyntaxError, Var, format_term, op_count, parse_identity,
                   parse_law, parse_term)
from .typesys import InvalidType, downward_closure, parse_type, type_leq
from .witness import TWO_OPS, assoc_instance, format_two_op, instance_census, t_family
from .words import is_square_free, square_factors, ternary_squarefree, thue_morse

__all__ = ["main", "RunManifest", "build_parser"]


class UsageError(ValueError):
    pass


@dataclass
class RunManifest:
    command: list
    budgets: dict
    version: str
    elapsed_s: float
    digest: str
    threads: int


def digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


# ---------------------------------------------------------------- helpers

def _split_top(text: str) -> list[str]:
    """Split on ';' and on ',' outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in ",;":
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [s for s in out if s]


def _parse_eq(text, sig):
    if sig is not None:
        return parse_identity(text, sig)
    try:
        return parse_law(text)
    except TermSyntaxError:
        return parse_identity(text, None)


def _binary_op(eq):
    t = eq.lhs if type(eq.lhs) is not Var else eq.rhs
    return getattr(t, "op", "*")


def _budget(args) -> Budget:
    return Budget(max_term_ops=args.max_term_ops, max_visited=args.max_visited,
                  max_depth=args.max_depth)


def _hyper(args):
    if args.hyper_text:
        return parse_hyperidentity(args.hyper_text)
    if not args.hyper:
        raise UsageError("give --hyper NAME or --hyper-text EQUATION")
    return builtin(args.hyper, *args.params)


def _laws(values):
    laws = []
    for v in values:
        laws.extend(parse_laws(v))
    return laws


# ---------------------------------------------------------------- commands

def cmd_expand(args):
    E = _hyper(args)
    tau = parse_type(args.type)
    ids = expand(E, tau, ExpansionMode(args.mode), args.max_ops, denecke=args.denecke)
    items = []
    for e in ids:
        item = {"lhs": format_term(e.lhs), "rhs": format_term(e.rhs)}
        wf = word_form(e)
        if wf is not None:
            item["words"] = "=".join(wf)
        items.append(item)
    payload = {"hyperidentity": str(E), "type": str(tau), "mode": args.mode,
               "max_ops": args.max_ops, "count": len(items), "identities": items}
    lines = [f"{len(items)} identities from {E} over {tau} ({args.mode}, max ops {args.max_ops})"]
    for it in items:
        extra = f"    [{it['words']}]" if "words" in it else ""
        lines.append(f"  {it['lhs']} = {it['rhs']}{extra}")
    return payload, 0, "\n".join(lines)


def cmd_derive(args):
    budget = _budget(args)
    if args.words:
        axioms = _laws(_split_top(args.axioms))
        goal = parse_laws(args.goal)
        if len(goal) != 1:
            raise UsageError("exactly one goal")
        goal = goal[0]
        proof = word_derive_bounded(axioms, goal, budget)
        payload = {"goal": "=".join(goal), "axioms": ["=".join(a) for a in axioms],
                   "status": "derived" if proof else "unknown",
                   "proof": None if proof is None else [
                       {"axiom": s.axiom, "dir": s.direction, "start": s.start, "word": w}
                       for s, w in zip(proof.steps, proof.words[1:])]}
        if proof is None:
            return payload, 1, "Unknown within budget"
        text = "Derived\n" + "\n".join(["   " + proof.words[0]] + [
            f"=  {w}    [axiom {s.axiom} {s.direction} at {s.start}]"
            for s, w in zip(proof.steps, proof.words[1:])])
        return payload, 0, text
    sig = parse_type(args.type) if args.type else None
    axioms = [_parse_eq(a, sig) for a in _split_top(args.axioms)]
    if not axioms:
        raise UsageError("no axioms given")
    goal = _parse_eq(args.goal, sig)
    proof = derive_bounded(axioms, goal, budget, associative=args.associative or None)
    payload = {"goal": str(goal), "axioms": [str(a) for a in axioms],
               "status": "derived" if proof is not None else "unknown",
               "proof": None if proof is None else proof_to_json(proof)}
    if proof is None:
        return payload, 1, "Unknown within budget"
    axioms_used = axioms + ([associativity_law(_binary_op(goal))] if any(
        s.axiom >= len(axioms) for s in proof.steps) else [])
    payload["checked"] = check_proof(axioms_used, goal, proof)
    return payload, 0, "Derived\n" + format_proof(axioms_used, goal, proof)


def cmd_free(args):
    laws = _laws(args.law)
    rep = free_semigroup(laws, args.gens, args.bound, max_words=args.max_words)
    payload = rep.to_json()
    if not args.table:
        payload.pop("table")
        payload.pop("right_table")
    if not rep.stable:
        return payload, 1, f"BoundExceeded at L={rep.bound}, census {rep.census}"
    text = f"Stable, {rep.cardinality} elements (L={rep.bound}, census {rep.census}"
    text += f", {rep.repair_rounds} repair rounds, certified={rep.certified})"
    if args.table:
        text += "\n" + format_cayley(rep, full=args.full)
    return payload, 0, text


def cmd_word(args):
    if args.kind == "tm":
        w = "".join(map(str, thue_morse(args.len)))
    elif args.kind == "sqfree":
        w = ternary_squarefree(args.len)
    else:
        w = args.text or ""
    payload = {"word": w, "length": len(w)}
    text = w
    if args.check or args.kind == "squares":
        sq = square_factors(w)
        payload["square_free"] = not sq if args.kind == "squares" else is_square_free(w)
        if args.kind == "squares":
            payload["squares"] = [[i, r] for i, r in sq]
        text += f"\nsquare-free: {payload['square_free']}"
        if args.kind == "squares":
            text += "".join(f"\n  {i}: ({r})^2" for i, r in sq)
    return payload, 0, text


def cmd_witness(args):
    if args.kind == "tfam":
        t = t_family(args.level, args.k, args.star)
        payload = {"term": format_two_op(t), "prefix": format_term(t, infix=False),
                   "op_count": op_count(t)}
        return payload, 0, f"{payload['term']}\nop_count {payload['op_count']}"
    if args.host is None:
        raise UsageError("census needs --host (a term or a file holding one)")
    text = args.host
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read().strip()
    tau = parse_type(args.type)
    host = parse_term(text, tau)
    if args.assoc:
        host = assoc_instance(host)[0]
    E = _hyper(args)
    census = instance_census(host, E, tau, args.max_ops, args.projections)
    rows = [{"position": list(p), "side": side,
             "hypersubstitution": {k: format_term(v, infix=False) for k, v in sorted(s.items())}}
            for p, side, s in census]
    payload = {"host_ops": op_count(host), "count": len(rows), "census": rows}
    lines = [f"{len(rows)} small instances in a host with {op_count(host)} operations"]
    for r in rows:
        where = ".".join(map(str, r["position"])) or "root"
        lines.append(f"  {where} {r['side']} {r['hypersubstitution']}")
    return payload, 0, "\n".join(lines)


def cmd_typeorder(args):
    a, b = parse_type(args.a), parse_type(args.b)
    le, ge = type_leq(a, b), type_leq(b, a)
    rel = "equal" if le and ge else "below" if le else "above" if ge else "incomparable"
    payload = {"a": str(a), "b": str(b), "leq": le, "geq": ge, "relation": rel}
    text = {"equal": f"{a} = {b}", "below": f"{a} ⪯ {b}", "above": f"{b} ⪯ {a}",
            "incomparable": f"{a} and {b} are incomparable"}[rel]
    if args.closure:
        down = sorted(downward_closure(b), key=lambda t: (len(t), t))
        payload["closure"] = ["<" + ",".join(map(str, t)) + ">" for t in down]
        text += "\nbelow " + str(b) + ": " + " ".join(payload["closure"])
    return payload, 0, text


def cmd_trivial(args):
    E = _hyper(args)
    tau = parse_type(args.type)
    res = triviality_probe(E, tau, ExpansionMode(args.mode), args.bound, _budget(args))
    payload = {"hyperidentity": str(E), "type": str(tau), "status": res.status,
               "axioms": len(res.axioms),
               "proof": None if res.proof is None else proof_to_json(res.proof)}
    if not res.trivial:
        return payload, 1, "Unknown (no derivation of x1 = x2 within bounds)"
    payload["checked"] = check_proof(res.axioms, res.goal, res.proof)
    return payload, 0, "Trivial\n" + format_proof(res.axioms, res.goal, res.proof)


def cmd_models(args):
    laws = _laws(args.law)
    tables = search_models(laws, args.size)
    payload = {"laws": ["=".join(l) for l in laws], "size": args.size,
               "count": len(tables), "tables": tables}
    lines = [f"{len(tables)} tables of size {args.size}"]
    if args.show:
        lines += [json.dumps(t) for t in tables]
    return payload, 0, "\n".join(lines)


# ---------------------------------------------------------------- parser

def _add_budget(p):
    p.add_argument("--max-term-ops", type=int, default=None)
    p.add_argument("--max-visited", type=int, default=2_000_000)
    p.add_argument("--max-depth", type=int, default=40)


def _add_hyper(p):
    p.add_argument("--hyper", choices=BUILTINS)
    p.add_argument("--params", type=int, nargs="*", default=[])
    p.add_argument("--hyper-text", help="e.g. 'F(x1,F(x2,x3)) = F(F(x1,x2),x3)'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--manifest", metavar="PATH", help="write a run manifest")
    common.add_argument("--threads", type=int, default=1, help="parallelism cap (computations are serial)")

    ap = argparse.ArgumentParser(prog="hyperbasis", fromfile_prefix_chars="@",
                                 description="hyperidentities, derivations, free semigroups")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="expand a hyperidentity")
    _add_hyper(p)
    p.add_argument("--type", default="2")
    p.add_argument("--mode", choices=["taylor", "prehyper"], default="taylor")
    p.add_argument("--max-ops", type=int, default=2)
    p.add_argument("--denecke", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("derive", parents=[common], help="bounded derivation")
    p.add_argument("--axioms", required=True, help="identities separated by ';' or ','")
    p.add_argument("--goal", required=True)
    p.add_argument("--type", default=None)
    p.add_argument("--words", action="store_true", help="flat semigroup word search")
    p.add_argument("--associative", action="store_true",
                   help="treat the single binary symbol as associative")
    _add_budget(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("free", parents=[common], help="relatively free semigroup")
    p.add_argument("--law", action="append", required=True)
    p.add_argument("--gens", type=int, default=2)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--max-words", type=int, default=20_000_000)
    p.add_argument("--table", action="store_true")
    p.add_argument("--full", action="store_true", help="full Cayley table with --table")
    p.set_defaults(func=cmd_free)

    p = sub.add_parser("word", parents=[common], help="combinatorics on words")
    p.add_argument("kind", choices=["tm", "sqfree", "squares"])
    p.add_argument("text", nargs="?")
    p.add_argument("--len", type=int, default=16)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("witness", parents=[common], help="witness terms and censuses")
    p.add_argument("kind", choices=["tfam", "census"])
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--star", action="store_true")
    p.add_argument("--host")
    p.add_argument("--assoc", action="store_true", help="use the lhs of assoc_instance(host)")
    p.add_argument("--type", default="dot:2,circ:2")
    p.add_argument("--max-ops", type=int, default=2)
    p.add_argument("--projections", action="store_true")
    _add_hyper(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("typeorder", parents=[common], help="compare two types")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--closure", action="store_true")
    p.set_defaults(func=cmd_typeorder)

    p = sub.add_parser("trivial", parents=[common], help="triviality probe")
    _add_hyper(p)
    p.add_argument("--type", default="2")
    p.add_argument("--mode", choices=["taylor", "prehyper"], default="taylor")
    p.add_argument("--bound", type=int, default=2)
    _add_budget(p)
    p.set_defaults(func=cmd_trivial, max_visited=200_000)

    p = sub.add_parser("models", parents=[common], help="small semigroup models")
    p.add_argument("--law", action="append", required=True)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--show", action="store_true")
    p.set_defaults(func=cmd_models)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    start = time.perf_counter()
    try:
        payload, code, text = args.func(args)
    except (UsageError, TermSyntaxError, InvalidType, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return 2
    elapsed = time.perf_counter() - start
    print(json.dumps(payload, sort_keys=True) if args.json else text)
    if args.manifest:
        budgets = {k: getattr(args, k) for k in ("max_term_ops", "max_visited", "max_depth",
                                                  "max_ops", "bound", "max_words") if hasattr(args, k)}
        m = RunManifest(["hyperbasis", *argv], budgets, __version__, round(elapsed, 3),
                        digest(payload), args.threads)
        with open(args.manifest, "w") as fh:
            json.dump(asdict(m), fh, indent=2, sort_keys=True)
    return code
