"""Derive t(x,t(y,z)) = t(t(x,y),z) from the five laws for every binary term t up to a size."""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

from hyperbasis.rewrite import Budget, check_proof, derive_bounded
from hyperbasis.term import SEMIGROUP, Identity, enumerate_terms, format_term, parse_law
from hyperbasis.witness import assoc_instance

LAWS = ["(xy)z=x(yz)", "xx=xxxx", "xyxzxyx=xyzyx", "xxyyz=xxyxxyz", "xyyzz=xyzzyzz"]


@dataclass
class Config:
    max_ops: int = 4
    max_visited: int = 2_000_000


def main(cfg: Config):
    axioms = [parse_law(s) for s in LAWS]
    terms = enumerate_terms(SEMIGROUP, 2, cfg.max_ops)
    lengths, missing = Counter(), []
    t0 = time.perf_counter()
    for t in terms:
        goal = Identity(*assoc_instance(t))
        proof = derive_bounded(axioms, goal, Budget(max_visited=cfg.max_visited))
        if proof is None or not check_proof(axioms, goal, proof):
            missing.append(format_term(t))
        else:
            lengths[len(proof)] += 1
    print(f"{len(terms)} terms, {len(terms) - len(missing)} derived in {time.perf_counter() - t0:.1f}s")
    print("proof lengths:", dict(sorted(lengths.items())))
    for m in missing:
        print("  not derived:", m)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-ops", type=int, default=4)
    ap.add_argument("--max-visited", type=int, default=2_000_000)
    a = ap.parse_args()
    main(Config(a.max_ops, a.max_visited))
