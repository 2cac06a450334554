"""Certified 2-generated free semigroups for the semigroup laws of the five-law basis and its subsets."""
import argparse
import time
from dataclasses import dataclass, field

from hyperbasis.freealg import free_semigroup


@dataclass
class Config:
    generators: int = 2
    law_sets: list = field(default_factory=lambda: [
        "xyxzxyx=xyzyx",
        "xyxzxyx=xyzyx, xx=xxxx",
        "xyxzxyx=xyzyx, xxyyz=xxyxxyz",
        "xyxzxyx=xyzyx, xx=xxxx, xxyyz=xxyxxyz",
        "xyxzxyx=xyzyx, xx=xxxx, xxyyz=xxyxxyz, xyyzz=xyzzyzz",
        "xxyyz=xxyxxyz, xyyzz=xyzzyzz",
        "xxyyz=xxyxxyz",
    ])


def main(cfg: Config):
    print(f"{'laws':58} {'L':>3} {'raw':>5} {'rounds':>6} {'size':>5} {'sec':>6}")
    for laws in cfg.law_sets:
        t0 = time.perf_counter()
        rep = free_semigroup(laws, cfg.generators)
        size = rep.cardinality if rep.stable else "?"
        print(f"{laws:58} {rep.bound:>3} {rep.raw_count:>5} {rep.repair_rounds:>6} {size:>5} "
              f"{time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gens", type=int, default=2)
    ap.add_argument("--law", action="append", help="a law set (repeatable); default: built-in list")
    a = ap.parse_args()
    cfg = Config(a.gens) if not a.law else Config(a.gens, a.law)
    main(cfg)
