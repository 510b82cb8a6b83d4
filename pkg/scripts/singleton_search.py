"""Search random models for an actual cause with more than one conjunct.

    python3 scripts/singleton_search.py --seeds 20000 --max-endogenous 4 --max-range 3
"""
import argparse
import random

from causex.causality import enumerate_actual_causes
from causex.formula import World
from causex.model import Situation, enumerate_contexts
from causex.random_models import RandomModelConfig, random_formula, random_model


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--max-endogenous", type=int, default=4)
    ap.add_argument("--max-range", type=int, default=3)
    args = ap.parse_args()
    cfg = RandomModelConfig(max_endogenous=args.max_endogenous, max_range=args.max_range)
    instances = causes = 0
    for seed in range(args.start, args.start + args.seeds):
        rng = random.Random(seed)
        m = random_model(rng, cfg)
        ctx = rng.choice(enumerate_contexts(m))
        phi = random_formula(rng, m)
        if not World(m, ctx).holds(phi):
            continue
        instances += 1
        for v in enumerate_actual_causes(Situation(m, ctx), phi):
            causes += 1
            if v.candidate.width > 1:
                print(f"counterexample seed={seed} cause={v.candidate} phi={phi}")
                return 1
    print(f"{instances} instances, {causes} actual causes, all single conjuncts")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
