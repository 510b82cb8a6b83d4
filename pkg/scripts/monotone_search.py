"""Check whether extending a sufficient cause with more true conjuncts keeps it sufficient.

Prints the first random counterexample, if any, with its witness.

    python3 scripts/monotone_search.py --seeds 2000
"""
import argparse
import random

from causex.causality import CauseSearch, actual_candidates
from causex.formula import World
from causex.model import enumerate_contexts
from causex.random_models import RandomModelConfig, random_formula, random_model


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--max-endogenous", type=int, default=4)
    args = ap.parse_args()
    cfg = RandomModelConfig(max_endogenous=args.max_endogenous)
    checks = 0
    for seed in range(args.seeds):
        rng = random.Random(seed)
        m = random_model(rng, cfg)
        ctx = rng.choice(enumerate_contexts(m))
        phi = random_formula(rng, m)
        search = CauseSearch(World(m, ctx), phi)
        if not search.phi_holds():
            continue
        cands = list(actual_candidates(search.world))
        for small in cands:
            if not search.sufficient(small):
                continue
            for big in cands:
                if not set(small.variables) < set(big.variables):
                    continue
                checks += 1
                if not search.sufficient(big):
                    print(f"seed={seed} phi={phi}")
                    print(f"  sufficient: {small} witness: {search.witness(small).describe()}")
                    print(f"  not sufficient: {big}")
                    return 1
    print(f"{checks} checks, no counterexample")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
