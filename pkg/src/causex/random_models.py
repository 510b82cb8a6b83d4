"""Seeded random small models and formulas for property checks and experiments."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .formula import And, Event, Not, Or
from .model import CausalModel, EquationTable, Signature


@dataclass
class RandomModelConfig:
    max_endogenous: int = 4
    min_endogenous: int = 1
    max_range: int = 3
    max_exogenous: int = 2
    min_exogenous: int = 1
    max_parents: int = 3
    binary: bool = False


def random_model(rng: random.Random, cfg: RandomModelConfig = RandomModelConfig()) -> CausalModel:
    """A recursive model whose endogenous variables are declared in causal order."""
    def values(k):
        return tuple(str(i) for i in range(k))

    def width():
        return 2 if cfg.binary else rng.randint(2, cfg.max_range)

    n_exo = rng.randint(cfg.min_exogenous, cfg.max_exogenous)
    n_endo = rng.randint(cfg.min_endogenous, cfg.max_endogenous)
    exo = tuple((f"U{i}", values(width())) for i in range(n_exo))
    endo = tuple((f"V{i}", values(width())) for i in range(n_endo))
    sig = Signature(exo, endo)
    ranges = dict(exo + endo)
    tables = []
    for i, (name, rng_vals) in enumerate(endo):
        pool = [n for n, _ in exo] + [n for n, _ in endo[:i]]
        k = rng.randint(1, min(cfg.max_parents, len(pool)))
        parents = tuple(sorted(rng.sample(pool, k), key=pool.index))
        rows = tuple((key, rng.choice(rng_vals))
                     for key in itertools.product(*(ranges[p] for p in parents)))
        tables.append(EquationTable(name, parents, rows))
    return CausalModel(sig, tuple(tables))


def random_formula(rng: random.Random, model: CausalModel, depth: int = 2):
    """A random Boolean combination of primitive events (no interventions)."""
    sig = model.signature
    if depth == 0 or rng.random() < 0.4:
        name = rng.choice(sig.endogenous_names)
        return Event(name, rng.choice(sig.range(name)))
    op = rng.choice(("and", "or", "not"))
    if op == "not":
        return Not(random_formula(rng, model, depth - 1))
    left = random_formula(rng, model, depth - 1)
    right = random_formula(rng, model, depth - 1)
    return And(left, right) if op == "and" else Or(left, right)
