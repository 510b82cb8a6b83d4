"""Sufficient and actual causes of a formula in a situation.

A conjunctive event ``X=x`` is a sufficient cause of ``phi`` in ``(M, u)``
when it and ``phi`` are true there (AC1) and some partition ``(Z, W)`` of
the endogenous variables with ``X`` inside ``Z``, together with alternative
values ``x'`` and ``w'``, makes ``phi`` false under ``[X<-x', W<-w']``
(AC2a) while ``phi`` stays true under ``[X<-x, W'<-w', Z'<-z*]`` for every
``W' <= W`` and ``Z' <= Z`` (AC2b), ``z*`` being the actual values.  It is
an actual cause when, in addition, no nonempty proper sub-conjunction is a
sufficient cause (AC3).

``Z'`` ranges over subsets of ``Z - X``: pinning ``X`` to its actual values
again is a no-op because ``X`` is already set to ``x``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .formula import (
    ConjunctiveEvent,
    World,
    as_budget,
    evaluate,
    parse_formula,
    to_conjunct,
)
from .model import Assignment, Situation, intervene, solve


class Classification(str, Enum):
    NOT_A_CAUSE = "not-a-cause"
    SUFFICIENT = "sufficient-cause"
    ACTUAL = "actual-cause"


@dataclass(frozen=True)
class Partition:
    zside: tuple
    wside: tuple


@dataclass(frozen=True)
class Ac2Witness:
    partition: Partition
    alt_x: Assignment
    alt_w: Assignment
    baseline_z: Assignment

    def describe(self) -> str:
        w = ", ".join(self.partition.wside)
        return f"W={{{w}}} x'=({self.alt_x}) w'=({self.alt_w})"


@dataclass(frozen=True)
class CauseVerdict:
    candidate: ConjunctiveEvent
    phi: object
    ac1: bool
    ac2: Ac2Witness | None
    ac3: bool | None  # None when AC1 fails and minimality was not examined
    classification: Classification

    @property
    def is_actual(self) -> bool:
        return self.classification is Classification.ACTUAL

    @property
    def is_sufficient(self) -> bool:
        return self.classification is not Classification.NOT_A_CAUSE


def _as_phi(phi, model):
    return parse_formula(phi, model.signature) if isinstance(phi, str) else phi


class CauseSearch:
    """AC1-AC3 checks for one situation and one formula, memoised by candidate."""

    def __init__(self, world: World, phi):
        self.world = world
        self.sig = world.sig
        self.phi = phi
        self._phi_actual = None
        self._witness = {}

    def _items(self, cand: ConjunctiveEvent) -> tuple:
        return tuple(sorted((self.sig.endo_index(e.variable), e.value) for e in cand.events))

    def phi_holds(self) -> bool:
        if self._phi_actual is None:
            self._phi_actual = self.world.holds(self.phi)
        return self._phi_actual

    def ac1(self, cand: ConjunctiveEvent) -> bool:
        return self.world.conjunct_holds(cand) and self.phi_holds()

    def witness(self, cand: ConjunctiveEvent) -> Ac2Witness | None:
        items = self._items(cand)
        if items not in self._witness:
            self._witness[items] = self._search(items)
        return self._witness[items]

    def sufficient(self, cand: ConjunctiveEvent) -> bool:
        return self.ac1(cand) and self.witness(cand) is not None

    def verdict(self, cand: ConjunctiveEvent) -> CauseVerdict:
        if not self.ac1(cand):
            return CauseVerdict(cand, self.phi, False, None, None, Classification.NOT_A_CAUSE)
        wit = self.witness(cand)
        ac3 = not any(self.sufficient(sub) for sub in cand.proper_subsets())
        if wit is None:
            cls = Classification.NOT_A_CAUSE
        elif ac3:
            cls = Classification.ACTUAL
        else:
            cls = Classification.SUFFICIENT
        return CauseVerdict(cand, self.phi, True, wit, ac3, cls)

    def _search(self, items) -> Ac2Witness | None:
        w, sig, phi = self.world, self.sig, self.phi
        names = sig.endogenous_names
        ranges = [sig.range(n) for n in names]
        actual = w.solution()
        x_idx = [i for i, _ in items]
        x_set = set(x_idx)
        others = [i for i in range(w.n) if i not in x_set]
        base_x = list(w.empty)
        for i, v in items:
            base_x[i] = v
        x_domains = [ranges[i] for i in x_idx]
        for size in range(len(others) + 1):
            for wside in itertools.combinations(others, size):
                w_domains = [ranges[i] for i in wside]
                zrest = [i for i in others if i not in wside]
                b_memo = {}
                for xprime in itertools.product(*x_domains):
                    for wprime in itertools.product(*w_domains):
                        key = list(w.empty)
                        for i, v in zip(x_idx, xprime):
                            key[i] = v
                        for i, v in zip(wside, wprime):
                            key[i] = v
                        if w.holds(phi, tuple(key)):
                            continue
                        ok = b_memo.get(wprime)
                        if ok is None:
                            ok = self._ac2b(base_x, wside, wprime, zrest, actual)
                            b_memo[wprime] = ok
                        if ok:
                            zside = tuple(names[i] for i in sorted(x_idx + zrest))
                            return Ac2Witness(
                                Partition(zside, tuple(names[i] for i in wside)),
                                Assignment((names[i], v) for i, v in zip(x_idx, xprime)),
                                Assignment((names[i], v) for i, v in zip(wside, wprime)),
                                Assignment((n, actual[sig.endo_index(n)]) for n in zside),
                            )
        return None

    def _ac2b(self, base_x, wside, wprime, zrest, actual) -> bool:
        w, phi = self.world, self.phi
        # largest W' first: it is the subset most likely to break phi
        for wk in range(len(wside), -1, -1):
            for wsub in itertools.combinations(range(len(wside)), wk):
                for zk in range(len(zrest) + 1):
                    for zsub in itertools.combinations(zrest, zk):
                        key = list(base_x)
                        for j in wsub:
                            key[wside[j]] = wprime[j]
                        for i in zsub:
                            key[i] = actual[i]
                        if not w.holds(phi, tuple(key)):
                            return False
        return True


def _search_for(situation: Situation, phi, budget) -> CauseSearch:
    phi = _as_phi(phi, situation.model)
    return CauseSearch(World(situation.model, situation.context, as_budget(budget)), phi)


def check_ac1(situation: Situation, candidate, phi) -> bool:
    phi = _as_phi(phi, situation.model)
    cand = to_conjunct(candidate, situation.model.signature)
    return _search_for(situation, phi, None).ac1(cand)


def find_ac2_witness(situation: Situation, candidate, phi, budget=None) -> Ac2Witness | None:
    """First AC2 witness in canonical order (by |W|, then lexicographic), or None."""
    cand = to_conjunct(candidate, situation.model.signature)
    return _search_for(situation, phi, budget).witness(cand)


def check_actual_cause(situation: Situation, candidate, phi, budget=None) -> CauseVerdict:
    cand = to_conjunct(candidate, situation.model.signature)
    return _search_for(situation, phi, budget).verdict(cand)


def is_sufficient_cause(situation: Situation, candidate, phi, budget=None) -> bool:
    cand = to_conjunct(candidate, situation.model.signature)
    return _search_for(situation, phi, budget).sufficient(cand)


def actual_candidates(world: World, max_width=None, exclude=()):
    """Nonempty sub-conjunctions of the actual solution, canonical order."""
    sol = world.solution()
    names = world.sig.endogenous_names
    idx = [i for i in range(world.n) if names[i] not in set(exclude)]
    top = len(idx) if max_width is None else min(max_width, len(idx))
    for k in range(1, top + 1):
        for combo in itertools.combinations(idx, k):
            yield ConjunctiveEvent(tuple((names[i], sol[i]) for i in combo))


def enumerate_actual_causes(situation: Situation, phi, max_width=None, budget=None) -> list:
    """Verdicts for every actual cause of width <= ``max_width`` (all widths if None)."""
    if max_width is not None and max_width < 1:
        raise ValueError("max_width must be at least 1")
    search = _search_for(situation, phi, budget)
    if not search.phi_holds():
        return []
    out = []
    for cand in actual_candidates(search.world, max_width):
        v = search.verdict(cand)
        if v.is_actual:
            out.append(v)
    return out


def enumerate_sufficient_causes(situation: Situation, phi, max_width=None, budget=None) -> list:
    search = _search_for(situation, phi, budget)
    if not search.phi_holds():
        return []
    return [search.verdict(c) for c in actual_candidates(search.world, max_width) if search.sufficient(c)]


def verify_ac2_witness(situation: Situation, candidate, phi, witness: Ac2Witness) -> bool:
    """Re-check AC2 (a) and (b) for ``witness`` by building submodels directly."""
    model, ctx = situation.model, situation.context
    phi = _as_phi(phi, model)
    cand = to_conjunct(candidate, model.signature)
    x = cand.as_assignment()
    if set(witness.partition.zside) & set(witness.partition.wside):
        return False
    if set(witness.partition.zside) | set(witness.partition.wside) != set(model.signature.endogenous_names):
        return False
    if not set(x) <= set(witness.partition.zside):
        return False
    actual = solve(model, ctx)
    if witness.baseline_z != actual.restrict(witness.partition.zside):
        return False
    flipped = intervene(model, witness.alt_x.merged(witness.alt_w))
    if evaluate(Situation(flipped, ctx), phi):
        return False
    zfree = [n for n in witness.partition.zside if n not in x]
    wnames = list(witness.alt_w)
    for wk in range(len(wnames) + 1):
        for wsub in itertools.combinations(wnames, wk):
            for zk in range(len(zfree) + 1):
                for zsub in itertools.combinations(zfree, zk):
                    setting = dict(x)
                    setting.update((n, witness.alt_w[n]) for n in wsub)
                    setting.update((n, actual[n]) for n in zsub)
                    if not evaluate(Situation(intervene(model, setting), ctx), phi):
                        return False
    return True

