"""Explanations relative to an epistemic state, and partial explanations.

An epistemic state is the set of contexts an agent considers possible,
optionally weighted.  ``X=x`` explains ``phi`` when

* EX1: ``phi`` holds in every context of the state;
* EX2: ``X=x`` is a sufficient cause of ``phi`` wherever ``X=x`` holds;
* EX3: no nonempty proper sub-conjunction satisfies EX2;
* EX4: ``X=x`` holds in some context and fails in another.

The partial core of a candidate drops the contexts where it holds without
being a sufficient cause.  Goodness and the two explanatory power measures
are exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .causality import CauseSearch
from .errors import (
    CoreNotExplanation,
    EmptyEpistemicState,
    InconsistentPrior,
    ZeroProbabilityCandidate,
)
from .formula import ConjunctiveEvent, World, as_budget, formula_variables, parse_formula, to_conjunct
from .model import CausalModel, Context, enumerate_contexts


def _context(model: CausalModel, ctx) -> Context:
    if isinstance(ctx, Context) and tuple(ctx) == model.signature.exogenous_names:
        return ctx
    if isinstance(ctx, str):
        from .dsl import parse_context_spec
        ctx = parse_context_spec(ctx)
    return model.context(ctx)


def _weights(model, contexts, weights, require_total=True):
    if weights is None:
        return None
    out = {}
    items = weights.items() if hasattr(weights, "items") else zip(contexts, weights)
    for ctx, w in items:
        ctx = _context(model, ctx)
        w = Fraction(w)
        if w < 0:
            raise InconsistentPrior(f"negative weight {w} on context {ctx}")
        out[ctx] = out.get(ctx, Fraction(0)) + w
    known = set(contexts)
    stray = [c for c in out if c not in known]
    if stray:
        raise InconsistentPrior(f"weight on context {stray[0]} outside the state")
    total = sum(out.values(), Fraction(0))
    if require_total and total != 1:
        raise InconsistentPrior(f"weights sum to {total}, not 1")
    return {c: out.get(c, Fraction(0)) for c in contexts}


@dataclass(frozen=True, eq=False)
class EpistemicState:
    """The contexts an agent considers possible, with an optional probability."""

    model: CausalModel
    contexts: tuple
    weights: dict | None = None

    def __post_init__(self):
        ctxs = tuple(_context(self.model, c) for c in self.contexts)
        if not ctxs:
            raise EmptyEpistemicState("an epistemic state needs at least one context")
        if len(set(ctxs)) != len(ctxs):
            raise ValueError("contexts in an epistemic state must be distinct")
        object.__setattr__(self, "contexts", ctxs)
        object.__setattr__(self, "weights", _weights(self.model, ctxs, self.weights))

    def __eq__(self, other):
        return (isinstance(other, EpistemicState) and self.model == other.model
                and set(self.contexts) == set(other.contexts) and self.weights == other.weights)

    def __hash__(self):
        return hash((self.model, frozenset(self.contexts)))

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def weight(self, ctx) -> Fraction:
        if self.weights is None:
            raise ValueError("this epistemic state carries no probability")
        return self.weights.get(ctx, Fraction(0))

    def probability(self, contexts) -> Fraction:
        return sum((self.weight(c) for c in contexts), Fraction(0))

    def restricted(self, contexts) -> "EpistemicState":
        """Same model, fewer contexts; weights are renormalised when present."""
        contexts = tuple(contexts)
        if self.weights is None:
            return EpistemicState(self.model, contexts)
        total = self.probability(contexts)
        if total == 0:
            return EpistemicState(self.model, contexts)
        return EpistemicState(self.model, contexts, {c: self.weight(c) / total for c in contexts})


@dataclass(frozen=True, eq=False)
class PriorState:
    """A prior over a larger set of contexts, before the explanandum was observed."""

    model: CausalModel
    contexts: tuple
    weights: dict

    def __post_init__(self):
        ctxs = tuple(_context(self.model, c) for c in self.contexts)
        if not ctxs:
            raise EmptyEpistemicState("a prior needs at least one context")
        if len(set(ctxs)) != len(ctxs):
            raise ValueError("contexts in a prior must be distinct")
        if self.weights is None:
            raise InconsistentPrior("a prior must carry weights")
        object.__setattr__(self, "contexts", ctxs)
        object.__setattr__(self, "weights", _weights(self.model, ctxs, self.weights))

    @classmethod
    def uniform(cls, model: CausalModel) -> "PriorState":
        ctxs = enumerate_contexts(model)
        return cls(model, tuple(ctxs), {c: Fraction(1, len(ctxs)) for c in ctxs})

    @classmethod
    def from_weights(cls, model: CausalModel, weights) -> "PriorState":
        """Prior whose contexts are the support of ``weights``, in declaration order."""
        weights = {_context(model, c): Fraction(w) for c, w in weights.items()}
        ctxs = tuple(c for c in enumerate_contexts(model) if weights.get(c, 0) > 0)
        return cls(model, ctxs, {c: weights[c] for c in ctxs})

    def weight(self, ctx) -> Fraction:
        return self.weights.get(ctx, Fraction(0))

    def probability(self, contexts) -> Fraction:
        return sum((self.weight(c) for c in contexts), Fraction(0))

    def condition(self, phi) -> EpistemicState:
        """The posterior state: contexts satisfying ``phi``, weights renormalised."""
        phi = _phi(phi, self.model)
        keep = [c for c in self.contexts if World(self.model, c).holds(phi)]
        if not keep:
            raise EmptyEpistemicState("the explanandum holds in no context of the prior")
        total = self.probability(keep)
        if total == 0:
            raise InconsistentPrior("the explanandum has prior probability 0")
        return EpistemicState(self.model, tuple(keep), {c: self.weight(c) / total for c in keep})


def condition(prior: PriorState, phi) -> EpistemicState:
    return prior.condition(phi)


@dataclass(frozen=True)
class ExplanationReport:
    candidate: ConjunctiveEvent
    phi: object
    ex1: bool
    ex2: bool
    ex3: bool
    ex4: bool
    failing_contexts: tuple  # candidate holds but is not a sufficient cause
    verdict: bool
    phi_failures: tuple = ()  # contexts where the explanandum is false
    ex3_blockers: tuple = ()  # sub-conjunctions that already satisfy EX2
    actual: bool | None = None  # the optional "true in the actual world" clause

    def clauses(self) -> dict:
        out = {"EX1": self.ex1, "EX2": self.ex2, "EX3": self.ex3, "EX4": self.ex4}
        if self.actual is not None:
            out["actual"] = self.actual
        return out


@dataclass(frozen=True)
class PartialExplanationReport:
    candidate: ConjunctiveEvent
    phi: object
    core: tuple
    goodness: Fraction | None
    probability_of_explanation: Fraction | None
    power: Fraction | None = None
    gardenfors_power: Fraction | None = None
    core_is_explanation: bool = True
    core_report: ExplanationReport | None = field(default=None, repr=False)


def _phi(phi, model):
    return parse_formula(phi, model.signature) if isinstance(phi, str) else phi


class Analyzer:
    """Per-context cause searches for one state and one explanandum, shared budget."""

    def __init__(self, state: EpistemicState, phi, budget=None):
        self.state = state
        self.model = state.model
        self.sig = state.model.signature
        self.phi = _phi(phi, state.model)
        self.budget = as_budget(budget)
        self._searches = {}
        self._ex2 = {}

    def search(self, ctx) -> CauseSearch:
        s = self._searches.get(ctx)
        if s is None:
            s = CauseSearch(World(self.model, ctx, self.budget), self.phi)
            self._searches[ctx] = s
        return s

    def phi_holds(self, ctx) -> bool:
        return self.search(ctx).phi_holds()

    def holds(self, cand, ctx) -> bool:
        return self.search(ctx).world.conjunct_holds(cand)

    def sufficient(self, cand, ctx) -> bool:
        return self.search(ctx).sufficient(cand)

    def where(self, cand, contexts=None) -> list:
        contexts = self.state.contexts if contexts is None else contexts
        return [c for c in contexts if self.holds(cand, c)]

    def failing(self, cand, contexts=None) -> list:
        return [c for c in self.where(cand, contexts) if not self.sufficient(cand, c)]

    def ex1(self) -> bool:
        return all(self.phi_holds(c) for c in self.state.contexts)

    def ex2(self, cand, contexts=None) -> bool:
        key = (self._key(cand), None if contexts is None else tuple(contexts))
        val = self._ex2.get(key)
        if val is None:
            val = all(self.sufficient(cand, c) for c in self.where(cand, contexts))
            self._ex2[key] = val
        return val

    def ex3_blockers(self, cand, contexts=None) -> list:
        return [s for s in cand.proper_subsets() if self.ex2(s, contexts)]

    def ex4(self, cand, contexts=None) -> bool:
        contexts = self.state.contexts if contexts is None else contexts
        hits = [self.holds(cand, c) for c in contexts]
        return any(hits) and not all(hits)

    def _key(self, cand):
        return tuple(sorted((self.sig.endo_index(e.variable), e.value) for e in cand.events))

    def is_explanation(self, cand, contexts=None) -> bool:
        """Fail-fast decision: EX4 first, then EX2, then EX3 (EX1 checked by caller)."""
        return (self.ex4(cand, contexts) and self.ex2(cand, contexts)
                and not any(self.ex2(s, contexts) for s in cand.proper_subsets()))

    def report(self, cand, contexts=None, actual=None) -> ExplanationReport:
        contexts = self.state.contexts if contexts is None else tuple(contexts)
        phi_fail = tuple(c for c in contexts if not self.phi_holds(c))
        ex1 = not phi_fail
        ex4 = self.ex4(cand, contexts)
        failing = tuple(self.failing(cand, contexts))
        ex2 = not failing
        blockers = tuple(self.ex3_blockers(cand, contexts))
        ex3 = not blockers
        verdict = ex1 and ex2 and ex3 and ex4
        if actual is not None:
            verdict = verdict and actual
        return ExplanationReport(cand, self.phi, ex1, ex2, ex3, ex4, failing, verdict,
                                 phi_fail, blockers, actual)


def _candidate(state, candidate) -> ConjunctiveEvent:
    cand = to_conjunct(candidate, state.model.signature)
    if cand.width == 0:
        raise ValueError("an explanation needs at least one conjunct")
    return cand


def check_explanation(state: EpistemicState, candidate, phi, require_actual=None,
                      actual_in_k=False, budget=None) -> ExplanationReport:
    """Clause-by-clause verdict on whether ``candidate`` explains ``phi`` in ``state``.

    ``require_actual`` names the actual context; the candidate must then be
    true there, and with ``actual_in_k`` that context must also lie in the state.
    """
    cand = _candidate(state, candidate)
    an = Analyzer(state, phi, budget)
    actual = None
    if require_actual is not None:
        u = _context(state.model, require_actual)
        actual = World(state.model, u, an.budget).conjunct_holds(cand)
        if actual_in_k:
            actual = actual and u in set(state.contexts)
    return an.report(cand, actual=actual)


def candidate_events(an: Analyzer, max_width=None, exclude=()) -> list:
    """Conjunctions true in at least one context of the state, canonical order."""
    sig = an.sig
    names = sig.endogenous_names
    skip = set(exclude)
    idx = [i for i in range(len(names)) if names[i] not in skip]
    top = len(idx) if max_width is None else min(max_width, len(idx))
    seen = set()
    for ctx in an.state.contexts:
        sol = an.search(ctx).world.solution()
        for k in range(1, top + 1):
            for combo in itertools.combinations(idx, k):
                seen.add(tuple((i, sol[i]) for i in combo))
    cands = [ConjunctiveEvent(tuple((names[i], v) for i, v in items)) for items in seen]
    return sorted(cands, key=lambda c: c.sort_key(sig))


def enumerate_explanations(state: EpistemicState, phi, max_width=None, include_trivial=False,
                           budget=None) -> list:
    """Every explanation of width at most ``max_width``, canonical order.

    With ``include_trivial`` false, candidates mentioning a variable of
    ``phi`` are skipped: such an event is usually a restatement of the
    explanandum (``F=1`` explaining a fire) rather than an explanation.
    """
    if max_width is not None and max_width < 1:
        raise ValueError("max_width must be at least 1")
    an = Analyzer(state, phi, budget)
    if not an.ex1():
        return []
    exclude = () if include_trivial else formula_variables(an.phi)
    return [c for c in candidate_events(an, max_width, exclude) if an.is_explanation(c)]


def _core(an: Analyzer, cand) -> tuple:
    bad = set(an.failing(cand))
    return tuple(c for c in an.state.contexts if c not in bad)


def partial_core(state: EpistemicState, candidate, phi, budget=None) -> tuple:
    """Contexts of the state except those where the candidate holds without causing ``phi``.

    Raises :class:`CoreNotExplanation` when the candidate is not an
    explanation relative to that set, for instance because it holds in every
    remaining context or nowhere.
    """
    cand = _candidate(state, candidate)
    an = Analyzer(state, phi, budget)
    core = _core(an, cand)
    rep = an.report(cand, core)
    if not rep.verdict:
        raise CoreNotExplanation(core, rep)
    return core


def _require_weights(state):
    if state.weights is None:
        raise ValueError("goodness needs an epistemic state with weights")


def goodness(state: EpistemicState, candidate, phi, budget=None) -> Fraction:
    """Probability that the candidate is a sufficient cause, given that it holds."""
    _require_weights(state)
    cand = _candidate(state, candidate)
    an = Analyzer(state, phi, budget)
    return _goodness(an, cand)


def _goodness(an, cand) -> Fraction:
    state = an.state
    hits = an.where(cand)
    p = state.probability(hits)
    if p == 0:
        raise ZeroProbabilityCandidate(f"{cand} has probability 0 in the epistemic state")
    good = [c for c in hits if an.sufficient(cand, c)]
    return state.probability(good) / p


def _check_prior(prior: PriorState, state: EpistemicState | None, phi) -> EpistemicState:
    posterior = prior.condition(phi)
    if state is None:
        return posterior
    if state.model != prior.model:
        raise InconsistentPrior("prior and epistemic state use different models")
    if set(state.contexts) != set(posterior.contexts):
        raise InconsistentPrior("the epistemic state is not the set of prior contexts satisfying phi")
    if state.weights is not None and state.weights != posterior.weights:
        raise InconsistentPrior("state weights differ from the prior conditioned on phi")
    return state


def _prior_ratio(prior, an, cand, good_only):
    hits = [c for c in prior.contexts if World(prior.model, c, an.budget).conjunct_holds(cand)]
    p = prior.probability(hits)
    if p == 0:
        raise ZeroProbabilityCandidate(f"{cand} has prior probability 0")
    k = set(an.state.contexts)
    top = [c for c in hits if c in k and (not good_only or an.sufficient(cand, c))]
    return prior.probability(top) / p


def explanatory_power(prior: PriorState, state: EpistemicState | None, candidate, phi,
                      budget=None) -> Fraction:
    """Prior probability of the partial core given the candidate."""
    state = _check_prior(prior, state, phi)
    cand = _candidate(state, candidate)
    an = Analyzer(state, phi, budget)
    return _prior_ratio(prior, an, cand, True)


def gardenfors_power(prior: PriorState, state: EpistemicState | None, candidate, phi,
                     budget=None) -> Fraction:
    """Prior probability of the explanandum given the candidate."""
    state = _check_prior(prior, state, phi)
    cand = _candidate(state, candidate)
    an = Analyzer(state, phi, budget)
    return _prior_ratio(prior, an, cand, False)


def partial_explanation(state: EpistemicState, candidate, phi, prior: PriorState | None = None,
                        budget=None) -> PartialExplanationReport:
    """Everything known about ``candidate`` as a partial explanation, without raising on a bad core."""
    cand = _candidate(state, candidate)
    if prior is not None:
        state = _check_prior(prior, state, phi)
    an = Analyzer(state, phi, budget)
    core = _core(an, cand)
    rep = an.report(cand, core)
    good = prob = power = gpower = None
    if state.weights is not None:
        prob = state.probability(an.where(cand))
        if prob > 0:
            good = _goodness(an, cand)
    if prior is not None:
        power = _prior_ratio(prior, an, cand, True)
        gpower = _prior_ratio(prior, an, cand, False)
    return PartialExplanationReport(cand, an.phi, core, good, prob, power, gpower, rep.verdict, rep)
