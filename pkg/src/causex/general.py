"""Explanations under uncertainty about the causal model itself.

Here an epistemic state is a set of situations whose models may differ, and
an explanation is a pair ``(psi, X=x)``: ``psi`` is causal information that
restricts which models are in play, ``X=x`` the facts.  A formula is valid
in a model when it holds in every context of that model.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .causality import CauseSearch, check_actual_cause
from .errors import (
    EmptyEpistemicState,
    EmptyHypothesisSet,
    InconsistentPrior,
    VariableMismatch,
)
from .explanation import ExplanationReport
from .formula import (
    ConjunctiveEvent,
    Event,
    Intervention,
    World,
    as_budget,
    conj,
    disj,
    formula_variables,
    parse_formula,
    to_conjunct,
    well_formed,
)
from .model import CausalModel, Situation, enumerate_contexts


@dataclass(frozen=True, eq=False)
class ProbabilisticCausalModel:
    """A causal model with an exact probability on its contexts."""

    model: CausalModel
    weights: dict

    def __post_init__(self):
        out = {}
        for ctx, w in self.weights.items():
            ctx = self.model.context(ctx)
            w = Fraction(w)
            if w < 0:
                raise InconsistentPrior(f"negative weight {w} on context {ctx}")
            out[ctx] = out.get(ctx, Fraction(0)) + w
        total = sum(out.values(), Fraction(0))
        if total != 1:
            raise InconsistentPrior(f"context weights sum to {total}, not 1")
        object.__setattr__(self, "weights", {c: out.get(c, Fraction(0)) for c in enumerate_contexts(self.model)})

    @classmethod
    def uniform(cls, model: CausalModel) -> "ProbabilisticCausalModel":
        ctxs = enumerate_contexts(model)
        return cls(model, {c: Fraction(1, len(ctxs)) for c in ctxs})

    @property
    def signature(self):
        return self.model.signature

    def __eq__(self, other):
        return (isinstance(other, ProbabilisticCausalModel) and self.model == other.model
                and self.weights == other.weights)

    def __hash__(self):
        return hash(self.model)


@dataclass(frozen=True)
class GeneralExplanation:
    psi: object
    event: ConjunctiveEvent

    def __str__(self):
        from .formula import format_formula
        return f"({format_formula(self.psi)}, {self.event})"


@dataclass(frozen=True, eq=False)
class SituationSet:
    situations: tuple
    weights: tuple | None = None

    def __post_init__(self):
        sits = tuple(s if isinstance(s, Situation) else Situation(*s) for s in self.situations)
        if not sits:
            raise EmptyEpistemicState("a situation set needs at least one situation")
        if len(set(sits)) != len(sits):
            raise ValueError("situations must be distinct")
        object.__setattr__(self, "situations", sits)
        if self.weights is not None:
            ws = tuple(Fraction(w) for w in self.weights)
            if len(ws) != len(sits):
                raise InconsistentPrior("one weight per situation is required")
            if any(w < 0 for w in ws) or sum(ws, Fraction(0)) != 1:
                raise InconsistentPrior("situation weights must be nonnegative and sum to 1")
            object.__setattr__(self, "weights", ws)

    @property
    def models(self) -> tuple:
        """Distinct models in order of first appearance."""
        out = []
        for s in self.situations:
            if s.model not in out:
                out.append(s.model)
        return tuple(out)

    def __len__(self):
        return len(self.situations)


def _formula_for(phi, model: CausalModel):
    return parse_formula(phi, model.signature) if isinstance(phi, str) else phi


def model_valid(model: CausalModel, psi) -> bool:
    """Whether ``psi`` holds in every context of ``model``.

    A formula that mentions a variable or value the model does not have is
    not valid in it.
    """
    if isinstance(psi, str):
        psi = parse_formula(psi)
    if not well_formed(psi, model.signature):
        return False
    return all(World(model, ctx).holds(psi) for ctx in enumerate_contexts(model))


def characterizing_formula(model: CausalModel):
    """A formula valid in ``model`` that pins down every equation.

    For each context ``u`` it conjoins, over every endogenous ``X`` and every
    setting ``w`` of the other endogenous variables, ``[V-X<-w](X=x)`` where
    ``x`` is what the equation for ``X`` yields at ``u`` and ``w``.  The
    result is the disjunction of these per-context conjunctions.
    """
    sig = model.signature
    names = sig.endogenous_names
    parts = []
    for ctx in enumerate_contexts(model):
        w = World(model, ctx, budget=None)
        atoms = []
        for i, x in enumerate(names):
            rest = [n for n in names if n != x]
            for values in itertools.product(*(sig.range(n) for n in rest)):
                setting = tuple(zip(rest, values))
                val = w.solution(w.key(setting))[i]
                ev = Event(x, val)
                atoms.append(Intervention(setting, ev) if setting else ev)
        chi = conj(*atoms)
        if chi not in parts:
            parts.append(chi)
    return disj(*parts)


def _check_variables(sset: SituationSet, event: ConjunctiveEvent, phi):
    for m in sset.models:
        sig = m.signature
        missing = [v for v in event.variables if not sig.is_endogenous(v)]
        if not isinstance(phi, str):
            missing += sorted(v for v in formula_variables(phi) if not sig.is_endogenous(v))
        if missing:
            raise VariableMismatch(f"variable {missing[0]} is not endogenous in every model of the set")


class _GeneralAnalyzer:
    def __init__(self, sset: SituationSet, phi, budget=None):
        self.sset = sset
        self.budget = as_budget(budget)
        self.phi = {}
        for m in sset.models:
            try:
                self.phi[m] = _formula_for(phi, m)
            except Exception as exc:
                if isinstance(exc, VariableMismatch):
                    raise
                raise VariableMismatch(f"explanandum does not fit every model: {exc}") from None
        self._searches = {}
        self._valid = {}

    def search(self, s: Situation) -> CauseSearch:
        cs = self._searches.get(s)
        if cs is None:
            cs = CauseSearch(World(s.model, s.context, self.budget), self.phi[s.model])
            self._searches[s] = cs
        return cs

    def valid_models(self, psi) -> frozenset:
        key = id(psi)
        hit = self._valid.get(key)
        if hit is None:
            hit = (psi, frozenset(i for i, m in enumerate(self.sset.models) if model_valid(m, psi)))
            self._valid[key] = hit
        return hit[1]

    def holds(self, event, s) -> bool:
        return self.search(s).world.conjunct_holds(event)

    def ex1(self):
        return [s for s in self.sset.situations if not self.search(s).phi_holds()]

    def ex2_failures(self, psi, event) -> list:
        valid = self.valid_models(psi)
        models = self.sset.models
        out = []
        for s in self.sset.situations:
            if models.index(s.model) in valid and self.holds(event, s):
                if not self.search(s).sufficient(event):
                    out.append(s)
        return out

    def ex4(self, event) -> bool:
        hits = [self.holds(event, s) for s in self.sset.situations]
        return any(hits) and not all(hits)


def _hypotheses(psi, hypotheses):
    if not hypotheses:
        raise EmptyHypothesisSet("EX3 needs a finite, nonempty set of hypotheses")
    hyp = [parse_formula(h) if isinstance(h, str) else h for h in hypotheses]
    if psi not in hyp:
        hyp.append(psi)
    return hyp


def _sub_events(event: ConjunctiveEvent):
    for k in range(event.width + 1):
        for combo in itertools.combinations(event.events, k):
            yield ConjunctiveEvent(combo)


def _report(an: _GeneralAnalyzer, expl: GeneralExplanation, hyp, phi) -> ExplanationReport:
    psi, event = expl.psi, expl.event
    phi_fail = tuple(an.ex1())
    failing = tuple(an.ex2_failures(psi, event))
    mine = an.valid_models(psi)
    blockers = []
    for alt in hyp:
        theirs = an.valid_models(alt)
        if not theirs >= mine:
            continue
        for sub in _sub_events(event):
            if sub.width == event.width and theirs == mine:
                continue  # the same explanation up to equivalence of psi
            if not an.ex2_failures(alt, sub):
                blockers.append(GeneralExplanation(alt, sub))
    ex4 = an.ex4(event)
    ok = not phi_fail and not failing and not blockers and ex4
    return ExplanationReport(event, phi, not phi_fail, not failing, not blockers, ex4,
                             failing, ok, phi_fail, tuple(blockers))


def check_general_explanation(sset: SituationSet, candidate: GeneralExplanation, phi,
                              hypotheses=None, budget=None) -> ExplanationReport:
    """Clause-by-clause verdict for ``(psi, X=x)`` relative to a set of situations.

    Minimality is checked against ``hypotheses``, a finite set of
    alternative causal formulas; ``candidate.psi`` is added if absent.
    In the returned report ``failing_contexts`` holds situations and
    ``ex3_blockers`` holds competing :class:`GeneralExplanation` pairs.
    """
    psi = candidate.psi
    if isinstance(psi, str):
        psi = parse_formula(psi)
    event = to_conjunct(candidate.event)
    if event.width == 0:
        raise ValueError("an explanation needs at least one conjunct")
    _check_variables(sset, event, phi)
    hyp = _hypotheses(psi, hypotheses)
    an = _GeneralAnalyzer(sset, phi, budget)
    return _report(an, GeneralExplanation(psi, event), hyp, phi)


def enumerate_general_explanations(sset: SituationSet, phi, hypotheses, max_width=None,
                                   include_trivial=False, budget=None) -> list:
    """Every ``(psi, X=x)`` with ``psi`` from ``hypotheses`` that explains ``phi``."""
    if not hypotheses:
        raise EmptyHypothesisSet("enumeration needs a finite, nonempty set of hypotheses")
    hyp = []
    for h in hypotheses:
        h = parse_formula(h) if isinstance(h, str) else h
        if h not in hyp:
            hyp.append(h)
    an = _GeneralAnalyzer(sset, phi, budget)
    if an.ex1():
        return []
    shared = set.intersection(*(set(m.signature.endogenous_names) for m in sset.models))
    skip = set()
    if not include_trivial:
        for f in an.phi.values():
            skip |= formula_variables(f)
    names = [n for n in sset.models[0].signature.endogenous_names if n in shared and n not in skip]
    top = len(names) if max_width is None else min(max_width, len(names))
    seen = []
    for s in sset.situations:
        sol = an.search(s).world.assignment()
        for k in range(1, top + 1):
            for combo in itertools.combinations(names, k):
                ev = ConjunctiveEvent(tuple((n, sol[n]) for n in combo))
                if ev not in seen:
                    seen.append(ev)
    sig = sset.models[0].signature
    seen.sort(key=lambda e: e.sort_key(sig))
    out = []
    for psi in hyp:
        for ev in seen:
            if _report(an, GeneralExplanation(psi, ev), hyp, phi).verdict:
                out.append(GeneralExplanation(psi, ev))
    return out


def _pmodel_formula(pmodel, phi):
    return _formula_for(phi, pmodel.model)


def probability_of_formula(pmodel: ProbabilisticCausalModel, phi) -> Fraction:
    """Total weight of the contexts satisfying ``phi``."""
    phi = _pmodel_formula(pmodel, phi)
    return sum((w for ctx, w in pmodel.weights.items()
                if w and World(pmodel.model, ctx, budget=None).holds(phi)), Fraction(0))


def probability_of_cause(pmodel: ProbabilisticCausalModel, candidate, phi, budget=None) -> Fraction:
    """Total weight of the contexts where ``candidate`` is an actual cause of ``phi``."""
    phi = _pmodel_formula(pmodel, phi)
    cand = to_conjunct(candidate, pmodel.signature)
    if cand.width == 0:
        raise ValueError("a cause needs at least one conjunct")
    budget = as_budget(budget)
    total = Fraction(0)
    for ctx, w in pmodel.weights.items():
        if w and check_actual_cause(Situation(pmodel.model, ctx), cand, phi, budget).is_actual:
            total += w
    return total
