import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causex import load_model, load_situations
from causex.errors import EmptyHypothesisSet, InconsistentPrior, VariableMismatch
from causex.explanation import EpistemicState, check_explanation
from causex.formula import TRUE, And, Event, Not, Or, parse_formula, to_conjunct
from causex.general import (
    GeneralExplanation,
    ProbabilisticCausalModel,
    SituationSet,
    characterizing_formula,
    check_general_explanation,
    enumerate_general_explanations,
    model_valid,
    probability_of_cause,
    probability_of_formula,
)
from causex.model import Situation, enumerate_contexts
from causex.random_models import RandomModelConfig, random_formula, random_model

from helpers import state_from


def paresis_set():
    sits, _ = load_situations("s_paresis")
    return SituationSet(tuple(sits))


def test_model_valid():
    m1, m2 = load_model("arson_disjunctive"), load_model("arson_conjunctive")
    assert model_valid(m1, "[ML1<-1](FB=1)")
    assert not model_valid(m2, "[ML1<-1](FB=1)")
    assert model_valid(m2, TRUE)
    assert not model_valid(m1, "Q=1")


def test_characterizing_formula_singles_out_model():
    mp, alt = load_model("paresis"), load_model("paresis_alt")
    psi = characterizing_formula(mp)
    assert model_valid(mp, psi)
    assert not model_valid(alt, psi)
    assert model_valid(alt, characterizing_formula(alt))
    # printing and reparsing gives the same formula
    from causex.formula import format_formula
    assert parse_formula(format_formula(psi)) == psi


def test_paresis_explanation():
    psi = characterizing_formula(load_model("paresis"))
    rep = check_general_explanation(paresis_set(), GeneralExplanation(psi, to_conjunct("S=1")), "P=1",
                                    [TRUE])
    assert rep.verdict and rep.ex1 and rep.ex2 and rep.ex3 and rep.ex4


def test_paresis_without_causal_information_fails():
    rep = check_general_explanation(paresis_set(), GeneralExplanation(TRUE, to_conjunct("S=1")), "P=1", [TRUE])
    assert not rep.ex2


def test_known_model_has_no_explanation():
    sits, _ = load_situations("s_paresis_known")
    sset = SituationSet(tuple(sits))
    psi = characterizing_formula(load_model("paresis"))
    assert enumerate_general_explanations(sset, "P=1", [TRUE, psi]) == []
    rep = check_general_explanation(sset, GeneralExplanation(psi, to_conjunct("S=1")), "P=1", [TRUE])
    assert not rep.ex4


def test_hypotheses_required():
    with pytest.raises(EmptyHypothesisSet):
        check_general_explanation(paresis_set(), GeneralExplanation(TRUE, to_conjunct("S=1")), "P=1", [])


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        check_general_explanation(paresis_set(), GeneralExplanation(TRUE, to_conjunct("Q=1")), "P=1", [TRUE])


def test_candidate_true_everywhere_fails_ex4():
    rep = check_general_explanation(paresis_set(), GeneralExplanation(TRUE, to_conjunct("P=1")), "P=1", [TRUE])
    assert not rep.ex4


@pytest.mark.parametrize("model,k,phi", [
    ("arson_disjunctive", "k_arson_disjunctive", "FB=1"),
    ("arson_other_causes", "k_arson_other", "FB=1"),
    ("arson_conjunctive", "k_arson_conjunctive", "FB=1"),
    ("victoria", "k_victoria", "Tan=1"),
    ("april_showers", "k_april_june", "F=2"),
])
def test_reduction_to_single_model(model, k, phi):
    s = state_from(model, k)
    sset = SituationSet(tuple(Situation(s.model, c) for c in s.contexts))
    sig = s.model.signature
    for v in sig.endogenous_names:
        for x in sig.range(v):
            cand = to_conjunct(f"{v}={x}", sig)
            general = check_general_explanation(sset, GeneralExplanation(TRUE, cand), phi, [TRUE]).verdict
            assert general == check_explanation(s, cand, phi).verdict


def test_reduction_on_random_models():
    cfg = RandomModelConfig(max_endogenous=3, binary=True)
    for seed in range(40):
        rng = random.Random(seed)
        m = random_model(rng, cfg)
        phi = random_formula(rng, m)
        from causex.formula import World
        ctxs = [c for c in enumerate_contexts(m) if World(m, c).holds(phi)]
        if not ctxs:
            continue
        s = EpistemicState(m, ctxs)
        sset = SituationSet(tuple(Situation(m, c) for c in ctxs))
        for v in m.signature.endogenous_names:
            for x in m.signature.range(v):
                cand = to_conjunct(f"{v}={x}", m.signature)
                assert (check_general_explanation(sset, GeneralExplanation(TRUE, cand), phi, [TRUE]).verdict
                        == check_explanation(s, cand, phi).verdict)


def test_probability_of_formula():
    u1 = ProbabilisticCausalModel.uniform(load_model("arson_disjunctive"))
    u2 = ProbabilisticCausalModel.uniform(load_model("arson_conjunctive"))
    assert probability_of_formula(u1, "FB=1") == Fraction(3, 4)
    assert probability_of_formula(u2, "FB=1") == Fraction(1, 4)
    assert probability_of_formula(u1, TRUE) == 1


def test_probability_of_cause():
    u1 = ProbabilisticCausalModel.uniform(load_model("arson_disjunctive"))
    u2 = ProbabilisticCausalModel.uniform(load_model("arson_conjunctive"))
    assert probability_of_cause(u2, "ML1=1", "FB=1") == Fraction(1, 4)
    assert probability_of_cause(u1, "ML1=1", "FB=1") == Fraction(1, 2)
    assert probability_of_cause(u1, "ML1=1 & ML2=0", "FB=0") == 0


def test_pmodel_weights_validated():
    m = load_model("arson_disjunctive")
    with pytest.raises(InconsistentPrior):
        ProbabilisticCausalModel(m, {m.context(U="u00"): Fraction(1, 2)})


events = st.builds(lambda v, x: Event(v, x), st.sampled_from(("ML1", "ML2", "FB")), st.sampled_from("01"))
bools = st.recursive(events, lambda s: st.one_of(st.builds(Not, s), st.builds(And, s, s), st.builds(Or, s, s)),
                     max_leaves=5)
weights = st.lists(st.integers(1, 9), min_size=4, max_size=4)


@given(bools, bools)
@settings(max_examples=60, deadline=None)
def test_validity_distributes_over_conjunction(f, g):
    for name in ("arson_disjunctive", "arson_conjunctive"):
        m = load_model(name)
        assert model_valid(m, And(f, g)) == (model_valid(m, f) and model_valid(m, g))


@given(bools, weights)
@settings(max_examples=60, deadline=None)
def test_probability_additive_over_exclusive_formulas(f, ws):
    m = load_model("arson_disjunctive")
    total = sum(ws)
    pm = ProbabilisticCausalModel(m, {c: Fraction(w, total) for c, w in zip(enumerate_contexts(m), ws)})
    assert probability_of_formula(pm, f) + probability_of_formula(pm, Not(f)) == 1
    a, b = And(f, Event("FB", "1")), And(f, Event("FB", "0"))
    assert probability_of_formula(pm, Or(a, b)) == probability_of_formula(pm, a) + probability_of_formula(pm, b)


@given(weights, st.sampled_from(["ML1=1", "ML2=1", "ML1=1 & ML2=1", "FB=1"]))
@settings(max_examples=40, deadline=None)
def test_cause_probability_dominated(ws, cand):
    for name in ("arson_disjunctive", "arson_conjunctive"):
        m = load_model(name)
        total = sum(ws)
        pm = ProbabilisticCausalModel(m, {c: Fraction(w, total) for c, w in zip(enumerate_contexts(m), ws)})
        p = probability_of_cause(pm, cand, "FB=1")
        assert p <= probability_of_formula(pm, cand)
        assert p <= probability_of_formula(pm, "FB=1")
