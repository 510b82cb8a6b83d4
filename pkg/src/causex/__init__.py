"""Actual causes and explanations in finite recursive structural causal models."""
from .causality import (
    Ac2Witness,
    CauseVerdict,
    Classification,
    Partition,
    check_ac1,
    check_actual_cause,
    enumerate_actual_causes,
    enumerate_sufficient_causes,
    find_ac2_witness,
    is_sufficient_cause,
    verify_ac2_witness,
)
from .corpus import load_contexts, load_fixture, load_model, load_situations
from .dsl import parse_model_document, print_model_document
from .errors import *  # noqa: F401,F403
from .explanation import (
    EpistemicState,
    ExplanationReport,
    PartialExplanationReport,
    PriorState,
    check_explanation,
    enumerate_explanations,
    explanatory_power,
    gardenfors_power,
    goodness,
    partial_core,
    partial_explanation,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    ConjunctiveEvent,
    Const,
    Event,
    Intervention,
    Not,
    Or,
    evaluate,
    format_formula,
    holds_conjunct,
    parse_conjunct,
    parse_formula,
    print_formula,
)
from .general import (
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
from .model import (
    Assignment,
    CausalModel,
    Context,
    EquationTable,
    Signature,
    Situation,
    build_model,
    enumerate_contexts,
    intervene,
    solve,
    validate_model,
)

__version__ = "0.1.0"
