"""Shared helpers for loading bundled examples in tests."""
from causex import EpistemicState, load_contexts, load_model
from causex.formula import World, parse_formula
from causex.model import enumerate_contexts


def plain(model):
    return getattr(model, "model", model)


def state_from(model_name, k_name):
    m = plain(load_model(model_name))
    ctxs, weights = load_contexts(k_name, m.signature)
    return EpistemicState(m, ctxs, weights)


def state_where(model, phi):
    model = plain(model)
    phi = parse_formula(phi, model.signature)
    return EpistemicState(model, [c for c in enumerate_contexts(model) if World(model, c).holds(phi)])


def names(items):
    return [str(x) for x in items]
