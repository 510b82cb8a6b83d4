"""Bundled example models, context files and situation files."""
from __future__ import annotations

from pathlib import Path

from .dsl import parse_context_file, parse_model_document, parse_situation_file

FIXTURE_DIR = Path(__file__).parent / "fixtures"

DESCRIPTIONS = {
    "arson_disjunctive": "two arsonists, either match suffices",
    "arson_conjunctive": "two arsonists, both matches needed",
    "arson_other_causes": "conjunctive arsonists plus exogenous lightning",
    "arson_oxygen": "disjunctive arsonists with oxygen and a prior",
    "april_showers": "April rain delays a May fire to June",
    "victoria": "tan from a sunny Canaries trip or a tanning salon",
    "victoria_exogenous": "tan with weather and salon in the background",
    "tv": "television with sound but no picture",
    "tv_named": "television with the unexplained fault as a variable",
    "paresis": "paresis needs syphilis and a disposition",
    "paresis_alt": "rival paresis model without syphilis",
    "barometer": "barometer correlates with rain, causes nothing",
}


def fixture_names(suffix=".scm") -> list:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*" + suffix))


def resolve(ref, base: Path | None = None, suffix=".scm") -> Path:
    """A path as given, relative to ``base``, or a bundled fixture by name."""
    p = Path(ref)
    candidates = [p]
    if base is not None:
        candidates.append(Path(base) / p)
    candidates += [FIXTURE_DIR / p, FIXTURE_DIR / (str(ref) + suffix)]
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"no file or bundled fixture named {ref!r}")


def load_model(ref, base: Path | None = None):
    """CausalModel or ProbabilisticCausalModel from a path or fixture name."""
    return parse_model_document(resolve(ref, base).read_text())


def load_contexts(ref, signature, base: Path | None = None):
    return parse_context_file(resolve(ref, base, ".ctx").read_text(), signature)


def load_situations(ref, base: Path | None = None):
    path = resolve(ref, base, ".sit")
    return parse_situation_file(path.read_text(), load_model, path.parent)


def load_fixture(name):
    return load_model(name)
