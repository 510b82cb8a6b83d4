"""Text formats: model documents, context files and situation files.

Model document::

    # comment
    exo U : {u00, u10, u01, u11}
    endo ML1 : {0, 1}
    endo FB : {0, 1}
    eq ML1 (U): (u00) -> 0 ; (u10) -> 1 ; (u01) -> 0 ; (u11) -> 1
    eq FB (ML1, ML2): (0, 0) -> 0 ; default -> 1
    prob: U=u11 -> 1/4

A line that starts with whitespace continues the previous statement.
Context files hold one context per line (``U1=v1, U2=v2``), optionally
weighted with ``-> p``; ``prob:`` prefixes are accepted so weight files can
mirror the ``prob:`` block.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .errors import FormulaSyntaxError, ModelError
from .model import CausalModel, EquationTable, Signature, _check_table, enumerate_contexts

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_VALUE = r"[A-Za-z0-9_.]+"


def _logical_lines(text):
    """Yield (line_number, statement) with comments removed and continuations joined."""
    current, start = None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace() and current is not None:
            current += " " + line.strip()
            continue
        if current is not None:
            yield start, current
        current, start = line.strip(), no
    if current is not None:
        yield start, current


def _err(msg, line, text="", col=0):
    return FormulaSyntaxError(msg, text, col, line=line)


def _at_line(exc, line):
    exc.args = (f"line {line}: {exc}",)
    return exc


def _values(body, line):
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise _err("range must be written {v1, v2, ...}", line, body)
    items = [v.strip() for v in body[1:-1].split(",")]
    for v in items:
        if not re.fullmatch(_VALUE, v):
            raise _err(f"bad value {v!r}", line, body)
    return tuple(items)


def _tuple(text, line):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1].strip()
        items = [v.strip() for v in inner.split(",")] if inner else []
    else:
        items = [text]
    for v in items:
        if not re.fullmatch(_VALUE, v):
            raise _err(f"bad value {v!r} in row", line, text)
    return tuple(items)


def parse_context_spec(text, line=None):
    """``U1=v1, U2=v2`` -> list of (name, value) pairs."""
    pairs = []
    text = text.strip()
    if not text:
        return pairs
    for part in text.split(","):
        m = re.fullmatch(rf"\s*({_NAME})\s*=\s*({_VALUE})\s*", part)
        if not m:
            raise _err(f"bad binding {part.strip()!r}; expected NAME=VALUE", line, text)
        pairs.append((m.group(1), m.group(2)))
    return pairs


def parse_weight(text, line=None) -> Fraction:
    try:
        w = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise _err(f"bad probability {text.strip()!r}", line, text) from None
    if w < 0:
        raise _err("probabilities must be nonnegative", line, text)
    return w


def parse_model_document(text: str):
    """Parse a model document.

    Returns a :class:`CausalModel`, or a
    :class:`~causex.general.ProbabilisticCausalModel` when ``prob:`` lines
    are present.
    """
    exo, endo, eqs, probs = [], [], [], []
    for line, stmt in _logical_lines(text):
        m = re.fullmatch(rf"(exo|endo)\s+({_NAME})\s*:\s*(.*)", stmt)
        if m:
            (exo if m.group(1) == "exo" else endo).append((m.group(2), _values(m.group(3), line), line))
            continue
        m = re.fullmatch(rf"eq\s+({_NAME})\s*\(([^)]*)\)\s*:\s*(.*)", stmt)
        if m:
            target = m.group(1)
            parents = tuple(p.strip() for p in m.group(2).split(",") if p.strip())
            for p in parents:
                if not re.fullmatch(_NAME, p):
                    raise _err(f"bad parent name {p!r}", line, stmt)
            rows, default = [], None
            for chunk in m.group(3).split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                if "->" not in chunk:
                    raise _err(f"row {chunk!r} lacks '->'", line, stmt)
                lhs, rhs = (s.strip() for s in chunk.split("->", 1))
                if not re.fullmatch(_VALUE, rhs):
                    raise _err(f"bad value {rhs!r}", line, stmt)
                if lhs == "default":
                    default = rhs
                else:
                    key = _tuple(lhs, line)
                    if len(key) != len(parents):
                        raise _err(f"row {lhs} has {len(key)} values for {len(parents)} parents", line, stmt)
                    rows.append((key, rhs))
            eqs.append((target, parents, tuple(rows), default, line))
            continue
        m = re.fullmatch(r"prob\s*:\s*(.*?)\s*->\s*(\S+)", stmt)
        if m:
            probs.append((parse_context_spec(m.group(1), line), parse_weight(m.group(2), line), line))
            continue
        raise _err(f"cannot parse statement {stmt!r}", line, stmt)
    sig = Signature(tuple((n, r) for n, r, _ in exo), tuple((n, r) for n, r, _ in endo))
    tables = []
    for target, parents, rows, default, line in eqs:
        try:
            table = EquationTable(target, parents, rows, default)
            if sig.is_endogenous(target):
                _check_table(table, sig)
        except ModelError as exc:
            raise _at_line(exc, line) from None
        tables.append(table)
    model = CausalModel(sig, tuple(tables))
    if not probs:
        return model
    from .general import ProbabilisticCausalModel
    weights = {}
    for pairs, w, line in probs:
        ctx = sig.context(pairs)
        if ctx in weights:
            raise _err(f"context {ctx} weighted twice", line)
        weights[ctx] = w
    return ProbabilisticCausalModel(model, weights)


def print_model_document(model) -> str:
    """Canonical text: declarations, explicit rows in canonical order, prob lines."""
    weights = None
    if hasattr(model, "weights") and hasattr(model, "model"):
        weights = model.weights
        model = model.model
    sig = model.signature
    out = []
    for name, values in sig.exogenous:
        out.append(f"exo {name} : {{{', '.join(values)}}}")
    for name, values in sig.endogenous:
        out.append(f"endo {name} : {{{', '.join(values)}}}")
    for eq in model.equations:
        rows = " ; ".join(f"({', '.join(k)}) -> {v}" for k, v in eq.canonical_rows(sig))
        out.append(f"eq {eq.target} ({', '.join(eq.parents)}): {rows}")
    if weights is not None:
        for ctx in enumerate_contexts(sig):
            w = weights.get(ctx, 0)
            if w:
                out.append(f"prob: {ctx} -> {w}")
    return "\n".join(out) + "\n"


def parse_context_file(text: str, signature: Signature):
    """Return ``(contexts, weights)``; ``weights`` is None when no line is weighted."""
    contexts, weights = [], []
    for line, stmt in _logical_lines(text):
        stmt = re.sub(r"^prob\s*:\s*", "", stmt)
        if "->" in stmt:
            spec, w = stmt.rsplit("->", 1)
            weights.append(parse_weight(w, line))
        else:
            spec = stmt
            weights.append(None)
        try:
            contexts.append(signature.context(parse_context_spec(spec, line)))
        except ModelError as exc:
            raise _at_line(exc, line) from None
    if all(w is None for w in weights):
        return contexts, None
    if any(w is None for w in weights):
        raise _err("either every context line carries a weight or none does", None)
    return contexts, dict(zip(contexts, weights))


def parse_situation_file(text: str, load_model, base: Path | None = None):
    """Lines ``MODEL @ U1=v1, ... [-> p]``; ``load_model(ref, base)`` resolves MODEL."""
    from .model import Situation
    situations, weights = [], []
    cache = {}
    for line, stmt in _logical_lines(text):
        if "@" not in stmt:
            raise _err("expected MODEL @ CONTEXT", line, stmt)
        ref, rest = (s.strip() for s in stmt.split("@", 1))
        if "->" in rest:
            rest, w = rest.rsplit("->", 1)
            weights.append(parse_weight(w, line))
        else:
            weights.append(None)
        if ref not in cache:
            m = load_model(ref, base)
            cache[ref] = getattr(m, "model", m)
        model = cache[ref]
        situations.append(Situation(model, model.context(parse_context_spec(rest, line))))
    if all(w is None for w in weights):
        return situations, None
    if any(w is None for w in weights):
        raise _err("either every situation line carries a weight or none does", None)
    return situations, weights
