"""Causal formulas: AST, parser, printer and satisfaction.

Grammar (ASCII)::

    formula := or
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | atom
    atom    := '[' bind (',' bind)* ']' '(' inner ')' | '(' formula ')'
             | event | 'TRUE' | 'FALSE'
    inner   := the same Boolean grammar over events only
    bind    := IDENT '<-' VALUE
    event   := IDENT '=' VALUE

Binary connectives are left-associative; ``!`` binds tightest, then ``&``,
then ``|``.
"""
from __future__ import annotations

import itertools
import re
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Union

from .errors import (
    DisjunctiveCandidate,
    DuplicateInterventionTarget,
    FormulaSyntaxError,
    RangeViolation,
    SearchBudgetExceeded,
    UnknownVariable,
)
from .model import Assignment, CausalModel, Signature, Situation

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Event:
    variable: str
    value: str

    def __post_init__(self):
        object.__setattr__(self, "variable", str(self.variable))
        object.__setattr__(self, "value", str(self.value))

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return format_formula(self)


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not:
    operand: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Intervention:
    """``[Y1<-y1, ..., Yk<-yk](body)`` with distinct targets."""

    setting: tuple
    body: "Formula"

    def __post_init__(self):
        pairs = tuple((str(k), str(v)) for k, v in
                      (self.setting.items() if isinstance(self.setting, Mapping) else self.setting))
        names = [k for k, _ in pairs]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DuplicateInterventionTarget(f"{dup} is set twice in one intervention")
        object.__setattr__(self, "setting", pairs)

    def __str__(self):
        return format_formula(self)


Formula = Union[Event, Const, Not, And, Or, Intervention]


def conj(*parts):
    """Left-nested conjunction; TRUE for no parts."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts):
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def implies(a, b):
    return Or(Not(a), b)


@dataclass(frozen=True)
class ConjunctiveEvent:
    """A conjunction of primitive events over distinct variables."""

    events: tuple

    def __post_init__(self):
        events = tuple(e if isinstance(e, Event) else Event(*e) for e in self.events)
        names = [e.variable for e in events]
        if len(set(names)) != len(names):
            raise ValueError("a conjunctive event mentions a variable twice")
        object.__setattr__(self, "events", events)

    @classmethod
    def of(cls, *pairs, **kwargs) -> "ConjunctiveEvent":
        return cls(tuple(pairs) + tuple(kwargs.items()))

    @property
    def variables(self) -> tuple:
        return tuple(e.variable for e in self.events)

    @property
    def width(self) -> int:
        return len(self.events)

    def as_assignment(self) -> Assignment:
        return Assignment((e.variable, e.value) for e in self.events)

    def as_formula(self):
        return conj(*self.events)

    def restrict(self, variables) -> "ConjunctiveEvent":
        keep = set(variables)
        return ConjunctiveEvent(tuple(e for e in self.events if e.variable in keep))

    def proper_subsets(self):
        """Nonempty proper sub-conjunctions, smallest first."""
        for k in range(1, self.width):
            for combo in itertools.combinations(self.events, k):
                yield ConjunctiveEvent(combo)

    def canonical(self, signature: Signature) -> "ConjunctiveEvent":
        return ConjunctiveEvent(tuple(sorted(self.events, key=lambda e: signature.endo_index(e.variable))))

    def sort_key(self, signature: Signature):
        return (self.width,
                tuple(signature.endo_index(e.variable) for e in self.events),
                tuple(signature.range(e.variable).index(e.value) for e in self.events))

    def __str__(self):
        return " & ".join(str(e) for e in self.events) if self.events else "TRUE"

    def __len__(self):
        return len(self.events)


def to_conjunct(obj, signature: Signature | None = None) -> ConjunctiveEvent:
    """Coerce ``obj`` to a :class:`ConjunctiveEvent`.

    Accepts a conjunctive event, a primitive event, a mapping, a formula
    built from events with ``&``, or text in the formula grammar. Anything
    containing a disjunction raises :class:`DisjunctiveCandidate`.
    """
    if isinstance(obj, ConjunctiveEvent):
        out = obj
    elif isinstance(obj, Event):
        out = ConjunctiveEvent((obj,))
    elif isinstance(obj, Mapping):
        out = ConjunctiveEvent(tuple(obj.items()))
    else:
        if isinstance(obj, str):
            obj = parse_formula(obj, signature)
        out = ConjunctiveEvent(tuple(_flatten_conjunct(obj)))
    if signature is not None:
        for e in out.events:
            _check_event(e, signature)
    return out


def _flatten_conjunct(node):
    if isinstance(node, Event):
        return [node]
    if isinstance(node, And):
        return _flatten_conjunct(node.left) + _flatten_conjunct(node.right)
    if isinstance(node, Const) and node.value:
        return []
    if isinstance(node, Or) or _contains_or(node):
        raise DisjunctiveCandidate("disjunctive candidates are not allowed; "
                                   "model the disjunction as its own variable instead")
    raise ValueError(f"{format_formula(node)} is not a conjunction of primitive events")


def _contains_or(node):
    if isinstance(node, Or):
        return True
    if isinstance(node, (And,)):
        return _contains_or(node.left) or _contains_or(node.right)
    if isinstance(node, Not):
        return _contains_or(node.operand)
    if isinstance(node, Intervention):
        return _contains_or(node.body)
    return False


# ---------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2, Not: 3}


def _prec(node):
    return _PREC.get(type(node), 4)


def format_formula(node) -> str:
    if isinstance(node, ConjunctiveEvent):
        return str(node)
    if isinstance(node, Event):
        return f"{node.variable}={node.value}"
    if isinstance(node, Const):
        return "TRUE" if node.value else "FALSE"
    if isinstance(node, Not):
        inner = format_formula(node.operand)
        return "!" + (f"({inner})" if _prec(node.operand) < 3 else inner)
    if isinstance(node, (And, Or)):
        p = _prec(node)
        op = " & " if isinstance(node, And) else " | "
        left = format_formula(node.left)
        right = format_formula(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return left + op + right
    if isinstance(node, Intervention):
        binds = ", ".join(f"{k}<-{v}" for k, v in node.setting)
        return f"[{binds}]({format_formula(node.body)})"
    raise TypeError(f"not a formula: {node!r}")


print_formula = format_formula


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<arrow><-)|(?P<punct>[\[\](),=!&|])|(?P<word>[A-Za-z0-9_.]+))")


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, signature):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = signature

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise FormulaSyntaxError(f"expected {want}, found {got}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.disjunction(inner=False)
        self.take(kind="eof")
        return node

    def disjunction(self, inner):
        node = self.conjunction(inner)
        while self.peek()[1] == "|":
            self.take("|")
            node = Or(node, self.conjunction(inner))
        return node

    def conjunction(self, inner):
        node = self.unary(inner)
        while self.peek()[1] == "&":
            self.take("&")
            node = And(node, self.unary(inner))
        return node

    def unary(self, inner):
        if self.peek()[1] == "!":
            self.take("!")
            return Not(self.unary(inner))
        return self.atom(inner)

    def atom(self, inner):
        kind, value, pos = self.peek()
        if value == "[":
            if inner:
                raise FormulaSyntaxError("interventions cannot be nested inside an intervention body",
                                         self.text, pos)
            return self.intervention()
        if value == "(":
            self.take("(")
            node = self.disjunction(inner)
            self.take(")")
            return node
        if kind == "word" and value in ("TRUE", "FALSE"):
            self.take()
            return TRUE if value == "TRUE" else FALSE
        if kind == "word":
            return self.event()
        got = repr(value) if kind != "eof" else "end of input"
        raise FormulaSyntaxError(f"expected a formula, found {got}", self.text, pos)

    def event(self):
        name_tok = self.take(kind="word")
        self.take("=")
        value_tok = self.take(kind="word")
        ev = Event(name_tok[1], value_tok[1])
        if self.sig is not None:
            _check_event(ev, self.sig)
        return ev

    def intervention(self):
        start = self.take("[")[2]
        binds = [self.bind()]
        while self.peek()[1] == ",":
            self.take(",")
            binds.append(self.bind())
        self.take("]")
        self.take("(")
        body = self.disjunction(inner=True)
        self.take(")")
        names = [n for n, _ in binds]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DuplicateInterventionTarget(f"{dup} is set twice in the intervention at position {start}")
        return Intervention(tuple(binds), body)

    def bind(self):
        name = self.take(kind="word")[1]
        self.take(kind="arrow")
        value = self.take(kind="word")[1]
        if self.sig is not None:
            _check_event(Event(name, value), self.sig)
        return (name, value)


def _check_event(ev: Event, sig: Signature):
    if not sig.has(ev.variable):
        raise UnknownVariable(f"unknown variable {ev.variable}")
    if not sig.is_endogenous(ev.variable):
        raise UnknownVariable(f"{ev.variable} is exogenous; formulas only mention endogenous variables")
    if ev.value not in sig.range(ev.variable):
        raise RangeViolation(f"value {ev.value} is not in the range of {ev.variable}")


def parse_formula(text: str, signature: Signature | None = None):
    """Parse ``text``; when ``signature`` is given, names and values are checked too."""
    if isinstance(signature, CausalModel):
        signature = signature.signature
    return _Parser(text, signature).parse()


def parse_conjunct(text: str, signature: Signature | None = None) -> ConjunctiveEvent:
    if isinstance(signature, CausalModel):
        signature = signature.signature
    return to_conjunct(parse_formula(text, signature), signature)


def check_formula(node, signature: Signature):
    """Raise if ``node`` mentions unknown/exogenous variables or bad values."""
    for ev in _events(node):
        _check_event(ev, signature)


def _events(node):
    if isinstance(node, Event):
        yield node
    elif isinstance(node, Not):
        yield from _events(node.operand)
    elif isinstance(node, (And, Or)):
        yield from _events(node.left)
        yield from _events(node.right)
    elif isinstance(node, Intervention):
        for k, v in node.setting:
            yield Event(k, v)
        yield from _events(node.body)
    elif isinstance(node, ConjunctiveEvent):
        yield from node.events


def formula_variables(node) -> set:
    return {e.variable for e in _events(node)}


def well_formed(node, signature: Signature) -> bool:
    try:
        check_formula(node, signature)
    except (UnknownVariable, RangeViolation):
        return False
    return True


# ---------------------------------------------------------------------------
# semantics

class Budget:
    """Counts formula evaluations across one query."""

    def __init__(self, limit=DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise SearchBudgetExceeded(self.limit, self.used)


def as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget if budget is not None else DEFAULT_BUDGET)


class World:
    """One situation, solved lazily under any intervention, with memoisation.

    Interventions are keyed by a tuple aligned with the endogenous variables
    (``None`` = not intervened), so every distinct submodel is solved once.
    """

    def __init__(self, model: CausalModel, context, budget=None):
        self.model = model
        self.sig = model.signature
        self.context = context if set(context) == set(self.sig.exogenous_names) else model.context(context)
        self.n = len(self.sig.endogenous)
        self.empty = (None,) * self.n
        self.budget = as_budget(budget)
        self._solutions = {}
        self._truth = {}
        self._compiled = {}

    def key(self, setting=()) -> tuple:
        """Intervention key for a mapping or iterable of (name, value) pairs."""
        items = setting.items() if isinstance(setting, Mapping) else setting
        key = list(self.empty)
        for name, value in items:
            key[self.sig.endo_index(name)] = str(value)
        return tuple(key)

    def solution(self, key=None) -> tuple:
        key = self.empty if key is None else key
        sol = self._solutions.get(key)
        if sol is None:
            sol = self.model.solve_values(self.context, key)
            self._solutions[key] = sol
        return sol

    def assignment(self, key=None) -> Assignment:
        return Assignment(zip(self.sig.endogenous_names, self.solution(key)))

    def holds(self, formula, key=None) -> bool:
        """(M_key, u) |= formula."""
        self.budget.tick()
        key = self.empty if key is None else key
        fid = id(formula)
        entry = self._compiled.get(fid)
        if entry is None:
            entry = (formula, _compile(formula, self.sig))
            self._compiled[fid] = entry
        ck = (fid, key)
        val = self._truth.get(ck)
        if val is None:
            val = entry[1](self, key)
            self._truth[ck] = val
        return val

    def conjunct_holds(self, event: ConjunctiveEvent, key=None) -> bool:
        sol = self.solution(key)
        return all(sol[self.sig.endo_index(e.variable)] == e.value for e in event.events)


def _compile(node, sig: Signature):
    if isinstance(node, ConjunctiveEvent):
        node = node.as_formula()
    if isinstance(node, Event):
        idx = sig.endo_index(node.variable)
        value = node.value
        return lambda w, key: w.solution(key)[idx] == value
    if isinstance(node, Const):
        v = node.value
        return lambda w, key: v
    if isinstance(node, Not):
        f = _compile(node.operand, sig)
        return lambda w, key: not f(w, key)
    if isinstance(node, And):
        a, b = _compile(node.left, sig), _compile(node.right, sig)
        return lambda w, key: a(w, key) and b(w, key)
    if isinstance(node, Or):
        a, b = _compile(node.left, sig), _compile(node.right, sig)
        return lambda w, key: a(w, key) or b(w, key)
    if isinstance(node, Intervention):
        binds = [(sig.endo_index(k), v) for k, v in node.setting]
        body = _compile(node.body, sig)

        def run(w, key):
            merged = list(key)
            for idx, v in binds:
                merged[idx] = v
            return body(w, tuple(merged))
        return run
    raise TypeError(f"not a formula: {node!r}")


def evaluate(situation: Situation, formula) -> bool:
    """Whether the situation satisfies ``formula``."""
    if isinstance(formula, str):
        formula = parse_formula(formula, situation.model.signature)
    return World(situation.model, situation.context, budget=None).holds(formula)


def holds_conjunct(situation: Situation, event) -> bool:
    event = to_conjunct(event, situation.model.signature)
    w = World(situation.model, situation.context)
    return w.conjunct_holds(event)
