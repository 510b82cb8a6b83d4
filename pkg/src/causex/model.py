"""Finite recursive structural causal models.

A model is a signature (exogenous and endogenous variables with finite,
ordered ranges) plus one extensional equation table per endogenous variable.
Values are opaque symbols and are normalised to ``str`` on the way in, so
``0`` and ``"0"`` name the same value.
"""
from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import (
    CyclicModel,
    DuplicateVariable,
    ModelError,
    PartialEquation,
    RangeViolation,
    UnknownVariable,
)


class Assignment(Mapping):
    """Immutable, hashable, insertion-ordered map from variable name to value."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings=(), **kwargs):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        data = {}
        for name, value in itertools.chain(items, kwargs.items()):
            name = str(name)
            if name in data:
                raise DuplicateVariable(f"variable {name} bound twice")
            data[name] = str(value)
        self._map = data
        self._hash = None

    def __getitem__(self, name):
        return self._map[name]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._map == dict(other.items())
        return NotImplemented

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __str__(self):
        return ", ".join(f"{k}={v}" for k, v in self._map.items())

    def restrict(self, names) -> "Assignment":
        names = set(names)
        return type(self)((k, v) for k, v in self._map.items() if k in names)

    def merged(self, other: Mapping) -> "Assignment":
        """Bindings of ``self`` overridden by ``other``."""
        data = dict(self._map)
        data.update((str(k), str(v)) for k, v in other.items())
        return type(self)(data)


class Context(Assignment):
    """One value for every exogenous variable."""

    __slots__ = ()


def _norm_range(values) -> tuple:
    return tuple(str(v) for v in values)


@dataclass(frozen=True)
class Signature:
    exogenous: tuple
    endogenous: tuple
    _ranges: dict = field(init=False, repr=False, compare=False, hash=False)
    _endo_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        exo = tuple((str(n), _norm_range(r)) for n, r in _pairs(self.exogenous))
        endo = tuple((str(n), _norm_range(r)) for n, r in _pairs(self.endogenous))
        object.__setattr__(self, "exogenous", exo)
        object.__setattr__(self, "endogenous", endo)
        if not endo:
            raise ModelError("a signature needs at least one endogenous variable")
        ranges = {}
        for name, values in exo + endo:
            if not name:
                raise ModelError("variable names must be nonempty")
            if name in ranges:
                raise DuplicateVariable(f"variable {name} declared twice")
            if not values:
                raise ModelError(f"range of {name} is empty")
            if len(set(values)) != len(values):
                raise DuplicateVariable(f"range of {name} repeats a value")
            ranges[name] = values
        object.__setattr__(self, "_ranges", ranges)
        object.__setattr__(self, "_endo_index", {n: i for i, (n, _) in enumerate(endo)})

    @property
    def exogenous_names(self) -> tuple:
        return tuple(n for n, _ in self.exogenous)

    @property
    def endogenous_names(self) -> tuple:
        return tuple(n for n, _ in self.endogenous)

    def range(self, name) -> tuple:
        try:
            return self._ranges[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name}") from None

    def has(self, name) -> bool:
        return name in self._ranges

    def is_endogenous(self, name) -> bool:
        return name in self._endo_index

    def is_exogenous(self, name) -> bool:
        return name in self._ranges and name not in self._endo_index

    def endo_index(self, name) -> int:
        try:
            return self._endo_index[name]
        except KeyError:
            if name in self._ranges:
                raise UnknownVariable(f"{name} is exogenous, not endogenous") from None
            raise UnknownVariable(f"unknown variable {name}") from None

    def check_value(self, name, value):
        if str(value) not in self.range(name):
            raise RangeViolation(f"value {value} is not in the range of {name} {{{', '.join(self.range(name))}}}")

    def context(self, bindings=(), **kwargs) -> Context:
        ctx = Context(bindings, **kwargs)
        for name in ctx:
            if not self.is_exogenous(name):
                raise UnknownVariable(f"{name} is not an exogenous variable")
            self.check_value(name, ctx[name])
        missing = [n for n in self.exogenous_names if n not in ctx]
        if missing:
            raise ModelError("context leaves exogenous variables unset: " + ", ".join(missing))
        return Context((n, ctx[n]) for n in self.exogenous_names)

    def setting(self, bindings=(), **kwargs) -> Assignment:
        """Validated assignment to endogenous variables, in declaration order."""
        a = Assignment(bindings, **kwargs)
        for name in a:
            self.endo_index(name)
            self.check_value(name, a[name])
        return Assignment((n, a[n]) for n in self.endogenous_names if n in a)


def _pairs(spec):
    if isinstance(spec, Mapping):
        return list(spec.items())
    return list(spec)


@dataclass(frozen=True)
class EquationTable:
    """Extensional structural equation: parent-value tuple -> target value."""

    target: str
    parents: tuple
    rows: tuple
    default: str | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        parents = tuple(str(p) for p in self.parents)
        rows = _pairs(self.rows)
        norm = []
        index = {}
        for key, value in rows:
            if not isinstance(key, tuple):
                key = (key,) if len(parents) == 1 else tuple(key)
            key = tuple(str(k) for k in key)
            if key in index:
                raise ModelError(f"equation for {self.target} lists row {key} twice")
            index[key] = str(value)
            norm.append((key, str(value)))
        object.__setattr__(self, "target", str(self.target))
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "rows", tuple(norm))
        if self.default is not None:
            object.__setattr__(self, "default", str(self.default))
        object.__setattr__(self, "_index", index)

    def lookup(self, key: tuple) -> str:
        value = self._index.get(key, self.default)
        if value is None:
            raise PartialEquation(f"equation for {self.target} has no row for {key}")
        return value

    @classmethod
    def constant(cls, target, value) -> "EquationTable":
        return cls(target, (), (((), value),))

    @classmethod
    def from_function(cls, target, parents, fn: Callable, signature: Signature) -> "EquationTable":
        """Tabulate ``fn(*parent_values)`` over every parent-value tuple.

        ``fn`` receives values as strings; its result is stringified.
        """
        parents = tuple(parents)
        domains = [signature.range(p) for p in parents]
        rows = tuple((key, str(fn(*key))) for key in itertools.product(*domains))
        return cls(target, parents, rows)

    def canonical_rows(self, signature: Signature) -> list:
        """Explicit rows in canonical parent-tuple order (default expanded)."""
        domains = [signature.range(p) for p in self.parents]
        return [(key, self.lookup(key)) for key in itertools.product(*domains)]


@dataclass(frozen=True, eq=False)
class CausalModel:
    """Signature plus one equation per endogenous variable.

    Equality is extensional: two models are equal when they share a
    signature and every equation has the same parents and the same value on
    every parent tuple, however the tables were written down.
    """

    signature: Signature
    equations: tuple
    order: tuple = field(init=False)
    _plan: tuple = field(init=False, repr=False)
    _canon: tuple = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        sig = self.signature
        eqs = self.equations
        if isinstance(eqs, Mapping):
            eqs = list(eqs.values())
        by_target = {}
        for eq in eqs:
            if eq.target in by_target:
                raise DuplicateVariable(f"two equations for {eq.target}")
            by_target[eq.target] = eq
        for name in by_target:
            if not sig.has(name):
                raise UnknownVariable(f"equation for undeclared variable {name}")
            if not sig.is_endogenous(name):
                raise ModelError(f"exogenous variable {name} cannot have an equation")
        missing = [n for n in sig.endogenous_names if n not in by_target]
        if missing:
            raise PartialEquation("no equation for endogenous variable(s): " + ", ".join(missing))
        ordered = tuple(by_target[n] for n in sig.endogenous_names)
        for eq in ordered:
            _check_table(eq, sig)
        object.__setattr__(self, "equations", ordered)
        order = _topological_order(sig, ordered)
        object.__setattr__(self, "order", order)
        plan = []
        for name in order:
            eq = by_target[name]
            src = tuple(("n", sig.endo_index(p)) if sig.is_endogenous(p) else ("x", p)
                        for p in eq.parents)
            plan.append((sig.endo_index(name), src, eq._index, eq.default))
        object.__setattr__(self, "_plan", tuple(plan))
        canon = tuple((eq.parents, tuple(v for _, v in eq.canonical_rows(sig))) for eq in ordered)
        object.__setattr__(self, "_canon", canon)
        object.__setattr__(self, "_hash", hash((sig, canon)))

    def __eq__(self, other):
        if not isinstance(other, CausalModel):
            return NotImplemented
        return self._hash == other._hash and self.signature == other.signature and self._canon == other._canon

    def __hash__(self):
        return self._hash

    def equation(self, name) -> EquationTable:
        return self.equations[self.signature.endo_index(name)]

    def parents(self, name) -> tuple:
        return self.equation(name).parents

    def context(self, bindings=(), **kwargs) -> Context:
        return self.signature.context(bindings, **kwargs)

    def descendants(self, name) -> set:
        """Endogenous variables reachable from ``name`` along parent edges."""
        children = {n: [] for n in self.signature.endogenous_names}
        for eq in self.equations:
            for p in eq.parents:
                if p in children:
                    children[p].append(eq.target)
        seen, stack = set(), list(children.get(name, []))
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(children[n])
        return seen

    def edges(self) -> list:
        return [(p, eq.target) for eq in self.equations for p in eq.parents]

    def solve_values(self, context: Mapping, setting: tuple | None = None) -> tuple:
        """Endogenous values in declaration order.

        ``setting`` is a tuple aligned with the endogenous variables whose
        non-``None`` entries override the corresponding equations.
        """
        values = [None] * len(self.signature.endogenous)
        for idx, src, table, default in self._plan:
            if setting is not None and setting[idx] is not None:
                values[idx] = setting[idx]
                continue
            key = tuple(values[ref] if kind == "n" else context[ref] for kind, ref in src)
            value = table.get(key, default)
            values[idx] = value
        return tuple(values)


def _check_table(eq: EquationTable, sig: Signature):
    target_range = sig.range(eq.target)
    if eq.target in eq.parents:
        raise CyclicModel([eq.target, eq.target])
    if len(set(eq.parents)) != len(eq.parents):
        raise DuplicateVariable(f"equation for {eq.target} repeats a parent")
    domains = []
    for p in eq.parents:
        if not sig.has(p):
            raise UnknownVariable(f"equation for {eq.target} uses undeclared parent {p}")
        domains.append(sig.range(p))
    for key, value in eq.rows:
        if len(key) != len(eq.parents):
            raise ModelError(f"row {key} of {eq.target} has arity {len(key)}, expected {len(eq.parents)}")
        for p, v in zip(eq.parents, key):
            if v not in sig.range(p):
                raise RangeViolation(f"row {key} of {eq.target}: {v} is not in the range of {p}")
        if value not in target_range:
            raise RangeViolation(f"row {key} of {eq.target} yields {value}, outside the range of {eq.target}")
    if eq.default is not None:
        if eq.default not in target_range:
            raise RangeViolation(f"default of {eq.target} is outside its range")
        return
    for key in itertools.product(*domains):
        if key not in eq._index:
            raise PartialEquation(f"equation for {eq.target} has no row for {key} and no default")


def _topological_order(sig: Signature, equations) -> tuple:
    names = sig.endogenous_names
    deps = {eq.target: [p for p in eq.parents if sig.is_endogenous(p)] for eq in equations}
    done, order = set(), []
    while len(order) < len(names):
        ready = [n for n in names if n not in done and all(p in done for p in deps[n])]
        if not ready:
            raise CyclicModel(_find_cycle(deps, [n for n in names if n not in done]))
        # one at a time keeps the order canonical: earliest declared ready node first
        done.add(ready[0])
        order.append(ready[0])
    return tuple(order)


def _find_cycle(deps, remaining):
    remaining = set(remaining)
    node = min(remaining)
    path = []
    while node not in path:
        path.append(node)
        node = next(p for p in deps[node] if p in remaining)
    return path[path.index(node):] + [node]


def validate_model(candidate) -> CausalModel:
    """Build a validated :class:`CausalModel` from a plain description.

    ``candidate`` is either a model (returned as is) or a mapping with keys
    ``exogenous`` and ``endogenous`` (name -> range) and ``equations``
    (name -> {"parents": [...], "rows": {tuple: value} or pairs,
    "default": value}).
    """
    if isinstance(candidate, CausalModel):
        return candidate
    try:
        exo = candidate.get("exogenous", {})
        endo = candidate["endogenous"]
        eq_specs = candidate["equations"]
    except (KeyError, AttributeError, TypeError) as exc:
        raise ModelError(f"malformed model description: {exc}") from None
    _reject_duplicate_pairs(exo)
    _reject_duplicate_pairs(endo)
    sig = Signature(exo, endo)
    eqs = []
    for target, spec in _pairs(eq_specs):
        if isinstance(spec, EquationTable):
            eqs.append(spec)
            continue
        eqs.append(EquationTable(target, tuple(spec.get("parents", ())),
                                 spec.get("rows", ()), spec.get("default")))
    return CausalModel(sig, tuple(eqs))


def _reject_duplicate_pairs(spec):
    if not isinstance(spec, Mapping):
        seen = set()
        for name, _ in spec:
            if name in seen:
                raise DuplicateVariable(f"variable {name} declared twice")
            seen.add(name)


def solve(model: CausalModel, context: Mapping) -> Assignment:
    """The unique endogenous solution of ``model`` under ``context``."""
    ctx = context if isinstance(context, Context) else model.context(context)
    values = model.solve_values(ctx)
    return Assignment(zip(model.signature.endogenous_names, values))


def intervene(model: CausalModel, setting: Mapping) -> CausalModel:
    """The submodel in which each bound variable's equation becomes a constant."""
    a = model.signature.setting(setting)
    if not a:
        return model
    eqs = tuple(EquationTable.constant(eq.target, a[eq.target]) if eq.target in a else eq
                for eq in model.equations)
    return CausalModel(model.signature, eqs)


def enumerate_contexts(model_or_signature) -> list:
    """All contexts, first-declared exogenous variable varying slowest."""
    sig = getattr(model_or_signature, "signature", model_or_signature)
    names = sig.exogenous_names
    domains = [sig.range(n) for n in names]
    return [Context(zip(names, values)) for values in itertools.product(*domains)]


def build_model(exogenous, endogenous, equations: Iterable) -> CausalModel:
    """Convenience constructor.

    ``equations`` items are :class:`EquationTable` or ``(target, parents, fn)``
    triples, where ``fn`` is tabulated over the parents' ranges.
    """
    sig = Signature(exogenous, endogenous)
    eqs = []
    for item in equations:
        if isinstance(item, EquationTable):
            eqs.append(item)
        else:
            target, parents, fn = item
            eqs.append(EquationTable.from_function(target, parents, fn, sig))
    return CausalModel(sig, tuple(eqs))


@dataclass(frozen=True)
class Situation:
    model: CausalModel
    context: Context

    def __post_init__(self):
        if not isinstance(self.context, Context) or set(self.context) != set(self.model.signature.exogenous_names):
            object.__setattr__(self, "context", self.model.context(self.context))
        else:
            for name, value in self.context.items():
                self.model.signature.check_value(name, value)
