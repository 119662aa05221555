"""Variables, events and exact probabilities over the product space.

Events are disjunctions of conjunctions of (in)equality atoms over
independent finite-domain variables. Value indices and variable ids are
0-based; event indices are 1-based to follow the usual E_1..E_m ordering.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DEFAULT_BUDGET,
    MalformedEventError,
    ProbabilityBudgetError,
    ScopeBudgetError,
    budget_from_env,
)

Assignment = tuple  # tuple[int, ...], one value index per variable

EQ = "eq"
NE = "ne"


@dataclass(frozen=True)
class VariableSpec:
    id: int
    weights: tuple

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        if not weights:
            raise ValueError(f"variable {self.id}: empty domain")
        if any(w < 0 for w in weights):
            raise ValueError(f"variable {self.id}: negative weight")
        if sum(weights) != 1:
            raise ValueError(f"variable {self.id}: weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "weights", weights)
        denominator = math.lcm(*(w.denominator for w in weights))
        cumulative = tuple(itertools.accumulate(w.numerator * (denominator // w.denominator) for w in weights))
        object.__setattr__(self, "_cumulative", (denominator, cumulative))

    @property
    def domain_size(self) -> int:
        return len(self.weights)

    @property
    def cumulative(self):
        """(common denominator, cumulative integer numerators) for exact sampling."""
        return self._cumulative

    @classmethod
    def uniform(cls, id: int, k: int) -> "VariableSpec":
        return cls(id, tuple(Fraction(1, k) for _ in range(k)))

    @classmethod
    def bernoulli(cls, id: int, x) -> "VariableSpec":
        """Binary variable taking value 1 with probability ``x``."""
        x = Fraction(x)
        return cls(id, (1 - x, x))


@dataclass(frozen=True)
class Atom:
    var: int
    rel: str
    value: int

    def __post_init__(self):
        if self.rel not in (EQ, NE):
            raise MalformedEventError(f"unknown relation {self.rel!r}")

    def holds(self, a: Sequence[int]) -> bool:
        return (a[self.var] == self.value) == (self.rel == EQ)

    def __str__(self):
        op = "=" if self.rel == EQ else "!="
        return f"X{self.var}{op}{self.value}"


@dataclass(frozen=True)
class EventExpr:
    """Disjunctive normal form; no terms is the impossible event."""

    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))

    @classmethod
    def never(cls) -> "EventExpr":
        return cls(())

    @classmethod
    def always(cls) -> "EventExpr":
        return cls(((),))

    @classmethod
    def conj(cls, *atoms: Atom) -> "EventExpr":
        return cls((tuple(atoms),))

    @property
    def mentioned(self) -> frozenset:
        return frozenset(atom.var for term in self.terms for atom in term)

    def __str__(self):
        if not self.terms:
            return "FALSE"
        parts = []
        for term in self.terms:
            parts.append(" & ".join(map(str, term)) if term else "TRUE")
        return " | ".join(f"({p})" for p in parts)


@dataclass(frozen=True)
class Event:
    index: int
    expr: EventExpr
    declared_scope: frozenset
    scope: frozenset
    minimized: bool = True
    _compiled: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        compiled = tuple(
            tuple((atom.var, atom.rel == EQ, atom.value) for atom in term) for term in self.expr.terms
        )
        object.__setattr__(self, "_compiled", compiled)

    def occurs(self, a: Sequence[int]) -> bool:
        for term in self._compiled:
            for var, eq, val in term:
                if (a[var] == val) != eq:
                    break
            else:
                return True
        return False

    @property
    def label(self) -> str:
        return f"E{self.index}"


def evaluate(event: Event, a: Sequence[int]) -> bool:
    """True iff some DNF term of ``event`` has all its atoms satisfied by ``a``."""
    try:
        return event.occurs(a)
    except IndexError:
        raise MalformedEventError(
            f"{event.label} references a variable outside an assignment of length {len(a)}"
        ) from None


def _scope_size(variables: Sequence[VariableSpec], scope: Iterable[int]) -> int:
    return math.prod(variables[v].domain_size for v in scope)


def iter_scope_assignments(variables: Sequence[VariableSpec], scope: Sequence[int]) -> Iterator[tuple]:
    return itertools.product(*(range(variables[v].domain_size) for v in scope))


def _validate_expr(expr: EventExpr, variables: Sequence[VariableSpec]) -> None:
    for term in expr.terms:
        for atom in term:
            if not 0 <= atom.var < len(variables):
                raise MalformedEventError(f"atom {atom} references undeclared variable {atom.var}")
            if not 0 <= atom.value < variables[atom.var].domain_size:
                raise MalformedEventError(f"atom {atom} value outside domain of X{atom.var}")


def minimal_scope(
    expr: EventExpr | Event,
    variables: Sequence[VariableSpec],
    declared: Iterable[int] | None = None,
    budget: int | None = None,
    accept_declared: bool = False,
) -> tuple[frozenset, bool]:
    """Variables the indicator genuinely depends on.

    A variable is kept iff two assignments differing only in it evaluate
    differently. Returns ``(scope, minimized)``. When the declared scope is
    too large to enumerate, raises :class:`ScopeBudgetError` unless
    ``accept_declared`` is set, in which case the declared scope comes back
    with ``minimized=False``.
    """
    if isinstance(expr, Event):
        declared = expr.declared_scope if declared is None else declared
        expr = expr.expr
    if isinstance(variables, EventSystem):
        variables = variables.variables
    declared = sorted(set(declared if declared is not None else expr.mentioned) | expr.mentioned)
    budget = budget_from_env(DEFAULT_BUDGET) if budget is None else budget
    size = _scope_size(variables, declared)
    if size > budget:
        if accept_declared:
            return frozenset(declared), False
        raise ScopeBudgetError("minimal scope", size, budget)

    probe = Event(0, expr, frozenset(declared), frozenset(declared))
    base = [0] * len(variables)
    table = {}
    for values in iter_scope_assignments(variables, declared):
        for v, x in zip(declared, values):
            base[v] = x
        table[values] = probe.occurs(base)

    scope = set()
    for k, v in enumerate(declared):
        seen = {}
        for values, result in table.items():
            key = values[:k] + values[k + 1 :]
            prev = seen.setdefault(key, result)
            if prev != result:
                scope.add(v)
                break
    return frozenset(scope), True


class EventSystem:
    """Independent variables plus an ordered list of events E_1..E_m."""

    def __init__(self, variables: Sequence[VariableSpec], events: Sequence[Event]):
        self.variables = tuple(variables)
        self.events = tuple(events)
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise ValueError(f"variable at position {i} has id {var.id}")
        for j, event in enumerate(self.events, start=1):
            if event.index != j:
                raise MalformedEventError(f"event at position {j} has index {event.index}")
            _validate_expr(event.expr, self.variables)
            if not event.scope <= event.declared_scope:
                raise MalformedEventError(f"{event.label}: scope not within declared scope")
            if not event.expr.mentioned <= event.declared_scope:
                raise MalformedEventError(f"{event.label}: declared scope misses mentioned variables")

    @classmethod
    def build(
        cls,
        variables: Sequence[VariableSpec],
        exprs: Sequence[EventExpr],
        extras: Sequence[Iterable[int]] | None = None,
        budget: int | None = None,
    ) -> "EventSystem":
        """Create a system, minimizing each event's scope when enumerable."""
        variables = tuple(variables)
        events = []
        for j, expr in enumerate(exprs, start=1):
            _validate_expr(expr, variables)
            declared = set(expr.mentioned)
            if extras is not None and extras[j - 1] is not None:
                declared |= set(extras[j - 1])
            for v in declared:
                if not 0 <= v < len(variables):
                    raise MalformedEventError(f"E{j}: declared scope variable {v} undeclared")
            scope, minimized = minimal_scope(expr, variables, declared, budget, accept_declared=True)
            events.append(Event(j, expr, frozenset(declared), scope, minimized))
        return cls(variables, events)

    @property
    def l(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.events)

    @property
    def conservative(self) -> bool:
        """True when some scope could not be minimized (dependency graphs over-approximate)."""
        return not all(e.minimized for e in self.events)

    def event(self, j: int) -> Event:
        if not 1 <= j <= self.m:
            raise IndexError(f"no event E{j} in a system of {self.m} events")
        return self.events[j - 1]

    def occurring(self, a: Sequence[int]) -> list:
        return [e.index for e in self.events if e.occurs(a)]

    def check_assignment(self, a: Sequence[int]) -> None:
        if len(a) != self.l:
            raise ValueError(f"assignment has length {len(a)}, expected {self.l}")
        for var, x in zip(self.variables, a):
            if not 0 <= x < var.domain_size:
                raise ValueError(f"value {x} outside domain of X{var.id}")

    def __repr__(self):
        return f"EventSystem(l={self.l}, m={self.m})"

    # JSON instance format

    def to_dict(self) -> dict:
        return {
            "variables": [
                {"domain": v.domain_size, "weights": [str(w) for w in v.weights]} for v in self.variables
            ],
            "events": [
                {
                    "dnf": [
                        [{"var": a.var, "rel": a.rel, "val": a.value} for a in term] for term in e.expr.terms
                    ],
                    "scope": sorted(e.declared_scope),
                }
                for e in self.events
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, budget: int | None = None) -> "EventSystem":
        try:
            variables = []
            for i, spec in enumerate(data["variables"]):
                weights = spec.get("weights")
                k = int(spec.get("domain", len(weights) if weights is not None else 0))
                if weights is None:
                    variables.append(VariableSpec.uniform(i, k))
                    continue
                if len(weights) != k:
                    raise ValueError(f"variable {i}: domain {k} but {len(weights)} weights")
                variables.append(VariableSpec(i, tuple(Fraction(w) for w in weights)))
            exprs, extras = [], []
            for spec in data["events"]:
                terms = [
                    tuple(Atom(int(a["var"]), a.get("rel", EQ), int(a["val"])) for a in term)
                    for term in spec["dnf"]
                ]
                exprs.append(EventExpr(terms))
                extras.append(spec.get("scope"))
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise MalformedEventError(f"bad instance JSON: {exc!r}") from None
        return cls.build(variables, exprs, extras, budget)

    @classmethod
    def from_json(cls, text: str, budget: int | None = None) -> "EventSystem":
        return cls.from_dict(json.loads(text), budget)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def event_probability(event: Event, system: EventSystem, budget: int | None = None) -> Fraction:
    """Exact Pr[E], enumerating only the event's scope."""
    budget = budget_from_env(DEFAULT_BUDGET) if budget is None else budget
    scope = sorted(event.scope)
    size = _scope_size(system.variables, scope)
    if size > budget:
        raise ProbabilityBudgetError(f"Pr[{event.label}]", size, budget)
    # variables outside the minimal scope cannot change the outcome; pin them at 0
    a = [0] * system.l
    total = Fraction(0)
    for values in iter_scope_assignments(system.variables, scope):
        for v, x in zip(scope, values):
            a[v] = x
        if event.occurs(a):
            w = Fraction(1)
            for v, x in zip(scope, values):
                w *= system.variables[v].weights[x]
            total += w
    return total


def max_probability(system: EventSystem, budget: int | None = None) -> Fraction:
    return max((event_probability(e, system, budget) for e in system.events), default=Fraction(0))


def complement_expr(event: Event, system: EventSystem) -> EventExpr:
    """DNF of the complement, one equality term per scope point where the event fails."""
    scope = sorted(event.scope)
    a = [0] * system.l
    terms = []
    for values in iter_scope_assignments(system.variables, scope):
        for v, x in zip(scope, values):
            a[v] = x
        if not event.occurs(a):
            terms.append(tuple(Atom(v, EQ, x) for v, x in zip(scope, values)))
    return EventExpr(terms)


def sample(system: EventSystem, tape) -> Assignment:
    """Draw every variable once, in increasing id order."""
    return tuple(tape.draw(var) for var in system.variables)


def resample_step(event: Event, system: EventSystem, tape, a: Sequence[int]) -> Assignment:
    """Redraw the variables of ``event.scope`` in increasing id order."""
    a = list(a)
    for v in sorted(event.scope):
        a[v] = tape.draw(system.variables[v])
    return tuple(a)
