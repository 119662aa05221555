"""Directed (VDL) and undirected lopsidependency graphs, plus LLL condition checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DEFAULT_BUDGET, DependencyBudgetError, budget_from_env
from .model import Event, EventSystem, iter_scope_assignments, max_probability

EPSILON = 1e-12


@dataclass(frozen=True)
class VDLGraph:
    """Edge (i, j) means E_j is VDL on E_i, i.e. E_j is in Gamma(E_i)."""

    m: int
    edges: frozenset
    conservative: bool = False
    gamma: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gamma = {i: set() for i in range(1, self.m + 1)}
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on E{i}")
            gamma[i].add(j)
        object.__setattr__(self, "gamma", {i: frozenset(s) for i, s in gamma.items()})

    @property
    def d(self) -> int:
        return max((len(s) for s in self.gamma.values()), default=0)

    def watch(self, i: int) -> tuple:
        """Gamma(E_i) together with E_i, by increasing index."""
        return tuple(sorted(self.gamma[i] | {i}))

    def undirected(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)

    def to_dict(self) -> dict:
        return {
            "kind": "vdl",
            "m": self.m,
            "d": self.d,
            "conservative": self.conservative,
            "gamma": {str(i): sorted(s) for i, s in self.gamma.items()},
            "edges": sorted([i, j] for i, j in self.edges),
        }

    def to_dot(self) -> str:
        lines = ["digraph vdl {"]
        lines += [f"  E{i};" for i in range(1, self.m + 1)]
        lines += [f"  E{i} -> E{j};" for i, j in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LopsGraph:
    m: int
    edges: frozenset  # of frozenset({i, j})
    neighborhoods: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        nbrs = {i: set() for i in range(1, self.m + 1)}
        for e in self.edges:
            i, j = sorted(e)
            if i == j:
                raise ValueError(f"self-loop on E{i}")
            nbrs[i].add(j)
            nbrs[j].add(i)
        object.__setattr__(self, "neighborhoods", {i: frozenset(s) for i, s in nbrs.items()})

    @property
    def d_prime(self) -> int:
        return max((len(s) for s in self.neighborhoods.values()), default=0)

    def to_dict(self) -> dict:
        return {
            "kind": "lopsidependency",
            "m": self.m,
            "d_prime": self.d_prime,
            "neighborhoods": {str(i): sorted(s) for i, s in self.neighborhoods.items()},
            "edges": sorted(sorted(e) for e in self.edges),
        }

    def to_dot(self) -> str:
        lines = ["graph lopsidependency {"]
        lines += [f"  E{i};" for i in range(1, self.m + 1)]
        lines += [f"  E{i} -- E{j};" for i, j in sorted(sorted(e) for e in self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_budget(system: EventSystem, variables, budget: Optional[int], what: str) -> None:
    budget = budget_from_env(DEFAULT_BUDGET) if budget is None else budget
    size = math.prod(system.variables[v].domain_size for v in variables)
    if size > budget:
        raise DependencyBudgetError(what, size, budget)


def is_vdl(source: Event, target: Event, system: EventSystem, budget: Optional[int] = None) -> bool:
    """Is ``target`` VDL on ``source``?

    Needs an assignment where source occurs and target does not, plus a
    second one differing only on sc(source) where target occurs. Only
    sc(source) and sc(target) are enumerated: for each setting of the
    target-only variables, both witnesses range over sc(source).
    """
    if source.index == target.index or not (source.scope & target.scope):
        return False
    inner = sorted(source.scope)
    outer = sorted(target.scope - source.scope)
    _check_budget(system, inner + outer, budget, f"VDL(E{source.index}, E{target.index})")
    a = [0] * system.l
    for outer_values in iter_scope_assignments(system.variables, outer):
        for v, x in zip(outer, outer_values):
            a[v] = x
        undo = redo = False
        for inner_values in iter_scope_assignments(system.variables, inner):
            for v, x in zip(inner, inner_values):
                a[v] = x
            target_occurs = target.occurs(a)
            if target_occurs:
                redo = True
            elif source.occurs(a):
                undo = True
            if undo and redo:
                return True
    return False


def is_lopsidependent(ei: Event, ej: Event, system: EventSystem, budget: Optional[int] = None) -> bool:
    """Undirected lopsidependency: witnesses may differ only on the shared scope."""
    if ei.index == ej.index:
        return False
    shared = sorted(ei.scope & ej.scope)
    if not shared:
        return False
    rest = sorted((ei.scope | ej.scope) - ei.scope.intersection(ej.scope))
    _check_budget(system, shared + rest, budget, f"lopsidependency(E{ei.index}, E{ej.index})")
    a = [0] * system.l
    for rest_values in iter_scope_assignments(system.variables, rest):
        for v, x in zip(rest, rest_values):
            a[v] = x
        i_any = i_without_j = j_any = j_without_i = False
        for shared_values in iter_scope_assignments(system.variables, shared):
            for v, x in zip(shared, shared_values):
                a[v] = x
            oi, oj = ei.occurs(a), ej.occurs(a)
            if oi:
                i_any = True
                if not oj:
                    i_without_j = True
            if oj:
                j_any = True
                if not oi:
                    j_without_i = True
        if (i_without_j and j_any) or (j_without_i and i_any):
            return True
    return False


def build_vdl_graph(system: EventSystem, budget: Optional[int] = None) -> VDLGraph:
    edges = set()
    for ei, ej in itertools.permutations(system.events, 2):
        if is_vdl(ei, ej, system, budget):
            edges.add((ei.index, ej.index))
    return VDLGraph(system.m, frozenset(edges), conservative=system.conservative)


def build_lops_graph(system: EventSystem, budget: Optional[int] = None) -> LopsGraph:
    edges = set()
    for ei, ej in itertools.combinations(system.events, 2):
        if is_lopsidependent(ei, ej, system, budget):
            edges.add(frozenset((ei.index, ej.index)))
    return LopsGraph(system.m, frozenset(edges))


@dataclass
class Claim1Report:
    holds: bool
    counterexample: Optional[tuple] = None

    def __bool__(self):
        return self.holds


def check_claim1(
    system: EventSystem,
    vdl: Optional[VDLGraph] = None,
    lops: Optional[LopsGraph] = None,
    budget: Optional[int] = None,
) -> Claim1Report:
    """Lopsidependent iff one event is VDL on the other, pair by pair."""
    vdl = vdl if vdl is not None else build_vdl_graph(system, budget)
    for ei, ej in itertools.combinations(system.events, 2):
        i, j = ei.index, ej.index
        lops_ij = is_lopsidependent(ei, ej, system, budget)
        if lops_ij != (j in vdl.gamma[i] or i in vdl.gamma[j]):
            return Claim1Report(False, (i, j))
    lops = lops if lops is not None else build_lops_graph(system, budget)
    if lops.edges != vdl.undirected():
        diff = sorted(sorted(e) for e in lops.edges ^ vdl.undirected())
        return Claim1Report(False, tuple(diff[0]))
    return Claim1Report(True)


@dataclass
class ErdosSpencerReport:
    holds: bool
    checked: int = 0
    skipped: list = field(default_factory=list)  # (j, I) with Pr[condition] = 0
    violations: list = field(default_factory=list)  # (j, I, conditional, unconditional)

    def __bool__(self):
        return self.holds


def check_erdos_spencer(
    system: EventSystem,
    graph: VDLGraph,
    exhaustive: bool = False,
    table=None,
    budget: Optional[int] = None,
) -> ErdosSpencerReport:
    """Conditioning on the complements of far events never raises Pr[E_j].

    The base check uses I = all events outside Gamma(E_j) and E_j. With
    ``exhaustive`` every subset of non-neighbours in the undirected graph
    is checked as well. Everything is computed on the full product space.
    """
    from .oracle import build_omega, exact_conditional

    table = table if table is not None else build_omega(system, budget)
    undirected = graph.undirected()
    report = ErdosSpencerReport(True)
    for j in range(1, system.m + 1):
        unconditional = exact_conditional(table, j, ())
        candidates = [tuple(i for i in range(1, system.m + 1) if i != j and i not in graph.gamma[j])]
        if exhaustive:
            far = [i for i in range(1, system.m + 1) if i != j and frozenset((i, j)) not in undirected]
            for r in range(len(far) + 1):
                candidates.extend(itertools.combinations(far, r))
        for cond in dict.fromkeys(candidates):
            value = exact_conditional(table, j, cond)
            if value is None:
                report.skipped.append((j, cond))
                continue
            report.checked += 1
            if value > unconditional:
                report.holds = False
                report.violations.append((j, cond, value, unconditional))
    return report


@dataclass
class ConditionReport:
    p: Fraction
    d: int
    holds_e: bool
    holds_strong: bool
    rate: float

    def to_dict(self) -> dict:
        return {
            "p": str(self.p),
            "p_float": float(self.p),
            "d": self.d,
            "holds_e": self.holds_e,
            "holds_strong": self.holds_strong,
            "rate": self.rate,
        }


def strong_factor(d: int) -> float:
    """(1 + 1/d)^d, taken as 1 when d = 0."""
    return 1.0 if d == 0 else (1.0 + 1.0 / d) ** d


def condition(p, d: int) -> ConditionReport:
    p = Fraction(p)
    holds_e = math.e * float(p) * (d + 1) <= 1.0 + EPSILON
    rate = strong_factor(d) * float(p) * (d + 1)
    return ConditionReport(p, d, holds_e, rate < 1.0, rate)


def check_condition(
    system: EventSystem, graph: VDLGraph, d: Optional[int] = None, budget: Optional[int] = None
) -> ConditionReport:
    """Symmetric conditions e*p*(d+1) <= 1 and (1+1/d)^d * p * (d+1) < 1.

    ``d`` defaults to the graph's maximum out-degree; pass the undirected
    degree to evaluate the classical lopsided condition instead.
    """
    return condition(max_probability(system, budget), graph.d if d is None else d)
