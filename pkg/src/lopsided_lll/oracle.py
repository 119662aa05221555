"""Brute-force ground truth over the whole product space, and Monte Carlo survival."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DEFAULT_ORACLE_BUDGET, OracleBudgetError, budget_from_env
from .model import EventSystem


@dataclass
class OmegaTable:
    """Every point of the product space with its exact weight and event indicators."""

    system: EventSystem
    assignments: list
    weights: list
    indicators: list  # indicators[j - 1][row]

    def __len__(self):
        return len(self.assignments)

    def column(self, j: int) -> list:
        return self.indicators[j - 1]


def build_omega(system: EventSystem, budget: Optional[int] = None) -> OmegaTable:
    budget = budget_from_env(DEFAULT_ORACLE_BUDGET) if budget is None else budget
    size = math.prod(v.domain_size for v in system.variables)
    if size > budget:
        raise OracleBudgetError("product space", size, budget)
    assignments, weights = [], []
    for a in itertools.product(*(range(v.domain_size) for v in system.variables)):
        w = Fraction(1)
        for var, x in zip(system.variables, a):
            w *= var.weights[x]
        assignments.append(a)
        weights.append(w)
    indicators = [[e.occurs(a) for a in assignments] for e in system.events]
    return OmegaTable(system, assignments, weights, indicators)


def probability(table: OmegaTable, j: int) -> Fraction:
    return sum((w for w, hit in zip(table.weights, table.column(j)) if hit), Fraction(0))


def exact_conditional(table: OmegaTable, target: int, conditioning: Iterable[int]) -> Optional[Fraction]:
    """Pr[E_target | none of E_i, i in conditioning]; None when the condition has probability 0."""
    conditioning = tuple(conditioning)
    cols = [table.column(i) for i in conditioning]
    target_col = table.column(target)
    denominator = numerator = Fraction(0)
    for row, w in enumerate(table.weights):
        if any(col[row] for col in cols):
            continue
        denominator += w
        if target_col[row]:
            numerator += w
    if denominator == 0:
        return None
    return numerator / denominator


def exists_good_assignment(table: OmegaTable) -> Optional[tuple]:
    """Lexicographically first point avoiding every event.

    Points of zero weight are skipped: they lie outside the support, so
    they would not witness a positive probability of avoiding all events.
    """
    for row, a in enumerate(table.assignments):
        if table.weights[row] > 0 and not any(col[row] for col in table.indicators):
            return a
    return None


def scope_from_table(table: OmegaTable, j: int) -> frozenset:
    """Variables on which E_j's indicator depends, re-derived from the full table."""
    col = table.column(j)
    index = {a: row for row, a in enumerate(table.assignments)}
    scope = set()
    for v, var in enumerate(table.system.variables):
        for row, a in enumerate(table.assignments):
            if a[v] != 0:
                continue
            for x in range(1, var.domain_size):
                b = a[:v] + (x,) + a[v + 1 :]
                if col[index[b]] != col[row]:
                    scope.add(v)
                    break
            if v in scope:
                break
    return frozenset(scope)


def _groups(table: OmegaTable, free: frozenset) -> dict:
    """Rows grouped by their values outside ``free``."""
    groups = {}
    fixed = [v for v in range(table.system.l) if v not in free]
    for row, a in enumerate(table.assignments):
        groups.setdefault(tuple(a[v] for v in fixed), []).append(row)
    return groups


def vdl_full(table: OmegaTable, i: int, j: int, scopes: Optional[Sequence[frozenset]] = None) -> bool:
    """E_j VDL on E_i, checked literally over pairs of full assignments."""
    scopes = scopes or [scope_from_table(table, k) for k in range(1, table.system.m + 1)]
    ci, cj = table.column(i), table.column(j)
    for rows in _groups(table, scopes[i - 1]).values():
        alpha = any(ci[r] and not cj[r] for r in rows)
        beta = any(cj[r] for r in rows)
        if alpha and beta:
            return True
    return False


def lops_full(table: OmegaTable, i: int, j: int, scopes: Optional[Sequence[frozenset]] = None) -> bool:
    """Undirected lopsidependency checked over pairs of full assignments."""
    if i == j:
        return False
    scopes = scopes or [scope_from_table(table, k) for k in range(1, table.system.m + 1)]
    ci, cj = table.column(i), table.column(j)
    for rows in _groups(table, scopes[i - 1] & scopes[j - 1]).values():
        i_rows = [r for r in rows if ci[r]]
        j_rows = [r for r in rows if cj[r]]
        if not i_rows or not j_rows:
            continue
        if any(not cj[r] for r in i_rows) or any(not ci[r] for r in j_rows):
            return True
    return False


def vdl_edges_full(table: OmegaTable) -> frozenset:
    m = table.system.m
    scopes = [scope_from_table(table, k) for k in range(1, m + 1)]
    return frozenset(
        (i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i != j and vdl_full(table, i, j, scopes)
    )


def chi_square_product_test(
    observed: Counter, system: EventSystem, min_expected: float = 5.0
) -> tuple[float, float, int]:
    """Chi-square of observed full assignments against the product distribution.

    Returns (statistic, p_value, degrees_of_freedom). Cells whose expected
    count is below ``min_expected`` are pooled into one bin.
    """
    from scipy.stats import chisquare

    total = sum(observed.values())
    table = build_omega(system)
    obs, exp = [], []
    pooled_obs = pooled_exp = 0.0
    for a, w in zip(table.assignments, table.weights):
        e = float(w) * total
        if e < min_expected:
            pooled_obs += observed.get(a, 0)
            pooled_exp += e
        else:
            obs.append(observed.get(a, 0))
            exp.append(e)
    if pooled_exp > 0:
        obs.append(pooled_obs)
        exp.append(pooled_exp)
    stat, pvalue = chisquare(obs, exp)
    return float(stat), float(pvalue), len(obs) - 1


@dataclass
class SimulationStats:
    trials: int
    rounds_histogram: Counter
    base_seed: int
    outcomes: Counter = field(default_factory=Counter)

    @property
    def max_rounds_seen(self) -> int:
        return max(self.rounds_histogram, default=0)

    def survivors(self, n: int) -> int:
        return sum(c for r, c in self.rounds_histogram.items() if r >= n)

    def p_hat(self, n: int) -> float:
        """Empirical Pr[rounds >= n]."""
        return self.survivors(n) / self.trials

    def stderr(self, n: int) -> float:
        p = self.p_hat(n)
        return math.sqrt(p * (1 - p) / self.trials)

    def survival(self, n_max: Optional[int] = None) -> list:
        n_max = self.max_rounds_seen + 1 if n_max is None else n_max
        return [(n, self.survivors(n), self.p_hat(n), self.stderr(n)) for n in range(n_max + 1)]

    def to_csv(self, n_max: Optional[int] = None, bound=None) -> str:
        """Rows (n, survivors, p_hat, stderr, bound); ``bound`` maps n to the f_n p^n value."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "survivors", "p_hat", "stderr", "bound"])
        for n, surv, p, se in self.survival(n_max):
            writer.writerow([n, surv, f"{p:.6g}", f"{se:.6g}", "" if bound is None else f"{float(bound(n)):.6g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "trials": self.trials,
                "base_seed": self.base_seed,
                "rounds_histogram": {str(k): v for k, v in sorted(self.rounds_histogram.items())},
                "outcomes": dict(self.outcomes),
                "survival": [
                    {"n": n, "survivors": s, "p_hat": p, "stderr": se} for n, s, p, se in self.survival()
                ],
            },
            indent=2,
        )


def estimate_survival(system: EventSystem, graph, trials: int, max_rounds: int, base_seed: int) -> SimulationStats:
    """Run the resampling algorithm ``trials`` times with seeds base_seed + t."""
    from .solver import m_algorithm
    from .tape import RandomTape

    if trials < 1:
        raise ValueError("trials must be >= 1")
    hist, outcomes = Counter(), Counter()
    for t in range(trials):
        log = m_algorithm(system, graph, RandomTape(base_seed + t), max_rounds)
        hist[log.rounds] += 1
        outcomes[log.outcome] += 1
    return SimulationStats(trials, hist, base_seed, outcomes)
