"""DIMACS CNF input/output and the clause-falsification event encoding."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimacsParseError
from .model import EQ, Atom, EventExpr, EventSystem, VariableSpec


@dataclass(frozen=True)
class SatInstance:
    num_vars: int
    clauses: tuple  # tuple of tuples of nonzero ints

    def satisfied_by(self, a) -> bool:
        """``a[v-1]`` is the value of variable v (1 = true)."""
        return all(any((a[abs(lit) - 1] == 1) == (lit > 0) for lit in clause) for clause in self.clauses)


def _is_tautology(clause) -> bool:
    lits = set(clause)
    return any(-lit in lits for lit in lits)


def parse_dimacs(text: str) -> SatInstance:
    """Parse ``p cnf V C`` followed by zero-terminated clauses; ``c`` lines are comments.

    Tautological clauses are dropped with a warning. Errors carry the
    1-based line number.
    """
    header = None
    clauses = []
    current: list = []
    count = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        last_line = lineno
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsParseError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsParseError("negative counts in header", lineno)
            continue
        if header is None:
            raise DimacsParseError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                count += 1
                if _is_tautology(current):
                    warnings.warn(f"dropping tautological clause {current} (line {lineno})", stacklevel=2)
                else:
                    clauses.append(tuple(dict.fromkeys(current)))
                current = []
            elif abs(lit) > header[0]:
                raise DimacsParseError(f"literal {lit} exceeds variable count {header[0]}", lineno)
            else:
                current.append(lit)
    if header is None:
        raise DimacsParseError("missing 'p cnf' header", max(last_line, 1))
    if current:
        raise DimacsParseError("last clause not terminated by 0", last_line)
    if count != header[1]:
        raise DimacsParseError(f"header declares {header[1]} clauses, found {count}", last_line)
    return SatInstance(header[0], tuple(clauses))


def write_dimacs(instance: SatInstance) -> str:
    lines = [f"p cnf {instance.num_vars} {len(instance.clauses)}"]
    lines += [" ".join(map(str, clause + (0,))) for clause in instance.clauses]
    return "\n".join(lines) + "\n"


def sat_to_system(instance: SatInstance) -> EventSystem:
    """Uniform binary variables; E_j = "clause j is falsified".

    Literal +v is falsified by X_{v-1} = 0 and -v by X_{v-1} = 1, so each
    event is one conjunction and Pr[E_j] = 2^-|clause|. An empty clause
    gives the sure event.
    """
    variables = [VariableSpec(i, (Fraction(1, 2), Fraction(1, 2))) for i in range(instance.num_vars)]
    exprs = [
        EventExpr.conj(*(Atom(abs(lit) - 1, EQ, 0 if lit > 0 else 1) for lit in clause))
        for clause in instance.clauses
    ]
    return EventSystem.build(variables, exprs)


def random_bounded_sat(
    rng: random.Random, num_vars: int, num_clauses: int, width: int, max_occurrences: int
) -> SatInstance:
    """Random width-k CNF where no variable appears in more than ``max_occurrences`` clauses."""
    if width > num_vars:
        raise ValueError("clause width exceeds variable count")
    occ = [0] * (num_vars + 1)
    clauses = []
    for _ in range(num_clauses):
        free = [v for v in range(1, num_vars + 1) if occ[v] < max_occurrences]
        if len(free) < width:
            break
        chosen = sorted(rng.sample(free, width))
        for v in chosen:
            occ[v] += 1
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return SatInstance(num_vars, tuple(clauses))
