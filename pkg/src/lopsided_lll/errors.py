"""Exception hierarchy shared by every module."""

import os

DEFAULT_BUDGET = 2**20
DEFAULT_ORACLE_BUDGET = 2**22


def budget_from_env(default: int) -> int:
    """Enumeration budget, overridable through the ``LLL_BUDGET`` env var."""
    raw = os.environ.get("LLL_BUDGET")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"LLL_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("LLL_BUDGET must be positive")
    return value


class LLLError(Exception):
    pass


class MalformedEventError(LLLError):
    pass


class MalformedForestError(LLLError):
    pass


class MalformedLogError(LLLError):
    pass


class BudgetError(LLLError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: enumeration of {size} points exceeds budget {budget}")
        self.size = size
        self.budget = budget


class ScopeBudgetError(BudgetError):
    pass


class ProbabilityBudgetError(BudgetError):
    pass


class DependencyBudgetError(BudgetError):
    pass


class OracleBudgetError(BudgetError):
    pass


class EnumerationBudgetError(BudgetError):
    pass


class DepthLimitError(LLLError):
    pass


class MissingSnapshotsError(LLLError):
    pass


class TapeExhaustedError(LLLError):
    pass


class InfeasibleForestError(LLLError):
    pass


class DegreeInconsistencyError(LLLError):
    pass


class DimacsParseError(LLLError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
