"""Moser's recursive resampling algorithm with an execution log.

The recursion of ``Resample`` is run on an explicit stack, so deep chains
on adversarial instances end in a clean :class:`DepthLimitError` (or a
round-limit outcome) instead of a Python recursion error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import DepthLimitError, MalformedLogError, MissingSnapshotsError
from .model import EventSystem, sample

SUCCESS = "success"
ROUND_LIMIT = "round-limit"


@dataclass(frozen=True)
class ResampleRecord:
    event_index: int
    depth: int
    parent: Optional[int]  # position of the parent record in the log
    round: int


@dataclass
class ExecutionLog:
    initial_assignment: tuple
    records: list
    final_assignment: tuple
    outcome: str
    seed: Optional[int] = None
    # snapshots[k] = (assignment when call k starts, assignment when it returns or None)
    snapshots: Optional[list] = None

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def succeeded(self) -> bool:
        return self.outcome == SUCCESS

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "outcome": self.outcome,
            "rounds": self.rounds,
            "initial_assignment": list(self.initial_assignment),
            "final_assignment": list(self.final_assignment),
            "records": [
                {"event": r.event_index, "depth": r.depth, "parent": r.parent, "round": r.round}
                for r in self.records
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def m_algorithm(
    system: EventSystem,
    graph,
    tape,
    max_rounds: int = 10**6,
    snapshots: bool = False,
    max_depth: int = 10**6,
) -> ExecutionLog:
    """Sample everything, then Resample the least-indexed occurring event until none occurs.

    ``Resample(E_j)`` redraws sc(E_j) and, while some event of
    Gamma(E_j) + {E_j} occurs, calls itself on the least-indexed one.
    Every call is one round. Reaching ``max_rounds`` before a new call
    stops the run with outcome ``round-limit``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if graph.m != system.m:
        raise ValueError(f"graph has {graph.m} events, system has {system.m}")

    events = system.events
    scope_vars = [[system.variables[v] for v in sorted(e.scope)] for e in events]
    scope_ids = [sorted(e.scope) for e in events]
    watch = [graph.watch(e.index) for e in events]

    a = list(sample(system, tape))
    initial = tuple(a)
    records: list = []
    snaps: Optional[list] = [] if snapshots else None
    outcome = SUCCESS

    def start_call(j: int, depth: int, parent: Optional[int]) -> int:
        records.append(ResampleRecord(j, depth, parent, len(records) + 1))
        if snaps is not None:
            snaps.append((tuple(a), None))
        for v, var in zip(scope_ids[j - 1], scope_vars[j - 1]):
            a[v] = tape.draw(var)
        return len(records) - 1

    def least_occurring(candidates) -> Optional[int]:
        for k in candidates:
            if events[k - 1].occurs(a):
                return k
        return None

    all_indices = range(1, system.m + 1)
    while outcome == SUCCESS:
        j = least_occurring(all_indices)
        if j is None:
            break
        if len(records) >= max_rounds:
            outcome = ROUND_LIMIT
            break
        # stack entries: (record position, event index)
        stack = [(start_call(j, 0, None), j)]
        while stack:
            pos, top = stack[-1]
            k = least_occurring(watch[top - 1])
            if k is None:
                if snaps is not None:
                    snaps[pos] = (snaps[pos][0], tuple(a))
                stack.pop()
                continue
            if len(records) >= max_rounds:
                outcome = ROUND_LIMIT
                break
            if len(stack) >= max_depth:
                raise DepthLimitError(f"recursion depth {max_depth} reached after {len(records)} rounds")
            stack.append((start_call(k, len(stack), pos), k))

    return ExecutionLog(initial, records, tuple(a), outcome, getattr(tape, "seed", None), snaps)


def root_call_indices(log: ExecutionLog) -> list:
    return [r.event_index for r in log.records if r.depth == 0]


@dataclass
class ProgressReport:
    holds: bool
    violating_call: Optional[int] = None
    event: Optional[int] = None

    def __bool__(self):
        return self.holds


def assert_progress(log: ExecutionLog, system: EventSystem) -> ProgressReport:
    """Every event absent when a completed call started, plus the call's own event, is absent at its end."""
    if log.snapshots is None:
        raise MissingSnapshotsError("run m_algorithm with snapshots=True")
    if len(log.snapshots) != len(log.records):
        raise MalformedLogError("snapshot count differs from record count")
    for pos, (record, (start, end)) in enumerate(zip(log.records, log.snapshots)):
        if end is None:
            continue
        for e in system.events:
            must_be_absent = e.index == record.event_index or not e.occurs(start)
            if must_be_absent and e.occurs(end):
                return ProgressReport(False, pos, e.index)
    return ProgressReport(True)


def check_log(log: ExecutionLog) -> None:
    """Structural sanity of a log: rounds consecutive, parents one level up and earlier."""
    for pos, r in enumerate(log.records):
        if r.round != pos + 1:
            raise MalformedLogError(f"record {pos} has round {r.round}")
        if r.depth == 0:
            if r.parent is not None:
                raise MalformedLogError(f"root record {pos} has a parent")
        else:
            if r.parent is None or not 0 <= r.parent < pos:
                raise MalformedLogError(f"record {pos} has invalid parent {r.parent}")
            if log.records[r.parent].depth != r.depth - 1:
                raise MalformedLogError(f"record {pos} depth does not follow its parent")
