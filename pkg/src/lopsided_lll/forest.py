"""Labeled rooted forests: feasibility, witness extraction, validation and counting."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import (
    DegreeInconsistencyError,
    EnumerationBudgetError,
    InfeasibleForestError,
    MalformedForestError,
    MalformedLogError,
)
from .model import EventSystem, sample
from .solver import ExecutionLog, check_log, m_algorithm


@dataclass(frozen=True)
class Node:
    label: int
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(sorted(self.children, key=lambda c: c.label)))


@dataclass(frozen=True)
class LabeledForest:
    """Ordered forest; roots and siblings are kept sorted by label."""

    roots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted(self.roots, key=lambda r: r.label)))

    def preorder(self) -> Iterator[tuple]:
        """Yield (path, node) in canonical order; a path is the tuple of child positions."""
        stack = [((i,), r) for i, r in reversed(list(enumerate(self.roots)))]
        while stack:
            path, node = stack.pop()
            yield path, node
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((path + (i,), node.children[i]))

    def canonical_order(self) -> list:
        return [node.label for _, node in self.preorder()]

    @property
    def size(self) -> int:
        return sum(1 for _ in self.preorder())

    def __len__(self):
        return self.size

    def to_dict(self) -> dict:
        def node_dict(node):
            return {"label": node.label, "children": [node_dict(c) for c in node.children]}

        return {"roots": [node_dict(r) for r in self.roots]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data) -> "LabeledForest":
        def node(d):
            try:
                label = int(d["label"])
            except (KeyError, TypeError, ValueError):
                raise MalformedForestError(f"bad forest node {d!r}") from None
            return Node(label, tuple(node(c) for c in d.get("children", ())))

        roots = data["roots"] if isinstance(data, dict) else data
        return cls(tuple(node(r) for r in roots))

    @classmethod
    def from_json(cls, text: str) -> "LabeledForest":
        return cls.from_dict(json.loads(text))

    def to_dot(self) -> str:
        lines = ["digraph forest {"]
        ids = {}
        for k, (path, node) in enumerate(self.preorder()):
            ids[path] = f"n{k}"
            lines.append(f'  n{k} [label="E{node.label}"];')
            if len(path) > 1:
                lines.append(f"  {ids[path[:-1]]} -> n{k};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class FeasibilityReport:
    feasible: bool
    violated_condition: Optional[int] = None
    witness: tuple = ()  # paths of the offending nodes

    def __bool__(self):
        return self.feasible


def is_feasible(forest: LabeledForest, graph) -> FeasibilityReport:
    """Distinct root labels, distinct sibling labels, children within Gamma(parent) + parent."""
    for path, node in forest.preorder():
        if not 1 <= node.label <= graph.m:
            raise MalformedForestError(f"label {node.label} at {path} outside 1..{graph.m}")
    for a, b in zip(forest.roots, forest.roots[1:]):
        if a.label == b.label:
            i = forest.roots.index(a)
            return FeasibilityReport(False, 1, ((i,), (i + 1,)))
    for path, node in forest.preorder():
        for i, (a, b) in enumerate(zip(node.children, node.children[1:])):
            if a.label == b.label:
                return FeasibilityReport(False, 2, (path + (i,), path + (i + 1,)))
    for path, node in forest.preorder():
        allowed = graph.gamma[node.label] | {node.label}
        for i, child in enumerate(node.children):
            if child.label not in allowed:
                return FeasibilityReport(False, 3, (path, path + (i,)))
    return FeasibilityReport(True)


def _children_by_record(log: ExecutionLog) -> list:
    check_log(log)
    children = [[] for _ in log.records]
    for pos, r in enumerate(log.records):
        if r.parent is not None:
            children[r.parent].append(pos)
    return children


def witness_from_log(log: ExecutionLog, graph=None) -> LabeledForest:
    """One root per root call, one child node per recursive call under its caller.

    For a round-limit log the calls still open are included as they stand.
    When ``graph`` is given the result is asserted feasible.
    """
    children = _children_by_record(log)
    nodes: list = [None] * len(log.records)
    # children always come later in the log than their parent
    for pos in range(len(log.records) - 1, -1, -1):
        nodes[pos] = Node(log.records[pos].event_index, tuple(nodes[c] for c in children[pos]))
    forest = LabeledForest(tuple(nodes[pos] for pos, r in enumerate(log.records) if r.depth == 0))
    if graph is not None:
        report = is_feasible(forest, graph)
        if not report:
            raise MalformedLogError(f"witness forest violates feasibility condition {report.violated_condition}")
    return forest


def chronological_matches_canonical(log: ExecutionLog) -> bool:
    """Does the canonical preorder of the witness forest list the calls in the order they were made?"""
    children = _children_by_record(log)
    label = [r.event_index for r in log.records]
    roots = sorted((pos for pos, r in enumerate(log.records) if r.depth == 0), key=lambda p: label[p])
    order = []
    stack = list(reversed(roots))
    while stack:
        pos = stack.pop()
        order.append(pos)
        stack.extend(sorted(children[pos], key=lambda p: label[p], reverse=True))
    return order == list(range(len(log.records)))


@dataclass
class ValResult:
    success: bool
    failed_at: Optional[int] = None  # 1-based position in canonical order
    round_starts: list = field(default_factory=list)

    def __bool__(self):
        return self.success


def val_alg(
    system: EventSystem,
    forest: LabeledForest,
    tape,
    graph=None,
    record_rounds: bool = False,
    check: bool = True,
) -> ValResult:
    """Validation algorithm: sample all, then for each node in canonical order
    require its event to occur and resample its scope.

    With ``record_rounds`` the assignment at the start of every round is kept.
    """
    if check:
        if graph is None:
            from .dependency import build_vdl_graph

            graph = build_vdl_graph(system)
        report = is_feasible(forest, graph)
        if not report:
            raise InfeasibleForestError(f"forest violates feasibility condition {report.violated_condition}")
    scopes = [sorted(e.scope) for e in system.events]
    a = list(sample(system, tape))
    starts = []
    for s, j in enumerate(forest.canonical_order(), start=1):
        if record_rounds:
            starts.append(tuple(a))
        if not system.events[j - 1].occurs(a):
            return ValResult(False, s, starts)
        for v in scopes[j - 1]:
            a[v] = tape.draw(system.variables[v])
    return ValResult(True, None, starts)


@dataclass
class ReplayReport:
    holds: bool
    log: ExecutionLog
    forest: LabeledForest
    validation: ValResult

    def __bool__(self):
        return self.holds


def replay_check(system: EventSystem, graph, tape, max_rounds: int = 10**6) -> ReplayReport:
    """Run the solver, then validate its witness forest against a copy of the same tape."""
    replay_tape = tape.clone()
    log = m_algorithm(system, graph, tape, max_rounds)
    forest = witness_from_log(log)
    result = val_alg(system, forest, replay_tape, graph)
    return ReplayReport(result.success, log, forest, result)


def complete_forest(forest: LabeledForest, graph, m: Optional[int] = None) -> LabeledForest:
    """Extend a feasible forest to m full (d+1)-ary trees whose internal nodes are the original nodes.

    1. add leaf roots for event labels missing among the roots;
    2. under every original node labeled E, add leaves for Gamma(E) + {E}
       not yet among its children;
    3. pad to exactly d+1 children with the first labels from 1..m that
       are not already children, keeping siblings distinct.
    """
    m = graph.m if m is None else m
    width = graph.d + 1
    if width > m and m > 0:
        raise DegreeInconsistencyError(f"d+1 = {width} exceeds the number of events {m}")

    def complete(node: Node) -> Node:
        allowed = graph.gamma[node.label] | {node.label}
        if len(allowed) > width:
            raise DegreeInconsistencyError(f"|Gamma(E{node.label}) + E{node.label}| > d+1 = {width}")
        kids = [complete(c) for c in node.children]
        labels = {c.label for c in kids}
        if len(labels) != len(kids) or not labels <= allowed:
            raise InfeasibleForestError(f"children of E{node.label} break feasibility")
        for label in sorted(allowed - labels):
            kids.append(Node(label))
            labels.add(label)
        for label in range(1, m + 1):
            if len(kids) >= width:
                break
            if label not in labels:
                kids.append(Node(label))
                labels.add(label)
        return Node(node.label, tuple(kids))

    if not is_feasible(forest, graph):
        raise InfeasibleForestError("complete_forest needs a feasible forest")
    roots = [complete(r) for r in forest.roots]
    present = {r.label for r in roots}
    roots += [Node(j) for j in range(1, m + 1) if j not in present]
    return LabeledForest(tuple(roots))


def count_tn(d: int, n: int) -> int:
    """Full (d+1)-ary rooted planar trees with n internal nodes: C((d+1)n, n) / (dn+1)."""
    if d < 0 or n < 0:
        raise ValueError("d and n must be nonnegative")
    q, r = divmod(math.comb((d + 1) * n, n), d * n + 1)
    assert r == 0
    return q


def count_fn(d: int, m: int, n: int) -> int:
    """Ordered m-tuples of such trees with n internal nodes in total."""
    return fn_sequence(d, m, n)[n]


def fn_sequence(d: int, m: int, n_max: int) -> list:
    t = [count_tn(d, k) for k in range(n_max + 1)]
    f = [1] + [0] * n_max
    for _ in range(m):
        f = [sum(f[i] * t[k - i] for i in range(k + 1)) for k in range(n_max + 1)]
    return f


@dataclass
class BoundReport:
    d: int
    m: int
    n: int
    p: Fraction
    fn_exact: int
    fn_pn: Fraction
    growth_base: float


def bound_report(d: int, m: int, n: int, p) -> BoundReport:
    """f_n, the tail bound f_n * p^n on Pr[at least n rounds], and (1+1/d)^d (d+1) p."""
    from .dependency import strong_factor

    p = Fraction(p)
    fn = count_fn(d, m, n)
    return BoundReport(d, m, n, p, fn, fn * p**n, strong_factor(d) * (d + 1) * float(p))


def count_table_csv(d: int, m: int, p, n_max: int) -> str:
    p = Fraction(p)
    f = fn_sequence(d, m, n_max)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "t_n", "f_n", "f_n_p_n"])
    for n in range(n_max + 1):
        writer.writerow([n, count_tn(d, n), f[n], f"{float(f[n] * p**n):.6g}"])
    return buf.getvalue()


def enumerate_feasible(graph, n: int, budget: int = 10**6) -> list:
    """Every feasible forest with exactly n nodes over the graph's events."""
    memo: dict = {}
    produced = 0

    def bump(k: int = 1):
        nonlocal produced
        produced += k
        if produced > budget:
            raise EnumerationBudgetError("feasible forests", produced, budget)

    def trees(label: int, size: int) -> list:
        key = (label, size)
        if key not in memo:
            if size == 1:
                memo[key] = [Node(label)]
            else:
                memo[key] = [Node(label, kids) for kids in sequences(graph.watch(label), 0, size - 1)]
            bump(len(memo[key]))
        return memo[key]

    def sequences(options: Sequence[int], start: int, total: int) -> Iterator[tuple]:
        # strictly increasing labels keep siblings distinct and ordered
        if total == 0:
            yield ()
            return
        for idx in range(start, len(options)):
            for size in range(1, total + 1):
                for t in trees(options[idx], size):
                    for rest in sequences(options, idx + 1, total - size):
                        yield (t,) + rest

    out = []
    for roots in sequences(tuple(range(1, graph.m + 1)), 0, n):
        out.append(LabeledForest(roots))
        bump()
    return out
