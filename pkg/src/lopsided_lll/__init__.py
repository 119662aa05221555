"""Variable-framework lopsided Local Lemma toolkit: VDL graphs, Moser resampling, witness forests."""

from .dependency import (
    LopsGraph,
    VDLGraph,
    build_lops_graph,
    build_vdl_graph,
    check_claim1,
    check_condition,
    check_erdos_spencer,
    is_lopsidependent,
    is_vdl,
)
from .forest import (
    LabeledForest,
    Node,
    bound_report,
    complete_forest,
    count_fn,
    count_tn,
    enumerate_feasible,
    is_feasible,
    replay_check,
    val_alg,
    witness_from_log,
)
from .instances import example1, random_system
from .model import (
    Atom,
    Event,
    EventExpr,
    EventSystem,
    VariableSpec,
    evaluate,
    event_probability,
    max_probability,
    minimal_scope,
    resample_step,
    sample,
)
from .solver import ExecutionLog, assert_progress, m_algorithm, root_call_indices
from .tape import ForcedTape, RandomTape

__version__ = "0.1.0"
