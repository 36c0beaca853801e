"""Exact marginal MAP inference on smooth, decomposable probabilistic
circuits by iterative edge pruning and root splitting."""

from .bounds import (
    BoundRegisters,
    LowerBoundResult,
    edge_bounds,
    lower_bound,
    output_bounds,
)
from .circuit import (
    Circuit,
    Leaf,
    MmapInstance,
    Product,
    QDetInfo,
    Sum,
    check_decomposable,
    check_smooth,
    detect_q_deterministic,
)
from .errors import (
    BudgetExceededError,
    CircuitError,
    EmptyCircuitError,
    InfeasibleEvidenceError,
    InvalidVariableError,
    OverPruneError,
    ParseError,
)
from .fileio import (
    generate_instance,
    loads_circuit,
    loads_instance,
    parse_circuit,
    parse_instance,
    sample_assignment,
    serialize_circuit,
    serialize_instance,
    write_circuit,
    write_instance,
)
from .kernels import BACKEND
from .oracle import (
    SubcircuitMask,
    edge_restricted_maxima,
    oracle_edge_mmap,
    oracle_mmap,
    oracle_subcircuit,
)
from .randcircuit import random_circuit
from .solver import (
    HEURISTICS,
    IterationRecord,
    SolverConfig,
    SolverReport,
    iter_solve,
    pick_var_pruned,
    pick_var_ub,
)
from .transform import cleanup, condition, prune_edges, split

__version__ = "1.0.0"

__all__ = [
    "BACKEND",
    "BoundRegisters",
    "BudgetExceededError",
    "Circuit",
    "CircuitError",
    "EmptyCircuitError",
    "HEURISTICS",
    "InfeasibleEvidenceError",
    "InvalidVariableError",
    "IterationRecord",
    "Leaf",
    "LowerBoundResult",
    "MmapInstance",
    "OverPruneError",
    "ParseError",
    "Product",
    "QDetInfo",
    "SolverConfig",
    "SolverReport",
    "SubcircuitMask",
    "Sum",
    "check_decomposable",
    "check_smooth",
    "cleanup",
    "condition",
    "detect_q_deterministic",
    "edge_bounds",
    "edge_restricted_maxima",
    "generate_instance",
    "iter_solve",
    "loads_circuit",
    "loads_instance",
    "lower_bound",
    "oracle_edge_mmap",
    "oracle_mmap",
    "oracle_subcircuit",
    "output_bounds",
    "parse_circuit",
    "parse_instance",
    "pick_var_pruned",
    "pick_var_ub",
    "prune_edges",
    "random_circuit",
    "sample_assignment",
    "serialize_circuit",
    "serialize_instance",
    "split",
    "write_circuit",
    "write_instance",
]
