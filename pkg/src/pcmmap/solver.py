"""Iterative prune-and-split marginal MAP solver.

Maintains upper/lower bounds, prunes every sum edge whose edge bound falls
strictly below the lower bound, then splits the root on a query variable
chosen by the configured heuristic; converges after at most |Q| iterations,
at which point the circuit is fully query-deterministic.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bounds import edge_bounds, lower_bound, output_bounds
from .circuit import SUM, Circuit, MmapInstance, detect_q_deterministic
from .errors import CircuitError, OverPruneError
from .transform import condition, prune_edges, split

HEURISTICS = ("pruned", "ub")

# relative slack on the prune threshold: edge bounds are computed in floating
# point and can round a hair below an attained optimum, which strict
# comparison alone would over-prune
PRUNE_SLACK = 1e-12


@dataclass
class SolverConfig:
    heuristic: str = "ub"
    timeout: float = 3600.0
    tolerance: float = 1e-9
    trace: bool = False

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise CircuitError(f"unknown heuristic {self.heuristic!r}; expected one of {HEURISTICS}")
        if self.timeout <= 0:
            raise CircuitError("timeout must be positive")
        if self.tolerance < 0:
            raise CircuitError("tolerance must be nonnegative")


@dataclass
class IterationRecord:
    iteration: int
    upper: float
    lower: float
    num_nodes: int
    num_edges: int
    pruned: int
    split_var: int | None

    def trace_line(self) -> str:
        sv = "-" if self.split_var is None else str(self.split_var)
        return (
            f"iter={self.iteration} u={self.upper!r} l={self.lower!r} "
            f"size={self.num_nodes}/{self.num_edges} pruned={self.pruned} split={sv}"
        )


@dataclass
class SolverReport:
    value: float
    state: dict[int, int]
    iterations: int
    status: str  # "solved" | "timeout"
    records: list[IterationRecord] = field(default_factory=list)

    def trace_lines(self) -> list[str]:
        return [r.trace_line() for r in self.records]


def pick_var_pruned(candidates: Sequence[int], counts: dict[int, int]) -> int:
    """Candidate with the most pruned edges attributed to it; ties go to the
    lowest variable index."""
    if not candidates:
        raise CircuitError("no candidate variables")
    return min(candidates, key=lambda v: (-counts.get(v, 0), v))


def _ub_select(pairs: dict[int, tuple[float, float]], lower: float) -> int:
    below = [v for v, (b0, b1) in pairs.items() if min(b0, b1) < lower]
    if below:
        return min(below, key=lambda v: (max(pairs[v]), v))
    return min(pairs, key=lambda v: (pairs[v][0] + pairs[v][1], v))


def pick_var_ub(
    circuit: Circuit,
    query: Sequence[int],
    candidates: Sequence[int],
    lower: float,
    qdet=None,
) -> int:
    """Split-candidate selection by post-split upper bounds.

    For each candidate the output bound is recomputed with each of its two
    values set as in-place evidence (these equal the edge bounds on the root
    edges after splitting on it); candidates whose weaker side drops below
    the lower bound are preferred, as their losing branch will be pruned."""
    if not candidates:
        raise CircuitError("no candidate variables")
    pairs: dict[int, tuple[float, float]] = {}
    assignment = np.full(circuit.num_vars, -1, dtype=np.int8)
    for v in candidates:
        bounds = []
        for value in (0, 1):
            assignment[v] = value
            bounds.append(float(output_bounds(circuit, query, qdet, assignment)[circuit.root]))
        assignment[v] = -1
        pairs[v] = (bounds[0], bounds[1])
    return _ub_select(pairs, lower)


def _attribution_counts(circuit: Circuit, qdet, prune_list, counts: dict[int, int]) -> None:
    # an edge counts toward a variable when its deterministic parent sum is
    # separated by that variable (lowest-index deciding variable on ties)
    for parent, _ in prune_list:
        if qdet.is_qdet[parent]:
            v = qdet.deciding[parent]
            if v in counts:
                counts[v] += 1


def iter_solve(
    circuit: Circuit, instance: MmapInstance, config: SolverConfig | None = None
) -> SolverReport:
    """Solve an MMAP instance exactly by iterative pruning and splitting."""
    if config is None:
        config = SolverConfig()
    instance.validate_for(circuit)
    start = time.monotonic()

    base = condition(circuit, instance.evidence)
    query = sorted(instance.query)
    cur = base
    qdet = detect_q_deterministic(cur, query)
    upper = float(output_bounds(cur, query, qdet)[cur.root])
    lb = lower_bound(cur, query, qdet)
    best_state = dict(lb.state)
    lower = base.evaluate_marginal(best_state)

    records = [
        IterationRecord(0, upper, lower, cur.num_nodes, cur.num_edges, 0, None)
    ]
    remaining = list(query)
    counts = {v: 0 for v in query}
    status = "solved"
    iteration = 0

    while upper > lower * (1.0 + config.tolerance) and remaining:
        if time.monotonic() - start >= config.timeout:
            status = "timeout"
            break
        iteration += 1

        regs = edge_bounds(cur, query, qdet)
        f = cur.flat()
        prune_list = []
        for i, nd in enumerate(cur.nodes):
            if f.kind[i] != SUM:
                continue
            lo = int(f.offsets[i])
            for ordinal in range(len(nd.children)):  # type: ignore[union-attr]
                r = regs.r_edge[lo + ordinal]
                if r != -float("inf") and r < lower * (1.0 - PRUNE_SLACK):
                    prune_list.append((i, ordinal))
        _attribution_counts(cur, qdet, prune_list, counts)
        if prune_list:
            try:
                cur = prune_edges(cur, prune_list)
            except OverPruneError:
                raise CircuitError(
                    "internal error: pruning against an attained lower bound emptied the circuit"
                )
            qdet = detect_q_deterministic(cur, query)

        if config.heuristic == "pruned":
            var = pick_var_pruned(remaining, counts)
        else:
            var = pick_var_ub(cur, query, remaining, lower, qdet)
        remaining.remove(var)
        cur = split(cur, var)

        qdet = detect_q_deterministic(cur, query)
        upper = min(upper, float(output_bounds(cur, query, qdet)[cur.root]))
        lb = lower_bound(cur, query, qdet)
        candidate = base.evaluate_marginal(lb.state)
        if candidate > lower:
            lower = candidate
            best_state = dict(lb.state)
        records.append(
            IterationRecord(
                iteration, upper, lower, cur.num_nodes, cur.num_edges, len(prune_list), var
            )
        )

    if status == "solved" and not remaining and upper > lower:
        # fully query-deterministic: the feedforward bound is exact, so close
        # the residual floating-point gap at the attained lower bound
        upper = lower
        records[-1].upper = min(records[-1].upper, upper)

    return SolverReport(
        value=lower,
        state=best_state,
        iterations=iteration,
        status=status,
        records=records,
    )
