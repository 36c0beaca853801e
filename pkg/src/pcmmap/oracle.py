"""Brute-force ground truth by enumeration over the query assignments.

Used by the test suite and the ``oracle`` CLI subcommand to validate the
bound computations and the iterative solver on small instances.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .circuit import Circuit
from .errors import BudgetExceededError, CircuitError

DEFAULT_BUDGET = 1 << 20


def _sorted_query(circuit: Circuit, query: Iterable[int], budget: int) -> list[int]:
    q = sorted(set(query))
    if not q:
        raise CircuitError("query set must be nonempty")
    if 1 << len(q) > budget:
        raise BudgetExceededError(f"2^{len(q)} assignments exceed the budget of {budget} evaluations")
    return q


def _code_to_state(q: list[int], code: int) -> dict[int, int]:
    k = len(q)
    return {q[j]: (code >> (k - 1 - j)) & 1 for j in range(k)}


def oracle_mmap(
    circuit: Circuit, query: Iterable[int], budget: int = DEFAULT_BUDGET
) -> tuple[float, dict[int, int]]:
    """Exact MMAP value and lexicographically smallest argmax state."""
    q = _sorted_query(circuit, query, budget)
    f = circuit.flat()
    best, code = kernels.best_marginal(
        f.kind,
        f.var,
        f.val,
        f.offsets,
        f.children,
        f.weights,
        np.full(circuit.num_vars, -1, dtype=np.int8),
        circuit.root,
        np.array(q, dtype=np.int32),
    )
    return float(best), _code_to_state(q, int(code))


@dataclass
class SubcircuitMask:
    """Membership of nodes/edges in the subcircuit activated by a query state.

    Edges are indexed like the flat CSR children array."""

    active_nodes: np.ndarray
    active_edges: np.ndarray
    value: float


def oracle_subcircuit(circuit: Circuit, q: dict[int, int]) -> SubcircuitMask:
    """Top-down reachability through nonzero nodes under the marginal pass for q."""
    values = circuit.node_values(q)
    f = circuit.flat()
    n = circuit.num_nodes
    active_nodes = np.zeros(n, dtype=bool)
    active_edges = np.zeros(f.num_edges, dtype=bool)
    root_val = float(values[circuit.root])
    if root_val > 0.0:
        active_nodes[circuit.root] = True
        for i in range(n - 1, -1, -1):
            if not active_nodes[i]:
                continue
            for j in range(f.offsets[i], f.offsets[i + 1]):
                c = f.children[j]
                if values[c] > 0.0:
                    active_nodes[c] = True
                    active_edges[j] = True
    return SubcircuitMask(active_nodes=active_nodes, active_edges=active_edges, value=root_val)


def edge_restricted_maxima(
    circuit: Circuit, query: Iterable[int], budget: int = DEFAULT_BUDGET
) -> tuple[np.ndarray, np.ndarray]:
    """For every edge, the max marginal over query states activating it.

    Returns (best, activated); edges activated by no state carry best 0."""
    q = _sorted_query(circuit, query, budget)
    f = circuit.flat()
    best, seen = kernels.edge_maxima(
        f.kind,
        f.var,
        f.val,
        f.offsets,
        f.children,
        f.weights,
        np.full(circuit.num_vars, -1, dtype=np.int8),
        circuit.root,
        np.array(q, dtype=np.int32),
    )
    return np.asarray(best), np.asarray(seen)


def oracle_edge_mmap(
    circuit: Circuit,
    query: Iterable[int],
    edge: tuple[int, int],
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Edge-restricted MMAP for one (parent, child-ordinal) edge; 0 when no
    query state activates the edge."""
    parent, ordinal = edge
    f = circuit.flat()
    if not 0 <= parent < circuit.num_nodes:
        raise CircuitError(f"node {parent} out of range")
    idx = int(f.offsets[parent]) + ordinal
    if not f.offsets[parent] <= idx < f.offsets[parent + 1]:
        raise CircuitError(f"node {parent} has no child ordinal {ordinal}")
    best, _ = edge_restricted_maxima(circuit, query, budget)
    return float(best[idx])
