"""Upper and lower bounds on the marginal MAP value.

``output_bounds`` is the feedforward per-node bound (weighted max at
deterministic sums, weighted sum elsewhere); ``edge_bounds`` propagates it
backwards into a per-edge bound on the best marginal achievable by any query
state whose subcircuit uses the edge; ``lower_bound`` extracts a concrete
query state whose marginal is the lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .circuit import LEAF, PRODUCT, SUM, Circuit, QDetInfo, detect_q_deterministic


@dataclass
class BoundRegisters:
    """Scratch registers of the edge-bound pass.

    ``m`` per-node output bounds, ``r_node``/``r_edge`` reachability bounds
    (edges indexed like the flat CSR children array), ``t`` the minimum
    product of sum-edge weights over root-to-node paths.
    """

    m: np.ndarray
    r_node: np.ndarray
    r_edge: np.ndarray
    t: np.ndarray

    def edge_index(self, circuit: Circuit, parent: int, ordinal: int) -> int:
        return int(circuit.flat().offsets[parent]) + ordinal


@dataclass
class LowerBoundResult:
    """A concrete query state and its marginal; ``complete`` is False when
    some query variable had no leaf on the chosen subcircuit and was filled
    with 0."""

    state: dict[int, int]
    value: float
    complete: bool = True


def output_bounds(
    circuit: Circuit,
    query: Iterable[int],
    qdet: QDetInfo | None = None,
    assignment: np.ndarray | None = None,
) -> np.ndarray:
    """Single feedforward pass of per-node upper bounds; ``m[root]`` bounds
    the MMAP value and is exact when the circuit is fully query-deterministic.

    ``assignment`` optionally fixes variables in place (-1 free): inconsistent
    leaves contribute 0, yielding the bound under that partial evidence.
    """
    if qdet is None:
        qdet = detect_q_deterministic(circuit, query)
    f = circuit.flat()
    if assignment is None:
        assignment = np.full(circuit.num_vars, -1, dtype=np.int8)
    take_max = np.array(qdet.is_qdet, dtype=np.int8)
    return np.asarray(
        kernels.bound_forward(
            f.kind, f.var, f.val, f.offsets, f.children, f.weights, assignment, take_max
        )
    )


def edge_bounds(
    circuit: Circuit, query: Iterable[int], qdet: QDetInfo | None = None
) -> BoundRegisters:
    """Backward pass computing r_edge for every edge.

    For deterministic sums the bound tightens by t * (theta * m_c - m_n);
    product edges and non-deterministic sum edges inherit the node bound.

    t(c) lower-bounds, over root-to-c paths, the sensitivity of the root
    output bound to the bound at c: sum edges contribute their weight and
    product edges the product of the sibling children's output bounds. The
    sibling factor is required for soundness whenever product siblings have
    mass other than 1 (the correction term is negative, so t must never
    exceed the true path coefficient).
    """
    if qdet is None:
        qdet = detect_q_deterministic(circuit, query)
    m = output_bounds(circuit, query, qdet)
    f = circuit.flat()
    n = len(f.kind)
    r_node = np.full(n, -math.inf, dtype=np.float64)
    t = np.full(n, math.inf, dtype=np.float64)
    r_edge = np.full(f.num_edges, -math.inf, dtype=np.float64)
    r_node[circuit.root] = m[circuit.root]
    t[circuit.root] = 1.0
    for i in range(n - 1, -1, -1):
        if r_node[i] == -math.inf:
            continue  # unreachable from the root in this pass
        k = f.kind[i]
        if k == LEAF:
            continue
        for j in range(f.offsets[i], f.offsets[i + 1]):
            c = f.children[j]
            if k == PRODUCT:
                r_edge[j] = r_node[i]
                # sibling bounds scale the path coefficient; m[i] is their
                # product times m[c]
                sib = m[i] / m[c] if m[c] > 0.0 else 0.0
                t[c] = min(t[c], t[i] * sib)
            else:
                if qdet.is_qdet[i]:
                    r_edge[j] = r_node[i] + t[i] * (f.weights[j] * m[c] - m[i])
                else:
                    r_edge[j] = r_node[i]
                t[c] = min(t[c], f.weights[j] * t[i])
            r_node[c] = max(r_node[c], r_edge[j])
    return BoundRegisters(m=m, r_node=r_node, r_edge=r_edge, t=t)


def lower_bound(
    circuit: Circuit, query: Iterable[int], qdet: QDetInfo | None = None
) -> LowerBoundResult:
    """Max-where-possible feedforward pass plus state extraction.

    Sums take the weighted max when they or any descendant are
    query-deterministic; the walk down the argmax choices collects query
    literals, and the returned value is the marginal of that state. Exact
    once every sum meeting the query is deterministic.
    """
    query = sorted(set(query))
    if qdet is None:
        qdet = detect_q_deterministic(circuit, query)
    f = circuit.flat()
    n = len(f.kind)

    maxed = [False] * n
    for i in range(n):
        flag = bool(qdet.is_qdet[i]) and f.kind[i] == SUM
        if not flag:
            for j in range(f.offsets[i], f.offsets[i + 1]):
                if maxed[f.children[j]]:
                    flag = True
                    break
        maxed[i] = flag

    m = np.asarray(
        kernels.bound_forward(
            f.kind,
            f.var,
            f.val,
            f.offsets,
            f.children,
            f.weights,
            np.full(circuit.num_vars, -1, dtype=np.int8),
            np.array(maxed, dtype=np.int8),
        )
    )

    qset = set(query)
    state: dict[int, int] = {}
    stack = [circuit.root]
    while stack:
        i = stack.pop()
        k = f.kind[i]
        if k == LEAF:
            if f.var[i] in qset:
                state[int(f.var[i])] = int(f.val[i])
        elif k == PRODUCT:
            stack.extend(int(f.children[j]) for j in range(f.offsets[i], f.offsets[i + 1]))
        else:
            best_val = -1.0
            best_child = -1
            for j in range(f.offsets[i], f.offsets[i + 1]):
                c = int(f.children[j])
                v = f.weights[j] * m[c]
                if v > best_val or (v == best_val and c < best_child):
                    best_val, best_child = v, c
            stack.append(best_child)

    complete = len(state) == len(qset)
    if not complete:
        for v in qset - set(state):
            state[v] = 0
    value = circuit.evaluate_marginal(state)
    return LowerBoundResult(state=state, value=value, complete=complete)
