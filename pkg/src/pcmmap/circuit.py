"""Arena-based data model for smooth, decomposable probabilistic circuits.

Nodes live in a dense arena stored in topological order (children strictly
precede parents); the root is an index into that arena. Variables are binary
and leaves are indicators [X = v].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import CircuitError, InvalidVariableError

LEAF, PRODUCT, SUM = 0, 1, 2


@dataclass(frozen=True)
class Leaf:
    """Indicator leaf [X_var = value]."""

    var: int
    value: int


@dataclass(frozen=True)
class Product:
    children: tuple[int, ...]


@dataclass(frozen=True)
class Sum:
    children: tuple[int, ...]
    weights: tuple[float, ...]


Node = Leaf | Product | Sum


@dataclass(frozen=True)
class FlatCircuit:
    """CSR view of the arena consumed by the evaluation kernels."""

    kind: np.ndarray
    var: np.ndarray
    val: np.ndarray
    offsets: np.ndarray
    children: np.ndarray
    weights: np.ndarray
    root: int
    num_vars: int

    @property
    def num_edges(self) -> int:
        return len(self.children)


class Circuit:
    """Immutable circuit over ``num_vars`` binary variables."""

    __slots__ = ("nodes", "root", "num_vars", "_scopes", "_flat", "_support")

    def __init__(self, nodes: Iterable[Node], root: int, num_vars: int):
        nodes = tuple(nodes)
        if not nodes:
            raise CircuitError("circuit has no nodes")
        if not 0 <= root < len(nodes):
            raise CircuitError(f"root id {root} out of range")
        if num_vars <= 0:
            raise CircuitError("num_vars must be positive")
        for i, nd in enumerate(nodes):
            if isinstance(nd, Leaf):
                if not 0 <= nd.var < num_vars:
                    raise InvalidVariableError(f"node {i}: variable {nd.var} out of range")
                if nd.value not in (0, 1):
                    raise CircuitError(f"node {i}: leaf value must be 0 or 1")
                continue
            if not nd.children:
                raise CircuitError(f"node {i}: inner node with no children")
            for c in nd.children:
                if not 0 <= c < i:
                    raise CircuitError(f"node {i}: child {c} does not precede its parent")
            if isinstance(nd, Sum):
                if len(nd.weights) != len(nd.children):
                    raise CircuitError(f"node {i}: weight/child count mismatch")
                for w in nd.weights:
                    if not (math.isfinite(w) and w > 0.0):
                        raise CircuitError(f"node {i}: non-positive weight {w}")
        self.nodes = nodes
        self.root = root
        self.num_vars = num_vars
        self._scopes: tuple[int, ...] | None = None
        self._flat: FlatCircuit | None = None
        self._support: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    # -- structure -------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return sum(len(nd.children) for nd in self.nodes if not isinstance(nd, Leaf))

    def scopes(self) -> tuple[int, ...]:
        """Per-node scope as a variable bitmask, computed bottom-up."""
        if self._scopes is None:
            sc = [0] * len(self.nodes)
            for i, nd in enumerate(self.nodes):
                if isinstance(nd, Leaf):
                    sc[i] = 1 << nd.var
                else:
                    m = 0
                    for c in nd.children:
                        m |= sc[c]
                    sc[i] = m
            self._scopes = tuple(sc)
        return self._scopes

    def scope_vars(self, node: int | None = None) -> frozenset[int]:
        mask = self.scopes()[self.root if node is None else node]
        return frozenset(v for v in range(self.num_vars) if (mask >> v) & 1)

    def flat(self) -> FlatCircuit:
        if self._flat is None:
            n = len(self.nodes)
            kind = np.zeros(n, dtype=np.int8)
            var = np.full(n, -1, dtype=np.int32)
            val = np.zeros(n, dtype=np.int8)
            offsets = np.zeros(n + 1, dtype=np.int64)
            children: list[int] = []
            weights: list[float] = []
            for i, nd in enumerate(self.nodes):
                if isinstance(nd, Leaf):
                    kind[i] = LEAF
                    var[i] = nd.var
                    val[i] = nd.value
                elif isinstance(nd, Product):
                    kind[i] = PRODUCT
                    children.extend(nd.children)
                    weights.extend(1.0 for _ in nd.children)
                else:
                    kind[i] = SUM
                    children.extend(nd.children)
                    weights.extend(nd.weights)
                offsets[i + 1] = len(children)
            self._flat = FlatCircuit(
                kind=kind,
                var=var,
                val=val,
                offsets=offsets,
                children=np.array(children, dtype=np.int32),
                weights=np.array(weights, dtype=np.float64),
                root=self.root,
                num_vars=self.num_vars,
            )
        return self._flat

    # -- evaluation ------------------------------------------------------

    def assignment_array(self, partial: Mapping[int, int]) -> np.ndarray:
        """Dense -1/0/1 array for a partial assignment; validates indices."""
        a = np.full(self.num_vars, -1, dtype=np.int8)
        for v, x in partial.items():
            if not 0 <= v < self.num_vars:
                raise InvalidVariableError(f"variable {v} out of range")
            if x not in (0, 1):
                raise CircuitError(f"assignment value for variable {v} must be 0 or 1")
            a[v] = x
        return a

    def evaluate_marginal(self, partial: Mapping[int, int]) -> float:
        """C(partial): leaves on unassigned variables evaluate to 1."""
        f = self.flat()
        out = kernels.eval_forward(
            f.kind, f.var, f.val, f.offsets, f.children, f.weights, self.assignment_array(partial)
        )
        return float(out[self.root])

    def node_values(self, partial: Mapping[int, int]) -> np.ndarray:
        """Per-node values of the feedforward marginal pass."""
        f = self.flat()
        return np.asarray(
            kernels.eval_forward(
                f.kind, f.var, f.val, f.offsets, f.children, f.weights, self.assignment_array(partial)
            )
        )

    def condition(self, evidence: Mapping[int, int]) -> "Circuit":
        from .transform import condition

        return condition(self, evidence)

    # -- support over-approximation --------------------------------------

    def support_masks(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per-node (pos, neg) bitmasks over-approximating support projections.

        Bit v of pos (neg) is set when value 1 (0) of variable v appears in
        some assignment of the node's support; leaves are exact, products take
        unions over disjoint scopes, sums take per-variable unions.
        """
        if self._support is None:
            pos = [0] * len(self.nodes)
            neg = [0] * len(self.nodes)
            for i, nd in enumerate(self.nodes):
                if isinstance(nd, Leaf):
                    if nd.value == 1:
                        pos[i] = 1 << nd.var
                    else:
                        neg[i] = 1 << nd.var
                else:
                    p = m = 0
                    for c in nd.children:
                        p |= pos[c]
                        m |= neg[c]
                    pos[i], neg[i] = p, m
            self._support = (tuple(pos), tuple(neg))
        return self._support

    def possible_values(self, node: int, var: int) -> frozenset[int]:
        """Over-approximated value set of ``var`` in the support of ``node``."""
        pos, neg = self.support_masks()
        vals = set()
        if (pos[node] >> var) & 1:
            vals.add(1)
        if (neg[node] >> var) & 1:
            vals.add(0)
        if not vals and (self.scopes()[node] >> var) & 1 == 0:
            vals = {0, 1}
        return frozenset(vals)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Circuit(nodes={len(self.nodes)}, root={self.root}, num_vars={self.num_vars})"


@dataclass(frozen=True)
class MmapInstance:
    """Query/evidence split of the variables; hidden is the complement."""

    query: frozenset[int]
    evidence: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "query", frozenset(self.query))
        if not self.query:
            raise CircuitError("query set must be nonempty")
        if self.query & set(self.evidence):
            raise CircuitError("query and evidence variables overlap")
        for v, x in self.evidence.items():
            if x not in (0, 1):
                raise CircuitError(f"evidence value for variable {v} must be 0 or 1")

    def validate_for(self, circuit: Circuit) -> None:
        for v in self.query | set(self.evidence):
            if not 0 <= v < circuit.num_vars:
                raise InvalidVariableError(f"variable {v} out of range for circuit")


def check_smooth(circuit: Circuit) -> tuple[bool, int | None]:
    """True iff every sum node's children have identical scopes."""
    scopes = circuit.scopes()
    for i, nd in enumerate(circuit.nodes):
        if isinstance(nd, Sum):
            first = scopes[nd.children[0]]
            for c in nd.children[1:]:
                if scopes[c] != first:
                    return False, i
    return True, None


def check_decomposable(circuit: Circuit) -> tuple[bool, int | None]:
    """True iff every product node's children have pairwise-disjoint scopes."""
    scopes = circuit.scopes()
    for i, nd in enumerate(circuit.nodes):
        if isinstance(nd, Product):
            seen = 0
            for c in nd.children:
                if seen & scopes[c]:
                    return False, i
                seen |= scopes[c]
    return True, None


@dataclass(frozen=True)
class QDetInfo:
    """Conservative per-sum-node query-determinism marks.

    ``deciding`` holds, for marked sum nodes, the lowest-index query variable
    credited with separating the children (-1 elsewhere).
    """

    is_qdet: tuple[bool, ...]
    deciding: tuple[int, ...]


def detect_q_deterministic(circuit: Circuit, query: Iterable[int]) -> QDetInfo:
    """Mark sum nodes whose children provably have disjoint query supports.

    Sound in the safe direction only: a sum node is marked when for every
    child pair some query variable's possible-value sets are disjoint. False
    negatives merely loosen bounds; false positives are never produced.
    """
    qmask = 0
    for v in query:
        if not 0 <= v < circuit.num_vars:
            raise InvalidVariableError(f"query variable {v} out of range")
        qmask |= 1 << v
    pos, neg = circuit.support_masks()
    is_qdet = [False] * circuit.num_nodes
    deciding = [-1] * circuit.num_nodes
    for i, nd in enumerate(circuit.nodes):
        if not isinstance(nd, Sum):
            continue
        kids = nd.children
        if len(kids) == 1:
            # a single-input sum is trivially deterministic for any query
            is_qdet[i] = True
            continue
        all_pairs = ~0
        any_pair = 0
        ok = True
        for a in range(len(kids)):
            ca = kids[a]
            force1_a = pos[ca] & ~neg[ca]
            force0_a = neg[ca] & ~pos[ca]
            for b in range(a + 1, len(kids)):
                cb = kids[b]
                sep = (force1_a & neg[cb] & ~pos[cb]) | (force0_a & pos[cb] & ~neg[cb])
                sep &= qmask
                if not sep:
                    ok = False
                    break
                all_pairs &= sep
                any_pair |= sep
            if not ok:
                break
        if ok:
            is_qdet[i] = True
            mask = all_pairs if all_pairs else any_pair
            deciding[i] = (mask & -mask).bit_length() - 1
    return QDetInfo(tuple(is_qdet), tuple(deciding))
