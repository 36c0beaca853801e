"""Circuit-rewriting operations: cleanup, conditioning, edge pruning, and
root splits.

Every transform returns a fresh circuit whose arena is again dense and
topologically ordered; the input is never mutated.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .circuit import Circuit, Leaf, Node, Product, Sum
from .errors import (
    CircuitError,
    EmptyCircuitError,
    InfeasibleEvidenceError,
    InvalidVariableError,
    OverPruneError,
)


def _rebuild(nodes: Sequence[Node], root: int, num_vars: int, killed: frozenset[int]) -> Circuit:
    """Canonicalize an arena: drop killed/dead/unreachable nodes, collapse
    single-child sums and products with weight folding, and reindex.

    Each node resolves to ``(new_id, pending_weight)`` or ``None`` (dead);
    pending weights bubble up multiplicatively until a sum edge absorbs them.
    """
    resolved: list[tuple[int, float] | None] = []
    new_nodes: list[Node] = []

    for i, nd in enumerate(nodes):
        if i in killed:
            resolved.append(None)
            continue
        if isinstance(nd, Leaf):
            new_nodes.append(nd)
            resolved.append((len(new_nodes) - 1, 1.0))
        elif isinstance(nd, Product):
            refs = [resolved[c] for c in nd.children]
            if any(r is None for r in refs):
                resolved.append(None)
                continue
            ids = [r[0] for r in refs]  # type: ignore[index]
            pending = 1.0
            for r in refs:
                pending *= r[1]  # type: ignore[index]
            if len(ids) == 1:
                resolved.append((ids[0], pending))
            else:
                new_nodes.append(Product(tuple(ids)))
                resolved.append((len(new_nodes) - 1, pending))
        else:
            merged: dict[int, float] = {}
            for c, w in zip(nd.children, nd.weights):
                r = resolved[c]
                if r is None:
                    continue
                cid, cw = r
                merged[cid] = merged.get(cid, 0.0) + w * cw
            if not merged:
                resolved.append(None)
            elif len(merged) == 1:
                ((cid, w),) = merged.items()
                resolved.append((cid, w))
            else:
                new_nodes.append(Sum(tuple(merged), tuple(merged.values())))
                resolved.append((len(new_nodes) - 1, 1.0))

    ref = resolved[root]
    if ref is None:
        raise EmptyCircuitError("cleanup removed the root")
    rid, w = ref
    if w != 1.0:
        nd = new_nodes[rid]
        if isinstance(nd, Sum):
            # safe to scale in place: other referents of rid are above the
            # root and get dropped by the reachability pass below
            new_nodes[rid] = Sum(nd.children, tuple(w * wi for wi in nd.weights))
        else:
            new_nodes.append(Sum((rid,), (w,)))
            rid = len(new_nodes) - 1

    reachable = [False] * len(new_nodes)
    reachable[rid] = True
    for i in range(rid, -1, -1):
        if reachable[i] and not isinstance(new_nodes[i], Leaf):
            for c in new_nodes[i].children:  # type: ignore[union-attr]
                reachable[c] = True
    remap = [-1] * len(new_nodes)
    final: list[Node] = []
    for i, nd in enumerate(new_nodes):
        if not reachable[i]:
            continue
        if isinstance(nd, Product):
            nd = Product(tuple(remap[c] for c in nd.children))
        elif isinstance(nd, Sum):
            nd = Sum(tuple(remap[c] for c in nd.children), nd.weights)
        remap[i] = len(final)
        final.append(nd)
    return Circuit(final, remap[rid], num_vars)


def cleanup(circuit: Circuit) -> Circuit:
    """Remove unreachable nodes and collapse single-child chains."""
    return _rebuild(circuit.nodes, circuit.root, circuit.num_vars, frozenset())


def condition(circuit: Circuit, evidence: Mapping[int, int]) -> Circuit:
    """Bake a partial assignment into the circuit.

    Leaves inconsistent with the evidence are zeroed and the cascade cleaned
    up, so ``new.evaluate_marginal(q) == old.evaluate_marginal(q | evidence)``
    for all q over the remaining variables.
    """
    for v, x in evidence.items():
        if not 0 <= v < circuit.num_vars:
            raise InvalidVariableError(f"evidence variable {v} out of range")
        if x not in (0, 1):
            raise CircuitError(f"evidence value for variable {v} must be 0 or 1")
    killed = frozenset(
        i
        for i, nd in enumerate(circuit.nodes)
        if isinstance(nd, Leaf) and nd.var in evidence and nd.value != evidence[nd.var]
    )
    try:
        return _rebuild(circuit.nodes, circuit.root, circuit.num_vars, killed)
    except EmptyCircuitError:
        raise InfeasibleEvidenceError(f"evidence {dict(evidence)} has probability zero") from None


def prune_edges(circuit: Circuit, edges: Iterable[tuple[int, int]]) -> Circuit:
    """Remove the given sum input edges, identified as (parent id, child ordinal)."""
    by_parent: dict[int, set[int]] = {}
    for parent, ordinal in edges:
        nd = circuit.nodes[parent] if 0 <= parent < circuit.num_nodes else None
        if not isinstance(nd, Sum) or not 0 <= ordinal < len(nd.children):
            raise CircuitError(f"edge ({parent}, {ordinal}) is not a sum edge of this circuit")
        removed = by_parent.setdefault(parent, set())
        if ordinal in removed:
            raise CircuitError(f"duplicate edge ({parent}, {ordinal}) in prune set")
        removed.add(ordinal)
    if not by_parent:
        return circuit

    nodes: list[Node] = list(circuit.nodes)
    killed = set()
    for parent, removed in by_parent.items():
        nd = nodes[parent]
        assert isinstance(nd, Sum)
        kept = [(c, w) for k, (c, w) in enumerate(zip(nd.children, nd.weights)) if k not in removed]
        if kept:
            nodes[parent] = Sum(tuple(c for c, _ in kept), tuple(w for _, w in kept))
        else:
            killed.add(parent)
    try:
        return _rebuild(nodes, circuit.root, circuit.num_vars, frozenset(killed))
    except EmptyCircuitError:
        raise OverPruneError("pruning removed the root's entire support") from None


def split(circuit: Circuit, variable: int) -> Circuit:
    """Split the root on a variable: new root = C<X=1> + C<X=0> with unit
    weights, sharing every node whose scope avoids X between both branches.

    Preserves the value of every full assignment and makes the root
    deterministic in X.
    """
    if not 0 <= variable < circuit.num_vars:
        raise InvalidVariableError(f"variable {variable} out of range")
    scopes = circuit.scopes()
    nodes: list[Node] = list(circuit.nodes)
    bit = 1 << variable

    if not scopes[circuit.root] & bit:
        # X never appears in the circuit: introduce it at a fresh root
        nodes.append(Leaf(variable, 1))
        nodes.append(Leaf(variable, 0))
        nodes.append(Product((len(nodes) - 2, circuit.root)))
        nodes.append(Product((len(nodes) - 2, circuit.root)))
        nodes.append(Sum((len(nodes) - 2, len(nodes) - 1), (1.0, 1.0)))
        return _rebuild(nodes, len(nodes) - 1, circuit.num_vars, frozenset())

    def dup(i: int, value: int, memo: dict[int, int | None]) -> int | None:
        if not scopes[i] & bit:
            return i
        if i in memo:
            return memo[i]
        nd = circuit.nodes[i]
        res: int | None
        if isinstance(nd, Leaf):
            res = i if nd.value == value else None
        elif isinstance(nd, Product):
            kids = [dup(c, value, memo) for c in nd.children]
            if any(k is None for k in kids):
                res = None
            elif tuple(kids) == nd.children:
                res = i
            else:
                nodes.append(Product(tuple(kids)))  # type: ignore[arg-type]
                res = len(nodes) - 1
        else:
            pairs = [(dup(c, value, memo), w) for c, w in zip(nd.children, nd.weights)]
            pairs = [(k, w) for k, w in pairs if k is not None]
            if not pairs:
                res = None
            elif tuple(k for k, _ in pairs) == nd.children:
                res = i
            else:
                nodes.append(Sum(tuple(k for k, _ in pairs), tuple(w for _, w in pairs)))
                res = len(nodes) - 1
        memo[i] = res
        return res

    branches = [b for b in (dup(circuit.root, 1, {}), dup(circuit.root, 0, {})) if b is not None]
    if not branches:
        raise EmptyCircuitError("circuit has no support on either value of the split variable")
    nodes.append(Sum(tuple(branches), (1.0,) * len(branches)))
    return _rebuild(nodes, len(nodes) - 1, circuit.num_vars, frozenset())
