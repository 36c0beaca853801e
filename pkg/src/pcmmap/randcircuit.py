"""Seeded generation of random smooth, decomposable circuits.

Circuits are built top-down over variable sets: singletons become Bernoulli
sums over the two indicators, larger sets become either a sum gated on one
variable (deterministic in it) or a mixture of products over random
partitions (generally non-deterministic). Sub-circuits over the same
variable set are reused with some probability, producing shared DAG nodes.
"""
from __future__ import annotations

import random

from .circuit import Circuit, Leaf, Node, Product, Sum
from .errors import CircuitError
from .transform import cleanup


def random_circuit(
    num_vars: int,
    seed: int,
    *,
    det_prob: float = 0.45,
    reuse_prob: float = 0.3,
    max_components: int = 3,
) -> Circuit:
    """A random circuit over ``num_vars`` binary variables, deterministic in
    the seed. Mixes deterministic and non-deterministic sums."""
    if num_vars < 1:
        raise CircuitError("num_vars must be positive")
    if not 0.0 <= det_prob <= 1.0 or not 0.0 <= reuse_prob <= 1.0:
        raise CircuitError("probabilities must lie in [0, 1]")
    if max_components < 2:
        raise CircuitError("max_components must be at least 2")
    rng = random.Random(seed)
    nodes: list[Node] = []

    def add(nd: Node) -> int:
        nodes.append(nd)
        return len(nodes) - 1

    leaf_ids: dict[tuple[int, int], int] = {}

    def leaf(var: int, value: int) -> int:
        key = (var, value)
        if key not in leaf_ids:
            leaf_ids[key] = add(Leaf(var, value))
        return leaf_ids[key]

    def weights(k: int) -> tuple[float, ...]:
        raw = [rng.uniform(0.05, 1.0) for _ in range(k)]
        if rng.random() < 0.5:
            total = sum(raw)
            raw = [w / total for w in raw]
        return tuple(raw)

    built: dict[tuple[int, ...], list[int]] = {}

    def build(vs: tuple[int, ...]) -> int:
        if vs in built and rng.random() < reuse_prob:
            return rng.choice(built[vs])
        if len(vs) == 1:
            nid = add(Sum((leaf(vs[0], 1), leaf(vs[0], 0)), weights(2)))
        elif rng.random() < det_prob:
            # gate on one variable: deterministic in it
            pivot = rng.choice(vs)
            rest = tuple(v for v in vs if v != pivot)
            comps = []
            for value in (1, 0):
                comps.append(add(Product((leaf(pivot, value), build(rest)))))
            nid = add(Sum(tuple(comps), weights(2)))
        else:
            k = rng.randint(2, max_components)
            comps = []
            for _ in range(k):
                shuffled = list(vs)
                rng.shuffle(shuffled)
                cut = rng.randint(1, len(vs) - 1)
                blocks = (tuple(sorted(shuffled[:cut])), tuple(sorted(shuffled[cut:])))
                comps.append(add(Product(tuple(build(b) for b in blocks))))
            nid = add(Sum(tuple(comps), weights(k)))
        built.setdefault(vs, []).append(nid)
        return nid

    root = build(tuple(range(num_vars)))
    return cleanup(Circuit(nodes, root, num_vars))
