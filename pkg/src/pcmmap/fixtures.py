"""Small hand-built circuits with known values, used by tests and docs."""
from __future__ import annotations

from .circuit import Circuit, Leaf, Product, Sum


def two_var_mixture() -> Circuit:
    """Two-variable circuit: root = 0.6*([X0=1]*S1) + 0.4*([X0=0]*S2).

    Full distribution: p(1,1)=0.42, p(1,0)=0.18, p(0,1)=0.08, p(0,0)=0.32.
    """
    nodes = [
        Leaf(0, 1),  # 0
        Leaf(0, 0),  # 1
        Leaf(1, 1),  # 2
        Leaf(1, 0),  # 3
        Sum((2, 3), (0.7, 0.3)),  # 4
        Sum((2, 3), (0.2, 0.8)),  # 5
        Product((0, 4)),  # 6
        Product((1, 5)),  # 7
        Sum((6, 7), (0.6, 0.4)),  # 8
    ]
    return Circuit(nodes, root=8, num_vars=2)


def one_var_nondet() -> Circuit:
    """One-variable circuit whose root sum is not deterministic in X0.

    root = 0.5*A + 0.5*B with A = 0.9*[X0=1] + 0.1*[X0=0] and
    B = 0.2*[X0=1] + 0.8*[X0=0]; p(X0=1) = 0.55, p(X0=0) = 0.45.
    """
    nodes = [
        Leaf(0, 1),  # 0
        Leaf(0, 0),  # 1
        Sum((0, 1), (0.9, 0.1)),  # 2
        Sum((0, 1), (0.2, 0.8)),  # 3
        Sum((2, 3), (0.5, 0.5)),  # 4
    ]
    return Circuit(nodes, root=4, num_vars=1)


def unnormalized_gated() -> Circuit:
    """Two-variable circuit, deterministic in X0, with unnormalized branch sums.

    root = 0.6*([X0=1]*S) + 0.4*([X0=0]*T) with S = 0.5*[X1=1] + 0.43*[X1=0]
    (mass 0.93) and T = 0.4*[X1=1] + 0.44*[X1=0] (mass 0.84). For Q = {X0}
    the output bound at the root is 0.6*0.93 = 0.558 and the edge bounds on
    the root's two edges are 0.558 and 0.4*0.84 = 0.336.
    """
    nodes = [
        Leaf(0, 1),  # 0
        Leaf(0, 0),  # 1
        Leaf(1, 1),  # 2
        Leaf(1, 0),  # 3
        Sum((2, 3), (0.5, 0.43)),  # 4
        Sum((2, 3), (0.4, 0.44)),  # 5
        Product((0, 4)),  # 6
        Product((1, 5)),  # 7
        Sum((6, 7), (0.6, 0.4)),  # 8
    ]
    return Circuit(nodes, root=8, num_vars=2)
