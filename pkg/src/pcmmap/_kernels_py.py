"""Pure-Python evaluation kernels.

Fallback backend used when the compiled extension is unavailable (or when
PCMMAP_PURE is set). Signatures must stay in sync with ``_speedups.pyx``.
"""
from __future__ import annotations

import numpy as np

LEAF, PRODUCT, SUM = 0, 1, 2


def eval_forward(kind, var, val, offsets, children, weights, assignment):
    """Feedforward pass: per-node values for a partial assignment.

    ``assignment`` holds -1 for unassigned variables, else 0/1. Leaves on
    unassigned variables evaluate to 1.
    """
    n = len(kind)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        k = kind[i]
        if k == LEAF:
            a = assignment[var[i]]
            out[i] = 1.0 if (a < 0 or a == val[i]) else 0.0
        elif k == PRODUCT:
            acc = 1.0
            for j in range(offsets[i], offsets[i + 1]):
                acc *= out[children[j]]
            out[i] = acc
        else:
            acc = 0.0
            for j in range(offsets[i], offsets[i + 1]):
                acc += weights[j] * out[children[j]]
            out[i] = acc
    return out


def best_marginal(kind, var, val, offsets, children, weights, assignment, root, qvars):
    """Maximum marginal over all assignments to ``qvars``.

    Returns (value, code). Bit ``k-1-j`` of ``code`` is the value of
    ``qvars[j]``, so ascending codes enumerate assignments in lexicographic
    order and the strict comparison keeps the lexicographically smallest
    argmax.
    """
    k = len(qvars)
    a = np.array(assignment, dtype=np.int8, copy=True)
    best = -1.0
    best_code = 0
    for code in range(1 << k):
        for j in range(k):
            a[qvars[j]] = (code >> (k - 1 - j)) & 1
        value = eval_forward(kind, var, val, offsets, children, weights, a)[root]
        if value > best:
            best = value
            best_code = code
    return best, best_code


def edge_maxima(kind, var, val, offsets, children, weights, assignment, root, qvars):
    """Per-edge maxima of the root marginal over activating query assignments.

    An edge is active for q when its parent is active and the child's value
    under q is nonzero; the root is active when the marginal is nonzero.
    Returns (best, seen) arrays indexed like the CSR ``children`` array; edges
    never activated keep best 0 and seen False.
    """
    k = len(qvars)
    n = len(kind)
    num_edges = len(children)
    a = np.array(assignment, dtype=np.int8, copy=True)
    best = np.zeros(num_edges, dtype=np.float64)
    seen = np.zeros(num_edges, dtype=bool)
    active = np.zeros(n, dtype=bool)
    for code in range(1 << k):
        for j in range(k):
            a[qvars[j]] = (code >> (k - 1 - j)) & 1
        out = eval_forward(kind, var, val, offsets, children, weights, a)
        root_val = out[root]
        if root_val <= 0.0:
            continue
        active[:] = False
        active[root] = True
        for i in range(n - 1, -1, -1):
            if not active[i]:
                continue
            for j in range(offsets[i], offsets[i + 1]):
                c = children[j]
                if out[c] > 0.0:
                    active[c] = True
                    seen[j] = True
                    if root_val > best[j]:
                        best[j] = root_val
    return best, seen


def bound_forward(kind, var, val, offsets, children, weights, assignment, take_max):
    """Feedforward bound pass: like ``eval_forward`` but sums flagged in
    ``take_max`` take the weighted maximum of their children instead of the
    weighted sum. Leaves follow the assignment (-1 free)."""
    n = len(kind)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        k = kind[i]
        if k == LEAF:
            a = assignment[var[i]]
            out[i] = 1.0 if (a < 0 or a == val[i]) else 0.0
        elif k == PRODUCT:
            acc = 1.0
            for j in range(offsets[i], offsets[i + 1]):
                acc *= out[children[j]]
            out[i] = acc
        elif take_max[i]:
            best = 0.0
            for j in range(offsets[i], offsets[i + 1]):
                v = weights[j] * out[children[j]]
                if v > best:
                    best = v
            out[i] = best
        else:
            acc = 0.0
            for j in range(offsets[i], offsets[i + 1]):
                acc += weights[j] * out[children[j]]
            out[i] = acc
    return out
