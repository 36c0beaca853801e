# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels. Mirrors the API of ``_kernels_py``."""

import numpy as np

cdef int LEAF = 0
cdef int PRODUCT = 1
cdef int SUM = 2


cdef inline void _eval(const signed char[:] kind, const int[:] var,
                       const signed char[:] val, const long long[:] offsets,
                       const int[:] children, const double[:] weights,
                       const signed char[:] assignment, double[:] out) noexcept nogil:
    cdef Py_ssize_t i, j, n = kind.shape[0]
    cdef int k
    cdef signed char a
    cdef double acc
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


def eval_forward(signed char[:] kind, int[:] var, signed char[:] val,
                 long long[:] offsets, int[:] children, double[:] weights,
                 signed char[:] assignment):
    out_arr = np.empty(kind.shape[0], dtype=np.float64)
    cdef double[:] out = out_arr
    _eval(kind, var, val, offsets, children, weights, assignment, out)
    return out_arr


def best_marginal(signed char[:] kind, int[:] var, signed char[:] val,
                  long long[:] offsets, int[:] children, double[:] weights,
                  signed char[:] assignment, Py_ssize_t root, int[:] qvars):
    cdef Py_ssize_t k = qvars.shape[0]
    cdef Py_ssize_t code, j
    cdef double best = -1.0
    cdef Py_ssize_t best_code = 0
    cdef double value
    a_arr = np.array(assignment, dtype=np.int8, copy=True)
    out_arr = np.empty(kind.shape[0], dtype=np.float64)
    cdef signed char[:] a = a_arr
    cdef double[:] out = out_arr
    with nogil:
        for code in range(1 << k):
            for j in range(k):
                a[qvars[j]] = (code >> (k - 1 - j)) & 1
            _eval(kind, var, val, offsets, children, weights, a, out)
            value = out[root]
            if value > best:
                best = value
                best_code = code
    return best, best_code


def edge_maxima(signed char[:] kind, int[:] var, signed char[:] val,
                long long[:] offsets, int[:] children, double[:] weights,
                signed char[:] assignment, Py_ssize_t root, int[:] qvars):
    cdef Py_ssize_t k = qvars.shape[0]
    cdef Py_ssize_t n = kind.shape[0]
    cdef Py_ssize_t num_edges = children.shape[0]
    cdef Py_ssize_t code, i, j
    cdef int c
    cdef double root_val
    a_arr = np.array(assignment, dtype=np.int8, copy=True)
    out_arr = np.empty(n, dtype=np.float64)
    best_arr = np.zeros(num_edges, dtype=np.float64)
    seen_arr = np.zeros(num_edges, dtype=np.uint8)
    active_arr = np.zeros(n, dtype=np.uint8)
    cdef signed char[:] a = a_arr
    cdef double[:] out = out_arr
    cdef double[:] best = best_arr
    cdef unsigned char[:] seen = seen_arr
    cdef unsigned char[:] active = active_arr
    with nogil:
        for code in range(1 << k):
            for j in range(k):
                a[qvars[j]] = (code >> (k - 1 - j)) & 1
            _eval(kind, var, val, offsets, children, weights, a, out)
            root_val = out[root]
            if root_val <= 0.0:
                continue
            for i in range(n):
                active[i] = 0
            active[root] = 1
            for i in range(n - 1, -1, -1):
                if not active[i]:
                    continue
                for j in range(offsets[i], offsets[i + 1]):
                    c = children[j]
                    if out[c] > 0.0:
                        active[c] = 1
                        seen[j] = 1
                        if root_val > best[j]:
                            best[j] = root_val
    return best_arr, seen_arr.view(np.bool_)


def bound_forward(signed char[:] kind, int[:] var, signed char[:] val,
                  long long[:] offsets, int[:] children, double[:] weights,
                  signed char[:] assignment, signed char[:] take_max):
    """Feedforward bound pass: flagged sums take the weighted maximum."""
    out_arr = np.empty(kind.shape[0], dtype=np.float64)
    cdef double[:] out = out_arr
    cdef Py_ssize_t i, j, n = kind.shape[0]
    cdef int k
    cdef signed char a
    cdef double acc, v
    with nogil:
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
                acc = 0.0
                for j in range(offsets[i], offsets[i + 1]):
                    v = weights[j] * out[children[j]]
                    if v > acc:
                        acc = v
                out[i] = acc
            else:
                acc = 0.0
                for j in range(offsets[i], offsets[i + 1]):
                    acc += weights[j] * out[children[j]]
                out[i] = acc
    return out_arr
