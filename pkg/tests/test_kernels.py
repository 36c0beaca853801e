"""Backend parity: the compiled kernels must agree with the pure-Python ones."""
import numpy as np
import pytest

from pcmmap import _kernels_py, random_circuit

try:
    from pcmmap import _speedups
except ImportError:  # pragma: no cover - depends on the build
    _speedups = None

needs_compiled = pytest.mark.skipif(_speedups is None, reason="compiled extension not built")


def _args(circuit):
    f = circuit.flat()
    return (f.kind, f.var, f.val, f.offsets, f.children, f.weights)


@needs_compiled
class TestBackendParity:
    @pytest.mark.parametrize("seed", range(10))
    def test_eval_forward(self, seed):
        c = random_circuit(6, seed)
        rng = np.random.default_rng(seed)
        a = rng.integers(-1, 2, size=6).astype(np.int8)
        out_py = _kernels_py.eval_forward(*_args(c), a)
        out_cy = _speedups.eval_forward(*_args(c), a)
        np.testing.assert_allclose(np.asarray(out_cy), np.asarray(out_py), rtol=0, atol=0)

    @pytest.mark.parametrize("seed", range(10))
    def test_best_marginal(self, seed):
        c = random_circuit(6, seed)
        free = np.full(6, -1, dtype=np.int8)
        q = np.array([0, 2, 4], dtype=np.int32)
        v_py, code_py = _kernels_py.best_marginal(*_args(c), free, c.root, q)
        v_cy, code_cy = _speedups.best_marginal(*_args(c), free, c.root, q)
        assert float(v_cy) == float(v_py)
        assert int(code_cy) == int(code_py)

    @pytest.mark.parametrize("seed", range(10))
    def test_edge_maxima(self, seed):
        c = random_circuit(6, seed)
        free = np.full(6, -1, dtype=np.int8)
        q = np.array([1, 3], dtype=np.int32)
        b_py, s_py = _kernels_py.edge_maxima(*_args(c), free, c.root, q)
        b_cy, s_cy = _speedups.edge_maxima(*_args(c), free, c.root, q)
        np.testing.assert_array_equal(np.asarray(s_cy), np.asarray(s_py))
        np.testing.assert_allclose(np.asarray(b_cy), np.asarray(b_py), rtol=0, atol=0)

    @pytest.mark.parametrize("seed", range(10))
    def test_bound_forward(self, seed):
        c = random_circuit(6, seed)
        rng = np.random.default_rng(seed)
        a = rng.integers(-1, 2, size=6).astype(np.int8)
        flags = rng.integers(0, 2, size=c.num_nodes).astype(np.int8)
        out_py = _kernels_py.bound_forward(*_args(c), a, flags)
        out_cy = _speedups.bound_forward(*_args(c), a, flags)
        np.testing.assert_allclose(np.asarray(out_cy), np.asarray(out_py), rtol=0, atol=0)


def test_backend_reports_name():
    from pcmmap import kernels

    assert kernels.BACKEND in ("cython", "python")


def test_eval_forward_leaf_semantics(f1):
    # unassigned variables marginalize leaves to 1
    f = f1.flat()
    a = np.array([1, -1], dtype=np.int8)
    out = _kernels_py.eval_forward(f.kind, f.var, f.val, f.offsets, f.children, f.weights, a)
    assert out[0] == 1.0 and out[1] == 0.0  # [X0=1], [X0=0]
    assert out[2] == 1.0 and out[3] == 1.0  # X1 free
    assert out[f1.root] == pytest.approx(0.6)
