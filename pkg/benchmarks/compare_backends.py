#!/usr/bin/env python3
"""Compare the compiled evaluation kernels against the pure-Python fallback.

Times the forward marginal pass and the brute-force query enumeration on
random circuits of several sizes with each available backend and prints a
table with the compiled/python speedup.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from pcmmap import _kernels_py
from pcmmap.randcircuit import random_circuit

try:
    from pcmmap import _speedups
except ImportError:
    _speedups = None


def time_call(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16, 20])
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    backends = {"python": _kernels_py}
    if _speedups is not None:
        backends["compiled"] = _speedups
    else:
        print("note: compiled extension not built; timing python backend only\n")

    header = f"{'task':<10} {'vars':>4} {'nodes':>6} " + "".join(
        f"{name:>14}" for name in backends
    ) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        circuit = random_circuit(n, args.seed + n)
        f = circuit.flat()
        free = np.full(n, -1, dtype=np.int8)
        qvars = np.arange(min(max(2, n // 2), 12), dtype=np.int32)
        args_common = (f.kind, f.var, f.val, f.offsets, f.children, f.weights)
        for task, make, reps in (
            ("forward", lambda mod: lambda: mod.eval_forward(*args_common, free), args.repeats),
            (
                "enumerate",
                lambda mod: lambda: mod.best_marginal(*args_common, free, circuit.root, qvars),
                max(1, args.repeats // 20),
            ),
        ):
            times = {name: time_call(make(mod), reps) for name, mod in backends.items()}
            speedup = (
                f"{times['python'] / times['compiled']:9.1f}x" if "compiled" in times else "       n/a"
            )
            cells = "".join(f"{t * 1e6:>12.1f}us" for t in times.values())
            print(f"{task:<10} {n:>4} {circuit.num_nodes:>6} {cells}{speedup:>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
