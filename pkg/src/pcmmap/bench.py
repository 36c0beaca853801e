"""Benchmark harness: generate instances over circuits and solve them.

For every circuit x proportion configuration a fixed number of seeded
instances is generated and solved under a per-instance timeout; results are
reported per instance and aggregated (mean wall time over solved instances,
solved count), as a text table and as CSV.
"""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .circuit import Circuit
from .errors import CircuitError
from .fileio import generate_instance, parse_circuit
from .solver import SolverConfig, iter_solve


@dataclass
class InstanceResult:
    circuit: str
    proportions: tuple[int, int, int]
    seed: int
    status: str  # "solved" | "timeout"
    wall_time: float
    value: float
    iterations: int
    final_nodes: int
    final_edges: int


@dataclass
class BenchResult:
    records: list[InstanceResult]

    def aggregate(self) -> list[dict]:
        groups: dict[tuple[str, tuple[int, int, int]], list[InstanceResult]] = {}
        for r in self.records:
            groups.setdefault((r.circuit, r.proportions), []).append(r)
        out = []
        for (circ, props), rs in sorted(groups.items()):
            solved = [r for r in rs if r.status == "solved"]
            out.append(
                {
                    "circuit": circ,
                    "proportions": props,
                    "instances": len(rs),
                    "solved": len(solved),
                    "mean_time": sum(r.wall_time for r in solved) / len(solved) if solved else float("nan"),
                }
            )
        return out


def _solve_one(
    path: str, proportions: tuple[int, int, int], seed: int, timeout: float, heuristic: str
) -> InstanceResult:
    circuit = parse_circuit(path)
    instance = generate_instance(circuit, proportions, seed)
    config = SolverConfig(heuristic=heuristic, timeout=timeout)
    start = time.perf_counter()
    report = iter_solve(circuit, instance, config)
    wall = time.perf_counter() - start
    final = report.records[-1]
    return InstanceResult(
        circuit=Path(path).name,
        proportions=proportions,
        seed=seed,
        status=report.status,
        wall_time=wall,
        value=report.value,
        iterations=report.iterations,
        final_nodes=final.num_nodes,
        final_edges=final.num_edges,
    )


def run_bench(
    circuit_paths: list[str | Path],
    proportion_list: list[tuple[int, int, int]],
    count: int = 10,
    timeout: float = 3600.0,
    heuristic: str = "ub",
    base_seed: int = 0,
    jobs: int = 1,
    warn=None,
) -> BenchResult:
    """Solve ``count`` seeded instances per circuit x proportion configuration.

    Unreadable circuit files are skipped (reported through ``warn``); with
    ``jobs`` > 1 instances run on a process pool."""
    tasks = []
    for path in circuit_paths:
        try:
            parse_circuit(path)
        except (OSError, CircuitError) as exc:
            if warn is not None:
                warn(f"skipping {path}: {exc}")
            continue
        for props in proportion_list:
            for k in range(count):
                tasks.append((str(path), props, base_seed + k, timeout, heuristic))
    if jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_solve_one, *zip(*tasks)))
    else:
        records = [_solve_one(*t) for t in tasks]
    return BenchResult(records=records)


def format_table(result: BenchResult) -> str:
    header = f"{'circuit':<24} {'q,e,h':<10} {'solved':>8} {'mean time (s)':>14}"
    lines = [header, "-" * len(header)]
    for row in result.aggregate():
        props = ",".join(map(str, row["proportions"]))
        mean = f"{row['mean_time']:.4f}" if row["solved"] else "-"
        lines.append(
            f"{row['circuit']:<24} {props:<10} {row['solved']:>4}/{row['instances']:<3} {mean:>14}"
        )
    return "\n".join(lines)


def to_csv(result: BenchResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(
        ["circuit", "q", "e", "h", "seed", "status", "wall_time", "value", "iterations", "final_nodes", "final_edges"]
    )
    for r in result.records:
        w.writerow(
            [
                r.circuit,
                r.proportions[0],
                r.proportions[1],
                r.proportions[2],
                r.seed,
                r.status,
                f"{r.wall_time:.6f}",
                f"{r.value:.12g}",
                r.iterations,
                r.final_nodes,
                r.final_edges,
            ]
        )
    return buf.getvalue()
