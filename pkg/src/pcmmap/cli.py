"""Command-line interface.

Exit codes: 0 success, 2 solver timeout, 1 usage or parse errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bounds import lower_bound, output_bounds
from .circuit import MmapInstance, check_decomposable, check_smooth
from .errors import BudgetExceededError, CircuitError
from .fileio import generate_instance, parse_circuit, parse_instance, serialize_instance
from .oracle import DEFAULT_BUDGET, oracle_mmap
from .solver import HEURISTICS, SolverConfig, iter_solve
from .transform import condition

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors by default, which collides with
    # the timeout exit code; usage errors must exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _proportions(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("proportions must be three comma-separated integers")
    try:
        q, e, h = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("proportions must be integers") from None
    if q < 0 or e < 0 or h < 0 or q + e + h != 100:
        raise argparse.ArgumentTypeError("proportions must be nonnegative and sum to 100")
    return q, e, h


def _format_state(state: dict[int, int]) -> str:
    return " ".join(f"{v}={x}" for v, x in sorted(state.items()))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcmmap", description="Exact marginal MAP on probabilistic circuits")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="validate a circuit file and report its properties")
    p.add_argument("--circuit", required=True)

    p = sub.add_parser("solve", help="solve a marginal MAP instance exactly")
    p.add_argument("--circuit", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--heuristic", choices=HEURISTICS, default="ub")
    p.add_argument("--timeout", type=float, default=3600.0, help="seconds")
    p.add_argument("--trace", help="write per-iteration trace lines to this file")

    p = sub.add_parser("bound", help="print upper and lower bounds without solving")
    p.add_argument("--circuit", required=True)
    p.add_argument("--instance", required=True)

    p = sub.add_parser("oracle", help="brute-force enumeration over the query set")
    p.add_argument("--circuit", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("gen", help="generate solvable instances for a circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--proportions", type=_proportions, required=True, metavar="q,e,h")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="dir")

    p = sub.add_parser("bench", help="generate and solve instances over many circuits")
    p.add_argument("--circuits", required=True, metavar="dir")
    p.add_argument("--proportions", type=_proportions, nargs="+", required=True, metavar="q,e,h")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--timeout", type=float, default=3600.0)
    p.add_argument("--heuristic", choices=HEURISTICS, default="ub")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="also write per-instance results as CSV")
    return parser


def _cmd_check(args) -> int:
    circuit = parse_circuit(args.circuit)
    smooth, s_node = check_smooth(circuit)
    decomp, d_node = check_decomposable(circuit)
    print(f"nodes: {circuit.num_nodes}")
    print(f"edges: {circuit.num_edges}")
    print(f"variables: {circuit.num_vars}")
    print("smooth: " + ("yes" if smooth else f"no (sum node {s_node})"))
    print("decomposable: " + ("yes" if decomp else f"no (product node {d_node})"))
    return EXIT_OK


def _load(args) -> tuple:
    circuit = parse_circuit(args.circuit)
    instance = parse_instance(args.instance)
    instance.validate_for(circuit)
    return circuit, instance


def _cmd_solve(args) -> int:
    circuit, instance = _load(args)
    config = SolverConfig(heuristic=args.heuristic, timeout=args.timeout)
    report = iter_solve(circuit, instance, config)
    if args.trace:
        Path(args.trace).write_text("\n".join(report.trace_lines()) + "\n")
    print(f"status: {report.status}")
    print(f"value: {report.value!r}")
    print(f"state: {_format_state(report.state)}")
    print(f"iterations: {report.iterations}")
    return EXIT_TIMEOUT if report.status == "timeout" else EXIT_OK


def _cmd_bound(args) -> int:
    circuit, instance = _load(args)
    base = condition(circuit, instance.evidence)
    query = sorted(instance.query)
    upper = float(output_bounds(base, query)[base.root])
    lb = lower_bound(base, query)
    print(f"upper: {upper!r}")
    print(f"lower: {lb.value!r}")
    print(f"state: {_format_state(lb.state)}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    circuit, instance = _load(args)
    base = condition(circuit, instance.evidence)
    value, state = oracle_mmap(base, instance.query, budget=args.budget)
    print(f"value: {value!r}")
    print(f"state: {_format_state(state)}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    circuit = parse_circuit(args.circuit)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    q, e, h = args.proportions
    stem = Path(args.circuit).stem
    for k in range(args.count):
        instance: MmapInstance = generate_instance(circuit, args.proportions, args.seed + k)
        path = out / f"{stem}.{q}-{e}-{h}.{args.seed + k}.inst"
        path.write_text(serialize_instance(instance))
        print(path)
    return EXIT_OK


def _cmd_bench(args) -> int:
    from .bench import format_table, run_bench, to_csv

    paths = sorted(Path(args.circuits).glob("*.pc"))
    result = run_bench(
        paths,
        [tuple(p) for p in args.proportions],
        count=args.count,
        timeout=args.timeout,
        heuristic=args.heuristic,
        base_seed=args.seed,
        jobs=args.jobs,
        warn=lambda msg: print(f"warning: {msg}", file=sys.stderr),
    )
    print(format_table(result))
    if args.out:
        Path(args.out).write_text(to_csv(result))
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "solve": _cmd_solve,
    "bound": _cmd_bound,
    "oracle": _cmd_oracle,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CircuitError, BudgetExceededError, OSError) as exc:
        print(f"pcmmap: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
