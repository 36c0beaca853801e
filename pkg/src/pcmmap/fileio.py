"""Text formats for circuits and MMAP instances, plus instance generation.

Circuit format (one node per line, ids dense and topologically ordered)::

    pc <num_vars>
    l <id> <var> <value>
    p <id> <k> <child_0> ... <child_{k-1}>
    s <id> <k> <child_0> <w_0> ... <child_{k-1}> <w_{k-1}>
    r <id>

Instance format: lines ``q <var> ...`` and ``e <var>=<0|1> ...``. Both
formats allow ``#`` comments and blank lines.
"""
from __future__ import annotations

import math
import random
from pathlib import Path

from .circuit import Circuit, Leaf, MmapInstance, Node, Product, Sum
from .errors import ParseError


def loads_circuit(text: str) -> Circuit:
    nodes: list[Node] = []
    num_vars: int | None = None
    root: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        tag = tok[0]
        if tag == "pc":
            if num_vars is not None:
                raise ParseError("duplicate header line", lineno)
            if len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise ParseError("header must be 'pc <num_vars>'", lineno)
            num_vars = int(tok[1])
            continue
        if num_vars is None:
            raise ParseError("missing 'pc <num_vars>' header", lineno)
        if root is not None:
            raise ParseError("content after root declaration", lineno)
        if tag == "r":
            if len(tok) != 2:
                raise ParseError("root line must be 'r <id>'", lineno)
            rid = _parse_id(tok[1], lineno)
            if rid >= len(nodes):
                raise ParseError(f"root id {rid} not declared", lineno)
            root = rid
            continue
        if tag not in ("l", "p", "s"):
            raise ParseError(f"unknown node tag {tag!r}", lineno)
        nid = _parse_id(tok[1], lineno)
        if nid < len(nodes):
            raise ParseError(f"duplicate id {nid}", lineno)
        if nid > len(nodes):
            raise ParseError(f"id {nid} out of order (expected {len(nodes)})", lineno)
        if tag == "l":
            if len(tok) != 4:
                raise ParseError("leaf line must be 'l <id> <var> <value>'", lineno)
            var = _parse_id(tok[2], lineno)
            if var >= num_vars:
                raise ParseError(f"variable {var} out of range", lineno)
            if tok[3] not in ("0", "1"):
                raise ParseError("leaf value must be 0 or 1", lineno)
            nodes.append(Leaf(var, int(tok[3])))
        elif tag == "p":
            k = _parse_count(tok, 2, lineno)
            if len(tok) != 3 + k:
                raise ParseError(f"expected {k} children", lineno)
            children = tuple(_parse_child(c, nid, lineno) for c in tok[3:])
            nodes.append(Product(children))
        else:
            k = _parse_count(tok, 2, lineno)
            if len(tok) != 3 + 2 * k:
                raise ParseError(f"expected {k} child/weight pairs", lineno)
            children = tuple(_parse_child(tok[3 + 2 * i], nid, lineno) for i in range(k))
            weights = []
            for i in range(k):
                try:
                    w = float(tok[4 + 2 * i])
                except ValueError:
                    raise ParseError(f"bad weight {tok[4 + 2 * i]!r}", lineno) from None
                if not math.isfinite(w) or w <= 0.0:
                    raise ParseError(f"non-positive weight {w}", lineno)
                weights.append(w)
            nodes.append(Sum(children, tuple(weights)))
    if root is None:
        raise ParseError("missing root line")
    return Circuit(nodes, root, num_vars)


def _parse_id(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise ParseError(f"expected nonnegative integer, got {tok!r}", lineno)
    return int(tok)


def _parse_count(tok: list[str], pos: int, lineno: int) -> int:
    k = _parse_id(tok[pos], lineno)
    if k < 1:
        raise ParseError("inner node needs at least one child", lineno)
    return k


def _parse_child(tok: str, nid: int, lineno: int) -> int:
    c = _parse_id(tok, lineno)
    if c >= nid:
        raise ParseError(f"forward reference to node {c}", lineno)
    return c


def parse_circuit(path: str | Path) -> Circuit:
    return loads_circuit(Path(path).read_text())


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"pc {circuit.num_vars}"]
    for i, nd in enumerate(circuit.nodes):
        if isinstance(nd, Leaf):
            lines.append(f"l {i} {nd.var} {nd.value}")
        elif isinstance(nd, Product):
            lines.append(f"p {i} {len(nd.children)} " + " ".join(map(str, nd.children)))
        else:
            pairs = " ".join(f"{c} {w!r}" for c, w in zip(nd.children, nd.weights))
            lines.append(f"s {i} {len(nd.children)} {pairs}")
    lines.append(f"r {circuit.root}")
    return "\n".join(lines) + "\n"


def write_circuit(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(serialize_circuit(circuit))


def loads_instance(text: str) -> MmapInstance:
    query: list[int] = []
    evidence: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "q":
            for t in tok[1:]:
                v = _parse_id(t, lineno)
                if v in query:
                    raise ParseError(f"duplicate query variable {v}", lineno)
                query.append(v)
        elif tok[0] == "e":
            for t in tok[1:]:
                if "=" not in t:
                    raise ParseError(f"evidence literal {t!r} must be <var>=<0|1>", lineno)
                vs, xs = t.split("=", 1)
                v = _parse_id(vs, lineno)
                if xs not in ("0", "1"):
                    raise ParseError(f"evidence value must be 0 or 1, got {xs!r}", lineno)
                if v in evidence:
                    raise ParseError(f"duplicate evidence variable {v}", lineno)
                evidence[v] = int(xs)
        else:
            raise ParseError(f"unknown line tag {tok[0]!r}", lineno)
    if not query:
        raise ParseError("instance declares no query variables")
    overlap = set(query) & set(evidence)
    if overlap:
        raise ParseError(f"variables {sorted(overlap)} are both query and evidence")
    return MmapInstance(query=frozenset(query), evidence=evidence)


def parse_instance(path: str | Path) -> MmapInstance:
    return loads_instance(Path(path).read_text())


def serialize_instance(instance: MmapInstance) -> str:
    lines = ["q " + " ".join(map(str, sorted(instance.query)))]
    if instance.evidence:
        lines.append("e " + " ".join(f"{v}={x}" for v, x in sorted(instance.evidence.items())))
    return "\n".join(lines) + "\n"


def write_instance(instance: MmapInstance, path: str | Path) -> None:
    Path(path).write_text(serialize_instance(instance))


def sample_assignment(circuit: Circuit, rng: random.Random) -> dict[int, int]:
    """Draw a full assignment from the circuit's (normalized) distribution.

    Top-down: at sums a child is chosen proportionally to weight times child
    mass, at products all children are visited. Variables outside the
    circuit's scope are filled uniformly.
    """
    mass = circuit.node_values({})
    state: dict[int, int] = {}
    stack = [circuit.root]
    while stack:
        i = stack.pop()
        nd = circuit.nodes[i]
        if isinstance(nd, Leaf):
            state[nd.var] = nd.value
        elif isinstance(nd, Product):
            stack.extend(nd.children)
        else:
            cum = []
            total = 0.0
            for c, w in zip(nd.children, nd.weights):
                total += w * float(mass[c])
                cum.append(total)
            x = rng.random() * total
            chosen = nd.children[-1]
            for c, bound in zip(nd.children, cum):
                if x < bound:
                    chosen = c
                    break
            stack.append(chosen)
    for v in range(circuit.num_vars):
        if v not in state:
            state[v] = rng.getrandbits(1)
    return state


def generate_instance(
    circuit: Circuit, proportions: tuple[int, int, int], seed: int
) -> MmapInstance:
    """Partition the variables by the (query%, evidence%, hidden%) proportions
    and sample evidence values from the circuit so their probability is
    nonzero. Deterministic given the seed."""
    q_pct, e_pct, h_pct = proportions
    if q_pct + e_pct + h_pct != 100 or min(proportions) < 0:
        raise ParseError(f"proportions {proportions} must be nonnegative and sum to 100")
    rng = random.Random(seed)
    n = circuit.num_vars
    variables = list(range(n))
    rng.shuffle(variables)
    n_e = n * e_pct // 100
    n_h = n * h_pct // 100
    n_q = n - n_e - n_h  # query takes the rounding remainder
    if n_q < 1:
        raise ParseError("proportions leave no query variables")
    query = frozenset(variables[:n_q])
    evid_vars = variables[n_q : n_q + n_e]
    world = sample_assignment(circuit, rng)
    evidence = {v: world[v] for v in sorted(evid_vars)}
    return MmapInstance(query=query, evidence=evidence)
