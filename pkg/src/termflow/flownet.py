"""Dispersion exponent by max flow over the shared term DAG.

The output terms of a spec are hash-consed into a DAG (one node per input
variable, one per distinct application subterm).  Every DAG node is split
into an in/out pair joined by a unit-capacity edge; child wiring, and the
super-source's edges into the inputs, are effectively uncapacitated
(capacity r+1 exceeds any possible flow).  Each distinct output root gets a
unit edge to the super-sink, so duplicated outputs share one sink edge.

Unit capacity applies to input nodes too: a spec like (f(x), g(x)) funnels
both outputs through the single value of x and must get exponent 1, not 2.

The integral max-flow value D is the dispersion exponent: the image of the
spec's map is Theta(n^D) in the best interpretation, and at most n^D for
every n.  The min-cut witness is canonicalized as the saturated unit edges
on the boundary of the residual source side (reachable-side-first).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import PreconditionError
from .terms import DispersionSpec, Ident, Term, Var, render_term, term_vars


@dataclass(frozen=True)
class TermDag:
    """Shared term DAG: inputs first, then ops in first-encounter order."""

    inputs: tuple[Ident, ...]
    ops: tuple[tuple[Ident, tuple[int, ...]], ...]  # (symbol, child node ids)
    outputs: tuple[int, ...]  # root node id per output position
    labels: tuple[str, ...]  # per node id: variable name or rendered term

    @property
    def node_count(self) -> int:
        return len(self.inputs) + len(self.ops)


def build_dag(spec: DispersionSpec) -> TermDag:
    ids: dict[Term, int] = {}
    labels: list[str] = []
    ops: list[tuple[Ident, tuple[int, ...]]] = []
    for name in spec.inputs:
        ids[Var(name)] = len(labels)
        labels.append(name)

    def cons(t: Term) -> int:
        if t in ids:
            return ids[t]
        # inputs are pre-seeded, so t is an application here
        children = tuple(cons(a) for a in t.args)
        ids[t] = node = len(labels)
        labels.append(render_term(t))
        ops.append((t.symbol, children))
        return node

    outputs = tuple(cons(t) for t in spec.outputs)
    return TermDag(spec.inputs, tuple(ops), outputs, tuple(labels))


@dataclass(frozen=True)
class FlowNetwork:
    """Split-node unit-capacity network between super-source and sink."""

    node_count: int  # network nodes, including s and t
    source: int
    sink: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, capacity)
    bottleneck_ids: tuple[tuple[int, str], ...]  # edge index -> identifier
    inf: int


def build_network(dag: TermDag) -> FlowNetwork:
    k = len(dag.inputs)
    distinct_roots = list(dict.fromkeys(dag.outputs))
    inf = len(distinct_roots) + 1

    # node v -> (2+2v, 3+2v) as its (in, out) pair
    def n_in(v: int) -> int:
        return 2 + 2 * v

    def n_out(v: int) -> int:
        return 3 + 2 * v

    source, sink = 0, 1
    edges: list[tuple[int, int, int]] = []
    bottlenecks: list[tuple[int, str]] = []
    for v in range(dag.node_count):
        bottlenecks.append((len(edges), dag.labels[v]))
        edges.append((n_in(v), n_out(v), 1))
    for v in range(k):
        edges.append((source, n_in(v), inf))
    for op_idx, (_, children) in enumerate(dag.ops):
        v = k + op_idx
        for c in children:
            edges.append((n_out(c), n_in(v), inf))
    for root in distinct_roots:
        bottlenecks.append((len(edges), f"sink:{dag.labels[root]}"))
        edges.append((n_out(root), sink, 1))
    return FlowNetwork(2 + 2 * dag.node_count, source, sink, tuple(edges),
                       tuple(bottlenecks), inf)


@dataclass(frozen=True)
class ExponentResult:
    D: int
    max_flow_value: int
    min_cut: tuple[str, ...]  # sorted saturated-bottleneck identifiers


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(0)
        return idx

    def _levels(self, s: int, t: int):
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _push(self, u: int, t: int, limit: int, level, it) -> int:
        if u == t:
            return limit
        while it[u] < len(self.head[u]):
            e = self.head[u][it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                got = self._push(v, t, min(limit, self.cap[e]), level, it)
                if got:
                    self.cap[e] -= got
                    self.cap[e ^ 1] += got
                    return got
            it[u] += 1
        return 0

    def run(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                got = self._push(s, t, 1 << 60, level, it)
                if not got:
                    break
                flow += got

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def max_flow(network: FlowNetwork) -> ExponentResult:
    """Integral max flow plus the canonical min-cut witness."""
    dinic = _Dinic(network.node_count)
    edge_handles = [dinic.add(u, v, c) for u, v, c in network.edges]
    value = dinic.run(network.source, network.sink)
    reachable = dinic.residual_reachable(network.source)
    ident = dict(network.bottleneck_ids)
    cut = []
    for edge_idx, handle in enumerate(edge_handles):
        u, v, _ = network.edges[edge_idx]
        if u in reachable and v not in reachable:
            # a crossing edge of the canonical cut is always saturated
            assert dinic.cap[handle] == 0
            cut.append(ident[edge_idx])
    if len(cut) != value:
        raise AssertionError("min cut does not match flow value")
    return ExponentResult(D=value, max_flow_value=value,
                          min_cut=tuple(sorted(cut)))


def dispersion_exponent(spec: DispersionSpec) -> ExponentResult:
    """The integer D with dispersion Theta(n^D), via min cut.

    0 <= D <= min(k, r), and n^D upper-bounds the dispersion for every n,
    not just asymptotically.
    """
    return max_flow(build_network(build_dag(spec)))


def cut_certificate(spec: DispersionSpec) -> dict:
    """JSON-ready certificate: every unit bottleneck with its saturation
    and cut membership."""
    network = build_network(build_dag(spec))
    dinic = _Dinic(network.node_count)
    handles = [dinic.add(u, v, c) for u, v, c in network.edges]
    value = dinic.run(network.source, network.sink)
    reachable = dinic.residual_reachable(network.source)
    rows = []
    for edge_idx, name in network.bottleneck_ids:
        u, v, cap = network.edges[edge_idx]
        rows.append({
            "id": name,
            "capacity": cap,
            "saturated": dinic.cap[handles[edge_idx]] == 0,
            "in_cut": u in reachable and v not in reachable,
        })
    return {
        "flow_value": value,
        "cut": sorted(r["id"] for r in rows if r["in_cut"]),
        "bottlenecks": rows,
    }


def network_dot(network: FlowNetwork) -> str:
    """Debug rendering of the split network with capacities."""
    names = {network.source: "s", network.sink: "t"}
    for edge_idx, name in network.bottleneck_ids:
        if name.startswith("sink:"):
            continue
        u, v, _ = network.edges[edge_idx]
        names[u] = f"{name}.in"
        names[v] = f"{name}.out"
    lines = ["digraph network {"]
    for u, v, c in network.edges:
        label = "inf" if c == network.inf else str(c)
        lines.append(f'  "{names[u]}" -> "{names[v]}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ThresholdDecision:
    answer: bool
    d: int
    exponent: ExponentResult


def decide_threshold(spec: DispersionSpec, d: int) -> ThresholdDecision:
    """Does dispersion eventually exceed every c*n^d?  Yes iff D >= d+1.

    Growth strictly between n^d and n^(d+1) is impossible: D is an integer,
    so either the exponent clears d+1 or dispersion stays <= n^d forever.
    """
    if d < 0:
        raise PreconditionError(f"threshold degree must be >= 0, got {d}")
    result = dispersion_exponent(spec)
    return ThresholdDecision(answer=result.D >= d + 1, d=d, exponent=result)


def decide_perfect_r1(spec: DispersionSpec) -> bool:
    """Single-output perfect dispersion: attainable iff the output term
    contains any variable occurrence (a projection-like table then maps
    onto the whole alphabet)."""
    if spec.r != 1:
        raise PreconditionError(
            f"perfect-dispersion decision is implemented for r=1 only, "
            f"got r={spec.r}")
    return next(term_vars(spec.outputs[0]), None) is not None
