"""Dense tensor-network contraction with slicing and cost accounting.

All indices have dimension 2. Contracting two tensors whose open index sets
are A and B costs ``2 ** len(A | B)`` multiply-adds; the same model drives
:func:`zxcontract.orderfinder.simulate_order`, so predicted and measured
costs agree exactly.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .circuit import Circuit, gate_matrix
from .zxgraph import SQRT2, ClosedGraphLike

_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2


class ContractionError(RuntimeError):
    pass


@dataclass
class Tensor:
    indices: list[int]
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.shape != (2,) * len(self.indices):
            raise ValueError(f"data shape {self.data.shape} does not match {len(self.indices)} indices")

    @property
    def rank(self) -> int:
        return len(set(self.indices))

    def copy(self) -> Tensor:
        return Tensor(list(self.indices), self.data.copy())


@dataclass
class Network:
    tensors: dict[int, Tensor] = field(default_factory=dict)
    scalar: complex = 1.0 + 0.0j

    def copy(self) -> Network:
        return Network({k: t.copy() for k, t in self.tensors.items()}, complex(self.scalar))

    def index_map(self) -> dict[int, list[int]]:
        """Index id -> ids of the tensors carrying it (a tensor appears twice for a self-loop)."""
        out: dict[int, list[int]] = {}
        for tid in sorted(self.tensors):
            for ix in self.tensors[tid].indices:
                out.setdefault(ix, []).append(tid)
        return out

    def check(self) -> None:
        for ix, holders in self.index_map().items():
            if len(holders) > 2:
                raise ContractionError(f"index {ix} appears on {len(holders)} tensor legs")

    def graph(self) -> nx.MultiGraph:
        """Structure as a multigraph: nodes = tensor ids, edge keys = index ids."""
        return structure_graph(self.structure())

    def structure(self) -> dict[int, list[int]]:
        return {tid: list(t.indices) for tid, t in self.tensors.items()}


@dataclass
class ContractionStats:
    cost: int = 0
    max_rank: int = 0
    steps: int = 0


# ---------------------------------------------------------------------------
# building networks


def _diagonal(rank: int, form) -> np.ndarray:
    t = np.zeros((2,) * rank, dtype=complex)
    t[(0,) * rank] = form[0]
    t[(1,) * rank] = form[1]
    return t


def hybrid_to_network(g: ClosedGraphLike) -> Network:
    """One diagonal tensor per node, one index per Hadamard edge.

    Edge ``(u, v)`` with ``u < v`` gets index id equal to its position in
    ``g.edges()``; the Hadamard matrix is absorbed into ``u``'s tensor.
    """
    edges = g.edges()
    incident: dict[int, list[int]] = {v: [] for v in g.nodes}
    lower: dict[int, list[int]] = {v: [] for v in g.nodes}
    for k, (u, v) in enumerate(edges):
        incident[u].append(k)
        incident[v].append(k)
        lower[u].append(k)
    net = Network(scalar=g.scalar)
    for v in g.nodes:
        idx = incident[v]
        data = _diagonal(len(idx), g.forms[v]) if idx else np.array(g.forms[v].sum())
        for k in lower[v]:
            ax = idx.index(k)
            data = np.moveaxis(np.tensordot(data, _HAD, axes=([ax], [0])), -1, ax)
        net.tensors[v] = Tensor(list(idx), data)
    return net


def hybrid_structure(g: ClosedGraphLike) -> dict[int, list[int]]:
    """Index structure of :func:`hybrid_to_network` without building any data."""
    out: dict[int, list[int]] = {v: [] for v in g.nodes}
    for k, (u, v) in enumerate(g.edges()):
        out[u].append(k)
        out[v].append(k)
    return out


def structure_graph(structure: dict[int, list[int]]) -> nx.MultiGraph:
    """Multigraph of a structure, same layout as :meth:`Network.graph`."""
    holders: dict[int, list[int]] = {}
    for tid in sorted(structure):
        for ix in structure[tid]:
            holders.setdefault(ix, []).append(tid)
    g = nx.MultiGraph()
    g.add_nodes_from(sorted(structure))
    for ix, hs in sorted(holders.items()):
        if len(hs) == 2:
            g.add_edge(hs[0], hs[1], key=ix)
    return g


def circuit_network(c: Circuit, x: str | None = None) -> Network:
    """Plain gate-by-gate network of ``<x|C|0>`` (the standard baseline).

    Tensor ids: 0..n-1 input states, then one per gate, then n output effects.
    Index ids are wire segments numbered in creation order.
    """
    n = c.num_qubits
    if x is None:
        x = "0" * n
    net = Network()
    nxt = [0]

    def fresh() -> int:
        nxt[0] += 1
        return nxt[0] - 1

    wire = []
    tid = 0
    for q in range(n):
        w = fresh()
        net.tensors[tid] = Tensor([w], np.array([1.0, 0.0]))
        wire.append(w)
        tid += 1
    for g in c.gates:
        k = len(g.qubits)
        outs = [fresh() for _ in g.qubits]
        ins = [wire[q] for q in g.qubits]
        data = gate_matrix(g).reshape((2,) * (2 * k))
        net.tensors[tid] = Tensor(outs + ins, data)
        for q, o in zip(g.qubits, outs):
            wire[q] = o
        tid += 1
    for q in range(n):
        bit = int(x[q])
        net.tensors[tid] = Tensor([wire[q]], np.array([1.0 - bit, float(bit)]))
        tid += 1
    return net


# ---------------------------------------------------------------------------
# contraction


def _trace_repeated(t: Tensor) -> Tensor:
    """Sum over indices that appear twice on the same tensor."""
    seen: dict[int, int] = {}
    for ax, ix in enumerate(t.indices):
        if ix in seen:
            data = np.trace(t.data, axis1=seen[ix], axis2=ax)
            idx = [j for a, j in enumerate(t.indices) if a not in (seen[ix], ax)]
            return _trace_repeated(Tensor(idx, data))
        seen[ix] = ax
    return t


def contract_pair(a: Tensor, b: Tensor) -> Tensor:
    shared = [ix for ix in a.indices if ix in b.indices]
    ax_a = [a.indices.index(ix) for ix in shared]
    ax_b = [b.indices.index(ix) for ix in shared]
    data = np.tensordot(a.data, b.data, axes=(ax_a, ax_b))
    idx = [ix for ix in a.indices if ix not in shared] + [ix for ix in b.indices if ix not in shared]
    return Tensor(idx, data)


def contract_edge(net: Network, edge: int, stats: ContractionStats | None = None) -> Network:
    """Merge the two tensors carrying ``edge`` (in place), summing every shared index.

    A self-edge (index twice on one tensor) is traced out.
    """
    holders = [tid for tid in sorted(net.tensors) if edge in net.tensors[tid].indices]
    if not holders:
        raise ContractionError(f"edge {edge} is not live")
    if len(holders) == 1:
        t = net.tensors[holders[0]]
        if t.indices.count(edge) != 2:
            raise ContractionError(f"edge {edge} is dangling")
        cost = 2 ** len(set(t.indices))
        new = _trace_repeated(t)
        keep = holders[0]
    else:
        ta, tb = net.tensors[holders[0]], net.tensors[holders[1]]
        cost = 2 ** len(set(ta.indices) | set(tb.indices))
        new = _trace_repeated(contract_pair(_trace_repeated(ta), _trace_repeated(tb)))
        keep = holders[0]
        del net.tensors[holders[1]]
    net.tensors[keep] = new
    if stats is not None:
        stats.cost += cost
        stats.max_rank = max(stats.max_rank, new.rank)
        stats.steps += 1
    return net


def fix_indices(net: Network, assignment: dict[int, int]) -> Network:
    """Copy of ``net`` with each index in ``assignment`` fixed to a value."""
    out = Network(scalar=net.scalar)
    for tid, t in net.tensors.items():
        data = t.data
        idx = list(t.indices)
        for ix, val in assignment.items():
            while ix in idx:
                ax = idx.index(ix)
                data = np.take(data, val, axis=ax)
                idx.pop(ax)
        out.tensors[tid] = Tensor(idx, np.array(data, copy=True))
    return out


def _run_order(net: Network, order, stats: ContractionStats) -> complex:
    live = set()
    for t in net.tensors.values():
        live.update(t.indices)
    for e in order:
        # edges already summed as part of a multi-edge collapse are skipped
        if e not in live:
            continue
        before = set()
        for tid in sorted(net.tensors):
            if e in net.tensors[tid].indices:
                before.update(net.tensors[tid].indices)
        contract_edge(net, e, stats)
        after = set()
        for t in net.tensors.values():
            if any(ix in before for ix in t.indices):
                after.update(t.indices)
        live -= before - after
    value = 1.0 + 0.0j
    for k in sorted(net.tensors):
        t = net.tensors[k]
        if t.indices:
            raise ContractionError(f"order leaves open indices {t.indices}")
        value *= complex(t.data)
    return value


def contract_all(net: Network, order, stats: ContractionStats | None = None) -> complex:
    """Full contraction of a copy of ``net`` in the given edge order."""
    stats = stats if stats is not None else ContractionStats()
    return net.scalar * _run_order(net.copy(), order, stats)


def _pairwise_sum(values: list[complex]) -> complex:
    while len(values) > 1:
        nxt = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0] if values else 0.0j


@dataclass
class ExecutionResult:
    amplitude: complex
    measured_cost: int
    max_rank: int
    subtasks: int


def execute_plan(net: Network, plan, workers: int = 1) -> ExecutionResult:
    """Run ``plan.order`` once per assignment of ``plan.slices`` and sum the results."""
    order = list(plan.order)
    slices = list(plan.slices)
    known = set(net.index_map())
    bad = [e for e in order if e not in known]
    if bad:
        raise ContractionError(f"plan mentions unknown edges {bad[:5]}")
    if set(slices) - known:
        raise ContractionError("plan slices unknown indices")
    if known - set(order):
        raise ContractionError("plan order misses some edges")

    assignments = list(itertools.product((0, 1), repeat=len(slices)))

    def subtask(bits) -> tuple[complex, ContractionStats]:
        st = ContractionStats()
        sub = fix_indices(net, dict(zip(slices, bits)))
        return _run_order(sub, order, st), st

    if workers > 1 and len(assignments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(subtask, assignments))
    else:
        results = [subtask(bits) for bits in assignments]
    total = _pairwise_sum([r for r, _ in results])
    return ExecutionResult(
        amplitude=net.scalar * total,
        measured_cost=sum(st.cost for _, st in results),
        max_rank=max((st.max_rank for _, st in results), default=0),
        subtasks=len(assignments),
    )


def log2_cost(cost: float) -> float:
    return math.log2(cost) if cost > 0 else 0.0
