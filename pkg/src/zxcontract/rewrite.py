"""Value-preserving rewrites of closed graph-like diagrams.

Every operation returns a new :class:`~zxcontract.zxgraph.ClosedGraphLike`;
the input is never modified. Linear forms are row vectors, so a local unitary
``U`` pulled out of the graph part acts as ``form <- form @ U``.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import numpy as np

from .zxgraph import SQRT2, ClosedGraphLike


def x_rotation(theta: float) -> np.ndarray:
    """exp(-i theta X / 2)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def z_rotation(theta: float) -> np.ndarray:
    """exp(-i theta Z / 2)."""
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


X_MINUS = x_rotation(-math.pi / 2)
Z_PLUS = z_rotation(math.pi / 2)


def lc_constant(degree: int) -> complex:
    """Phase picked up by a local complementation at a vertex of this degree.

    Calibrated against brute-force evaluation for degrees 0..8; the separate
    1/sqrt(2) per Hadamard edge is accounted for by the edge-count change.
    """
    return cmath.exp(1j * math.pi * (degree - 1) / 4)


@dataclass
class RewriteTrace:
    """Replayable log of rewrites: ``(kind, nodes)`` with kind LC/PIVOT/UNFUSE."""

    steps: list[tuple[str, tuple]] = field(default_factory=list)

    def record(self, kind: str, *nodes) -> None:
        self.steps.append((kind, tuple(nodes)))

    def replay(self, g: ClosedGraphLike) -> ClosedGraphLike:
        for kind, args in self.steps:
            if kind == "LC":
                g = local_complement(g, args[0])
            elif kind == "PIVOT":
                g = pivot(g, args[0], args[1])
            elif kind == "UNFUSE":
                g = unfuse(g, args[0], set(args[1]))
            else:
                raise ValueError(f"unknown rewrite kind {kind!r}")
        return g

    def to_rows(self) -> list[dict]:
        return [{"op": k, "nodes": [list(a) if isinstance(a, (set, frozenset, tuple, list)) else a for a in args]}
                for k, args in self.steps]


# ---------------------------------------------------------------------------
# local complementation and pivots


def _lc_inplace(g: ClosedGraphLike, u: int) -> None:
    nbrs = sorted(g.adj[u])
    e0 = g.num_edges()
    for a, b in combinations(nbrs, 2):
        g.toggle_edge(a, b)
    g.forms[u] = g.forms[u] @ X_MINUS
    for v in nbrs:
        g.forms[v] = g.forms[v] @ Z_PLUS
    g.scalar *= lc_constant(len(nbrs)) * SQRT2 ** (g.num_edges() - e0)


def local_complement(g: ClosedGraphLike, u: int, trace: RewriteTrace | None = None) -> ClosedGraphLike:
    """Complement the neighbourhood of ``u``, fixing forms and scalar."""
    if u not in g.adj:
        raise KeyError(f"unknown node {u}")
    h = g.copy()
    _lc_inplace(h, u)
    if trace is not None:
        trace.record("LC", u)
    return h


_PIVOT_U = X_MINUS @ Z_PLUS @ X_MINUS
_PIVOT_V = Z_PLUS @ X_MINUS @ Z_PLUS
_PIVOT_REST = Z_PLUS @ Z_PLUS


def _pivot_inplace(g: ClosedGraphLike, u: int, v: int) -> None:
    nu = g.adj[u] - {v}
    nv = g.adj[v] - {u}
    common = nu & nv
    only_u = nu - nv
    only_v = nv - nu
    e0 = g.num_edges()
    for s1, s2 in ((common, only_u), (common, only_v), (only_u, only_v)):
        for a in s1:
            for b in s2:
                g.toggle_edge(a, b)
    # u and v exchange neighbourhoods
    for w in only_u:
        g.remove_edge(u, w)
        g.add_edge(v, w)
    for w in only_v:
        g.remove_edge(v, w)
        g.add_edge(u, w)
    g.forms[u] = g.forms[u] @ _PIVOT_U
    g.forms[v] = g.forms[v] @ _PIVOT_V
    for w in common | only_u | only_v:
        g.forms[w] = g.forms[w] @ _PIVOT_REST
    a, b, c = len(common), len(only_u), len(only_v)
    phase = lc_constant(a + b + 1) * lc_constant(b + c + 1) * lc_constant(a + c + 1)
    g.scalar *= phase * SQRT2 ** (g.num_edges() - e0)


def pivot(g: ClosedGraphLike, u: int, v: int, trace: RewriteTrace | None = None) -> ClosedGraphLike:
    """Pivot along the edge ``uv``: equal to local complementations at u, v, u."""
    if not g.has_edge(u, v):
        raise ValueError(f"pivot needs an edge, ({u}, {v}) is not one")
    h = g.copy()
    _pivot_inplace(h, u, v)
    if trace is not None:
        trace.record("PIVOT", u, v)
    return h


# ---------------------------------------------------------------------------
# unfusion and splitting


def _unfuse_inplace(g: ClosedGraphLike, u: int, keep: set[int]) -> tuple[int, int]:
    moved = g.adj[u] - keep
    u1 = g.add_node((1.0, 1.0))  # takes the moved legs
    u2 = g.add_node((1.0, 1.0))  # mediator keeping every edge Hadamard
    for w in sorted(moved):
        g.remove_edge(u, w)
        g.add_edge(u1, w)
    g.add_edge(u, u2)
    g.add_edge(u2, u1)
    return u1, u2


def unfuse(
    g: ClosedGraphLike, u: int, keep: set[int], trace: RewriteTrace | None = None
) -> ClosedGraphLike:
    """Graph-like unfusion of ``u``: legs outside ``keep`` move to a fresh node.

    The chain u - u'' - u' carries trivial forms (1, 1); summing the mediator
    out gives exactly the copy constraint s_u = s_u', so the scalar is unchanged.
    """
    keep = set(keep)
    nbrs = g.adj[u]
    if not keep or not keep < nbrs:
        raise ValueError("keep must be a nonempty strict subset of the neighbourhood")
    h = g.copy()
    _unfuse_inplace(h, u, keep)
    if trace is not None:
        trace.record("UNFUSE", u, tuple(sorted(keep)))
    return h


def fundamental_cycles(g: ClosedGraphLike) -> list[frozenset[int]]:
    """Fundamental cycle basis from breadth-first spanning trees.

    Each component is rooted at its smallest node and explored with sorted
    neighbour order, so the basis is a deterministic function of the graph.
    """
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    cycles = []
    for root in g.nodes:
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = deque([root])
        order = []
        while queue:
            a = queue.popleft()
            order.append(a)
            for b in sorted(g.adj[a]):
                if b not in parent:
                    parent[b] = a
                    depth[b] = depth[a] + 1
                    queue.append(b)
        in_comp = set(order)
        for a in order:
            for b in sorted(g.adj[a]):
                if a < b and b in in_comp and parent[b] != a and parent[a] != b:
                    x, y = a, b
                    path = {x, y}
                    while x != y:
                        if depth[x] >= depth[y]:
                            x = parent[x]
                        else:
                            y = parent[y]
                        path.add(x)
                        path.add(y)
                    cycles.append(frozenset(path))
    return cycles


def matching_unfusion(g: ClosedGraphLike, u: int) -> list[tuple[int, int]]:
    """Pairs of neighbours of ``u`` worth keeping together when unfusing.

    Two neighbours are weighted by the number of fundamental cycles through
    ``u`` that contain both; a maximum-weight matching of that graph is
    returned as sorted pairs.
    """
    if g.degree(u) < 2:
        raise ValueError("matching_unfusion needs a node of degree >= 2")
    through_u = [c for c in fundamental_cycles(g) if u in c]
    nbrs = sorted(g.adj[u])
    h = nx.Graph()
    h.add_nodes_from(nbrs)
    for a, b in combinations(nbrs, 2):
        w = sum(1 for c in through_u if a in c and b in c)
        if w > 0:
            h.add_edge(a, b, weight=w)
    matching = nx.max_weight_matching(h)
    return sorted((min(a, b), max(a, b)) for a, b in matching)


def _unfusion_round(g: ClosedGraphLike, node: int, trace: RewriteTrace | None) -> None:
    pairs = matching_unfusion(g, node)
    if not pairs:
        nbrs = sorted(g.adj[node])
        pairs = [(nbrs[i], nbrs[i + 1]) for i in range(0, len(nbrs) - 1, 2)]
    for a, b in pairs:
        keep = g.adj[node] - {a, b}
        if not keep:
            break
        if trace is not None:
            trace.record("UNFUSE", node, tuple(sorted(keep)))
        _unfuse_inplace(g, node, keep)


def split_high_degree(
    g: ClosedGraphLike, max_degree: int = 3, trace: RewriteTrace | None = None
) -> ClosedGraphLike:
    """Unfuse every node of degree above ``max_degree`` until none is left."""
    if max_degree < 3:
        raise ValueError("max_degree must be at least 3")
    h = g.copy()
    while True:
        high = sorted(v for v in h.adj if len(h.adj[v]) > max_degree)
        if not high:
            return h
        _unfusion_round(h, high[0], trace)
