"""ZX-diagrams, graph-like rewriting and the closed hybrid representation.

Two containers live here:

- :class:`ZxDiagram`, an open or closed diagram of Z/X spiders joined by
  plain or Hadamard wires, with an explicit global scalar.
- :class:`ClosedGraphLike`, a simple graph whose edges are all Hadamard
  edges and whose nodes each carry a two-component linear form. Its value is

      scalar * sum_s prod_v form[v][s_v] * prod_{uv} (-1)^(s_u s_v) / sqrt(2)

Conventions (all tensors are read with every leg as an index in {0, 1}):

- Z-spider(a) on n legs: 1 if all legs are 0, e^{ia} if all legs are 1.
- X-spider(a) on n legs: 2^{-n/2} (1 + e^{ia} (-1)^{sum of legs}).
- Hadamard box: (-1)^{ab} / sqrt(2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)
ORACLE_LIMIT = 22


def normalize_phase(phase: float) -> float:
    p = math.fmod(phase, TWO_PI)
    if p < 0:
        p += TWO_PI
    if abs(p - TWO_PI) < 1e-12:
        p = 0.0
    return p


def is_zero_phase(phase: float, tol: float = 1e-12) -> bool:
    p = normalize_phase(phase)
    return p < tol or TWO_PI - p < tol


@dataclass
class Spider:
    kind: str  # "Z" or "X"
    phase: float = 0.0


@dataclass
class Wire:
    a: int
    b: int
    hadamard: bool = False

    def other(self, v: int) -> int:
        return self.b if self.a == v else self.a


@dataclass
class ZxDiagram:
    """A ZX-diagram with a tracked global scalar.

    ``boundary`` is an ordered list of ports; each port is ``(node, hadamard)``
    where ``hadamard`` marks a Hadamard box on the dangling leg.
    """

    spiders: dict[int, Spider] = field(default_factory=dict)
    wires: list[Wire] = field(default_factory=list)
    boundary: list[tuple[int, bool]] = field(default_factory=list)
    scalar: complex = 1.0 + 0.0j
    next_id: int = 0

    def add_spider(self, kind: str, phase: float = 0.0) -> int:
        if kind not in ("Z", "X"):
            raise ValueError(f"unknown spider kind {kind!r}")
        v = self.next_id
        self.next_id += 1
        self.spiders[v] = Spider(kind, normalize_phase(phase))
        return v

    def add_wire(self, a: int, b: int, hadamard: bool = False) -> None:
        if a not in self.spiders or b not in self.spiders:
            raise KeyError(f"wire endpoint not a live spider: ({a}, {b})")
        self.wires.append(Wire(a, b, hadamard))

    def add_boundary(self, node: int, hadamard: bool = False) -> None:
        if node not in self.spiders:
            raise KeyError(f"boundary node {node} is not a live spider")
        self.boundary.append((node, hadamard))

    def copy(self) -> ZxDiagram:
        return ZxDiagram(
            {v: Spider(s.kind, s.phase) for v, s in self.spiders.items()},
            [Wire(w.a, w.b, w.hadamard) for w in self.wires],
            list(self.boundary),
            complex(self.scalar),
            self.next_id,
        )

    def is_closed(self) -> bool:
        return not self.boundary

    def is_graph_like(self) -> bool:
        if any(s.kind != "Z" for s in self.spiders.values()):
            return False
        seen = set()
        for w in self.wires:
            if not w.hadamard or w.a == w.b:
                return False
            key = (min(w.a, w.b), max(w.a, w.b))
            if key in seen:
                return False
            seen.add(key)
        return True

    def check(self) -> None:
        for w in self.wires:
            if w.a not in self.spiders or w.b not in self.spiders:
                raise ValueError(f"dangling wire {w}")
        for node, _ in self.boundary:
            if node not in self.spiders:
                raise ValueError(f"dangling boundary node {node}")

    def stats(self) -> dict[str, int]:
        deg = {v: 0 for v in self.spiders}
        for w in self.wires:
            deg[w.a] += 1
            deg[w.b] += 1
        return {
            "nodes": len(self.spiders),
            "edges": len(self.wires),
            "max_degree": max(deg.values(), default=0),
        }


# ---------------------------------------------------------------------------
# graph-like conversion


def _toggle_colors(d: ZxDiagram) -> None:
    xs = {v for v, s in d.spiders.items() if s.kind == "X"}
    if not xs:
        return
    for w in d.wires:
        # a self-loop on an X-spider receives two boxes, which cancel
        n = (w.a in xs) + (w.b in xs)
        if n % 2:
            w.hadamard = not w.hadamard
    d.boundary = [(v, h ^ (v in xs)) for v, h in d.boundary]
    for v in xs:
        d.spiders[v].kind = "Z"


def _fuse_plain(d: ZxDiagram) -> bool:
    parent = {v: v for v in d.spiders}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    changed = False
    for w in d.wires:
        if not w.hadamard and w.a != w.b:
            ra, rb = find(w.a), find(w.b)
            if ra != rb:
                # keep the smaller id as the representative
                if rb < ra:
                    ra, rb = rb, ra
                parent[rb] = ra
                changed = True
    has_plain_loop = any(not w.hadamard and w.a == w.b for w in d.wires)
    if not changed and not has_plain_loop:
        return False
    for v in list(d.spiders):
        r = find(v)
        if r != v:
            d.spiders[r].phase = normalize_phase(d.spiders[r].phase + d.spiders[v].phase)
            del d.spiders[v]
    new_wires = []
    for w in d.wires:
        a, b = find(w.a), find(w.b)
        if a == b and not w.hadamard:
            continue  # plain loop on a Z-spider contributes a factor 1
        new_wires.append(Wire(a, b, w.hadamard))
    d.wires = new_wires
    d.boundary = [(find(v), h) for v, h in d.boundary]
    return True


def _remove_hadamard_loops(d: ZxDiagram) -> bool:
    keep = []
    changed = False
    for w in d.wires:
        if w.hadamard and w.a == w.b:
            d.spiders[w.a].phase = normalize_phase(d.spiders[w.a].phase + math.pi)
            d.scalar /= SQRT2
            changed = True
        else:
            keep.append(w)
    d.wires = keep
    return changed


def _cancel_parallel(d: ZxDiagram) -> bool:
    counts: dict[tuple[int, int], int] = {}
    order = []
    others = []
    for w in d.wires:
        if w.hadamard and w.a != w.b:
            key = (min(w.a, w.b), max(w.a, w.b))
            if key not in counts:
                counts[key] = 0
                order.append(key)
            counts[key] += 1
        else:
            others.append(w)
    changed = False
    new_wires = others
    for key in order:
        k = counts[key]
        if k >= 2:
            changed = True
            d.scalar *= 0.5 ** (k // 2)
        if k % 2:
            new_wires.append(Wire(key[0], key[1], True))
    d.wires = new_wires
    return changed


def _remove_identities(d: ZxDiagram) -> bool:
    on_boundary = {v for v, _ in d.boundary}
    incident: dict[int, list[int]] = {v: [] for v in d.spiders}
    for i, w in enumerate(d.wires):
        incident[w.a].append(i)
        if w.b != w.a:
            incident[w.b].append(i)
    for v in sorted(d.spiders):
        sp = d.spiders[v]
        if v in on_boundary or not is_zero_phase(sp.phase):
            continue
        ws = incident[v]
        if len(ws) != 2:
            continue
        w1, w2 = d.wires[ws[0]], d.wires[ws[1]]
        if w1.a == w1.b or w2.a == w2.b:
            continue
        x, y = w1.other(v), w2.other(v)
        new = Wire(x, y, w1.hadamard ^ w2.hadamard)
        d.wires = [w for i, w in enumerate(d.wires) if i not in (ws[0], ws[1])]
        d.wires.append(new)
        del d.spiders[v]
        return True
    return False


def to_graph_like(d: ZxDiagram) -> ZxDiagram:
    """Rewrite ``d`` into an equal graph-like diagram.

    Colour toggling, Hadamard cancellation, spider fusion and identity
    removal are applied until a fixed point; parallel Hadamard edges and
    Hadamard self-loops are removed with their exact scalar effects. The
    input is left untouched.
    """
    d.check()
    g = d.copy()
    _toggle_colors(g)
    while True:
        changed = _fuse_plain(g)
        changed |= _remove_hadamard_loops(g)
        changed |= _cancel_parallel(g)
        if _remove_identities(g):
            changed = True
        if not changed:
            break
    return g


# ---------------------------------------------------------------------------
# closed hybrid representation


class ClosedGraphLike:
    """Closed graph-like diagram: simple graph + per-node linear forms + scalar."""

    def __init__(self, adj=None, forms=None, scalar: complex = 1.0, next_id: int | None = None):
        self.adj: dict[int, set[int]] = {v: set(n) for v, n in (adj or {}).items()}
        self.forms: dict[int, np.ndarray] = {
            v: np.asarray(f, dtype=complex).copy() for v, f in (forms or {}).items()
        }
        for v in self.adj:
            if v not in self.forms:
                self.forms[v] = np.ones(2, dtype=complex)
        for v in self.forms:
            self.adj.setdefault(v, set())
        self.scalar = complex(scalar)
        if next_id is None:
            next_id = max(self.adj, default=-1) + 1
        self.next_id = next_id

    @classmethod
    def from_edges(cls, nodes, edges, forms=None, scalar: complex = 1.0) -> ClosedGraphLike:
        adj = {v: set() for v in nodes}
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed in a graph-like diagram")
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj, forms, scalar)

    # -- basic graph access -------------------------------------------------

    @property
    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.adj for v in self.adj[u] if u < v)

    def num_edges(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> set[int]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def add_node(self, form=(1.0, 1.0)) -> int:
        v = self.next_id
        self.next_id += 1
        self.adj[v] = set()
        self.forms[v] = np.asarray(form, dtype=complex).copy()
        return v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed in a graph-like diagram")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].remove(v)
        self.adj[v].remove(u)

    def toggle_edge(self, u: int, v: int) -> None:
        if v in self.adj[u]:
            self.remove_edge(u, v)
        else:
            self.add_edge(u, v)

    def copy(self) -> ClosedGraphLike:
        return ClosedGraphLike(self.adj, self.forms, self.scalar, self.next_id)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.edges())
        return g

    def to_multigraph(self) -> nx.MultiGraph:
        """Structural network: one keyed edge per Hadamard edge, keys 0..E-1."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.nodes)
        for k, (u, v) in enumerate(self.edges()):
            g.add_edge(u, v, key=k)
        return g

    def stats(self) -> dict[str, int]:
        return {
            "nodes": len(self.adj),
            "edges": self.num_edges(),
            "max_degree": max((len(n) for n in self.adj.values()), default=0),
        }

    def check(self) -> None:
        for u, nbrs in self.adj.items():
            if u in nbrs:
                raise ValueError(f"self-loop at {u}")
            for v in nbrs:
                if u not in self.adj.get(v, ()):
                    raise ValueError(f"asymmetric adjacency {u}-{v}")
        if set(self.adj) != set(self.forms):
            raise ValueError("every node needs exactly one linear form")

    def same_as(self, other: ClosedGraphLike, tol: float = 1e-12) -> bool:
        if self.adj != other.adj:
            return False
        if abs(self.scalar - other.scalar) > tol * max(1.0, abs(self.scalar)):
            return False
        return all(np.allclose(self.forms[v], other.forms[v], atol=tol, rtol=0) for v in self.adj)

    def dump(self) -> str:
        """Deterministic text serialization used by golden tests."""

        def c(z: complex) -> str:
            return f"{z.real:.17g}{z.imag:+.17g}j"

        lines = [f"scalar {c(self.scalar)}", f"nodes {len(self.adj)}"]
        for v in self.nodes:
            f = self.forms[v]
            lines.append(f"node {v} {c(f[0])} {c(f[1])}")
        for u, v in self.edges():
            lines.append(f"edge {u} {v}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        s = self.stats()
        return f"ClosedGraphLike(nodes={s['nodes']}, edges={s['edges']}, scalar={self.scalar:.6g})"


def close_to_hybrid(d: ZxDiagram) -> ClosedGraphLike:
    """Move every spider phase into a linear form ``[1, e^{i phase}]``."""
    if d.boundary:
        raise ValueError("close_to_hybrid needs a closed diagram (no boundary ports)")
    if not d.is_graph_like():
        raise ValueError("close_to_hybrid needs a graph-like diagram")
    adj = {v: set() for v in d.spiders}
    for w in d.wires:
        adj[w.a].add(w.b)
        adj[w.b].add(w.a)
    forms = {v: np.array([1.0, cmath.exp(1j * s.phase)]) for v, s in d.spiders.items()}
    return ClosedGraphLike(adj, forms, d.scalar, d.next_id)


def eval_hybrid(g: ClosedGraphLike, limit: int = ORACLE_LIMIT) -> complex:
    """Brute-force value of a closed graph-like diagram (sum over all 2^V states)."""
    nodes = g.nodes
    n = len(nodes)
    if n > limit:
        raise ValueError(f"{n} nodes exceeds the brute-force limit of {limit}")
    if n == 0:
        return g.scalar
    pos = {v: i for i, v in enumerate(nodes)}
    edges = [(pos[u], pos[v]) for u, v in g.edges()]
    forms = np.array([g.forms[v] for v in nodes])
    chunk_bits = min(n, 16)
    low = np.arange(1 << chunk_bits, dtype=np.int64)
    total = 0.0 + 0.0j
    for high in range(1 << (n - chunk_bits)):
        idx = low | (high << chunk_bits)
        bits = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
        vals = np.ones(len(idx), dtype=complex)
        for i in range(n):
            vals *= forms[i][bits[:, i]]
        parity = np.zeros(len(idx), dtype=np.int8)
        for a, b in edges:
            parity ^= bits[:, a] & bits[:, b]
        total += np.sum(np.where(parity == 1, -vals, vals))
    return g.scalar * total / SQRT2 ** len(edges)
