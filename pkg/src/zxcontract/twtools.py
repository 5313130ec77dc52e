"""Line graphs, tree decompositions, order extraction and pre-contraction.

Network graphs are ``networkx.MultiGraph`` objects whose edge keys are
globally unique integer edge ids (the tensor-network index ids); line-graph
vertices are those edge ids.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import networkx as nx

# ---------------------------------------------------------------------------
# line graphs


@dataclass
class LineGraphMap:
    """Line-graph vertex (= edge id) -> endpoints of that edge in the network."""

    endpoints: dict[int, tuple] = field(default_factory=dict)

    def edge(self, vertex: int) -> tuple:
        return self.endpoints[vertex]


def line_graph(g: nx.MultiGraph) -> tuple[nx.Graph, LineGraphMap]:
    """Line graph whose vertices are the edge keys of ``g``.

    Parallel edges become distinct vertices, mutually adjacent.
    """
    lg = nx.Graph()
    m = LineGraphMap()
    incident: dict = {v: [] for v in g.nodes}
    for u, v, k in g.edges(keys=True):
        lg.add_node(k)
        m.endpoints[k] = (u, v)
        incident[u].append(k)
        if v != u:
            incident[v].append(k)
    for ks in incident.values():
        ks = sorted(ks)
        for i, a in enumerate(ks):
            for b in ks[i + 1 :]:
                lg.add_edge(a, b)
    return lg, m


def as_multigraph(g) -> nx.MultiGraph:
    """Accept a MultiGraph, a simple Graph, or anything with ``to_multigraph``."""
    if hasattr(g, "to_multigraph"):
        return g.to_multigraph()
    if isinstance(g, nx.MultiGraph):
        return g
    mg = nx.MultiGraph()
    mg.add_nodes_from(g.nodes)
    for k, (u, v) in enumerate(sorted(tuple(sorted(e)) for e in g.edges)):
        mg.add_edge(u, v, key=k)
    return mg


# ---------------------------------------------------------------------------
# tree decompositions


@dataclass
class TreeDecomposition:
    bags: dict[int, frozenset] = field(default_factory=dict)
    parent: dict[int, int | None] = field(default_factory=dict)

    @property
    def width(self) -> int:
        if not self.bags:
            return 0
        return max(0, max(len(b) for b in self.bags.values()) - 1)

    def tree(self) -> nx.Graph:
        t = nx.Graph()
        t.add_nodes_from(self.bags)
        t.add_edges_from((a, p) for a, p in self.parent.items() if p is not None)
        return t

    def validate(self, g: nx.Graph) -> None:
        """Raise ``ValueError`` unless this is a tree decomposition of ``g``."""
        t = self.tree()
        if self.bags and not nx.is_tree(t):
            raise ValueError("decomposition is not a tree")
        covered = set().union(*self.bags.values()) if self.bags else set()
        missing = set(g.nodes) - covered
        if missing:
            raise ValueError(f"vertices not covered: {sorted(missing)[:5]}")
        for a, b in g.edges:
            if a == b:
                continue
            if not any(a in bag and b in bag for bag in self.bags.values()):
                raise ValueError(f"edge {(a, b)} not covered")
        for v in covered:
            holding = [i for i, bag in self.bags.items() if v in bag]
            if not nx.is_connected(t.subgraph(holding)):
                raise ValueError(f"bags holding {v} are not connected")


def _fill_in(adj: dict, v) -> int:
    nbrs = list(adj[v])
    missing = 0
    for i, a in enumerate(nbrs):
        na = adj[a]
        for b in nbrs[i + 1 :]:
            if b not in na:
                missing += 1
    return missing


def _eliminate(adj: dict, v) -> None:
    nbrs = adj.pop(v)
    for a in nbrs:
        adj[a].discard(v)
        adj[a].update(nbrs - {a})


def min_fill_order(g: nx.Graph) -> list:
    """Greedy min-fill elimination order, ties broken by lowest vertex id."""
    adj = {v: set(g.adj[v]) - {v} for v in g.nodes}
    fill = {v: _fill_in(adj, v) for v in adj}
    order = []
    while adj:
        v = min(adj, key=lambda x: (fill[x], x))
        nbrs = adj[v]
        affected = set(nbrs)
        for a in nbrs:
            affected |= adj[a]
        _eliminate(adj, v)
        del fill[v]
        order.append(v)
        affected.discard(v)
        for a in affected:
            fill[a] = _fill_in(adj, a)
    return order


def order_width(g: nx.Graph, order: list) -> int:
    adj = {v: set(g.adj[v]) - {v} for v in g.nodes}
    width = 0
    for v in order:
        width = max(width, len(adj[v]))
        _eliminate(adj, v)
    return width


def decomposition_from_order(g: nx.Graph, order: list) -> TreeDecomposition:
    """Tree decomposition induced by an elimination order (one bag per vertex)."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.adj[v]) - {v} for v in g.nodes}
    td = TreeDecomposition()
    for i, v in enumerate(order):
        nbrs = adj[v]
        td.bags[i] = frozenset(nbrs | {v})
        later = [pos[a] for a in nbrs]
        td.parent[i] = min(later) if later else None
        _eliminate(adj, v)
    # join the roots of a forest into one tree
    roots = [i for i, p in td.parent.items() if p is None]
    for r in roots[:-1]:
        td.parent[r] = roots[-1]
    return td


def treewidth_min_fill(g: nx.Graph) -> TreeDecomposition:
    return decomposition_from_order(g, min_fill_order(g))


def _min_degree_bound(adj: dict) -> int:
    """Minor-min-width lower bound on the treewidth of the remaining graph."""
    h = {v: set(n) for v, n in adj.items()}
    heap = [(len(n), v) for v, n in h.items()]
    heapq.heapify(heap)
    lb = 0
    while len(h) > 1:
        d, v = heapq.heappop(heap)
        if v not in h or len(h[v]) != d:
            continue  # stale entry
        lb = max(lb, d)
        if d == 0:
            del h[v]
            continue
        # contract v into its lowest-degree neighbour
        u = min(h[v], key=lambda x: (len(h[x]), x))
        for w in h[v]:
            if w != u:
                h[w].discard(v)
                h[w].add(u)
                h[u].add(w)
                heapq.heappush(heap, (len(h[w]), w))
        h[u].discard(v)
        del h[v]
        heapq.heappush(heap, (len(h[u]), u))
    return lb


def _is_simplicial(adj: dict, v) -> bool:
    nbrs = list(adj[v])
    for i, a in enumerate(nbrs):
        na = adj[a]
        for b in nbrs[i + 1 :]:
            if b not in na:
                return False
    return True


class _Budget(Exception):
    pass


def treewidth_bb(
    g: nx.Graph,
    budget_ms: float | None = None,
    max_expansions: int | None = None,
) -> TreeDecomposition:
    """Branch and bound over elimination orders, seeded with min-fill.

    Anytime search: returns the best decomposition found before the time
    budget (``budget_ms``) or the expansion budget (``max_expansions``) runs
    out; both ``None`` means search to optimality. Expansion budgets keep the
    result deterministic.
    """
    seed_order = min_fill_order(g)
    best = [order_width(g, seed_order), seed_order]
    if budget_ms == 0 or max_expansions == 0 or g.number_of_nodes() <= 1:
        return decomposition_from_order(g, best[1])
    deadline = None if budget_ms is None else time.perf_counter() + budget_ms / 1000.0
    expansions = [0]
    seen: dict[frozenset, int] = {}
    root_adj = {v: set(g.adj[v]) - {v} for v in g.nodes}
    if best[0] <= _min_degree_bound(root_adj):
        return decomposition_from_order(g, best[1])

    def search(adj: dict, eliminated: frozenset, prefix: list, cost: int) -> None:
        expansions[0] += 1
        if max_expansions is not None and expansions[0] > max_expansions:
            raise _Budget
        if deadline is not None and time.perf_counter() > deadline:
            raise _Budget
        # the remaining graph can always be finished at width len(adj) - 1
        if len(adj) - 1 <= cost or len(adj) <= 1:
            if max(cost, len(adj) - 1) < best[0]:
                best[0] = max(cost, len(adj) - 1, 0)
                best[1] = prefix + sorted(adj)
            return
        lb = max(cost, _min_degree_bound(adj))
        if lb >= best[0]:
            return
        prev = seen.get(eliminated)
        if prev is not None and prev <= cost:
            return
        seen[eliminated] = cost
        # a simplicial vertex of low degree can be eliminated first without loss
        for v in sorted(adj):
            if len(adj[v]) <= lb and _is_simplicial(adj, v):
                child = {a: set(n) for a, n in adj.items()}
                new_cost = max(cost, len(child[v]))
                _eliminate(child, v)
                search(child, eliminated | {v}, prefix + [v], new_cost)
                return
        cands = sorted(adj, key=lambda x: (_fill_in(adj, x), len(adj[x]), x))
        for v in cands:
            new_cost = max(cost, len(adj[v]))
            if new_cost >= best[0]:
                continue
            child = {a: set(n) for a, n in adj.items()}
            _eliminate(child, v)
            search(child, eliminated | {v}, prefix + [v], new_cost)

    try:
        search(root_adj, frozenset(), [], 0)
    except _Budget:
        pass
    return decomposition_from_order(g, best[1])


# ---------------------------------------------------------------------------
# decomposition -> contraction order


def td_to_order(t: TreeDecomposition, m: LineGraphMap | None = None) -> list[int]:
    """Leaf-pruning extraction of an edge order from a line-graph decomposition.

    While the tree is nonempty, take its smallest leaf ``l``. If ``l`` is the
    last tree node, emit its bag (sorted). Otherwise, with ``p`` its neighbour:
    drop ``l`` when its bag is contained in ``p``'s, else emit the smallest
    vertex of ``bag(l) - bag(p)`` and delete it from every bag.
    """
    tree = t.tree()
    bags = {i: set(b) for i, b in t.bags.items()}
    if m is not None:
        known = set(m.endpoints)
        stray = set().union(*bags.values()) - known if bags else set()
        if stray:
            raise ValueError(f"decomposition mentions unknown edges {sorted(stray)[:5]}")
    if t.bags and not nx.is_tree(tree):
        raise ValueError("invalid decomposition: not a tree")
    out: list[int] = []
    emitted: set = set()
    while tree.number_of_nodes():
        if tree.number_of_nodes() == 1:
            (l,) = tree.nodes
            out.extend(sorted(bags[l] - emitted))
            tree.remove_node(l)
            continue
        l = min(v for v in tree.nodes if tree.degree(v) <= 1)
        if tree.degree(l) == 0:
            # isolated piece of a forest: treat as a final leaf
            out.extend(sorted(bags[l] - emitted))
            emitted.update(bags[l])
            tree.remove_node(l)
            continue
        (p,) = tree.neighbors(l)
        extra = bags[l] - bags[p]
        if not extra:
            tree.remove_node(l)
        else:
            e = min(extra)
            out.append(e)
            emitted.add(e)
            for b in bags.values():
                b.discard(e)
    if m is not None and len(out) != len(m.endpoints):
        missing = set(m.endpoints) - set(out)
        raise ValueError(f"invalid decomposition: edges never emitted {sorted(missing)[:5]}")
    return out


def order_for_network(g: nx.MultiGraph, budget_ms=None, max_expansions=None) -> tuple[list[int], int]:
    """Edge order and decomposition width for a whole network."""
    lg, m = line_graph(g)
    td = treewidth_bb(lg, budget_ms=budget_ms, max_expansions=max_expansions)
    return td_to_order(td, m), td.width


# ---------------------------------------------------------------------------
# pre-contraction


@dataclass
class Precontraction:
    graph: nx.MultiGraph
    merge_map: dict  # surviving node -> set of original nodes it absorbed
    contracted: list[int]  # edge ids consumed, in contraction order


def _merge(g: nx.MultiGraph, keep, gone, merge_map: dict, contracted: list) -> None:
    for u, v, k in sorted(g.edges(gone, keys=True), key=lambda e: e[2]):
        other = v if u == gone else u
        if other == keep:
            contracted.append(k)
        elif other == gone:
            contracted.append(k)  # self-loop on the merged node
        else:
            g.add_edge(keep, other, key=k)
    g.remove_node(gone)
    merge_map[keep] |= merge_map.pop(gone)


def _in_triangle(g: nx.MultiGraph, u, v) -> bool:
    nu = set(g.adj[u]) - {u, v}
    nv = set(g.adj[v]) - {u, v}
    return bool(nu & nv)


def precontract(g) -> Precontraction:
    """Collapse leaves into their neighbours, then contract non-triangle edges
    whose endpoints both have degree 2.

    Degrees count parallel edges. The input is not modified.
    """
    g = as_multigraph(g).copy()
    merge_map = {v: {v} for v in g.nodes}
    contracted: list[int] = []
    leaves = sorted(v for v in g.nodes if g.degree(v) == 1)
    while leaves:
        leaf = leaves.pop(0)
        if leaf not in g or g.degree(leaf) != 1:
            continue
        (parent,) = [w for w in g.adj[leaf]]
        _merge(g, parent, leaf, merge_map, contracted)
        if g.degree(parent) == 1:
            leaves.append(parent)
            leaves.sort()

    def eligible(u, v) -> bool:
        return (
            u != v
            and u in g
            and v in g
            and g.degree(u) == 2
            and g.degree(v) == 2
            and not _in_triangle(g, u, v)
        )

    # candidate edges live in a lazy heap; a merge only changes eligibility
    # of edges touching the merged node or its neighbours, which are re-pushed
    ends = {k: (u, v) for u, v, k in g.edges(keys=True)}
    heap = sorted(ends)
    while heap:
        k = heapq.heappop(heap)
        if k not in ends:
            continue
        u, v = ends[k]
        if not eligible(u, v):
            continue
        keep, gone = min(u, v), max(u, v)
        done = len(contracted)
        _merge(g, keep, gone, merge_map, contracted)
        for c in contracted[done:]:
            ends.pop(c, None)
        touched = {keep} | set(g.adj[keep])
        for a in touched:
            for x, y, kk in g.edges(a, keys=True):
                ends[kk] = (x, y)
                heapq.heappush(heap, kk)
    return Precontraction(g, merge_map, contracted)


def quick_tw(g, max_expansions: int = 64) -> int:
    """Treewidth proxy: pre-contract, take the line graph, budgeted branch and bound."""
    pre = precontract(g)
    lg, _ = line_graph(pre.graph)
    return treewidth_bb(lg, max_expansions=max_expansions).width
