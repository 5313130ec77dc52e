"""Local complementation, pivoting and splitting keep the diagram's value."""

import numpy as np

from zxcontract import eval_hybrid, execute_plan, find_order, hybrid_to_network, local_complement, pivot, split_high_degree
from zxcontract.zxgraph import ClosedGraphLike

rng = np.random.default_rng(1)
edges = [(a, b) for a in range(8) for b in range(a + 1, 8) if rng.random() < 0.5]
forms = {v: np.array([1.0, np.exp(1j * rng.uniform(0, 2 * np.pi))]) for v in range(8)}
g = ClosedGraphLike.from_edges(range(8), edges, forms)
print("edges", g.num_edges(), "value", eval_hybrid(g))

h = local_complement(g, 0)
print("after LC(0): edges", h.num_edges(), "value", eval_hybrid(h))

u, v = g.edges()[0]
h = pivot(g, u, v)
print(f"after pivot({u},{v}): edges", h.num_edges(), "value", eval_hybrid(h))

# too many nodes for brute force after splitting, so contract it as a network
h = split_high_degree(g)
net = hybrid_to_network(h)
print("after splitting: nodes", len(h.nodes), "max degree", max(h.degree(w) for w in h.nodes),
      "value", execute_plan(net, find_order(net)).amplitude)
