"""Treewidth heuristics on the line graph of a circuit network."""

from zxcontract import circuit_network, random_grid_circuit
from zxcontract.twtools import line_graph, precontract, quick_tw, treewidth_bb, treewidth_min_fill

net = circuit_network(random_grid_circuit(3, 3, 5, seed=0))
g = net.graph()
pre = precontract(g)
print(f"network {g.number_of_nodes()} nodes / {g.number_of_edges()} edges, "
      f"after pre-contraction {pre.graph.number_of_nodes()} / {pre.graph.number_of_edges()}")
lg, _ = line_graph(pre.graph)
print("min-fill width", treewidth_min_fill(lg).width)
print("branch and bound width (2000 expansions)", treewidth_bb(lg, max_expansions=2000).width)
print("quick_tw", quick_tw(g))
