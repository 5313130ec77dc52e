import networkx as nx
import numpy as np
import pytest
from conftest import exact_treewidth, random_hybrid

from zxcontract import engine
from zxcontract.twtools import (
    TreeDecomposition,
    as_multigraph,
    line_graph,
    min_fill_order,
    order_for_network,
    precontract,
    quick_tw,
    td_to_order,
    treewidth_bb,
    treewidth_min_fill,
)


def _multi(edges, nodes=None):
    g = nx.MultiGraph()
    if nodes is not None:
        g.add_nodes_from(nodes)
    for k, (u, v) in enumerate(edges):
        g.add_edge(u, v, key=k)
    return g


def test_exact_oracle_sanity():
    assert exact_treewidth(nx.complete_graph(5)) == 4
    assert exact_treewidth(nx.path_graph(6)) == 1
    assert exact_treewidth(nx.cycle_graph(6)) == 2
    assert exact_treewidth(nx.grid_2d_graph(3, 3)) == 3


# -- line graphs ------------------------------------------------------------------


def test_line_graph_triangle():
    lg, _ = line_graph(_multi([(0, 1), (1, 2), (0, 2)]))
    assert nx.is_isomorphic(lg, nx.complete_graph(3))


def test_line_graph_star():
    lg, m = line_graph(_multi([(0, 1), (0, 2), (0, 3)]))
    assert nx.is_isomorphic(lg, nx.complete_graph(3))
    assert m.edge(1) == (0, 2)


def test_line_graph_path():
    lg, _ = line_graph(_multi([(0, 1), (1, 2), (2, 3)]))
    assert lg.number_of_nodes() == 3 and lg.number_of_edges() == 2


def test_line_graph_parallel_edges_adjacent():
    lg, _ = line_graph(_multi([(0, 1), (0, 1), (1, 2)]))
    assert lg.has_edge(0, 1) and lg.has_edge(0, 2) and lg.has_edge(1, 2)


def test_line_graph_adjacency_rule():
    g = as_multigraph(nx.gnp_random_graph(9, 0.4, seed=3))
    lg, m = line_graph(g)
    for a in lg.nodes:
        for b in lg.nodes:
            if a < b:
                share = bool(set(m.edge(a)) & set(m.edge(b)))
                assert lg.has_edge(a, b) == share


# -- decompositions -------------------------------------------------------------


def test_min_fill_tree_and_clique():
    assert treewidth_min_fill(nx.balanced_tree(2, 3)).width == 1
    assert treewidth_min_fill(nx.complete_graph(5)).width == 4


def test_min_fill_grid():
    w = treewidth_min_fill(nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3))).width
    assert 3 <= w <= 4


def test_min_fill_tie_break_lowest_id():
    assert min_fill_order(nx.path_graph(4))[0] == 0


def test_bb_k4_minus_edge():
    g = nx.complete_graph(4)
    g.remove_edge(0, 1)
    assert treewidth_bb(g).width == 2


def test_bb_zero_budget_is_min_fill():
    g = nx.gnp_random_graph(12, 0.4, seed=1)
    assert treewidth_bb(g, budget_ms=0).bags == treewidth_min_fill(g).bags


@pytest.mark.parametrize("seed", range(15))
def test_bb_never_worse_than_min_fill(seed):
    g = nx.gnp_random_graph(14, 0.3, seed=seed)
    assert treewidth_bb(g, max_expansions=200).width <= treewidth_min_fill(g).width


@pytest.mark.parametrize("seed", range(12))
def test_bb_exact_small(seed):
    g = nx.gnp_random_graph(8, 0.45, seed=seed)
    assert treewidth_bb(g).width == exact_treewidth(g)


@pytest.mark.parametrize("seed", range(10))
def test_decompositions_validate(seed):
    g = nx.gnp_random_graph(15, 0.25, seed=seed)
    treewidth_min_fill(g).validate(g)
    treewidth_bb(g, max_expansions=100).validate(g)


def test_validate_rejects_bad_decomposition():
    g = nx.path_graph(3)
    with pytest.raises(ValueError):
        TreeDecomposition({0: frozenset({0, 1}), 1: frozenset({2})}, {0: None, 1: 0}).validate(g)
    with pytest.raises(ValueError):
        TreeDecomposition({0: frozenset({0, 1}), 1: frozenset({1, 2}), 2: frozenset({0})},
                          {0: None, 1: 0, 2: 1}).validate(g)


def test_bb_deterministic():
    g = nx.gnp_random_graph(20, 0.3, seed=4)
    a = treewidth_bb(g, max_expansions=50)
    b = treewidth_bb(g, max_expansions=50)
    assert a.bags == b.bags


# -- order extraction --------------------------------------------------------------


def test_single_bag_order_sorted():
    assert td_to_order(TreeDecomposition({0: frozenset({5, 2, 9})}, {0: None})) == [2, 5, 9]


def test_td_to_order_is_permutation():
    for seed in range(10):
        g = as_multigraph(nx.gnp_random_graph(10, 0.4, seed=seed))
        if g.number_of_edges() == 0:
            continue
        lg, m = line_graph(g)
        order = td_to_order(treewidth_min_fill(lg), m)
        assert sorted(order) == sorted(k for _, _, k in g.edges(keys=True))


def test_td_to_order_rejects_unknown_edges():
    _, m = line_graph(_multi([(0, 1)]))
    with pytest.raises(ValueError):
        td_to_order(TreeDecomposition({0: frozenset({0, 7})}, {0: None}), m)


def test_markov_shi_on_path():
    rng = np.random.default_rng(0)
    h = random_hybrid(rng, 8, p=0.0)
    for v in range(7):
        h.add_edge(v, v + 1)
    net = engine.hybrid_to_network(h)
    order, width = order_for_network(net.graph())
    stats = engine.ContractionStats()
    engine.contract_all(net, order, stats)
    assert stats.max_rank <= width + 1


# -- pre-contraction -----------------------------------------------------------------


def test_precontract_path_collapses():
    pre = precontract(_multi([(0, 1), (1, 2), (2, 3), (3, 4)]))
    assert pre.graph.number_of_nodes() == 1
    assert sorted(pre.contracted) == [0, 1, 2, 3]
    assert list(pre.merge_map.values()) == [{0, 1, 2, 3, 4}]


def test_precontract_triangle_with_leaf():
    pre = precontract(_multi([(0, 1), (1, 2), (0, 2), (2, 3)]))
    assert pre.graph.number_of_nodes() == 3
    assert pre.graph.number_of_edges() == 3
    assert pre.contracted == [3]
    assert pre.merge_map[2] == {2, 3}


def test_precontract_cycle_keeps_triangle():
    pre = precontract(_multi([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]))
    assert pre.graph.number_of_nodes() == 3


def test_precontract_does_not_modify_input():
    g = _multi([(0, 1), (1, 2)])
    precontract(g)
    assert g.number_of_edges() == 2


def test_precontract_line_graph_width_nearly_preserved():
    deviations = 0
    for seed in range(60):
        g = as_multigraph(nx.gnp_random_graph(10, 0.25, seed=seed))
        if g.number_of_edges() < 2:
            continue
        pre = precontract(g)
        before = treewidth_min_fill(line_graph(g)[0]).width
        after = treewidth_min_fill(line_graph(pre.graph)[0]).width if pre.graph.number_of_edges() else 0
        assert abs(before - after) <= 1 or after <= before
        deviations += before != after
    assert deviations < 60


def test_precontract_preserves_value():
    rng = np.random.default_rng(8)
    from zxcontract.zxgraph import eval_hybrid

    for _ in range(30):
        h = random_hybrid(rng, 10, 0.25)
        net = engine.hybrid_to_network(h)
        pre = precontract(net.graph())
        rest, _ = order_for_network(pre.graph, max_expansions=64) if pre.graph.number_of_edges() else ([], 0)
        value = engine.contract_all(net, pre.contracted + rest)
        assert abs(value - eval_hybrid(h)) < 1e-10


# -- quick_tw --------------------------------------------------------------------------


def test_quick_tw_path_is_zero():
    assert quick_tw(_multi([(0, 1), (1, 2), (2, 3)])) == 0


def test_quick_tw_clique_vs_tree():
    assert quick_tw(nx.complete_graph(5)) >= quick_tw(nx.balanced_tree(2, 3))


def test_quick_tw_matches_manual_pipeline():
    g = as_multigraph(nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3)))
    pre = precontract(g)
    manual = treewidth_bb(line_graph(pre.graph)[0], max_expansions=64).width
    assert quick_tw(g) == manual
