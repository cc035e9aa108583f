"""Tests for disk graphs, squaring, independent sets and components."""

import io
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcenter_coresets.exceptions import KCenterUsageError
from kcenter_coresets.graph import (
    DiskGraph,
    Graph,
    VisitOrder,
    build_disk_graph,
    connected_components,
    disk_graph_from_matrix,
    dump_edge_list,
    is_independent_set,
    is_maximal_independent_set,
    maximal_independent_set,
    square,
)
from kcenter_coresets.metric import MetricSpace, WorkCounter


@st.composite
def graphs(draw, max_n=14, max_edges=30):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), max_size=max_edges)) if pairs else []
    return Graph.from_edges(n, edges)


def bfs_components(g: Graph) -> list:
    labels = [-1] * g.n
    next_label = 0
    for root in range(g.n):
        if labels[root] != -1:
            continue
        labels[root] = next_label
        frontier = [root]
        while frontier:
            v = frontier.pop()
            for w in g.neighbors(v).tolist():
                if labels[w] == -1:
                    labels[w] = next_label
                    frontier.append(w)
        next_label += 1
    return labels


def within_two_hops(g: Graph, v: int) -> set:
    reached = {v}
    for u in g.neighbors(v).tolist():
        reached.add(u)
        reached.update(g.neighbors(u).tolist())
    return reached


def test_disk_graph_ties_are_edges(collinear_space):
    g = build_disk_graph(collinear_space, 0.5)
    assert isinstance(g, DiskGraph)
    assert g.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert g.edge_rule == "<= radius"


def test_disk_graph_charges_n_squared(collinear_space):
    counter = WorkCounter()
    build_disk_graph(collinear_space, 1.0, counter)
    assert counter.evaluations == 25


def test_negative_threshold_raises(collinear_space):
    with pytest.raises(KCenterUsageError):
        build_disk_graph(collinear_space, -0.1)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.lists(st.floats(0, 10, allow_nan=False), min_size=2, max_size=2), min_size=1, max_size=30),
    st.floats(0, 5, allow_nan=False),
)
def test_disk_graph_is_exact(rows, threshold):
    space = MetricSpace.euclidean(rows)
    g = build_disk_graph(space, threshold)
    d = space.pairwise_matrix()
    for i in range(space.n):
        for j in range(space.n):
            if i != j:
                assert g.has_edge(i, j) == (d[i, j] <= threshold)
    assert g.edges() == disk_graph_from_matrix(d, threshold).edges()


def test_square_adds_two_hop_edges(collinear_space):
    g2 = square(build_disk_graph(collinear_space, 0.5))
    assert g2.edges() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]


def test_graph_canonicalizes_adjacency():
    g = Graph.from_edges(4, [(1, 0), (0, 1), (2, 2), (3, 1)])
    assert g.edges() == [(0, 1), (1, 3)]
    assert g.neighbors(1).tolist() == [0, 3]
    assert g.degree(2) == 0
    assert g.edge_count == 2
    with pytest.raises(KCenterUsageError):
        Graph.from_edges(2, [(0, 2)])


def test_mis_follows_visit_order():
    path = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert maximal_independent_set(path) == (0, 2, 4)
    order = VisitOrder(np.array([1, 3, 0, 2, 4]))
    assert maximal_independent_set(path, order) == (1, 3)


def test_mis_order_size_mismatch():
    with pytest.raises(KCenterUsageError):
        maximal_independent_set(Graph.from_edges(3, []), VisitOrder.index(4))


@settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(0, 1000))
def test_greedy_mis_is_maximal_independent(g, seed):
    members = maximal_independent_set(g, VisitOrder.seeded(g.n, seed))
    assert list(members) == sorted(members)
    assert is_independent_set(g, members)
    assert is_maximal_independent_set(g, members)


def test_certificate_rejects_non_maximal():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert not is_maximal_independent_set(path, [0])
    assert not is_maximal_independent_set(path, [0, 1])
    assert is_maximal_independent_set(path, [1])


def test_connected_components_numbered_by_lowest_vertex():
    g = Graph.from_edges(6, [(4, 5), (1, 3), (3, 0)])
    assert connected_components(g).tolist() == [0, 0, 1, 0, 2, 2]
    assert connected_components(Graph.from_edges(0, [])).size == 0


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_square_keeps_every_edge(g):
    g2 = square(g)
    assert set(g.edges()) <= set(g2.edges())
    for u, v in g2.edges():
        assert v in within_two_hops(g, u)


def test_square_of_five_cycle_is_complete():
    cycle = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert square(cycle).edges() == list(combinations(range(5), 2))


def test_complete_graph_mis_is_first_visited():
    k4 = Graph.from_edges(4, list(combinations(range(4), 2)))
    assert maximal_independent_set(k4) == (0,)
    assert maximal_independent_set(k4, VisitOrder(np.array([2, 0, 3, 1]))) == (2,)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=64, max_edges=120), st.integers(0, 1000))
def test_squared_graph_mis_is_a_two_hop_packing_and_cover(g, seed):
    members = maximal_independent_set(square(g), VisitOrder.seeded(g.n, seed))
    reach = {v: within_two_hops(g, v) for v in members}
    # No two members are adjacent or share a neighbor in g ...
    for u, v in combinations(members, 2):
        assert v not in reach[u]
        assert not g.has_edge(u, v)
    # ... and every vertex is within two hops of one.
    covered = set().union(*reach.values())
    assert covered == set(range(g.n))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=40, max_edges=60))
def test_connected_components_match_breadth_first_search(g):
    assert connected_components(g).tolist() == bfs_components(g)


def test_visit_orders():
    assert list(VisitOrder.index(3)) == [0, 1, 2]
    seeded = VisitOrder.seeded(10, 5)
    assert seeded.provenance == "seeded-random"
    assert list(seeded) == list(VisitOrder.seeded(10, 5))
    assert sorted(seeded) == list(range(10))
    with pytest.raises(KCenterUsageError):
        VisitOrder(np.array([0, 0, 1]))

    nested = VisitOrder.prioritized([3, 1], VisitOrder.index(5))
    assert list(nested) == [3, 1, 0, 2, 4]
    assert nested.provenance == "nested"


def test_farthest_first_order(collinear_space):
    order = VisitOrder.farthest_first(collinear_space)
    assert list(order) == [0, 4, 2, 1, 3]
    assert order.provenance == "farthest-first"


def test_dump_edge_list():
    stream = io.StringIO()
    text = dump_edge_list(Graph.from_edges(3, [(2, 0), (1, 2)]), stream)
    assert text == "0 2\n1 2\n"
    assert stream.getvalue() == text
