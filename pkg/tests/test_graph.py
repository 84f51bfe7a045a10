import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from tesslab.graph import (
    Graph,
    GraphError,
    add_pendants,
    add_universal,
    canonical_graph6,
    complement,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    disjoint_union,
    edgeless_graph,
    euler_planarity,
    format_dimacs,
    graph6,
    induced_subgraph,
    is_chordal,
    join,
    line_graph,
    neighborhood,
    parse_dimacs,
    path_graph,
    perfect_elimination_order,
    petersen_graph,
    star_graph,
    total_graph,
    wheel_graph,
)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_family_sizes():
    assert (complete_graph(5).n, complete_graph(5).m) == (5, 10)
    assert cycle_graph(9).m == 9
    assert path_graph(4).m == 3
    assert star_graph(3).max_degree == 3
    assert complete_bipartite(3, 4).m == 12
    p = petersen_graph()
    assert (p.n, p.m) == (10, 15)
    assert all(p.degree(v) == 3 for v in range(10))
    assert wheel_graph(5).n == 6


def test_bad_edges_rejected():
    with pytest.raises(GraphError):
        Graph(3, ((0, 0),))
    with pytest.raises(GraphError):
        Graph(3, ((0, 3),))


def test_complement_of_c5_is_c5():
    assert nx.is_isomorphic(to_nx(complement(cycle_graph(5))), to_nx(cycle_graph(5)))


def test_join_and_universal():
    g, u = add_universal(cycle_graph(5))
    assert u == 5 and g.degree(u) == 5 and g.m == 10
    j = join(edgeless_graph(2), edgeless_graph(3))
    assert j.m == 6


def test_disjoint_union_and_pendants():
    g = disjoint_union(complete_graph(3), path_graph(2))
    assert (g.n, g.m) == (5, 4)
    h, leaves = add_pendants(complete_graph(2), 0, 3)
    assert leaves == [2, 3, 4] and h.degree(0) == 4


def test_induced_subgraph_mapping():
    sub, mapping = induced_subgraph(cycle_graph(6), [0, 1, 2, 4])
    assert mapping == [0, 1, 2, 4]
    assert sub.m == 2


@given(graphs(max_n=7))
def test_line_graph_matches_networkx(g):
    assert nx.is_isomorphic(to_nx(line_graph(g)), nx.line_graph(to_nx(g)))


@given(graphs(max_n=7))
def test_total_graph_matches_networkx(g):
    tmap = total_graph(g)
    # oracle: the definition written out over V and E as networkx nodes
    ref = nx.Graph()
    ref.add_nodes_from(("v", v) for v in range(g.n))
    ref.add_nodes_from(("e", e) for e in g.edges)
    ref.add_edges_from((("v", u), ("v", v)) for u, v in g.edges)
    for e, f in itertools.combinations(g.edges, 2):
        if set(e) & set(f):
            ref.add_edge(("e", e), ("e", f))
    for e in g.edges:
        for end in e:
            ref.add_edge(("v", end), ("e", e))
    assert nx.is_isomorphic(to_nx(tmap.total), ref)
    for v, kv in enumerate(tmap.kv_cliques):
        assert tmap.total.is_clique(kv)
        assert len(kv) == g.degree(v) + 1


def test_total_graph_of_k2_is_triangle():
    tmap = total_graph(complete_graph(2))
    assert tmap.total.m == 3 and tmap.edge_image[(0, 1)] == 2


@given(graphs(max_n=7))
def test_dimacs_round_trip(g):
    assert parse_dimacs(format_dimacs(g, "c")) == g


def test_dimacs_errors():
    with pytest.raises(GraphError):
        parse_dimacs("e 1 2\n")
    with pytest.raises(GraphError):
        parse_dimacs("p edge 2 1\nx 1 2\n")


def test_graph6_matches_networkx():
    g = petersen_graph()
    expected = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert graph6(g) == expected


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Graph(g.n, tuple((perm[u], perm[v]) for u, v in g.edges))
    assert canonical_graph6(g) == canonical_graph6(h)


def test_canonical_form_separates_all_six_vertex_graphs():
    atlas = [a for a in nx.graph_atlas_g() if a.number_of_nodes() == 6]
    keys = {canonical_graph6(Graph(6, tuple(a.edges()))) for a in atlas}
    assert len(keys) == len(atlas) == 156


@given(graphs(max_n=8))
def test_chordality_matches_networkx(g):
    assert is_chordal(g) == nx.is_chordal(to_nx(g))
    order = perfect_elimination_order(g)
    if order is not None:
        assert sorted(order) == list(range(g.n))


def test_euler_condition():
    assert euler_planarity(complete_graph(4)) == "possibly planar"
    assert euler_planarity(complete_graph(6)) == "not planar"


def test_neighbourhood_examples():
    sub, _ = induced_subgraph(complete_graph(4), neighborhood(complete_graph(4), 0))
    assert sub == complete_graph(3)
    sub, _ = induced_subgraph(cycle_graph(5), neighborhood(cycle_graph(5), 0))
    assert (sub.n, sub.m) == (2, 0)
    wheel, u = add_universal(cycle_graph(5))
    sub, _ = induced_subgraph(wheel, neighborhood(wheel, u))
    assert nx.is_isomorphic(to_nx(sub), to_nx(cycle_graph(5)))


def test_small_transformations():
    assert complement(complete_graph(3)).m == 0
    assert complement(edgeless_graph(4)) == complete_graph(4)
    assert line_graph(path_graph(3)).m == 1
    assert line_graph(star_graph(3)).m == 3
    tot = total_graph(path_graph(3))
    assert (tot.total.n, tot.total.m) == (5, 7)
    assert set(tot.vertex_image).isdisjoint(tot.edge_image.values())
    assert disjoint_union(cycle_graph(5), complete_graph(4)).m == 11
