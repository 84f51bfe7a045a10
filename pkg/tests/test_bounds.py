import itertools

import pytest
from hypothesis import given

from conftest import graphs
from tesslab.bounds import (
    SizeLimitError,
    bounds_report,
    chromatic_index,
    chromatic_number,
    clique_number,
    independence_number,
    is_proper_coloring,
    k_coloring,
    max_clique,
    max_induced_star,
    neighborhood_chromatic_lower,
    optimal_coloring,
    total_chromatic_number,
)
from tesslab.constructions import example_3T_graph
from tesslab.graph import (
    Graph,
    add_universal,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    petersen_graph,
    star_graph,
)


def brute_alpha(g: Graph) -> int:
    best = 0
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if all(b not in g.adj[a] for a, b in itertools.combinations(vs, 2)):
            best = max(best, len(vs))
    return best


def brute_chi(g: Graph) -> int:
    for k in range(g.n + 1):
        for colors in itertools.product(range(k), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in g.edges):
                return k
    return g.n


def wheel5():
    return add_universal(cycle_graph(5))[0]


def test_clique_examples():
    assert clique_number(complete_graph(5)) == 5
    assert clique_number(cycle_graph(9)) == 2
    assert clique_number(example_3T_graph()) == 4


def test_independence_examples():
    assert independence_number(cycle_graph(5)) == 2
    assert independence_number(complete_graph(6)) == 1
    assert independence_number(petersen_graph()) == brute_alpha(petersen_graph()) == 4


def test_induced_star_examples():
    assert max_induced_star(star_graph(3)).size == 3
    assert max_induced_star(wheel5()).size == 2
    assert max_induced_star(complete_graph(5)).size == 1


def test_colouring_examples():
    c9 = cycle_graph(9)
    assert (chromatic_number(c9), chromatic_index(c9), total_chromatic_number(c9)) == (3, 3, 3)
    assert chromatic_number(complete_graph(4)) == 4
    assert total_chromatic_number(complete_graph(2)) == 3


def test_neighbourhood_bound_examples():
    assert neighborhood_chromatic_lower(wheel5()).value == 4
    assert neighborhood_chromatic_lower(star_graph(3)).value == 4
    assert neighborhood_chromatic_lower(complete_graph(4)).value == 2


@given(graphs(max_n=7))
def test_parameters_match_brute_force(g):
    assert independence_number(g) == brute_alpha(g)
    assert clique_number(g) == len(max_clique(g))
    assert g.is_clique(max_clique(g))
    assert chromatic_number(g) == brute_chi(g)
    col = optimal_coloring(g)
    assert is_proper_coloring(g, col) and max(col, default=0) == chromatic_number(g)
    star = max_induced_star(g)
    if star.size:
        assert all(star.center in g.adj[x] for x in star.leaves)
        assert all(b not in g.adj[a] for a, b in itertools.combinations(star.leaves, 2))


@given(graphs(max_n=7))
def test_parameter_relations(g):
    assert clique_number(g) <= chromatic_number(g)
    nb = neighborhood_chromatic_lower(g).value
    assert max_induced_star(g).size + 1 <= nb or g.n == 0
    r = bounds_report(g)
    if r.upper_Tt is not None:
        assert r.lower_Tt <= r.upper_Tt


def test_k_coloring_negative():
    assert k_coloring(complete_graph(4), 3) is None
    assert k_coloring(cycle_graph(5), 2) is None


def test_size_limit():
    with pytest.raises(SizeLimitError):
        clique_number(edgeless_graph(70))


def test_chromatic_index_bipartite():
    # Konig: bipartite graphs are class one
    assert chromatic_index(complete_bipartite(3, 4)) == 4


def test_report_examples():
    r = bounds_report(cycle_graph(9))
    assert (r.lower_Tt, r.upper_Tt) == (3, 3)
    r = bounds_report(complete_graph(4), known_T=1)
    assert r.upper_Tt == 4 and r.lower_Tt == 4
    assert any(n.startswith("colour-split") for n in r.notes)
    r = bounds_report(example_3T_graph(), known_T=2)
    assert r.chi == 4 and r.lower_Tt == 4
    assert any(n.startswith("sum bound") and n.endswith("<= chi + T = 6") for n in r.notes)
    # the two-thirds bound max(4, 2 + 3) = 5 is tighter than the sum bound
    assert r.upper_Tt == 5
    text = r.format()
    assert "omega" in text and "T_t upper" in text
