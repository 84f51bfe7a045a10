import itertools

import pytest

from tesslab.bounds import (
    chromatic_number,
    clique_number,
    is_proper_coloring,
    max_induced_star,
    neighborhood_chromatic_lower,
    optimal_coloring,
)
from tesslab.constructions import (
    ANCHORED_K4_TRIANGLES,
    GadgetError,
    anchored_k4_graph,
    build_gadget,
    c5_padded_construction,
    check_anchored_k4,
    check_gadget,
    chordal_construction,
    chordal_cover,
    duplicator,
    equal,
    example_3T_graph,
    find_anchored_k4,
    line_graph_of_complete_bipartite,
    not_equal,
    planar_reduction,
    shifter,
    universal_construction,
    universal_cover,
    verified_gadget,
)
from tesslab.covers import is_valid_total_cover
from tesslab.graph import (
    GraphError,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    is_chordal,
    line_graph,
    path_graph,
    star_graph,
)
from tesslab.solvers.cnf import decide_total_sat
from tesslab.solvers.search import exact_T


def test_example_graph_parameters():
    g = example_3T_graph()
    assert (g.n, g.m) == (12, 24)
    assert clique_number(g) == 4 and chromatic_number(g) == 4
    assert exact_T(g).value == 2


def test_anchored_k4_layout():
    g = anchored_k4_graph()
    assert (g.n, g.m) == (12, 18)
    assert find_anchored_k4(g) == ANCHORED_K4_TRIANGLES
    with pytest.raises(GadgetError):
        find_anchored_k4(complete_graph(5))


def test_anchored_k4_property():
    rep = check_anchored_k4(anchored_k4_graph())
    assert rep.exhaustive and rep.total_covers_found > 0
    assert rep.property_holds and rep.counterexample is None
    assert rep.flexible


def test_check_reports_counterexample():
    # a bare unit does not force its first two triangles together
    rep = check_gadget(anchored_k4_graph(), "equal", ANCHORED_K4_TRIANGLES[:2])
    assert not rep.property_holds
    assert is_valid_total_cover(anchored_k4_graph(), rep.counterexample)
    rep = check_gadget(complete_graph(4), "equal", [(0, 1, 2), (0, 1, 3)])
    assert not rep.property_holds


def test_check_rejects_bad_input():
    with pytest.raises(GadgetError):
        check_gadget(complete_graph(4), "bogus", [(0, 1, 2)])
    with pytest.raises(GadgetError):
        check_gadget(path_graph(3), "equal", [(0, 1, 2), (0, 1, 2)])
    with pytest.raises(GadgetError):
        check_gadget(anchored_k4_graph(), "shifter", ANCHORED_K4_TRIANGLES[:2])


@pytest.mark.parametrize(
    "role, d",
    [("equal", 2), ("not_equal", 2), ("shifter", 2), ("duplicator", 1), ("duplicator", 3), ("duplicator", 5)],
)
def test_gadgets_pass_their_checks(role, d):
    gadget = build_gadget(role, d)
    rep = check_gadget(gadget.graph, role, gadget.terminals)
    assert rep.property_holds and rep.flexible
    assert verified_gadget(role, d) is gadget


def test_gadget_terminals_are_triangles():
    for gadget in (equal(), not_equal(), shifter(), duplicator(4)):
        for tri in gadget.terminals:
            assert gadget.graph.is_clique(tri)
    assert len(duplicator(4).terminals) == 4
    with pytest.raises(GadgetError):
        duplicator(0)


def test_line_graph_of_kpp_inputs():
    lg, coloring, tcover = line_graph_of_complete_bipartite(4)
    assert lg == line_graph(complete_bipartite(4, 4))
    assert is_proper_coloring(lg, coloring) and max(coloring) == 4
    assert len(tcover) == 2


@pytest.mark.parametrize("g", [complete_graph(3), path_graph(3), cycle_graph(5), star_graph(3)])
@pytest.mark.parametrize("t", [0, 1])
def test_universal_cover_is_optimal(g, t):
    build = c5_padded_construction(g, t)
    cover = universal_cover(g, optimal_coloring(g), t)
    h = build.graph
    assert is_valid_total_cover(h, cover)
    assert cover.k == 2 * g.n + chromatic_number(g) + 3 * t + 1
    assert neighborhood_chromatic_lower(h).value == cover.k
    assert h.n == g.n + 5 * t + 1 + 2 * g.n


def test_universal_layout():
    build = universal_construction(complete_graph(3))
    assert build.graph.n == 10 and build.graph.degree(build.universal) == 9


def test_universal_rejects_improper_colouring():
    with pytest.raises(ValueError):
        universal_cover(complete_graph(3), [1, 1, 2])


def test_chordal_construction_shape():
    g = line_graph(complete_graph(4))
    build = chordal_construction(g)
    h = build.graph
    assert h.n == 264 and is_chordal(h)
    clique, stable, pendants = build.split_witness()
    assert h.is_clique(clique)
    for part in (stable, pendants):
        assert not any(b in h.adj[a] for a, b in itertools.combinations(part, 2))
    assert sorted(clique + stable + pendants) == list(range(h.n))
    with pytest.raises(GraphError):
        chordal_construction(cycle_graph(5))


def test_chordal_cover_labels():
    g = line_graph(complete_graph(4))
    cover = chordal_cover(g, optimal_coloring(g))
    h = chordal_construction(g).graph
    assert is_valid_total_cover(h, cover)
    assert cover.k == g.m + 3 == max_induced_star(h).size + 1
    assert cover == chordal_cover(g, optimal_coloring(g))


def test_planar_reduction_triangle():
    red = planar_reduction(complete_graph(3))
    assert red.euler == "possibly planar"
    cover = decide_total_sat(red.graph, 4)
    assert cover is not None and is_valid_total_cover(red.graph, cover)
    # the signal labels form a proper colouring of G joined with u
    labels = red.coloring_from_cover(cover)
    assert len(set(labels)) == 4
    assert any(line.startswith("dup[") for line in red.log)


def test_planar_reduction_rejects_inputs():
    with pytest.raises(GraphError):
        planar_reduction(star_graph(5))
    with pytest.raises(GraphError):
        planar_reduction(complete_bipartite(3, 3))
