import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from tesslab.covers import (
    CliquePartition,
    CoverViolation,
    InvalidCoverError,
    TotalCover,
    ViolationKind,
    cover_from_edge_labels,
    dumps_cover,
    edge_label_map,
    is_valid_total_cover,
    loads_cover,
    satisfies_definition,
    tessellation_edges,
    validate_tessellation,
    validate_total_cover,
)
from tesslab.graph import Graph, complete_graph, cycle_graph, path_graph


def c9_pattern() -> TotalCover:
    tiles: dict[int, list[tuple[int, int]]] = {}
    for i in range(9):
        tiles.setdefault((i + 2) % 3 + 1, []).append((i, (i + 1) % 9))
    parts = {label: CliquePartition.from_tiles(9, ts) for label, ts in tiles.items()}
    return TotalCover(3, [i % 3 + 1 for i in range(9)], parts)


def test_validate_tessellation_examples():
    k3 = complete_graph(3)
    assert validate_tessellation(k3, CliquePartition([[0, 1, 2]])) is None
    v = validate_tessellation(path_graph(3), CliquePartition([[0, 2], [1]]))
    assert v == CoverViolation(ViolationKind.NON_CLIQUE_TILE, (0, 2))
    v = validate_tessellation(k3, CliquePartition([[0, 1], [1, 2]]))
    assert v == CoverViolation(ViolationKind.NOT_PARTITION, (1,))


def test_tessellation_edges_examples():
    k3 = complete_graph(3)
    assert tessellation_edges(k3, CliquePartition([[0, 1, 2]])) == set(k3.edges)
    assert tessellation_edges(k3, CliquePartition.singletons(3)) == set()
    assert tessellation_edges(path_graph(3), CliquePartition([[0, 1], [2]])) == {(0, 1)}


def test_total_cover_examples():
    k2 = complete_graph(2)
    good = TotalCover(3, [1, 2], {3: CliquePartition([[0, 1]])})
    assert validate_total_cover(k2, good) == []
    bad = TotalCover(3, [1, 2], {1: CliquePartition([[0, 1]])})
    assert validate_total_cover(k2, bad) == [CoverViolation(ViolationKind.COMPATIBILITY, (0, 1))]
    assert is_valid_total_cover(cycle_graph(9), c9_pattern())


def test_no_two_label_cover_of_k2():
    # every colouring with two labels uses both, leaving no label for the edge
    k2 = complete_graph(2)
    for colors in itertools.product((1, 2), repeat=2):
        for label in (1, 2):
            cover = TotalCover(2, colors, {label: CliquePartition([[0, 1]])})
            assert not is_valid_total_cover(k2, cover)


def test_edge_label_map_examples():
    k2 = complete_graph(2)
    assert edge_label_map(k2, TotalCover(3, [1, 2], {3: CliquePartition([[0, 1]])})) == {
        (0, 1): frozenset({3})
    }
    k3 = complete_graph(3)
    parts = {
        1: CliquePartition.from_tiles(3, [[1, 2]]),
        2: CliquePartition.from_tiles(3, [[0, 2]]),
        3: CliquePartition.from_tiles(3, [[0, 1]]),
    }
    h = edge_label_map(k3, TotalCover(3, [1, 2, 3], parts))
    assert h == {(0, 1): {3}, (0, 2): {2}, (1, 2): {1}}
    with pytest.raises(InvalidCoverError):
        edge_label_map(k3, TotalCover(3, [1, 2, 3], {1: CliquePartition.singletons(3)}))


@st.composite
def graph_and_cover(draw):
    """Arbitrary (often invalid) covers: random colours and random set
    partitions, so both checkers see every kind of failure."""
    g = draw(graphs(max_n=5))
    k = draw(st.integers(1, 4))
    colors = draw(st.lists(st.integers(1, k), min_size=g.n, max_size=g.n))
    parts = {}
    for label in draw(st.sets(st.integers(1, k))):
        block_of = draw(st.lists(st.integers(0, g.n - 1), min_size=g.n, max_size=g.n))
        blocks: dict[int, list[int]] = {}
        for v, b in enumerate(block_of):
            blocks.setdefault(b, []).append(v)
        parts[label] = CliquePartition(blocks.values())
    return g, TotalCover(k, colors, parts)


@given(graph_and_cover())
def test_singleton_rule_agrees_with_definition(pair):
    g, cover = pair
    assert is_valid_total_cover(g, cover) == satisfies_definition(g, cover)


def test_singleton_rule_agrees_exhaustively_on_small_graphs():
    # every colouring and every single-label partition layout on K3 and P3
    partitions = [
        CliquePartition(p)
        for p in (
            [[0], [1], [2]], [[0, 1], [2]], [[0, 2], [1]], [[1, 2], [0]], [[0, 1, 2]],
        )
    ]
    for g in (complete_graph(3), path_graph(3)):
        for colors in itertools.product((1, 2, 3), repeat=3):
            for layout in itertools.product([None] + partitions, repeat=3):
                parts = {i + 1: p for i, p in enumerate(layout) if p is not None}
                cover = TotalCover(3, colors, parts)
                assert is_valid_total_cover(g, cover) == satisfies_definition(g, cover)


@given(graph_and_cover())
def test_json_round_trip(pair):
    g, cover = pair
    text = dumps_cover(cover)
    again = loads_cover(text)
    assert again == cover
    assert dumps_cover(again) == text
    assert validate_total_cover(g, again) == validate_total_cover(g, cover)


def test_json_layout():
    doc = json.loads(dumps_cover(c9_pattern()))
    assert list(doc) == ["k", "colors", "tessellations"]
    for tiles in doc["tessellations"].values():
        assert tiles == sorted(tiles, key=min)
        assert all(t == sorted(t) for t in tiles)


def test_malformed_json():
    with pytest.raises(ValueError):
        loads_cover('{"colors": []}')


@given(graph_and_cover())
def test_edge_labels_round_trip(pair):
    g, cover = pair
    if not is_valid_total_cover(g, cover):
        return
    h = edge_label_map(g, cover)
    for label, p in cover.partitions.items():
        assert {e for e, ls in h.items() if label in ls} == tessellation_edges(g, p)
    rebuilt = cover_from_edge_labels(g, cover.k, cover.coloring, h)
    assert is_valid_total_cover(g, rebuilt)
    assert edge_label_map(g, rebuilt) == h


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_edge_labels_round_trip_on_valid_covers(g, rnd):
    from tesslab.walks import random_total_cover

    cover = random_total_cover(g, rnd)
    assert is_valid_total_cover(g, cover) and satisfies_definition(g, cover)
    h = edge_label_map(g, cover)
    assert all(h[e] and cover.coloring[e[0]] not in h[e] and cover.coloring[e[1]] not in h[e] for e in h)
    assert edge_label_map(g, cover_from_edge_labels(g, cover.k, cover.coloring, h)) == h
