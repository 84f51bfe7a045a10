"""Constructive total covers from a colouring plus a tessellation cover.

All three builders take a proper colouring with colours ``1..c`` and a list
of tessellations covering every edge, and never search: the output is a
direct rearrangement of the inputs.

* :func:`colour_split_cover` -- when ``c >= 3T``, tessellation ``j`` is copied
  three times under labels ``3j-2, 3j-1, 3j``, each copy dropping the vertices
  of its own colour. Exactly ``c`` labels.
* :func:`generic_upper_cover` -- the smaller of ``c + T`` (fresh labels) and
  ``max(c, 3T)`` (colour classes split into three groups).
* :func:`two_thirds_cover` -- triples only ``g`` of the tessellations and gives
  the rest fresh labels, ``max(c, 3g) + T - g`` labels; the best ``g`` reaches
  ``max(c, T + ceil(2c/3))``.
"""

from __future__ import annotations

from typing import Sequence

from ..covers import (
    CliquePartition,
    InvalidCoverError,
    TotalCover,
    validate_tessellation_cover,
)
from ..graph import Graph


class PreconditionFailed(ValueError):
    """The construction's numeric precondition does not hold."""


def _check_inputs(g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]) -> int:
    if len(coloring) != g.n:
        raise ValueError("colouring length does not match the graph")
    if any(c < 1 for c in coloring):
        raise ValueError("colours must be positive")
    bad = [(u, v) for u, v in g.edges if coloring[u] == coloring[v]]
    if bad:
        raise ValueError(f"improper colouring at edge {bad[0]}")
    violations = validate_tessellation_cover(g, list(tcover))
    if violations:
        raise InvalidCoverError(violations)
    return max(coloring, default=0)


def _drop(p: CliquePartition, removed) -> CliquePartition:
    """Tiles of ``p`` with the vertices in ``removed`` split off as singletons."""
    blocks = []
    for b in p.blocks:
        keep = [v for v in b if v not in removed]
        blocks.append(keep)
        blocks.extend([v] for v in b if v in removed)
    return CliquePartition(blocks)


def _classes(coloring: Sequence[int], c: int) -> dict[int, set[int]]:
    out: dict[int, set[int]] = {i: set() for i in range(1, c + 1)}
    for v, col in enumerate(coloring):
        out[col].add(v)
    return out


def _tripled(coloring, tcover, j_range, classes) -> dict[int, CliquePartition]:
    parts = {}
    for j in j_range:
        for offset in (2, 1, 0):
            label = 3 * (j + 1) - offset
            parts[label] = _drop(tcover[j], classes.get(label, set()))
    return parts


def colour_split_cover(
    g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]
) -> TotalCover:
    """Total cover with exactly the colours as labels; needs ``c >= 3T``."""
    c = _check_inputs(g, coloring, tcover)
    t = len(tcover)
    if c < 3 * t:
        raise PreconditionFailed(f"{c} colours < 3 x {t} tessellations")
    classes = _classes(coloring, c)
    parts = _tripled(coloring, tcover, range(t), classes)
    return TotalCover(c, coloring, parts)


def sum_cover(g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]) -> TotalCover:
    """``c + T`` labels: tessellation ``j`` gets the fresh label ``c + j``."""
    c = _check_inputs(g, coloring, tcover)
    parts = {c + j + 1: p for j, p in enumerate(tcover)}
    return TotalCover(c + len(tcover), coloring, parts)


def group_split_cover(
    g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]
) -> TotalCover:
    """``max(c, 3T)`` labels via three near-equal groups of colour classes.

    Part ``r`` of each tessellation drops the vertices coloured from group
    ``r`` and is labelled with a colour of that group; groups with fewer than
    ``T`` colours are padded with fresh labels above ``c``.
    """
    c = _check_inputs(g, coloring, tcover)
    t = len(tcover)
    base, extra = divmod(c, 3)
    sizes = [base + (1 if r < extra else 0) for r in range(3)]
    groups: list[list[int]] = []
    start = 1
    for size in sizes:
        groups.append(list(range(start, start + size)))
        start += size
    fresh = c
    labels: list[list[int]] = []
    for grp in groups:
        row = list(grp)
        while len(row) < t:
            fresh += 1
            row.append(fresh)
        labels.append(row)
    parts = {}
    for r, grp in enumerate(groups):
        members = {v for v, col in enumerate(coloring) if col in grp}
        for j, p in enumerate(tcover):
            parts[labels[r][j]] = _drop(p, members)
    return TotalCover(fresh, coloring, parts)


def generic_upper_cover(
    g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]
) -> TotalCover:
    """Colour-split cover when it applies, else the smaller of the two envelopes."""
    c = _check_inputs(g, coloring, tcover)
    if c >= 3 * len(tcover):
        return colour_split_cover(g, coloring, tcover)
    plain = sum_cover(g, coloring, tcover)
    grouped = group_split_cover(g, coloring, tcover)
    return grouped if grouped.k < plain.k else plain


def two_thirds_size(c: int, t: int) -> tuple[int, int]:
    """(labels, g) minimising ``max(c, 3g) + t - g`` over ``0 <= g <= t``."""
    return min((max(c, 3 * gg) + t - gg, gg) for gg in range(t + 1))


def two_thirds_cover(
    g: Graph, coloring: Sequence[int], tcover: Sequence[CliquePartition]
) -> TotalCover:
    """Total cover with ``max(c, T + ceil(2c/3))`` labels.

    The first ``g`` tessellations are tripled as in :func:`colour_split_cover`
    (labels ``1..3g``, dropping the matching colour class, if any); the other
    ``T - g`` keep their tiles under fresh labels above ``max(c, 3g)``.
    """
    c = _check_inputs(g, coloring, tcover)
    t = len(tcover)
    k, gg = two_thirds_size(c, t)
    classes = _classes(coloring, c)
    parts = _tripled(coloring, tcover, range(gg), classes)
    top = max(c, 3 * gg)
    for j in range(gg, t):
        parts[top + j - gg + 1] = tcover[j]
    return TotalCover(k, coloring, parts)
