"""Exact backtracking for k-tessellability and k-total tessellability.

The search state is a partial vertex colouring plus one clique partition per
label. Uncovered edges are resolved by merging the two endpoint tiles in some
label, so tiles only ever grow; any valid cover is reachable as a coarsening
of a state on the search path, which makes an exhausted search a proof of
infeasibility. Labels are interchangeable, so a branch may only introduce the
next unused label.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

from ..bounds import (
    chromatic_number,
    clique_number,
    max_induced_star,
    neighborhood_chromatic_lower,
)
from ..covers import CliquePartition, TotalCover
from ..graph import Graph

EXHAUSTIVE_LIMIT = 14


class SearchTimeout(RuntimeError):
    """The search hit its time budget before finishing: the answer is unknown."""


class SearchLimitError(ValueError):
    pass


@dataclass
class SolveOutcome:
    value: int
    witness: TotalCover | list[CliquePartition]
    nodes_explored: int
    proven_lower: int
    attempts: list[int] = field(default_factory=list)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Search:
    def __init__(self, g: Graph, k: int, timeout: float | None):
        self.g = g
        self.k = k
        self.n = g.n
        self.masks = g.masks
        self.nodes = 0
        self.deadline = None if timeout is None else time.monotonic() + timeout
        # tiles[i][v]: bitmask of the tile of v in partition i (index 0 unused)
        self.tiles = [[1 << v for v in range(self.n)] for _ in range(k + 1)]

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023:
            if time.monotonic() > self.deadline:
                raise SearchTimeout(f"timed out after {self.nodes} nodes")

    def _covered(self, u: int, v: int) -> bool:
        bit = 1 << v
        tiles = self.tiles
        for i in range(1, self.k + 1):
            if tiles[i][u] & bit:
                return True
        return False

    def _mergeable(self, tu: int, tv: int) -> bool:
        common = -1
        for w in _bits(tu):
            common &= self.masks[w]
        return not (tv & ~common)

    def _merge(self, i: int, tu: int, tv: int) -> list[tuple[int, int]]:
        union = tu | tv
        row = self.tiles[i]
        undo = []
        for w in _bits(union):
            undo.append((w, row[w]))
            row[w] = union
        return undo

    def _undo(self, i: int, undo: list[tuple[int, int]]) -> None:
        row = self.tiles[i]
        for w, old in undo:
            row[w] = old

    def partitions(self) -> dict[int, CliquePartition]:
        out = {}
        for i in range(1, self.k + 1):
            row = self.tiles[i]
            blocks = {row[v] for v in range(self.n)}
            if any(b & (b - 1) for b in blocks):
                out[i] = CliquePartition(list(_bits(b)) for b in blocks)
        return out


class TotalSearch(_Search):
    """Interleaved search: colour vertex v, then cover its edges to earlier vertices."""

    def __init__(self, g: Graph, k: int, timeout: float | None = None):
        super().__init__(g, k, timeout)
        self.color = [0] * self.n
        self.back = [sorted(u for u in g.adj[v] if u < v) for v in range(self.n)]

    def run(self) -> TotalCover | None:
        if self.n == 0:
            return TotalCover(self.k, [], {})
        if self.k < 1:
            return None
        limit = sys.getrecursionlimit()
        need = 4 * (self.n + self.g.m) + 100
        if need > limit:
            sys.setrecursionlimit(need)
        if self._color_vertex(0, 0):
            return TotalCover(self.k, self.color, self.partitions())
        return None

    def _color_vertex(self, v: int, used: int) -> bool:
        if v == self.n:
            return True
        self._tick()
        color = self.color
        taken = {color[u] for u in self.back[v]}
        for c in range(1, min(used + 1, self.k) + 1):
            if c in taken:
                continue
            color[v] = c
            if self._cover(v, 0, max(used, c)):
                return True
        color[v] = 0
        return False

    def _cover(self, v: int, j: int, used: int) -> bool:
        back = self.back[v]
        while j < len(back) and self._covered(back[j], v):
            j += 1
        if j == len(back):
            return self._color_vertex(v + 1, used)
        self._tick()
        u = back[j]
        cu, cv = self.color[u], self.color[v]
        tiles = self.tiles
        for i in range(1, min(used + 1, self.k) + 1):
            if i == cu or i == cv:
                continue
            tu, tv = tiles[i][u], tiles[i][v]
            # existing tiles of label i avoid colour i, and so do u and v
            if not self._mergeable(tu, tv):
                continue
            undo = self._merge(i, tu, tv)
            if self._cover(v, j + 1, max(used, i)):
                return True
            self._undo(i, undo)
        return False


class TessellationSearch(_Search):
    """Plain tessellation cover: edges in sorted order, merge tiles per label."""

    def run(self) -> list[CliquePartition] | None:
        if self.g.m == 0:
            return []
        if self.k < 1:
            return None
        need = 4 * self.g.m + 100
        if need > sys.getrecursionlimit():
            sys.setrecursionlimit(need)
        if self._cover(0, 0):
            parts = self.partitions()
            return [parts[i] for i in sorted(parts)]
        return None

    def _cover(self, e: int, used: int) -> bool:
        edges = self.g.edges
        while e < len(edges) and self._covered(*edges[e]):
            e += 1
        if e == len(edges):
            return True
        self._tick()
        u, v = edges[e]
        for i in range(1, min(used + 1, self.k) + 1):
            tu, tv = self.tiles[i][u], self.tiles[i][v]
            if not self._mergeable(tu, tv):
                continue
            undo = self._merge(i, tu, tv)
            if self._cover(e + 1, max(used, i)):
                return True
            self._undo(i, undo)
        return False


def _guard(g: Graph, max_vertices: int) -> None:
    if g.n > max_vertices:
        raise SearchLimitError(
            f"{g.n} vertices exceeds the exhaustive-search limit {max_vertices}"
        )


def decide_total(
    g: Graph, k: int, timeout: float | None = None, max_vertices: int = EXHAUSTIVE_LIMIT
) -> TotalCover | None:
    """A k-total tessellation cover of ``g``, or ``None`` if none exists.

    Raises :class:`SearchTimeout` if the budget runs out; ``None`` always means
    the search space was exhausted.
    """
    _guard(g, max_vertices)
    return TotalSearch(g, k, timeout).run()


def decide_tessellation(
    g: Graph, k: int, timeout: float | None = None, max_vertices: int = EXHAUSTIVE_LIMIT
) -> list[CliquePartition] | None:
    """A k-tessellation cover of ``g`` (list of partitions) or ``None``."""
    _guard(g, max_vertices)
    return TessellationSearch(g, k, timeout).run()


def total_lower_bound(g: Graph) -> int:
    if g.n == 0:
        return 0
    return max(
        chromatic_number(g),
        clique_number(g),
        max_induced_star(g).size + 1,
        neighborhood_chromatic_lower(g).value,
    )


def tessellation_lower_bound(g: Graph) -> int:
    if g.m == 0:
        return 0
    return max(1, max_induced_star(g).size)


def exact_T(
    g: Graph, timeout: float | None = None, max_vertices: int = EXHAUSTIVE_LIMIT
) -> SolveOutcome:
    """T(G) by iterative deepening from is(G)."""
    _guard(g, max_vertices)
    lower = tessellation_lower_bound(g)
    deadline = None if timeout is None else time.monotonic() + timeout
    nodes = 0
    attempts = []
    k = lower
    while True:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        search = TessellationSearch(g, k, left)
        found = search.run()
        nodes += search.nodes
        attempts.append(k)
        if found is not None:
            return SolveOutcome(k, found, nodes, lower, attempts)
        k += 1


def exact_Tt(
    g: Graph,
    timeout: float | None = None,
    max_vertices: int = EXHAUSTIVE_LIMIT,
    lower: int | None = None,
) -> SolveOutcome:
    """T_t(G) by iterative deepening from max{chi, omega, is+1, nbr bound}."""
    _guard(g, max_vertices)
    proven = total_lower_bound(g) if lower is None else lower
    deadline = None if timeout is None else time.monotonic() + timeout
    nodes = 0
    attempts = []
    k = proven
    while True:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        search = TotalSearch(g, k, left)
        found = search.run()
        nodes += search.nodes
        attempts.append(k)
        if found is not None:
            return SolveOutcome(k, found, nodes, proven, attempts)
        k += 1
