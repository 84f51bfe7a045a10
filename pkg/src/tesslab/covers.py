"""Tessellations, tessellation covers and total tessellation covers.

A cover is stored as a vertex colouring plus one clique partition per label.
The per-edge label sets are derived on demand by :func:`edge_label_map`.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import Edge, Graph


class InvalidCoverError(ValueError):
    """Raised when an operation needs a valid cover and got an invalid one."""

    def __init__(self, violations: Sequence["CoverViolation"]):
        self.violations = list(violations)
        shown = ", ".join(str(v) for v in self.violations[:5])
        super().__init__(f"invalid cover: {shown}")


class ViolationKind(str, enum.Enum):
    NOT_PARTITION = "NotPartition"
    NON_CLIQUE_TILE = "NonCliqueTile"
    UNCOVERED_EDGE = "UncoveredEdge"
    IMPROPER_COLORING = "ImproperColoring"
    COMPATIBILITY = "Compatibility"


@dataclass(frozen=True, order=True)
class CoverViolation:
    kind: ViolationKind
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind.value}{self.witness}"


@dataclass(frozen=True)
class CliquePartition:
    """A tessellation: tiles are kept sorted, each tile sorted ascending.

    Construction does not validate; use :func:`validate_tessellation`.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        tiles = [tuple(sorted(b)) for b in blocks]
        tiles = [t for t in tiles if t]
        object.__setattr__(self, "blocks", tuple(sorted(tiles)))

    @classmethod
    def from_tiles(cls, n: int, tiles: Iterable[Iterable[int]]) -> "CliquePartition":
        """Complete the given tiles with singletons for uncovered vertices."""
        tiles = [tuple(t) for t in tiles]
        seen = {v for t in tiles for v in t}
        return cls(tiles + [(v,) for v in range(n) if v not in seen])

    @classmethod
    def singletons(cls, n: int) -> "CliquePartition":
        return cls((v,) for v in range(n))

    def tile_of(self) -> dict[int, tuple[int, ...]]:
        return {v: b for b in self.blocks for v in b}

    def nontrivial(self) -> tuple[tuple[int, ...], ...]:
        return tuple(b for b in self.blocks if len(b) > 1)


@dataclass(frozen=True)
class TotalCover:
    """Labels are ``1..k``; ``coloring[v]`` is the colour of vertex ``v``.

    Labels missing from ``partitions`` carry no tessellation (equivalently, the
    all-singleton one).
    """

    k: int
    coloring: tuple[int, ...]
    partitions: Mapping[int, CliquePartition]

    def __init__(self, k: int, coloring: Sequence[int], partitions: Mapping[int, CliquePartition]):
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "coloring", tuple(int(c) for c in coloring))
        object.__setattr__(
            self, "partitions", {int(i): partitions[i] for i in sorted(partitions)}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TotalCover):
            return NotImplemented
        return (
            self.k == other.k
            and self.coloring == other.coloring
            and self.partitions == other.partitions
        )

    def __hash__(self) -> int:
        return hash((self.k, self.coloring, tuple(self.partitions.items())))

    def labels_used(self) -> set[int]:
        used = set(self.coloring)
        used.update(i for i, p in self.partitions.items() if p.nontrivial())
        return used


# ---------------------------------------------------------------------------
# validation


def validate_tessellation(g: Graph, p: CliquePartition) -> CoverViolation | None:
    """Return the lowest-index violation, or ``None`` if ``p`` is a tessellation."""
    count = [0] * g.n
    bad = []
    for block in p.blocks:
        for v in block:
            if 0 <= v < g.n:
                count[v] += 1
            else:
                bad.append(v)
    if bad:
        return CoverViolation(ViolationKind.NOT_PARTITION, (min(bad),))
    for v in range(g.n):
        if count[v] != 1:
            return CoverViolation(ViolationKind.NOT_PARTITION, (v,))
    for block in p.blocks:
        if not g.is_clique(block):
            return CoverViolation(ViolationKind.NON_CLIQUE_TILE, block)
    return None


def tessellation_edges(g: Graph, p: CliquePartition) -> set[Edge]:
    """Edges of ``g`` with both endpoints in one tile of ``p``."""
    violation = validate_tessellation(g, p)
    if violation is not None:
        raise InvalidCoverError([violation])
    tile = p.tile_of()
    return {(u, v) for u, v in g.edges if tile[u] == tile[v]}


def validate_tessellation_cover(g: Graph, partitions: Sequence[CliquePartition]) -> list[CoverViolation]:
    """Check a plain tessellation cover (no colouring)."""
    out = []
    covered: set[Edge] = set()
    for p in partitions:
        v = validate_tessellation(g, p)
        if v is not None:
            out.append(v)
        else:
            covered |= tessellation_edges(g, p)
    if not out:
        out.extend(
            CoverViolation(ViolationKind.UNCOVERED_EDGE, e)
            for e in g.edges
            if e not in covered
        )
    return out


def validate_total_cover(g: Graph, cover: TotalCover) -> list[CoverViolation]:
    """All violations of the total-cover conditions, in deterministic order.

    The compatibility condition is checked as "``v`` is a singleton tile in the
    partition labelled ``f(v)``", which is equivalent to no incident edge of
    ``v`` lying in that tessellation.
    """
    out: list[CoverViolation] = []
    k = cover.k
    if len(cover.coloring) != g.n:
        return [CoverViolation(ViolationKind.IMPROPER_COLORING, (min(len(cover.coloring), g.n),))]
    for v, c in enumerate(cover.coloring):
        if not 1 <= c <= k:
            out.append(CoverViolation(ViolationKind.IMPROPER_COLORING, (v,)))
    for label in cover.partitions:
        if not 1 <= label <= k:
            out.append(CoverViolation(ViolationKind.NOT_PARTITION, (label,)))
    tiles: dict[int, dict[int, tuple[int, ...]]] = {}
    for label, p in cover.partitions.items():
        violation = validate_tessellation(g, p)
        if violation is not None:
            out.append(violation)
        else:
            tiles[label] = p.tile_of()
    if out:
        return out
    for u, v in g.edges:
        if cover.coloring[u] == cover.coloring[v]:
            out.append(CoverViolation(ViolationKind.IMPROPER_COLORING, (u, v)))
    for u, v in g.edges:
        if not any(t[u] == t[v] for t in tiles.values()):
            out.append(CoverViolation(ViolationKind.UNCOVERED_EDGE, (u, v)))
    for v, c in enumerate(cover.coloring):
        t = tiles.get(c)
        if t is not None and len(t[v]) > 1:
            out.append(CoverViolation(ViolationKind.COMPATIBILITY, (v, c)))
    return out


def is_valid_total_cover(g: Graph, cover: TotalCover) -> bool:
    return not validate_total_cover(g, cover)


def satisfies_definition(g: Graph, cover: TotalCover) -> bool:
    """Literal check of the total-cover conditions, independent of the singleton shortcut.

    Checks, per vertex, that no incident edge belongs to the tessellation whose
    label equals the vertex colour, plus properness, tile validity and cover.
    """
    if len(cover.coloring) != g.n or any(not 1 <= c <= cover.k for c in cover.coloring):
        return False
    if any(not 1 <= i <= cover.k for i in cover.partitions):
        return False
    edge_sets: dict[int, set[Edge]] = {}
    for label, p in cover.partitions.items():
        if validate_tessellation(g, p) is not None:
            return False
        edge_sets[label] = tessellation_edges(g, p)
    for u, v in g.edges:
        if cover.coloring[u] == cover.coloring[v]:
            return False
        if not any((u, v) in es for es in edge_sets.values()):
            return False
    for v in range(g.n):
        own = edge_sets.get(cover.coloring[v], set())
        for w in g.adj[v]:
            e = (v, w) if v < w else (w, v)
            if e in own:
                return False
    return True


def edge_label_map(g: Graph, cover: TotalCover) -> dict[Edge, frozenset[int]]:
    """The function h: each edge to the set of labels whose tessellation holds it."""
    violations = validate_total_cover(g, cover)
    if violations:
        raise InvalidCoverError(violations)
    tiles = {label: p.tile_of() for label, p in cover.partitions.items()}
    return {
        (u, v): frozenset(i for i, t in tiles.items() if t[u] == t[v])
        for u, v in g.edges
    }


def cover_from_edge_labels(g: Graph, k: int, coloring: Sequence[int], h: Mapping[Edge, Iterable[int]]) -> TotalCover:
    """Inverse of :func:`edge_label_map`: tiles are the components of each label class.

    The result may be invalid if a label class is not a disjoint union of cliques.
    """
    parts = {}
    for label in range(1, k + 1):
        parent = list(range(g.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        used = False
        for e, labels in h.items():
            if label in labels:
                used = True
                a, b = find(e[0]), find(e[1])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        if used:
            groups: dict[int, list[int]] = {}
            for v in range(g.n):
                groups.setdefault(find(v), []).append(v)
            parts[label] = CliquePartition(groups.values())
    return TotalCover(k, coloring, parts)


# ---------------------------------------------------------------------------
# JSON


def cover_to_dict(cover: TotalCover) -> dict:
    return {
        "k": cover.k,
        "colors": list(cover.coloring),
        "tessellations": {
            str(label): [list(b) for b in p.blocks]
            for label, p in sorted(cover.partitions.items())
        },
    }


def cover_from_dict(data: Mapping) -> TotalCover:
    try:
        k = int(data["k"])
        colors = [int(c) for c in data["colors"]]
        parts = {
            int(label): CliquePartition([int(v) for v in tile] for tile in tiles)
            for label, tiles in data.get("tessellations", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed cover document: {exc}") from exc
    return TotalCover(k, colors, parts)


def dumps_cover(cover: TotalCover) -> str:
    return json.dumps(cover_to_dict(cover)) + "\n"


def loads_cover(text: str) -> TotalCover:
    return cover_from_dict(json.loads(text))
