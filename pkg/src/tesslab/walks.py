"""Staggered quantum walks driven by tessellations, and the total walk.

Each tessellation ``P`` gives the reflection ``U = 2 sum_a |a><a| - I`` where
``|a>`` is the uniform superposition over tile ``a``. One step of a walk is the
product of the reflections in ascending label order, so the lowest label acts
first. The total walk lives on V(G) plus E(G), realised as a staggered walk
on Tot(G) with the cover induced by a total tessellation cover.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .covers import (
    CliquePartition,
    InvalidCoverError,
    TotalCover,
    validate_tessellation_cover,
    validate_total_cover,
)
from .graph import Graph, TotalGraphMap, total_graph

DENSE_LIMIT = 256
NORM_TOL = 1e-10


class WalkError(ValueError):
    """Bad walk input: a non-partition, a dimension mismatch or an unnormalised state."""


@dataclass
class WalkState:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise WalkError(f"state has squared norm {norm}, expected 1")

    @classmethod
    def basis(cls, dim: int, index: int) -> "WalkState":
        if not 0 <= index < dim:
            raise WalkError(f"basis index {index} outside 0..{dim - 1}")
        amp = np.zeros(dim, dtype=complex)
        amp[index] = 1.0
        return cls(amp)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def support(self, eps: float = 1e-12) -> set[int]:
        return {int(i) for i in np.flatnonzero(self.probabilities() > eps)}


@dataclass(frozen=True)
class LocalUnitary:
    """The reflection attached to one tessellation.

    ``matrix`` is filled only up to :data:`DENSE_LIMIT`; beyond that the
    operator is applied tile by tile.
    """

    label: int | None
    dim: int
    tiles: tuple[tuple[int, ...], ...]
    matrix: np.ndarray | None

    def apply(self, vec: np.ndarray) -> np.ndarray:
        if len(vec) != self.dim:
            raise WalkError(f"vector of length {len(vec)} on a space of dimension {self.dim}")
        if self.matrix is not None:
            return self.matrix @ vec
        out = np.array(vec, dtype=complex)
        for tile in self.tiles:
            if len(tile) > 1:
                idx = list(tile)
                out[idx] = 2 * out[idx].mean() - out[idx]
        return out

    def dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        return _reflection(self.dim, self.tiles)


def _reflection(dim: int, tiles: Sequence[Sequence[int]]) -> np.ndarray:
    u = -np.eye(dim, dtype=complex)
    for tile in tiles:
        idx = np.asarray(tile)
        u[np.ix_(idx, idx)] += 2.0 / len(tile)
    return u


def local_unitary(p: CliquePartition, dim: int, label: int | None = None) -> LocalUnitary:
    """``2P - I`` for the tiles of ``p``, which must partition ``range(dim)``."""
    seen = sorted(v for b in p.blocks for v in b)
    if seen != list(range(dim)):
        raise WalkError(f"tiles do not partition 0..{dim - 1}")
    matrix = _reflection(dim, p.blocks) if dim <= DENSE_LIMIT else None
    return LocalUnitary(label, dim, p.blocks, matrix)


def evolution_operator(partitions: Mapping[int, CliquePartition], dim: int) -> np.ndarray:
    """``U_k ... U_1``: the product over labels, lowest label applied first."""
    if not partitions:
        raise WalkError("need at least one tessellation")
    u = np.eye(dim, dtype=complex)
    for label in sorted(partitions):
        u = local_unitary(partitions[label], dim, label).dense() @ u
    return u


# ---------------------------------------------------------------------------
# total walk


def induced_tot_partitions(g: Graph, cover: TotalCover, tmap: TotalGraphMap | None = None) -> dict[int, CliquePartition]:
    """Raw per-label tiles on Tot(G): the label's tiles on the vertex copy of
    G, plus ``K_v`` for each vertex coloured with that label, padded with
    singletons.

    Tiles may overlap when the cover breaks compatibility; the result is then
    not a partition and validation reports it.
    """
    tmap = tmap or total_graph(g)
    size = tmap.total.n
    out: dict[int, CliquePartition] = {}
    for label in range(1, cover.k + 1):
        tiles: list[tuple[int, ...]] = []
        p = cover.partitions.get(label)
        if p is not None:
            # the label's tiles act on the copy of G inside Tot(G) only
            tiles.extend(p.nontrivial())
        for v, c in enumerate(cover.coloring):
            if c == label:
                tiles.append(tuple(sorted(tmap.kv_cliques[v])))
        used = {x for t in tiles for x in t}
        tiles.extend((x,) for x in range(size) if x not in used)
        out[label] = CliquePartition(tiles)
    return out


def induced_cover_is_valid(g: Graph, cover: TotalCover) -> bool:
    """Whether the raw induced tiles form a tessellation cover of Tot(G).

    No check is made on ``cover`` itself, so this can be compared with its own
    validity.
    """
    tmap = total_graph(g)
    raw = induced_tot_partitions(g, cover, tmap)
    return not validate_tessellation_cover(tmap.total, list(raw.values()))


def induce_total_graph_cover(g: Graph, cover: TotalCover) -> tuple[TotalGraphMap, list[CliquePartition]]:
    """Tessellation cover of Tot(G) with exactly ``cover.k`` tessellations.

    Raises :class:`InvalidCoverError` when the input cover is invalid or the
    induced tiles fail to form a tessellation cover.
    """
    problems = validate_total_cover(g, cover)
    if problems:
        raise InvalidCoverError(problems)
    tmap = total_graph(g)
    raw = induced_tot_partitions(g, cover, tmap)
    parts = [raw[label] for label in range(1, cover.k + 1)]
    problems = validate_tessellation_cover(tmap.total, parts)
    if problems:
        raise InvalidCoverError(problems)
    return tmap, parts


def site_names(g: Graph, tmap: TotalGraphMap) -> list[str]:
    """``"v"`` for vertices and ``"u-v"`` for edges (0-based vertex ids)."""
    names = [str(v) for v in range(g.n)]
    names.extend(f"{u}-{v}" for u, v in g.edges)
    return names


def site_index(g: Graph, site: str) -> int:
    """Position in V(G) + E(G) of a vertex id or an edge written ``u-v``."""
    try:
        if "-" in site:
            a, b = (int(x) for x in site.split("-"))
            e = (min(a, b), max(a, b))
            idx = g.edge_index()
            if e not in idx:
                raise WalkError(f"{site} is not an edge")
            return g.n + idx[e]
        v = int(site)
    except ValueError as exc:
        raise WalkError(f"cannot parse site {site!r}") from exc
    if not 0 <= v < g.n:
        raise WalkError(f"vertex {v} out of range")
    return v


def simulate(
    unitaries: Sequence[LocalUnitary], initial: WalkState, steps: int, per_operator: bool = False
) -> list[np.ndarray]:
    """Probability vectors: the initial one, then one per step.

    With ``per_operator`` a "step" is a single reflection, cycling through
    ``unitaries`` in order; otherwise it is the full product.
    """
    if steps < 0:
        raise WalkError("steps must be non-negative")
    vec = initial.amplitudes.copy()
    out = [np.abs(vec) ** 2]
    for s in range(steps):
        if per_operator:
            vec = unitaries[s % len(unitaries)].apply(vec)
        else:
            for u in unitaries:
                vec = u.apply(vec)
        out.append(np.abs(vec) ** 2)
    return out


def total_walk_unitaries(g: Graph, cover: TotalCover) -> tuple[TotalGraphMap, list[LocalUnitary]]:
    tmap, parts = induce_total_graph_cover(g, cover)
    dim = tmap.total.n
    return tmap, [local_unitary(p, dim, label) for label, p in enumerate(parts, start=1)]


def simulate_total_walk(
    g: Graph, cover: TotalCover, initial: WalkState, steps: int, per_operator: bool = False
) -> list[np.ndarray]:
    """Born-rule distributions over V(G) + E(G) for the induced walk on Tot(G)."""
    tmap, unitaries = total_walk_unitaries(g, cover)
    if len(initial.amplitudes) != tmap.total.n:
        raise WalkError("initial state does not match |V| + |E|")
    return simulate(unitaries, initial, steps, per_operator)


def random_total_cover(g: Graph, rng: random.Random) -> TotalCover:
    """A valid (usually far from optimal) random total cover.

    Vertices get a random proper colouring; each edge joins a random label that
    differs from both endpoint colours as a 2-tile, with labels taken fresh
    whenever that label already uses an endpoint.
    """
    order = list(range(g.n))
    rng.shuffle(order)
    coloring = [0] * g.n
    for v in order:
        taken = {coloring[w] for w in g.adj[v]}
        choices = [c for c in range(1, len(taken) + 2) if c not in taken]
        coloring[v] = rng.choice(choices)
    top = max(coloring, default=0)
    busy: dict[int, set[int]] = {}
    tiles: dict[int, list[tuple[int, int]]] = {}
    edges = list(g.edges)
    rng.shuffle(edges)
    for u, v in edges:
        options = [
            i for i in range(1, top + 1)
            if i not in (coloring[u], coloring[v]) and not busy.get(i, set()) & {u, v}
        ]
        if options and rng.random() < 0.8:
            label = rng.choice(options)
        else:
            top += 1
            label = top
        busy.setdefault(label, set()).update((u, v))
        tiles.setdefault(label, []).append((u, v))
    parts = {label: CliquePartition.from_tiles(g.n, ts) for label, ts in tiles.items()}
    return TotalCover(top, coloring, parts)
