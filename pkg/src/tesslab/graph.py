"""Undirected simple graphs with dense integer vertices, and the transformations
used throughout the package (complement, joins, line and total graphs).

Every transformation that renumbers vertices returns the relabelling map
explicitly, so reductions that compose several steps can track where each
vertex came from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graph input (bad index, self-loop, bad file)."""


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``edges`` is stored sorted, which fixes the edge indexing used by the line
    graph, the total graph and the CNF encoding.
    """

    n: int
    edges: tuple[Edge, ...]
    names: tuple[str, ...] | None = None
    adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        clean = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            clean.add(_norm(u, v))
        object.__setattr__(self, "edges", tuple(sorted(clean)))
        if self.names is not None:
            if len(self.names) != self.n:
                raise GraphError("names must have one entry per vertex")
            object.__setattr__(self, "names", tuple(self.names))
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))
        object.__setattr__(
            self, "masks", tuple(sum(1 << w for w in s) for s in nbrs)
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def name(self, v: int) -> str:
        return self.names[v] if self.names is not None else str(v)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(b in self.adj[a] for a, b in itertools.combinations(vs, 2))

    def is_triangle_free(self) -> bool:
        return not any(self.adj[u] & self.adj[v] for u, v in self.edges)

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return False
        return True

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adj[u] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.n

    def relabel(self, names: Sequence[str] | None) -> Graph:
        return Graph(self.n, self.edges, None if names is None else tuple(names))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(
    n: int, pairs: Iterable[Sequence[int]], names: Sequence[str] | None = None
) -> Graph:
    """Build a graph from 0-based vertex pairs; duplicates are collapsed."""
    return Graph(n, tuple((int(u), int(v)) for u, v in pairs), names)


# ---------------------------------------------------------------------------
# named families


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def edgeless_graph(n: int) -> Graph:
    return Graph(n, ())


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def wheel_graph(rim: int) -> Graph:
    """C_rim joined with a hub; the hub is the last vertex."""
    return add_universal(cycle_graph(rim))[0]


# ---------------------------------------------------------------------------
# transformations


def complement(g: Graph) -> Graph:
    edges = tuple(
        (u, v)
        for u, v in itertools.combinations(range(g.n), 2)
        if v not in g.adj[u]
    )
    return Graph(g.n, edges, g.names)


def neighborhood(g: Graph, v: int) -> frozenset[int]:
    return g.adj[v]


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``vertices``.

    Returns ``(H, old)`` where ``old[i]`` is the original index of vertex ``i``
    of ``H``; vertices keep their relative order.
    """
    old = sorted(set(vertices))
    new = {v: i for i, v in enumerate(old)}
    edges = tuple(
        (new[u], new[v]) for u, v in g.edges if u in new and v in new
    )
    names = None if g.names is None else tuple(g.names[v] for v in old)
    return Graph(len(old), edges, names), old


def _merged_names(g: Graph, h: Graph) -> tuple[str, ...] | None:
    if g.names is None and h.names is None:
        return None
    return tuple(g.name(v) for v in range(g.n)) + tuple(
        h.name(v) for v in range(h.n)
    )


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Vertices of ``h`` are shifted by ``g.n``."""
    shift = g.n
    edges = g.edges + tuple((u + shift, v + shift) for u, v in h.edges)
    return Graph(g.n + h.n, edges, _merged_names(g, h))


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between the two sides."""
    u = disjoint_union(g, h)
    cross = tuple((a, g.n + b) for a in range(g.n) for b in range(h.n))
    return Graph(u.n, u.edges + cross, u.names)


def add_universal(g: Graph, name: str = "u") -> tuple[Graph, int]:
    """Append a vertex adjacent to all others; returns (graph, its index)."""
    u = g.n
    names = None if g.names is None else g.names + (name,)
    return Graph(g.n + 1, g.edges + tuple((v, u) for v in range(g.n)), names), u


def add_pendants(g: Graph, v: int, p: int, prefix: str = "p") -> tuple[Graph, list[int]]:
    """Append ``p`` degree-one vertices attached to ``v``."""
    if p < 0:
        raise GraphError("pendant count must be non-negative")
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    new = list(range(g.n, g.n + p))
    names = None
    if g.names is not None:
        names = g.names + tuple(f"{prefix}{i}" for i in range(p))
    return Graph(g.n + p, g.edges + tuple((v, w) for w in new), names), new


def line_graph(g: Graph) -> Graph:
    """Vertex ``i`` of the result is edge ``g.edges[i]``."""
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    pairs = set()
    for group in incident:
        pairs.update(itertools.combinations(group, 2))
    names = tuple(f"{g.name(u)}-{g.name(v)}" for u, v in g.edges)
    return Graph(g.m, tuple(pairs), names)


@dataclass(frozen=True)
class TotalGraphMap:
    """Tot(G) together with the images of V(G) and E(G) inside it."""

    total: Graph
    vertex_image: tuple[int, ...]
    edge_image: dict[Edge, int]
    kv_cliques: tuple[frozenset[int], ...]


def total_graph(g: Graph) -> TotalGraphMap:
    """Total graph: vertices ``0..n-1`` are V(G), ``n + i`` is ``g.edges[i]``."""
    n = g.n
    edge_image = {e: n + i for i, e in enumerate(g.edges)}
    pairs: list[Edge] = list(g.edges)
    incident: list[list[int]] = [[] for _ in range(n)]
    for e, t in edge_image.items():
        for end in e:
            pairs.append((end, t))
            incident[end].append(t)
    for group in incident:
        pairs.extend(itertools.combinations(group, 2))
    names = tuple(g.name(v) for v in range(n)) + tuple(
        f"{g.name(u)}-{g.name(v)}" for u, v in g.edges
    )
    total = Graph(n + g.m, tuple(pairs), names)
    kv = tuple(frozenset([v, *incident[v]]) for v in range(n))
    return TotalGraphMap(total, tuple(range(n)), edge_image, kv)


def euler_planarity(g: Graph) -> str:
    """Euler's necessary condition only: ``|E| <= 3|V| - 6`` for ``|V| >= 3``."""
    if g.n < 3 or g.m <= 3 * g.n - 6:
        return "possibly planar"
    return "not planar"


# ---------------------------------------------------------------------------
# canonical keys (for deduplicating small graphs only)


def graph6(g: Graph) -> str:
    """graph6 encoding of ``g`` as labelled (n <= 62)."""
    if g.n > 62:
        raise GraphError("graph6 short form supports n <= 62")
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if u in g.adj[v] else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(63 + g.n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


def _refine(g: Graph, colour: list[int]) -> list[int]:
    """Colour refinement; new colours are ranks of (old colour, neighbour
    colour multiset), so the cell order stays isomorphism invariant."""
    cells = len(set(colour))
    while True:
        sig = [(colour[v], tuple(sorted(colour[w] for w in g.adj[v]))) for v in range(g.n)]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(rank) == cells:
            return new
        colour, cells = new, len(rank)


def _adjacency_key(g: Graph, position: Sequence[int]) -> int:
    # bit order of graph6: pairs (u, v), u < v, listed by v then u
    order = sorted(range(g.n), key=position.__getitem__)
    key = 0
    for j in range(1, g.n):
        row = g.adj[order[j]]
        for i in range(j):
            key = (key << 1) | (order[i] in row)
    return key


def canonical_order(g: Graph) -> list[int]:
    """Position of each vertex in a canonical relabelling.

    Individualisation-refinement without automorphism pruning: every leaf of
    the search tree is a discrete ordered partition and the one with the
    least adjacency key wins. Exact, but meant for small graphs.
    """
    best: tuple[int, list[int]] | None = None

    def search(colour: list[int]) -> None:
        nonlocal best
        colour = _refine(g, colour)
        counts: dict[int, int] = {}
        for c in colour:
            counts[c] = counts.get(c, 0) + 1
        target = next((c for c in sorted(counts) if counts[c] > 1), None)
        if target is None:
            key = _adjacency_key(g, colour)
            if best is None or key < best[0]:
                best = (key, colour)
            return
        for v in range(g.n):
            if colour[v] == target:
                split = [2 * c for c in colour]
                split[v] -= 1
                search(split)

    search([len(g.adj[v]) for v in range(g.n)])
    return best[1] if best is not None else []


def canonical_graph6(g: Graph) -> str:
    """graph6 string of :func:`canonical_order`'s relabelling: equal strings
    exactly for isomorphic graphs."""
    pos = canonical_order(g)
    return graph6(Graph(g.n, tuple((pos[u], pos[v]) for u, v in g.edges)))


# ---------------------------------------------------------------------------
# DIMACS-like text I/O


def parse_dimacs(text: str) -> Graph:
    n = None
    declared_m = None
    pairs: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise GraphError(f"line {lineno}: bad header {line!r}")
            n, declared_m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: bad edge line {line!r}")
            pairs.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise GraphError(f"line {lineno}: unknown line {line!r}")
    if n is None:
        raise GraphError("missing 'p edge' header")
    g = from_edge_list(n, pairs)
    if declared_m is not None and declared_m != len(pairs) and declared_m != g.m:
        raise GraphError(f"header declares {declared_m} edges, found {len(pairs)}")
    return g


def format_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    try:
        return parse_dimacs(Path(path).read_text())
    except OSError as exc:
        raise GraphError(str(exc)) from exc


def write_graph(g: Graph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_dimacs(g, comment))


def perfect_elimination_order(g: Graph) -> list[int] | None:
    """A perfect elimination ordering, or ``None`` if ``g`` is not chordal.

    Maximum cardinality search produces a candidate order; it is accepted
    only if every vertex's later neighbours form a clique.
    """
    weight = [0] * g.n
    numbered = [False] * g.n
    visit: list[int] = []
    for _ in range(g.n):
        v = max((u for u in range(g.n) if not numbered[u]), key=lambda u: (weight[u], -u))
        numbered[v] = True
        visit.append(v)
        for w in g.adj[v]:
            if not numbered[w]:
                weight[w] += 1
    order = visit[::-1]
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [w for w in g.adj[v] if pos[w] > pos[v]]
        if not later:
            continue
        # the earliest later neighbour must see all the others
        parent = min(later, key=pos.__getitem__)
        if any(w != parent and w not in g.adj[parent] for w in later):
            return None
    return order


def is_chordal(g: Graph) -> bool:
    return perfect_elimination_order(g) is not None
