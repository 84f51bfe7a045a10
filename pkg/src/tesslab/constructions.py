"""Reduction graphs, their explicit covers, and the triangle gadgets.

Gadgets communicate through *terminal triangles*: in every 4-label total
cover of the host graph each terminal is a tile of its own (a 3-tile) in some
tessellation, and that label is the signal. The basic unit is a K4 with a
pendant triangle on each of its vertices; in any 4-label cover three of the
pendant triangles share a label and the fourth differs. Every gadget built here
is checked by enumerating the label patterns its terminals can take
(:func:`check_gadget`), so correctness never rests on the wiring argument.

Gadgets are glued by identifying terminal triangles. A terminal vertex with
neighbours outside its triangle is *occupied*; two terminals can be merged
when their occupied vertices fit in three slots.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .bounds import k_coloring, max_clique
from .covers import CliquePartition, TotalCover
from .graph import (
    Edge,
    Graph,
    GraphError,
    complement,
    complete_bipartite,
    cycle_graph,
    euler_planarity,
    line_graph,
    total_graph,
)
from .solvers.cnf import TotalCNF, build_cnf

Triangle = tuple[int, int, int]


class GadgetError(ValueError):
    """Malformed gadget input, or a gadget that fails its own check."""


class EnumerationTimeout(RuntimeError):
    """Cover enumeration ran out of time before it was complete."""


# ---------------------------------------------------------------------------
# fixed graphs


def example_3T_graph() -> Graph:
    """Two K4's {v_i} and {u_i} linked by the triangles {v_i, u_i, w_i}.

    Vertices 0-3 are v1..v4, 4-7 are u1..u4, 8-11 are w1..w4.
    """
    names = [f"v{i}" for i in range(1, 5)] + [f"u{i}" for i in range(1, 5)] + [
        f"w{i}" for i in range(1, 5)
    ]
    edges: list[Edge] = []
    for base in (0, 4):
        edges.extend(itertools.combinations(range(base, base + 4), 2))
    for i in range(4):
        edges.extend([(i, 4 + i), (i, 8 + i), (4 + i, 8 + i)])
    return Graph(12, tuple(edges), tuple(names))


def anchored_k4_graph() -> Graph:
    """K4 {a1, b1, c1, d1} with a pendant triangle {x1, x2, x3} on each x1.

    Vertices 0-3 are the clique, then a2, a3, b2, b3, c2, c3, d2, d3.
    """
    names = ["a1", "b1", "c1", "d1"]
    edges: list[Edge] = list(itertools.combinations(range(4), 2))
    for i, x in enumerate("abcd"):
        p = len(names)
        names += [f"{x}2", f"{x}3"]
        edges += [(i, p), (i, p + 1), (p, p + 1)]
    return Graph(12, tuple(edges), tuple(names))


ANCHORED_K4_TRIANGLES: tuple[Triangle, ...] = ((0, 4, 5), (1, 6, 7), (2, 8, 9), (3, 10, 11))


def line_graph_of_complete_bipartite(p: int) -> tuple[Graph, list[int], list[CliquePartition]]:
    """L(K_{p,p}) with the p-colouring from the edge colouring ``i + j mod p``
    and the two tessellations given by the two sides of the bipartition."""
    kpp = complete_bipartite(p, p)
    lg = line_graph(kpp)
    coloring = []
    rows: dict[int, list[int]] = {}
    cols: dict[int, list[int]] = {}
    for idx, (a, b) in enumerate(kpp.edges):
        i, j = a, b - p
        coloring.append((i + j) % p + 1)
        rows.setdefault(i, []).append(idx)
        cols.setdefault(j, []).append(idx)
    tcover = [CliquePartition(rows.values()), CliquePartition(cols.values())]
    return lg, coloring, tcover


# ---------------------------------------------------------------------------
# universal construction


@dataclass(frozen=True)
class UniversalConstruction:
    """H = u joined to (G^c plus t copies of C5) plus 2|V(G)| pendants on u.

    Vertex layout: ``0..n-1`` are V(G) in the complement, then ``5t`` cycle
    vertices, then ``u``, then the pendants.
    """

    graph: Graph
    source: Graph
    copies: int
    universal: int
    cycle_vertices: tuple[tuple[int, ...], ...]
    pendants: tuple[int, ...]


def c5_padded_construction(g: Graph, t: int) -> UniversalConstruction:
    if t < 0:
        raise ValueError("number of C5 copies must be non-negative")
    n = g.n
    comp = complement(g)
    names = [g.name(v) for v in range(n)]
    edges = list(comp.edges)
    cycles = []
    for s in range(t):
        base = n + 5 * s
        cycles.append(tuple(range(base, base + 5)))
        names += [f"c{s}_{i}" for i in range(5)]
        edges += [(base + i, base + (i + 1) % 5) for i in range(5)]
    u = n + 5 * t
    names.append("u")
    edges += [(v, u) for v in range(u)]
    pendants = tuple(range(u + 1, u + 1 + 2 * n))
    names += [f"p{i + 1}" for i in range(2 * n)]
    edges += [(u, p) for p in pendants]
    h = Graph(u + 1 + 2 * n, tuple(edges), tuple(names))
    return UniversalConstruction(h, g, t, u, tuple(cycles), pendants)


def universal_construction(g: Graph) -> UniversalConstruction:
    return c5_padded_construction(g, 0)


def _check_coloring(g: Graph, coloring: Sequence[int]) -> int:
    if len(coloring) != g.n or any(c < 1 for c in coloring):
        raise ValueError("colouring must give every vertex a colour >= 1")
    for u, v in g.edges:
        if coloring[u] == coloring[v]:
            raise ValueError(f"improper colouring at edge {(u, v)}")
    return max(coloring, default=0)


def _c5_total_coloring() -> tuple[list[int], list[int]]:
    """A total 4-colouring of C5 as (vertex colours, colours of edges i,i+1)."""
    c5 = cycle_graph(5)
    tot = total_graph(c5)
    col = k_coloring(tot.total, 4)
    vertex = [col[v] for v in range(5)]
    edge = [col[tot.edge_image[(min(i, (i + 1) % 5), max(i, (i + 1) % 5))]] for i in range(5)]
    return vertex, edge


def universal_cover(g: Graph, coloring: Sequence[int], t: int = 0) -> TotalCover:
    """The explicit ``2|V| + c + 3t + 1`` label cover of the padded construction.

    ``coloring`` is a proper colouring of ``g`` with colours ``1..c``. Labels
    ``1..c'`` (c' = c + 3t) hold u together with one colour class of the
    complement side each; label ``c'+j`` holds the pendant tile {u, p_j}; the
    edges of G^c are spread over ``c'+1..c'+n`` by ``a + b mod n``, and each C5
    copy is total-coloured inside ``c'+1..c'+4``.
    """
    c = _check_coloring(g, coloring)
    n = g.n
    if t and 2 * n < 4:
        raise ValueError("C5 padding needs at least two original vertices")
    build = c5_padded_construction(g, t)
    h = build.graph
    cp = c + 3 * t
    k = cp + 2 * n + 1
    colors = [0] * h.n
    tiles: dict[int, list[list[int]]] = {label: [] for label in range(1, k + 1)}
    u = build.universal
    # colour classes of the complement side
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(coloring[v], []).append(v)
    for s, cyc in enumerate(build.cycle_vertices):
        # complement of C5 is C5 again; its classes are the C5 edges {0,1}, {2,3}, {4}
        for r, group in enumerate(([0, 1], [2, 3], [4])):
            classes.setdefault(c + 3 * s + r + 1, []).extend(cyc[i] for i in group)
    for label in range(1, cp + 1):
        tiles[label].append([u] + classes.get(label, []))
    for j, p in enumerate(build.pendants):
        tiles[cp + j + 1].append([u, p])
        colors[p] = 1
    for a, b in complement(g).edges:
        tiles[cp + 1 + (a + b) % n].append([a, b])
    for v in range(n):
        colors[v] = cp + n + 1 + v
    vcol, ecol = _c5_total_coloring()
    for cyc in build.cycle_vertices:
        for i in range(5):
            colors[cyc[i]] = cp + vcol[i]
            tiles[cp + ecol[i]].append([cyc[i], cyc[(i + 1) % 5]])
    colors[u] = k
    parts = {
        label: CliquePartition.from_tiles(h.n, blocks)
        for label, blocks in tiles.items()
        if blocks
    }
    return TotalCover(k, colors, parts)


# ---------------------------------------------------------------------------
# chordal construction


@dataclass(frozen=True)
class ChordalConstruction:
    """Layout: ``e_0..e_{m-1}``, then ``e'_0..e'_{m-1}``, then ``v_0..v_{n-1}``,
    then ``m+1`` pendants for each e'_i and each v_i in that order."""

    graph: Graph
    source: Graph
    clique: tuple[int, ...]
    primes: tuple[int, ...]
    vertices: tuple[int, ...]
    pendants: tuple[int, ...]

    def split_witness(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(clique, stable set, stable set) partition of V(H)."""
        return self.clique, self.primes + self.vertices, self.pendants


def chordal_construction(g: Graph) -> ChordalConstruction:
    if g.n == 0 or any(g.degree(v) != 4 for v in range(g.n)):
        raise GraphError("chordal construction needs a 4-regular graph")
    m, n = g.m, g.n
    e = list(range(m))
    ep = list(range(m, 2 * m))
    vs = list(range(2 * m, 2 * m + n))
    names = [f"e{j}" for j in range(m)] + [f"e'{i}" for i in range(m)] + [
        f"v:{g.name(v)}" for v in range(n)
    ]
    edges: list[Edge] = list(itertools.combinations(e, 2))
    for i in range(m):
        edges += [(e[j], ep[i]) for j in range(m) if j not in (i, (i + 1) % m)]
    for j, (a, b) in enumerate(g.edges):
        edges += [(e[j], vs[a]), (e[j], vs[b])]
    nxt = 2 * m + n
    pend = []
    for owner in ep + vs:
        for r in range(m + 1):
            names.append(f"{names[owner]}#p{r}")
            edges.append((owner, nxt))
            pend.append(nxt)
            nxt += 1
    h = Graph(nxt, tuple(edges), tuple(names))
    return ChordalConstruction(h, g, tuple(e), tuple(ep), tuple(vs), tuple(pend))


def greedy_complete(
    h: Graph, k: int, colors: list[int], tiles: dict[int, list[int]]
) -> TotalCover:
    """Finish a partial cover: cover each uncovered edge with the lowest label
    whose tiles can merge, then give every uncoloured vertex the lowest colour
    clear of its neighbours and of the labels of its non-trivial tiles.

    ``tiles[label][v]`` is the tile id (smallest member) of ``v``.
    """
    members: dict[int, dict[int, set[int]]] = {}
    for label, row in tiles.items():
        groups: dict[int, set[int]] = {}
        for v, tid in enumerate(row):
            groups.setdefault(tid, set()).add(v)
        members[label] = groups
    for a, b in h.edges:
        if any(row[a] == row[b] for row in tiles.values()):
            continue
        for label in range(1, k + 1):
            if label in (colors[a], colors[b]):
                continue
            row = tiles[label]
            union = members[label][row[a]] | members[label][row[b]]
            if not h.is_clique(union) or any(colors[w] == label for w in union):
                continue
            new_id = min(union)
            for w in union:
                row[w] = new_id
            members[label] = _regroup(row)
            break
        else:
            raise ValueError(f"greedy completion failed at edge {(a, b)}")
    for v in range(h.n):
        if colors[v]:
            continue
        blocked = {colors[w] for w in h.adj[v]}
        blocked |= {label for label, row in tiles.items() if len(members[label][row[v]]) > 1}
        c = 1
        while c in blocked:
            c += 1
        colors[v] = c
    parts = {}
    for label, groups in members.items():
        if any(len(s) > 1 for s in groups.values()):
            parts[label] = CliquePartition(groups.values())
    return TotalCover(max(k, max(colors, default=0)), colors, parts)


def _regroup(row: list[int]) -> dict[int, set[int]]:
    groups: dict[int, set[int]] = {}
    for v, tid in enumerate(row):
        groups.setdefault(tid, set()).add(v)
    return groups


def chordal_cover(g: Graph, coloring3: Sequence[int]) -> TotalCover:
    """The ``m + 3`` label cover of :func:`chordal_construction` (1-based colours)."""
    c = _check_coloring(g, coloring3)
    if c > 3:
        raise ValueError("expected a proper colouring with colours 1..3")
    build = chordal_construction(g)
    h = build.graph
    m = g.m
    k = m + 3
    colors = [0] * h.n
    tiles = {label: list(range(h.n)) for label in range(1, k + 1)}

    def place(label: int, block: list[int]) -> None:
        tid = min(block)
        for w in block:
            tiles[label][w] = tid

    for j, x in enumerate(build.clique):
        colors[x] = j + 1
    for i, x in enumerate(build.primes):
        colors[x] = i + 1
        block = [x] + [build.clique[j] for j in range(m) if j not in (i, (i + 1) % m)]
        place((i + 1) % m + 1, block)
    for v, x in enumerate(build.vertices):
        incident = [build.clique[j] for j, e in enumerate(g.edges) if v in e]
        place(coloring3[v] + m, [x] + incident)
    return greedy_complete(h, k, colors, tiles)


# ---------------------------------------------------------------------------
# terminal-signature enumeration


ROLES = ("equal", "not_equal", "duplicator", "shifter", "anchored_k4")


def _predicate(role: str) -> Callable[[tuple[int, ...]], bool]:
    if role == "equal":
        return lambda s: s[0] != 0 and s[0] == s[1]
    if role == "not_equal":
        return lambda s: s[0] != 0 and s[1] != 0 and s[0] != s[1]
    if role == "duplicator":
        return lambda s: s[0] != 0 and all(x == s[0] for x in s)
    if role == "shifter":
        return lambda s: 0 not in s and s[0] == s[3] and s[1] == s[2] and s[0] != s[1]
    if role == "anchored_k4":
        def three_and_one(s):
            if 0 in s:
                return False
            counts = sorted(s.count(x) for x in set(s))
            return counts == [1, 3]
        return three_and_one
    raise GadgetError(f"unknown role {role!r}")


def _arity_ok(role: str, count: int) -> bool:
    return {
        "equal": count == 2,
        "not_equal": count == 2,
        "shifter": count == 4,
        "anchored_k4": count == 4,
    }.get(role, count >= 1)


@dataclass(frozen=True)
class GadgetCheckReport:
    """Outcome of enumerating the 4-label covers of a gadget.

    ``signatures`` holds, for each designated triangle, the label under which
    it is a tile on its own (0 when it is not), closed under relabelling.
    ``total_covers_found`` counts enumerated covers: every cover (with the
    colours of one maximum clique fixed) when ``exhaustive``, otherwise one
    cover per distinct signature. ``flexible`` says every signature allowed
    by the role is realised.
    """

    role: str
    total_covers_found: int
    property_holds: bool
    counterexample: TotalCover | None
    signatures: frozenset
    flexible: bool
    exhaustive: bool
    fixed_clique: tuple[int, ...]
    elapsed: float

    def __post_init__(self) -> None:
        if self.property_holds and self.counterexample is not None:
            raise ValueError("a passing check cannot carry a counterexample")


def _validate_triangles(g: Graph, triangles: Sequence[Sequence[int]]) -> list[Triangle]:
    out = []
    for tri in triangles:
        tri = tuple(int(v) for v in tri)
        if len(tri) != 3 or len(set(tri)) != 3 or not all(0 <= v < g.n for v in tri):
            raise GadgetError(f"{tri} is not three distinct vertices")
        if not g.is_clique(tri):
            raise GadgetError(f"{tri} is not a triangle")
        out.append(tri)
    return out


def _add_three_tile_vars(cnf: TotalCNF, g: Graph, triangles: Sequence[Triangle]) -> list[list[int]]:
    """z[t][i-1] <-> triangle t is exactly a tile of partition i."""
    index = g.edge_index()
    key = lambda a, b: index[(a, b) if a < b else (b, a)]
    out = []
    for a, b, c in triangles:
        inner = [key(a, b), key(a, c), key(b, c)]
        outside = sorted(g.adj[a] & g.adj[b] & g.adj[c])
        row = []
        for i in range(1, cnf.k + 1):
            z = cnf.new_var()
            ys = [cnf.y(e, i) for e in inner]
            grow = [cnf.y(key(a, w), i) for w in outside]
            for y in ys:
                cnf.clauses.append([-z, y])
            for y in grow:
                cnf.clauses.append([-z, -y])
            cnf.clauses.append([-y for y in ys] + grow + [z])
            row.append(z)
        out.append(row)
    return out


def _all_relabellings(sigs: Iterable[tuple[int, ...]], k: int) -> frozenset:
    out = set()
    for perm in itertools.permutations(range(1, k + 1)):
        table = (0,) + perm
        out.update(tuple(table[x] for x in s) for s in sigs)
    return frozenset(out)


def _allowed(role: str, arity: int, k: int) -> frozenset:
    pred = _predicate(role)
    return frozenset(s for s in itertools.product(range(k + 1), repeat=arity) if pred(s))


def enumerate_signatures(
    g: Graph,
    triangles: Sequence[Sequence[int]],
    role: str,
    k: int = 4,
    exhaustive: bool = False,
    timeout: float | None = None,
) -> GadgetCheckReport:
    """Enumerate the k-label covers of ``g`` through their terminal signatures.

    Label symmetry is broken by fixing the colours of a maximum clique (up to
    ``k`` of its vertices) to ``1, 2, ...``; the role predicates are invariant
    under relabelling, so checking representatives is complete. With
    ``exhaustive`` every cover is visited, otherwise covers are blocked per
    signature, which visits every signature exactly once.
    """
    from pysat.solvers import Solver

    tris = _validate_triangles(g, triangles)
    if not _arity_ok(role, len(tris)):
        raise GadgetError(f"role {role} cannot take {len(tris)} designated triangles")
    pred = _predicate(role)
    start = time.monotonic()
    cnf = build_cnf(g, k)
    base_vars = cnf.nvars
    z = _add_three_tile_vars(cnf, g, tris)
    fixed = tuple(max_clique(g, max(g.n, 64))[:k])
    for i, v in enumerate(fixed):
        cnf.clauses.append([cnf.x(v, i + 1)])
    found = 0
    reps: set[tuple[int, ...]] = set()
    counterexample = None
    with Solver(name="cadical153", bootstrap_with=cnf.clauses) as solver:
        while solver.solve():
            model = solver.get_model()
            true = {lit for lit in model if lit > 0}
            sig = tuple(next((i + 1 for i, zz in enumerate(row) if zz in true), 0) for row in z)
            found += 1
            reps.add(sig)
            if counterexample is None and not pred(sig):
                counterexample = cnf.decode(model)
            if exhaustive:
                solver.add_clause([-lit for lit in model if abs(lit) <= base_vars])
            else:
                solver.add_clause([-zz if zz in true else zz for row in z for zz in row])
            if timeout is not None and time.monotonic() - start > timeout:
                raise EnumerationTimeout(f"stopped after {found} covers")
    sigs = _all_relabellings(reps, k)
    holds = found > 0 and counterexample is None
    return GadgetCheckReport(
        role=role,
        total_covers_found=found,
        property_holds=holds,
        counterexample=counterexample,
        signatures=sigs,
        flexible=sigs == _allowed(role, len(tris), k),
        exhaustive=exhaustive,
        fixed_clique=fixed,
        elapsed=time.monotonic() - start,
    )


def check_gadget(
    g: Graph,
    role: str,
    designated: Sequence[Sequence[int]],
    timeout: float | None = None,
) -> GadgetCheckReport:
    """Test the relation a gadget role forces on its designated triangles.

    equal: both are 3-tiles with one label; not_equal: 3-tiles with distinct
    labels; duplicator: all share one label; shifter: T1, T4 share a label and
    T2, T3 share another. A graph with no 4-label cover fails the check.
    """
    if role not in ROLES:
        raise GadgetError(f"unknown role {role!r}")
    return enumerate_signatures(g, designated, role, timeout=timeout)


def find_anchored_k4(g: Graph) -> tuple[Triangle, ...]:
    """A K4 plus four vertex-disjoint triangles, one through each clique vertex
    and otherwise outside the clique. Raises :class:`GadgetError` if absent."""
    for quad in itertools.combinations(range(g.n), 4):
        if not g.is_clique(quad):
            continue
        qs = set(quad)
        options = []
        for x in quad:
            opts = [
                (x, y, w)
                for y, w in itertools.combinations(sorted(g.adj[x] - qs), 2)
                if w in g.adj[y]
            ]
            options.append(opts)
        for choice in itertools.product(*options):
            used = [v for tri in choice for v in tri[1:]]
            if len(set(used)) == len(used):
                return tuple(choice)
    raise GadgetError("no K4 with four pendant triangles")


def check_anchored_k4(g: Graph, timeout: float | None = None) -> GadgetCheckReport:
    """Enumerate every 4-label cover and test that three of the four pendant
    triangles are 3-tiles under one label and the fourth under another."""
    triangles = find_anchored_k4(g)
    return enumerate_signatures(g, triangles, "anchored_k4", exhaustive=True, timeout=timeout)


# ---------------------------------------------------------------------------
# gadget assembly


@dataclass(frozen=True)
class Gadget:
    role: str
    graph: Graph
    terminals: tuple[Triangle, ...]


@dataclass
class _Port:
    occupied: list[int]
    free: list[int]

    @property
    def vertices(self) -> list[int]:
        return self.occupied + self.free


class _Assembly:
    """Names, edges and a union-find over vertex ids; terminals are ports."""

    def __init__(self) -> None:
        self.names: list[str] = []
        self.ids: dict[str, int] = {}
        self.edges: list[Edge] = []
        self.parent: list[int] = []
        self.log: list[str] = []

    def vertex(self, name: str) -> int:
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
            self.parent.append(len(self.parent))
        return self.ids[name]

    def clique(self, *names: str) -> list[int]:
        vs = [self.vertex(x) for x in names]
        self.edges.extend(itertools.combinations(vs, 2))
        return vs

    def port(self, *names: str) -> _Port:
        vs = [self.vertex(x) for x in names]
        degree = {v: 0 for v in vs}
        for a, b in self.edges:
            if a in degree:
                degree[a] += 1
            if b in degree:
                degree[b] += 1
        return _Port([v for v in vs if degree[v] > 2], [v for v in vs if degree[v] <= 2])

    def add(self, prefix: str, gadget: Gadget) -> list[_Port]:
        g = gadget.graph
        base = len(self.names)
        for v in range(g.n):
            self.vertex(f"{prefix}.{g.name(v)}")
        self.edges.extend((base + a, base + b) for a, b in g.edges)
        self.log.append(f"{prefix}: {gadget.role} ({g.n} vertices)")
        return [
            _Port(
                [base + v for v in tri if g.degree(v) > 2],
                [base + v for v in tri if g.degree(v) <= 2],
            )
            for tri in gadget.terminals
        ]

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def _union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def merge(self, x: _Port, y: _Port) -> _Port:
        """Identify terminal ``y`` with terminal ``x``."""
        k = len(y.occupied)
        if len(x.occupied) + k > 3:
            raise GadgetError("terminals have too many occupied vertices to merge")
        slots = x.free[:k]
        for a, b in zip(slots, y.occupied):
            self._union(a, b)
        for a, b in zip(x.occupied + x.free[k:], y.free):
            self._union(a, b)
        return _Port(x.occupied + slots, x.free[k:])

    def connect(self, x: _Port, y: _Port, prefix: str) -> None:
        """Force equal signals on ``x`` and ``y``, through an equal gadget if
        they cannot be merged directly."""
        if len(x.occupied) + len(y.occupied) <= 3:
            self.merge(x, y)
            return
        a, b = self.add(prefix, equal())
        self.merge(x, a)
        self.merge(b, y)

    def finish(self, ports: Sequence[_Port]) -> tuple[Graph, list[Triangle]]:
        roots = sorted({self.find(v) for v in range(len(self.names))})
        index = {r: i for i, r in enumerate(roots)}
        relabel = [index[self.find(v)] for v in range(len(self.names))]
        edges = {
            (min(relabel[a], relabel[b]), max(relabel[a], relabel[b])) for a, b in self.edges
        }
        if any(a == b for a, b in edges):
            raise GadgetError("merging produced a self-loop")
        g = Graph(len(roots), tuple(edges), tuple(self.names[r] for r in roots))
        tris = [tuple(sorted(relabel[v] for v in p.vertices)) for p in ports]
        return g, tris


def _unit_gadget() -> Gadget:
    return Gadget("anchored_k4", anchored_k4_graph(), ANCHORED_K4_TRIANGLES)


@functools.lru_cache(maxsize=None)
def not_equal() -> Gadget:
    """A K4 unit whose third and fourth triangles are tied by two cross edges,
    which forces them onto one label and so the first two apart."""
    base = anchored_k4_graph()
    names = base.names
    idx = {x: i for i, x in enumerate(names)}
    extra = ((idx["c2"], idx["d3"]), (idx["c3"], idx["d2"]))
    g = Graph(base.n, base.edges + extra, names)
    return Gadget("not_equal", g, ANCHORED_K4_TRIANGLES[:2])


@functools.lru_cache(maxsize=None)
def equal() -> Gadget:
    """A K4 unit whose third and fourth triangles are forced apart by a
    not-equal gadget, which leaves the first two on one label."""
    asm = _Assembly()
    unit = asm.add("u", _unit_gadget())
    ne = asm.add("ne", not_equal())
    asm.merge(unit[2], ne[0])
    asm.merge(unit[3], ne[1])
    g, tris = asm.finish(unit[:2])
    return Gadget("equal", g, tuple(tris))


@functools.lru_cache(maxsize=None)
def duplicator(d: int) -> Gadget:
    """``d`` terminal triangles chained by equal gadgets."""
    if d < 1:
        raise GadgetError("duplicator needs at least one output")
    asm = _Assembly()
    first = asm.add("eq0", equal())
    outputs = [first[0]]
    cur = first[1]
    for i in range(1, d - 1):
        a, b = asm.add(f"eq{i}", equal())
        outputs.append(asm.merge(cur, a))
        cur = b
    if d > 1:
        outputs.append(cur)
    g, tris = asm.finish(outputs)
    return Gadget("duplicator", g, tuple(tris))


@functools.lru_cache(maxsize=None)
def shifter() -> Gadget:
    """Exchange two signals: T1 = T4 and T2 = T3, with T1 != T2.

    Core: triangles abc, bde, cef, bce; an equal gadget ties a triangle at
    ``a`` to one at ``d``. T1 (at a) shares a vertex with T3 (at f) and T2 (at
    d) shares one with T4 (at f).
    """
    asm = _Assembly()
    for tri in (("a", "b", "c"), ("b", "d", "e"), ("c", "e", "f"), ("b", "c", "e")):
        asm.clique(*tri)
    asm.clique("a", "t1", "s")
    asm.clique("f", "t3", "s")
    asm.clique("d", "t2", "s2")
    asm.clique("f", "t4", "s2")
    asm.clique("a", "ea1", "ea2")
    asm.clique("d", "ed1", "ed2")
    at_a = asm.port("a", "ea1", "ea2")
    at_d = asm.port("d", "ed1", "ed2")
    terms = [asm.port("a", "t1", "s"), asm.port("d", "t2", "s2"),
             asm.port("f", "t3", "s"), asm.port("f", "t4", "s2")]
    tie = asm.add("eq", equal())
    asm.merge(at_a, tie[0])
    asm.merge(at_d, tie[1])
    g, tris = asm.finish(terms)
    return Gadget("shifter", g, tuple(tris))


def build_gadget(role: str, d: int = 2) -> Gadget:
    if role == "equal":
        return equal()
    if role == "not_equal":
        return not_equal()
    if role == "duplicator":
        return duplicator(d)
    if role == "shifter":
        return shifter()
    if role == "anchored_k4":
        return _unit_gadget()
    raise GadgetError(f"unknown role {role!r}")


@functools.lru_cache(maxsize=None)
def verified_gadget(role: str, d: int = 2) -> Gadget:
    """Build a gadget and refuse to return it unless it passes its check and
    realises every signature its role allows."""
    gadget = build_gadget(role, d)
    report = check_gadget(gadget.graph, role, gadget.terminals)
    if not (report.property_holds and report.flexible):
        raise GadgetError(f"{role} gadget fails its check")
    return gadget


# ---------------------------------------------------------------------------
# planar reduction


def _u_crossings(g: Graph) -> dict[int, list[Edge]]:
    """Edges of ``g`` crossed by a new vertex's link to each vertex.

    The new vertex sits in a largest face of each component of a planar
    embedding; a vertex off that face is reached along a shortest path in the
    dual graph, crossing the listed edges in order.
    """
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    planar, emb = nx.check_planarity(nxg)
    if not planar:
        raise GraphError("input graph is not planar")
    face_of: dict[tuple[int, int], int] = {}
    faces: list[list[tuple[int, int]]] = []
    for v in range(g.n):
        for w in emb.neighbors_cw_order(v):
            if (v, w) in face_of:
                continue
            fi = len(faces)
            he = (v, w)
            halves = []
            while he not in face_of:
                face_of[he] = fi
                halves.append(he)
                he = emb.next_face_half_edge(*he)
            faces.append(halves)
    out: dict[int, list[Edge]] = {}
    for comp in sorted(nx.connected_components(nxg), key=min):
        comp_faces = [fi for fi, hs in enumerate(faces) if hs[0][0] in comp]
        if not comp_faces:
            continue
        nodes = {fi: {a for a, _ in faces[fi]} for fi in comp_faces}
        outer = max(comp_faces, key=lambda fi: (len(nodes[fi]), -fi))
        parent: dict[int, tuple[int, Edge] | None] = {outer: None}
        queue = [outer]
        for fi in queue:
            for a, b in faces[fi]:
                nb = face_of[(b, a)]
                if nb not in parent:
                    parent[nb] = (fi, (min(a, b), max(a, b)))
                    queue.append(nb)
        for x in sorted(comp):
            if x in nodes[outer]:
                continue
            target = next(fi for fi in queue if x in nodes[fi])
            path = []
            while parent[target] is not None:
                prev, edge = parent[target]
                path.append(edge)
                target = prev
            out[x] = path[::-1]
    return out


@dataclass(frozen=True)
class ReductionResult:
    """The reduction graph plus what is needed to read a colouring back."""

    graph: Graph
    source: Graph
    signals: tuple[Triangle, ...]
    crossings: tuple[tuple[int, Edge], ...]
    log: tuple[str, ...]
    euler: str

    def coloring_from_cover(self, cover: TotalCover) -> list[int]:
        """Label of each signal triangle's 3-tile, for the vertices of G then u."""
        out = []
        for tri in self.signals:
            label = 0
            for i, p in cover.partitions.items():
                if p.tile_of()[tri[0]] == tri:
                    label = i
                    break
            out.append(label)
        return out


def planar_reduction(g: Graph) -> ReductionResult:
    """Graph that has a 4-label total cover iff ``g`` is 3-colourable.

    Joins a universal vertex u, replaces each vertex of G + u by a duplicator
    with one output per incident edge, each edge by a not-equal gadget, and
    each crossing of a u-link with an edge of the planar drawing of ``g`` by a
    shifter. The signals crossing at a shifter belong to u and to another
    vertex, so the shifter's "different labels" condition costs nothing.
    """
    if g.max_degree > 4:
        raise GraphError("planar reduction expects maximum degree at most 4")
    crossing_paths = _u_crossings(g)
    u = g.n
    neighbours = {v: sorted(g.adj[v]) + [u] for v in range(g.n)}
    neighbours[u] = list(range(g.n))
    asm = _Assembly()
    outputs: dict[int, dict[int, _Port]] = {}
    signals = []
    for v in range(g.n + 1):
        deg = len(neighbours[v])
        name = "u" if v == u else g.name(v)
        ports = asm.add(f"dup[{name}]", verified_gadget("duplicator", max(deg, 1)))
        outputs[v] = dict(zip(neighbours[v], ports))
        signals.append(ports[0])
    verified_gadget("equal")
    verified_gadget("not_equal")
    verified_gadget("shifter")
    shifters: dict[tuple[Edge, int], list[_Port]] = {}
    crossings = []
    for x in sorted(crossing_paths):
        for e in crossing_paths[x]:
            tag = f"sh[{g.name(e[0])}-{g.name(e[1])}|u-{g.name(x)}]"
            shifters[(e, x)] = asm.add(tag, verified_gadget("shifter"))
            crossings.append((x, e))
    wire = itertools.count()

    def link(a: int, b: int, cur: _Port, passes: list[tuple[_Port, _Port]]) -> None:
        label = f"{'u' if a == u else g.name(a)}-{'u' if b == u else g.name(b)}"
        for into, out in passes:
            asm.connect(cur, into, f"wire{next(wire)}")
            cur = out
        ne = asm.add(f"ne[{label}]", verified_gadget("not_equal"))
        asm.connect(cur, ne[0], f"wire{next(wire)}")
        asm.connect(outputs[b][a], ne[1], f"wire{next(wire)}")

    for a, b in g.edges:
        passes = [
            (shifters[(e, x)][1], shifters[(e, x)][2])
            for x, e in crossings
            if e == (a, b)
        ]
        link(a, b, outputs[a][b], passes)
    for x in range(g.n):
        passes = [(shifters[(e, x)][0], shifters[(e, x)][3]) for e in crossing_paths.get(x, [])]
        link(u, x, outputs[u][x], passes)
    h, tris = asm.finish(signals)
    log = list(asm.log)
    log.append(f"crossings replaced by shifters: {len(crossings)}")
    log.append(f"result: {h.n} vertices, {h.m} edges")
    return ReductionResult(h, g, tuple(tris), tuple(crossings), tuple(log), euler_planarity(h))
