"""DIMACS CNF encoding of k-total tessellability, decoding, and SAT back ends.

Variables (1-based, labels ``i`` in ``1..k``):

* ``x(v, i) = v*k + i`` -- vertex ``v`` has colour ``i``;
* ``y(e, i) = n*k + e*k + i`` -- the endpoints of edge ``e`` (index into
  ``g.edges``) share a tile in partition ``i``.

Clauses: exactly one colour per vertex; proper colouring; every edge in some
partition; ``x(v,i) -> not y(vw,i)``; and, for every pair of edges ``uv, vw``
and every label, transitivity ``y(uv,i) & y(vw,i) -> y(uw,i)`` when ``uw`` is
an edge, or ``not (y(uv,i) & y(vw,i))`` when it is not. Models correspond
one-to-one to total covers with all ``k`` partitions given explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..covers import CliquePartition, TotalCover
from ..graph import Graph

Clause = list[int]


@dataclass
class TotalCNF:
    g: Graph
    k: int
    clauses: list[Clause] = field(default_factory=list)
    nvars: int = 0

    def x(self, v: int, i: int) -> int:
        return v * self.k + i

    def y(self, e: int, i: int) -> int:
        return self.g.n * self.k + e * self.k + i

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def to_dimacs(self) -> str:
        n, m, k = self.g.n, self.g.m, self.k
        header = [
            f"c k-total tessellability, n={n} m={m} k={k}",
            "c x(v,i) = v*k + i          : vertex v (0-based) has colour i (1..k)",
            "c y(e,i) = n*k + e*k + i    : edge e (0-based, sorted edge order) is inside a tile of partition i",
            "c clauses: one colour per vertex; proper colouring; each edge in some partition;",
            "c          x(v,i) -> -y(vw,i); tiles closed under adjacent edge pairs, non-edges forbidden",
        ]
        header.extend(f"c edge {e} = {u + 1} {v + 1}" for e, (u, v) in enumerate(self.g.edges))
        body = [f"p cnf {self.nvars} {len(self.clauses)}"]
        body.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(header + body) + "\n"

    def decode(self, model: Iterable[int]) -> TotalCover:
        true = {lit for lit in model if lit > 0}
        g, k = self.g, self.k
        colors = []
        for v in range(g.n):
            cs = [i for i in range(1, k + 1) if self.x(v, i) in true]
            colors.append(cs[0] if cs else 0)
        parts = {}
        for i in range(1, k + 1):
            parent = list(range(g.n))

            def find(a: int) -> int:
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            any_edge = False
            for e, (u, v) in enumerate(g.edges):
                if self.y(e, i) in true:
                    any_edge = True
                    ru, rv = find(u), find(v)
                    if ru != rv:
                        parent[max(ru, rv)] = min(ru, rv)
            if any_edge:
                groups: dict[int, list[int]] = {}
                for v in range(g.n):
                    groups.setdefault(find(v), []).append(v)
                parts[i] = CliquePartition(groups.values())
        return TotalCover(k, colors, parts)

    def encode_cover(self, cover: TotalCover) -> list[int]:
        """The full assignment (as literals) representing ``cover``."""
        lits = []
        tiles = {i: p.tile_of() for i, p in cover.partitions.items()}
        for v in range(self.g.n):
            for i in range(1, self.k + 1):
                lits.append(self.x(v, i) if cover.coloring[v] == i else -self.x(v, i))
        for e, (u, v) in enumerate(self.g.edges):
            for i in range(1, self.k + 1):
                t = tiles.get(i)
                inside = t is not None and t[u] == t[v]
                lits.append(self.y(e, i) if inside else -self.y(e, i))
        return lits


def build_cnf(g: Graph, k: int) -> TotalCNF:
    cnf = TotalCNF(g, k)
    n, m = g.n, g.m
    cnf.nvars = n * k + m * k
    x, y = cnf.x, cnf.y
    cl = cnf.clauses
    labels = range(1, k + 1)
    for v in range(n):
        cl.append([x(v, i) for i in labels])
        for i, j in itertools.combinations(labels, 2):
            cl.append([-x(v, i), -x(v, j)])
    index = g.edge_index()
    for e, (u, v) in enumerate(g.edges):
        for i in labels:
            cl.append([-x(u, i), -x(v, i)])
        cl.append([y(e, i) for i in labels])
        for i in labels:
            cl.append([-x(u, i), -y(e, i)])
            cl.append([-x(v, i), -y(e, i)])
    for v in range(n):
        inc = sorted(g.adj[v])
        for a, b in itertools.combinations(inc, 2):
            e1 = index[(min(a, v), max(a, v))]
            e2 = index[(min(b, v), max(b, v))]
            third = index.get((min(a, b), max(a, b)))
            for i in labels:
                if third is None:
                    cl.append([-y(e1, i), -y(e2, i)])
                else:
                    cl.append([-y(e1, i), -y(e2, i), y(third, i)])
    return cnf


def export_cnf(g: Graph, k: int) -> str:
    """DIMACS text for "g has a k-total tessellation cover"."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return build_cnf(g, k).to_dimacs()


def parse_dimacs_cnf(text: str) -> tuple[int, list[Clause]]:
    nvars = 0
    clauses: list[Clause] = []
    current: Clause = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            nvars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    return nvars, clauses


# ---------------------------------------------------------------------------
# solving


def dpll(nvars: int, clauses: Sequence[Clause]) -> list[int] | None:
    """Small DPLL with two watched literals and chronological backtracking.

    Independent of any external solver; intended for desk-scale instances.
    """
    value = [0] * (nvars + 1)  # 0 unassigned, 1 true, -1 false
    watches: dict[int, list[int]] = {}
    cls = [list(c) for c in clauses]
    units = []
    for ci, c in enumerate(cls):
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
        for lit in c[:2]:
            watches.setdefault(lit, []).append(ci)
    trail: list[int] = []

    def lit_value(lit: int) -> int:
        val = value[abs(lit)]
        return val if lit > 0 else -val

    def assign(lit: int) -> None:
        value[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)

    def propagate(start: int) -> bool:
        head = start
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit, [])
            keep = []
            ok = True
            idx = 0
            while idx < len(watching):
                ci = watching[idx]
                idx += 1
                c = cls[ci]
                if len(c) == 1:
                    keep.append(ci)
                    if lit_value(c[0]) == -1:
                        ok = False
                        break
                    continue
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_value(c[0]) == 1:
                    keep.append(ci)
                    continue
                for j in range(2, len(c)):
                    if lit_value(c[j]) != -1:
                        c[1], c[j] = c[j], c[1]
                        watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    other = lit_value(c[0])
                    if other == -1:
                        ok = False
                        break
                    if other == 0:
                        assign(c[0])
            if not ok:
                keep.extend(watching[idx:])
                watches[false_lit] = keep
                return False
            watches[false_lit] = keep
        return True

    for lit in units:
        if lit_value(lit) == -1:
            return None
        if lit_value(lit) == 0:
            assign(lit)
    if not propagate(0):
        return None

    # explicit stack of (trail length before decision, decision literal, flipped?)
    stack: list[tuple[int, int, bool]] = []
    var = 1
    while True:
        while var <= nvars and value[var] != 0:
            var += 1
        if var > nvars:
            return [v if value[v] > 0 else -v for v in range(1, nvars + 1)]
        mark = len(trail)
        stack.append((mark, var, False))
        assign(var)
        ok = propagate(mark)
        while not ok:
            while stack and stack[-1][2]:
                mark, _, _ = stack.pop()
                for lit in trail[mark:]:
                    value[abs(lit)] = 0
                del trail[mark:]
            if not stack:
                return None
            mark, dvar, _ = stack.pop()
            for lit in trail[mark:]:
                value[abs(lit)] = 0
            del trail[mark:]
            stack.append((mark, dvar, True))
            assign(-dvar)
            ok = propagate(mark)
        var = 1


def sat_solve(nvars: int, clauses: Sequence[Clause], backend: str = "cadical153") -> list[int] | None:
    """Solve with pysat (``backend`` is a pysat solver name) or ``"dpll"``."""
    if backend == "dpll":
        return dpll(nvars, clauses)
    from pysat.solvers import Solver

    with Solver(name=backend, bootstrap_with=clauses) as s:
        if s.solve():
            model = s.get_model() or []
            seen = {abs(l) for l in model}
            return list(model) + [-v for v in range(1, nvars + 1) if v not in seen]
        return None


def decide_total_sat(g: Graph, k: int, backend: str = "cadical153") -> TotalCover | None:
    cnf = build_cnf(g, k)
    model = sat_solve(cnf.nvars, cnf.clauses, backend)
    return None if model is None else cnf.decode(model)
