"""Exhaustive sweep over small connected graphs with bound checks.

For every connected graph on ``n`` vertices (up to isomorphism) the exact
parameters are computed and each known relation between them is checked.
Graphs come from the networkx atlas for ``n <= 7`` and from one-vertex
augmentation, deduplicated by canonical form, above that.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from functools import lru_cache

import networkx as nx

from .bounds import (
    chromatic_number,
    clique_number,
    max_induced_star,
    neighborhood_chromatic_lower,
    optimal_coloring,
    total_chromatic_number,
)
from .covers import is_valid_total_cover
from .graph import Graph, canonical_graph6, canonical_order
from .solvers.constructive import generic_upper_cover, two_thirds_cover, two_thirds_size
from .solvers.search import exact_T, exact_Tt

ATLAS_LIMIT = 7
CSV_FIELDS = ("graph", "omega", "is", "chi", "T", "T_t")


def _canonical(g: Graph) -> Graph:
    pos = canonical_order(g)
    return Graph(g.n, tuple((pos[u], pos[v]) for u, v in g.edges))


@lru_cache(maxsize=None)
def _connected(n: int) -> tuple[Graph, ...]:
    if n <= 0:
        return ()
    if n <= ATLAS_LIMIT:
        found = [
            Graph(n, tuple(a.edges()))
            for a in nx.graph_atlas_g()
            if a.number_of_nodes() == n and nx.is_connected(a)
        ]
    else:
        seen: dict[str, Graph] = {}
        # every connected graph has a non-cut vertex, so it arises from a
        # connected graph on n - 1 vertices plus one joined vertex
        for g in _connected(n - 1):
            for mask in range(1, 1 << (n - 1)):
                extra = tuple((v, n - 1) for v in range(n - 1) if mask >> v & 1)
                h = Graph(n, g.edges + extra)
                seen.setdefault(canonical_graph6(h), h)
        found = list(seen.values())
    canon = [_canonical(g) for g in found]
    return tuple(sorted(canon, key=canonical_graph6))


def connected_graphs(n: int) -> list[Graph]:
    """All connected graphs on ``n`` vertices, one per isomorphism class, each in
    canonical labelling and sorted by canonical graph6 string."""
    return list(_connected(n))


@dataclass
class SweepRecord:
    graph: str  # canonical graph6
    n: int
    m: int
    delta: int
    omega: int
    is_star: int
    chi: int
    chi_total: int
    nbr_bound: int
    T: int
    T_t: int
    triangle_free: bool
    bipartite: bool
    cycle: bool
    upper_cover_labels: int
    two_thirds_labels: int
    covers_valid: bool


@dataclass(frozen=True)
class Violation:
    rule: str
    graph: str
    detail: str


def analyse_graph(g: Graph, timeout: float | None = None) -> SweepRecord:
    """Exact parameters of ``g`` plus the two constructive upper covers."""
    outcome_t = exact_T(g, timeout=timeout)
    outcome_tt = exact_Tt(g, timeout=timeout)
    coloring = optimal_coloring(g)
    tcover = outcome_t.witness if g.m else []
    upper = generic_upper_cover(g, coloring, tcover)
    thirds = two_thirds_cover(g, coloring, tcover)
    valid = (
        is_valid_total_cover(g, upper)
        and is_valid_total_cover(g, thirds)
        and is_valid_total_cover(g, outcome_tt.witness)
    )
    return SweepRecord(
        graph=canonical_graph6(g),
        n=g.n,
        m=g.m,
        delta=g.max_degree,
        omega=clique_number(g),
        is_star=max_induced_star(g).size,
        chi=chromatic_number(g),
        chi_total=total_chromatic_number(g),
        nbr_bound=neighborhood_chromatic_lower(g).value,
        T=outcome_t.value,
        T_t=outcome_tt.value,
        triangle_free=g.is_triangle_free(),
        bipartite=g.is_bipartite(),
        cycle=g.n >= 3 and g.m == g.n and all(len(a) == 2 for a in g.adj) and g.is_connected(),
        upper_cover_labels=upper.k,
        two_thirds_labels=thirds.k,
        covers_valid=valid,
    )


def check_record(r: SweepRecord) -> list[Violation]:
    """Every relation between the parameters that must hold, as violations."""
    out: list[Violation] = []

    def need(ok: bool, rule: str, detail: str) -> None:
        if not ok:
            out.append(Violation(rule, r.graph, detail))

    chi, t, tt = r.chi, r.T, r.T_t
    need(r.omega <= chi <= tt, "order", f"omega={r.omega} chi={chi} T_t={tt}")
    need(tt <= r.chi_total, "total colouring bound", f"T_t={tt} chi_t={r.chi_total}")
    need(max(chi, t) <= tt <= chi + t, "sum bound", f"chi={chi} T={t} T_t={tt}")
    need(tt <= max(chi, t + math.ceil(2 * chi / 3)), "two-thirds bound", f"chi={chi} T={t} T_t={tt}")
    if chi >= 3 * t:
        need(tt == chi, "colour-split", f"chi={chi} T={t} T_t={tt}")
    need(r.is_star + 1 <= r.nbr_bound <= tt, "neighbourhood bound", f"is={r.is_star} nbr={r.nbr_bound} T_t={tt}")
    if r.triangle_free:
        need(tt == r.chi_total, "triangle-free", f"T_t={tt} chi_t={r.chi_total}")
    if r.bipartite and r.m:
        need(tt in (r.delta + 1, r.delta + 2), "bipartite", f"T_t={tt} delta={r.delta}")
    if tt == t:
        need(r.is_star < t, "no induced star", f"T_t=T={t} is={r.is_star}")
    if tt == t == 3:
        need(r.cycle and r.n % 2 == 1 and r.n % 3 == 0, "odd cycle", f"n={r.n}")
    need(r.covers_valid, "constructions", "a constructed cover failed validation")
    need(r.two_thirds_labels == two_thirds_size(chi, t)[0], "two-thirds size", f"{r.two_thirds_labels}")
    need(r.upper_cover_labels <= min(chi + t, max(chi, 3 * t)), "upper cover size", f"{r.upper_cover_labels}")
    return out


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TESSLAB_THREADS", "1")))
    except ValueError:
        return 1


def run_sweep(max_n: int, min_n: int = 1, threads: int | None = None) -> list[SweepRecord]:
    """Records for all connected graphs with ``min_n <= n <= max_n``, in a fixed order."""
    graphs = [g for n in range(min_n, max_n + 1) for g in connected_graphs(n)]
    workers = threads if threads is not None else _threads()
    if workers <= 1:
        return [analyse_graph(g) for g in graphs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(analyse_graph, graphs, chunksize=8))


def sweep_violations(records: list[SweepRecord]) -> list[Violation]:
    return [v for r in records for v in check_record(r)]


def records_to_csv(records: list[SweepRecord], full: bool = False) -> str:
    """CSV text; the default columns are (graph, omega, is, chi, T, T_t)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if full:
        names = [f.name for f in fields(SweepRecord)]
        writer.writerow(names)
        for r in records:
            d = asdict(r)
            writer.writerow([d[k] for k in names])
    else:
        writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow([r.graph, r.omega, r.is_star, r.chi, r.T, r.T_t])
    return buf.getvalue()
