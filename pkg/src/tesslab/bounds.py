"""Exact small-graph parameters and the bound envelopes for T_t.

Everything here is exact (branch and bound / backtracking with lowest-index
tie breaking). Size limits guard against accidental exponential blow-ups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

from .graph import Graph, complement, induced_subgraph, line_graph, total_graph

CLIQUE_LIMIT = 64
COLOR_LIMIT = 64


class SizeLimitError(ValueError):
    pass


def _check(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise SizeLimitError(f"{what}: {n} vertices exceeds limit {limit}")


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# maximum clique


def max_clique(g: Graph, limit: int = CLIQUE_LIMIT) -> list[int]:
    """A maximum clique, found by branch and bound with colouring bounds."""
    _check(g.n, limit, "clique")
    masks = g.masks
    best: list[int] = []

    def colour_order(p: int) -> tuple[list[int], list[int]]:
        # greedy sequential colouring of the candidate set
        order, bounds = [], []
        uncoloured = p
        colour = 0
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~masks[v]
                uncoloured &= ~low
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(r: list[int], p: int) -> None:
        nonlocal best
        order, bounds = colour_order(p)
        for idx in range(len(order) - 1, -1, -1):
            if len(r) + bounds[idx] <= len(best):
                return
            v = order[idx]
            r.append(v)
            sub = p & masks[v]
            if sub:
                expand(r, sub)
            elif len(r) > len(best):
                best = list(r)
            r.pop()
            p &= ~(1 << v)

    if g.n:
        expand([], (1 << g.n) - 1)
    return sorted(best)


def clique_number(g: Graph, limit: int = CLIQUE_LIMIT) -> int:
    return len(max_clique(g, limit))


def max_independent_set(g: Graph, limit: int = CLIQUE_LIMIT) -> list[int]:
    return max_clique(complement(g), limit)


def independence_number(g: Graph, limit: int = CLIQUE_LIMIT) -> int:
    return len(max_independent_set(g, limit))


@dataclass(frozen=True)
class InducedStar:
    size: int
    center: int | None
    leaves: tuple[int, ...]


def max_induced_star(g: Graph, limit: int = CLIQUE_LIMIT) -> InducedStar:
    """is(G): the largest independent set inside some open neighbourhood."""
    best = InducedStar(0, None, ())
    for v in range(g.n):
        if len(g.adj[v]) <= best.size:
            continue
        sub, old = induced_subgraph(g, g.adj[v])
        leaves = max_independent_set(sub, limit)
        if len(leaves) > best.size:
            best = InducedStar(len(leaves), v, tuple(old[i] for i in leaves))
    return best


# ---------------------------------------------------------------------------
# vertex colouring


def _dsatur_greedy(g: Graph) -> list[int]:
    n = g.n
    colour = [0] * n
    sat: list[set[int]] = [set() for _ in range(n)]
    for _ in range(n):
        v = max(
            (u for u in range(n) if not colour[u]),
            key=lambda u: (len(sat[u]), len(g.adj[u]), -u),
        )
        c = 1
        while c in sat[v]:
            c += 1
        colour[v] = c
        for w in g.adj[v]:
            sat[w].add(c)
    return colour


def k_coloring(g: Graph, k: int, limit: int = COLOR_LIMIT) -> list[int] | None:
    """A proper colouring with colours ``1..k`` or ``None`` if none exists."""
    _check(g.n, limit, "colouring")
    n = g.n
    if n == 0:
        return []
    if k <= 0:
        return None
    clique = max_clique(g, max(limit, CLIQUE_LIMIT))
    if len(clique) > k:
        return None
    colour = [0] * n
    # neighbour colour counts, index [v][c]
    count = [[0] * (k + 2) for _ in range(n)]
    sat = [0] * n

    def assign(v: int, c: int) -> None:
        colour[v] = c
        for w in g.adj[v]:
            if count[w][c] == 0:
                sat[w] += 1
            count[w][c] += 1

    def unassign(v: int) -> None:
        c = colour[v]
        colour[v] = 0
        for w in g.adj[v]:
            count[w][c] -= 1
            if count[w][c] == 0:
                sat[w] -= 1

    for i, v in enumerate(clique):
        assign(v, i + 1)
    used0 = len(clique)

    def solve(done: int, used: int) -> bool:
        if done == n:
            return True
        v = -1
        key = None
        for u in range(n):
            if colour[u]:
                continue
            cand = (sat[u], len(g.adj[u]))
            if key is None or cand > key:
                key, v = cand, u
        if sat[v] >= k:
            return False
        for c in range(1, min(used + 1, k) + 1):
            if count[v][c]:
                continue
            assign(v, c)
            if solve(done + 1, max(used, c)):
                return True
            unassign(v)
        return False

    if solve(len(clique), used0):
        return colour
    return None


def optimal_coloring(g: Graph, limit: int = COLOR_LIMIT) -> list[int]:
    """A proper colouring with exactly chi(G) colours."""
    _check(g.n, limit, "colouring")
    if g.n == 0:
        return []
    best = _dsatur_greedy(g)
    upper = max(best)
    lower = max(1, clique_number(g, max(limit, CLIQUE_LIMIT)))
    for k in range(lower, upper):
        found = k_coloring(g, k, limit)
        if found is not None:
            return found
    return best


def chromatic_number(g: Graph, limit: int = COLOR_LIMIT) -> int:
    return max(optimal_coloring(g, limit), default=0)


def chromatic_index(g: Graph, limit: int = COLOR_LIMIT) -> int:
    """chi'(G), computed as chi(L(G))."""
    _check(g.m, limit, "edge colouring")
    return chromatic_number(line_graph(g), limit)


def total_chromatic_number(g: Graph, limit: int = COLOR_LIMIT) -> int:
    """chi_t(G), computed as chi(Tot(G))."""
    _check(g.n + g.m, limit, "total colouring")
    return chromatic_number(total_graph(g).total, limit)


def is_proper_coloring(g: Graph, coloring) -> bool:
    return all(coloring[u] != coloring[v] for u, v in g.edges)


# ---------------------------------------------------------------------------
# neighbourhood bound and the report


@dataclass(frozen=True)
class NeighborhoodBound:
    value: int
    vertex: int | None


def neighborhood_chromatic_lower(g: Graph, limit: int = COLOR_LIMIT) -> NeighborhoodBound:
    """max over v of chi(complement of G[N(v)]) + 1, with the maximising vertex."""
    if g.n == 0:
        return NeighborhoodBound(0, None)
    best = NeighborhoodBound(-1, None)
    for v in range(g.n):
        sub, _ = induced_subgraph(g, g.adj[v])
        value = chromatic_number(complement(sub), limit) + 1
        if value > best.value:
            best = NeighborhoodBound(value, v)
    return best


@dataclass
class BoundsReport:
    n: int
    m: int
    max_degree: int
    omega: int
    alpha: int
    is_star: int
    chi: int
    chi_prime: int | None
    chi_total: int | None
    nbr_chi_bound: int
    known_T: int | None
    lower_Tt: int
    upper_Tt: int | None
    triangle_free: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def format(self) -> str:
        rows = [
            ("n", self.n),
            ("m", self.m),
            ("max degree", self.max_degree),
            ("omega", self.omega),
            ("alpha", self.alpha),
            ("is", self.is_star),
            ("chi", self.chi),
            ("chi'", self.chi_prime),
            ("chi_t", self.chi_total),
            ("nbr chi bound", self.nbr_chi_bound),
            ("T (given)", self.known_T),
            ("T_t lower", self.lower_Tt),
            ("T_t upper", self.upper_Tt),
        ]
        width = max(len(r[0]) for r in rows)
        lines = [f"{name.ljust(width)}  {'-' if val is None else val}" for name, val in rows]
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines)


def two_thirds_upper(chi: int, t: int) -> int:
    return max(chi, t + math.ceil(2 * chi / 3))


def bounds_report(
    g: Graph,
    known_T: int | None = None,
    known_chi_t: int | None = None,
    total_limit: int = 40,
) -> BoundsReport:
    """Aggregate the exact parameters and every applicable T_t envelope."""
    omega = clique_number(g)
    alpha = independence_number(g)
    star = max_induced_star(g)
    chi = chromatic_number(g)
    nbr = neighborhood_chromatic_lower(g)
    notes: list[str] = []

    chi_prime = chromatic_index(g) if g.m <= COLOR_LIMIT else None
    chi_total = known_chi_t
    if chi_total is None and g.n + g.m <= total_limit:
        chi_total = total_chromatic_number(g, max(COLOR_LIMIT, total_limit))

    lower = max(chi, omega, star.size + 1, nbr.value)
    uppers: list[int] = []
    if chi_total is not None:
        uppers.append(chi_total)
        notes.append(f"total colouring bound: T_t <= chi_t = {chi_total}")
    if known_T is not None:
        uppers.append(chi + known_T)
        notes.append(f"sum bound: max(chi, T) = {max(chi, known_T)} <= T_t <= chi + T = {chi + known_T}")
        lower = max(lower, known_T)
        e3 = two_thirds_upper(chi, known_T)
        uppers.append(e3)
        notes.append(f"two-thirds bound: T_t <= max(chi, T + ceil(2chi/3)) = {e3}")
        if chi >= 3 * known_T:
            uppers.append(chi)
            notes.append(f"colour-split bound: chi >= 3T so T_t = chi = {chi}")
    tri_free = g.is_triangle_free()
    if tri_free and chi_total is not None:
        lower = max(lower, chi_total)
        notes.append(f"triangle-free: T_t = chi_t = {chi_total}")
    upper = min(uppers) if uppers else None
    return BoundsReport(
        n=g.n,
        m=g.m,
        max_degree=g.max_degree,
        omega=omega,
        alpha=alpha,
        is_star=star.size,
        chi=chi,
        chi_prime=chi_prime,
        chi_total=chi_total,
        nbr_chi_bound=nbr.value,
        known_T=known_T,
        lower_Tt=lower,
        upper_Tt=upper,
        triangle_free=tri_free,
        notes=notes,
    )
