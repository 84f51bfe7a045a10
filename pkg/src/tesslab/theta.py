"""Lovász number by a first-order SDP method, and the promise evaluators.

The primal ``max <J, B>`` over ``tr B = 1``, ``B_ij = 0`` on edges, ``B`` PSD is
solved by ADMM, alternating a projection onto the affine constraints with an
eigenvalue projection onto the PSD cone. Every iterate yields two bounds:

* lower: the affine iterate shifted to be PSD and rescaled to trace one, which
  is primal feasible;
* upper: ``lambda_max(J + W)`` for a matrix ``W`` supported on the edges, which
  is dual feasible for any such ``W``; ``W`` is read off the scaled multiplier.

The solver stops once the two bounds are within ``tol``, so the value it
reports is certified to that accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import clique_number, independence_number
from .graph import Graph, complement, induced_subgraph

THETA_LIMIT = 30
ROUNDING_GUARD = 0.3


class ThetaError(RuntimeError):
    """The SDP did not reach the requested accuracy within the iteration cap."""


@dataclass(frozen=True)
class ThetaResult:
    theta: float
    psi: int
    gap: float  # |theta - psi|
    iterations: int
    certified: bool
    lower: float
    upper: float

    @property
    def duality_gap(self) -> float:
        return self.upper - self.lower


def _result(theta: float, lower: float, upper: float, iterations: int) -> ThetaResult:
    psi = int(math.floor(theta + 0.5))
    gap = abs(theta - psi)
    return ThetaResult(theta, psi, gap, iterations, gap < ROUNDING_GUARD, lower, upper)


def lovasz_theta(
    g: Graph,
    tol: float = 1e-6,
    max_iter: int = 50000,
    rho: float = 1.0,
    relax: float = 1.6,
    limit: int = THETA_LIMIT,
) -> ThetaResult:
    """theta(G) within ``tol`` (difference of certified bounds)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if g.n > limit:
        raise ValueError(f"{g.n} vertices exceeds the theta limit {limit}")
    n = g.n
    if n == 0:
        return _result(0.0, 0.0, 0.0, 0)
    ones = np.ones((n, n))
    mask = np.zeros((n, n), dtype=bool)
    for u, v in g.edges:
        mask[u, v] = mask[v, u] = True
    eye = np.eye(n)

    def project_affine(m: np.ndarray) -> np.ndarray:
        x = np.where(mask, 0.0, (m + m.T) / 2)
        x[np.diag_indices(n)] += (1.0 - np.trace(x)) / n
        return x

    z = eye / n
    u = np.zeros((n, n))
    lower, upper = -math.inf, math.inf
    for it in range(1, max_iter + 1):
        x = project_affine(z - u + ones / rho)
        # over-relaxed ADMM step
        x_hat = relax * x + (1.0 - relax) * z
        w_eig, vecs = np.linalg.eigh(x_hat + u)
        z_old = z
        z = (vecs * np.clip(w_eig, 0.0, None)) @ vecs.T
        u = u + x_hat - z
        if it % 10 and it != max_iter:
            continue
        # certified bounds from the current iterates
        mu = max(0.0, -float(np.linalg.eigvalsh(x)[0]))
        lower = max(lower, (float(x.sum()) + mu * n) / (1.0 + n * mu))
        w = np.where(mask, -(ones - rho * u), 0.0)
        upper = min(upper, float(np.linalg.eigvalsh(ones + w)[-1]))
        if upper - lower < tol:
            return _result((lower + upper) / 2, lower, upper, it)
        # residual balancing for the penalty
        r = np.linalg.norm(x - z)
        s = rho * np.linalg.norm(z - z_old)
        if r > 10 * s:
            rho *= 2.0
            u /= 2.0
        elif s > 10 * r:
            rho /= 2.0
            u *= 2.0
    raise ThetaError(f"no convergence in {max_iter} iterations (bounds {lower:.6g}..{upper:.6g})")


def _psi(g: Graph, tol: float, exact) -> int:
    """psi(G), or the exact value the promise equates it with when the
    rounding is not trusted."""
    res = lovasz_theta(g, tol=tol)
    if res.certified:
        return res.psi
    return exact(g)


def type1_value(g: Graph, tol: float = 1e-6) -> int:
    """T_t(G) under the promise T_t = omega: psi of the complement."""
    return _psi(complement(g), tol, lambda h: clique_number(complement(h)))


def _max_neighbourhood_psi(g: Graph, tol: float) -> int:
    best = 0
    for v in range(g.n):
        sub, _ = induced_subgraph(g, g.adj[v])
        best = max(best, _psi(sub, tol, independence_number))
    return best


def type2_value(g: Graph, tol: float = 1e-6) -> int:
    """T_t(G) under the promise T_t = is + 1: max over v of psi(G[N(v)]) + 1."""
    return _max_neighbourhood_psi(g, tol) + 1


def good_tessellable_T(g: Graph, tol: float = 1e-6) -> int:
    """T(G) under the promise T = is: max over v of psi(G[N(v)])."""
    return _max_neighbourhood_psi(g, tol)
