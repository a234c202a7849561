"""The d_p metrics induced by modulus, and their snowflaking diagnostics.

d_p(a, b) = Mod_p(a, b)^(-1/p) for finite p, and the hop distance at
p = inf (the reciprocal of Mod_inf).  d_1 is the reciprocal min cut (an
ultrametric); d_2 is the square root of effective resistance.

The antisnowflaking exponent of a metric d is the supremum of t >= 1 such
that d^t still satisfies the triangle inequality; it is governed by the
per-triple "flat exponent" where one side's t-th power first meets the sum
of the other two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import (
    Graph,
    bfs_hops,
    effective_resistance_matrix,
    erdos_renyi_connected,
    min_cut,
)
from .rng import SplitMix64
from .solver import TINY, ModulusResult, SolverConfig, modulus


@dataclass
class DistanceMatrix:
    p: float
    values: np.ndarray = field(repr=False)
    labels: tuple[str, ...]
    t: float = 1.0  # applied snowflake power

    @property
    def n(self) -> int:
        return len(self.labels)

    def powered(self, t: float) -> "DistanceMatrix":
        """The snowflaked matrix d^t (records the cumulative power)."""
        if t <= 0:
            raise ValueError("snowflake power must be positive")
        return DistanceMatrix(p=self.p, values=self.values ** t,
                              labels=self.labels, t=self.t * t)


def dp_distance(g: Graph, a: int, b: int, p: float,
                cfg: SolverConfig | None = None, method: str = "auto") -> float:
    """d_p between two nodes (0 when a = b)."""
    if a == b:
        return 0.0
    res = modulus(g, a, b, p, cfg, method)
    return _to_distance(res)


def _to_distance(res: ModulusResult) -> float:
    if math.isinf(res.p):
        return 1.0 / res.value
    return res.value ** (-1.0 / res.p)


def distance_matrix(g: Graph, p: float, cfg: SolverConfig | None = None,
                    method: str = "auto") -> DistanceMatrix:
    """All-pairs d_p.

    p = 2 under auto amortizes a single Laplacian factorization; p = 1 and
    p = inf run their exact per-pair routes; other p solve pair by pair.
    """
    n = g.n
    vals = np.zeros((n, n))
    if p == 2.0 and method == "auto":
        vals = np.sqrt(np.maximum(effective_resistance_matrix(g), 0.0))
    elif math.isinf(p):
        for a in range(n):
            vals[a] = bfs_hops(g, a).astype(float)
    elif p == 1.0:
        for a in range(n):
            for b in range(a + 1, n):
                d = 1.0 / min_cut(g, a, b).value
                vals[a, b] = vals[b, a] = d
    else:
        for a in range(n):
            for b in range(a + 1, n):
                d = dp_distance(g, a, b, p, cfg, method)
                vals[a, b] = vals[b, a] = d
    np.fill_diagonal(vals, 0.0)
    return DistanceMatrix(p=p, values=vals, labels=g.labels)


# ---------------------------------------------------------------------------
# Triangle diagnostics.


@dataclass
class TriangleReport:
    t: float
    triples_examined: int
    # Entries are (i, j, k): side (i, j) against the path through k.
    violations: list[tuple[int, int, int, float]]
    flat: list[tuple[int, int, int]]
    indeterminate: list[tuple[int, int, int, float]]

    @property
    def is_metric(self) -> bool:
        return not self.violations


def triangle_audit(m: DistanceMatrix, t: float = 1.0, tol: float = 1e-9,
                   solver_tol: float = 1e-6) -> TriangleReport:
    """Exhaustive ordered-triple scan of d^t.

    |lhs - rhs| <= tol*scale counts as flat; a positive excess below
    solver_tol*scale is reported indeterminate rather than asserted either
    way (the solver cannot distinguish it from noise); larger excess is a
    violation.
    """
    d = m.values ** t
    n = m.n
    violations = []
    flat = []
    indeterminate = []
    examined = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k == i or k == j:
                    continue
                examined += 1
                lhs = d[i, j]
                rhs = d[i, k] + d[k, j]
                scale = max(lhs, rhs, TINY)
                diff = lhs - rhs
                if abs(diff) <= tol * scale:
                    flat.append((i, j, k))
                elif abs(diff) <= solver_tol * scale:
                    indeterminate.append((i, j, k, diff))
                elif diff > 0:
                    violations.append((i, j, k, diff))
    return TriangleReport(t=t, triples_examined=examined,
                          violations=violations, flat=flat,
                          indeterminate=indeterminate)


def flat_exponent(dab: float, dac: float, dcb: float,
                  tol: float = 1e-10) -> float:
    """The t >= 1 at which the largest side's t-th power meets the other two.

    Orders the sides internally so the largest is the left-hand side.  A tie
    for the largest side means no finite t exists (+inf).  Inputs that already
    break the triangle inequality return the sub-1 crossing, flagging the
    triple.  Bisection to absolute tolerance `tol`.
    """
    sides = sorted((float(dab), float(dac), float(dcb)), reverse=True)
    big, x, y = sides
    if big <= 0 or x <= 0 or y <= 0:
        raise ValueError("triple sides must be positive")
    if big <= x:  # tied largest: x^t + y^t > big^t for every t
        return math.inf
    rx, ry = x / big, y / big  # both < 1

    def h(t):
        return rx ** t + ry ** t - 1.0

    if abs(h(1.0)) <= 4e-16 * 3.0:
        return 1.0
    if h(1.0) < 0.0:  # triangle inequality already fails; crossing below 1
        lo, hi = 1e-12, 1.0
    else:
        lo, hi = 1.0, 2.0
        while h(hi) > 0.0:
            lo, hi = hi, hi * 2.0
            if hi > 1e9:
                return math.inf
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def asfe_graph(m: DistanceMatrix) -> float:
    """Antisnowflaking exponent: min flat exponent over all triples.

    Requires a genuine metric at t = 1 (raises on violations); returns +inf
    when every triple is equilateral-tied.
    """
    report = triangle_audit(m, t=1.0)
    if report.violations:
        i, j, k, gap = report.violations[0]
        raise ValueError(
            f"not a metric at t=1: d({i},{j}) exceeds the path through {k} "
            f"by {gap:.3g}"
        )
    d = m.values
    best = math.inf
    for i in range(m.n):
        for j in range(i + 1, m.n):
            for k in range(j + 1, m.n):
                t = flat_exponent(d[i, j], d[i, k], d[k, j])
                if t < best:
                    best = t
    return best


# ---------------------------------------------------------------------------
# Seeded random-graph study of the exponent lower bound.


@dataclass
class AsfeEstimate:
    p_grid: np.ndarray
    t_of_p: np.ndarray
    q_of_p: np.ndarray  # the conjectured bound p/(p-1)
    per_graph: np.ndarray = field(repr=False)  # (n_graphs, len(p_grid))
    graph_seeds: tuple[int, ...]
    argmin_graph_seed: np.ndarray  # seed of the minimizing graph, per p
    triple: tuple[int, int, int]
    params: dict

    @property
    def margin(self) -> float:
        """min over the grid of t(p) - q(p); >= 0 means no counterexample."""
        return float(np.min(self.t_of_p - self.q_of_p))


def triple_exponents(g: Graph, p_grid, cfg: SolverConfig | None = None,
                     triple=(0, 1, 2)) -> np.ndarray:
    """Flat exponent of one node triple of g at each p in the grid."""
    i, j, k = triple
    out = np.empty(len(p_grid))
    for idx, p in enumerate(p_grid):
        dij = dp_distance(g, i, j, p, cfg)
        dik = dp_distance(g, i, k, p, cfg)
        dkj = dp_distance(g, k, j, p, cfg)
        out[idx] = flat_exponent(dij, dik, dkj)
    return out


def default_p_grid() -> np.ndarray:
    return np.linspace(1.2, 5.0, 15)


def er_experiment(n_graphs: int, n_nodes: int, expected_degree: float,
                  p_grid=None, seed: int = 0,
                  cfg: SolverConfig | None = None) -> AsfeEstimate:
    """Exponent study over connected ER graphs.

    Per-graph seeds are consecutive outputs of a splitmix64 stream seeded
    with `seed`, so a single integer reproduces the whole batch.  For every
    graph the audited triple is the first three nodes (0, 1, 2); t(p) is the
    minimum exponent over graphs, reported against q(p) = p/(p-1).
    """
    if n_graphs < 1:
        raise ValueError("need at least one graph")
    if n_nodes < 3:
        raise ValueError("need at least three nodes for a triple")
    p_grid = default_p_grid() if p_grid is None else np.asarray(p_grid, float)
    if np.any(p_grid <= 1.0) or np.any(~np.isfinite(p_grid)):
        raise ValueError("p grid must be finite with every p > 1")
    stream = SplitMix64(seed)
    graph_seeds = tuple(stream.next_u64() for _ in range(n_graphs))
    per_graph = np.empty((n_graphs, len(p_grid)))
    for gi, gseed in enumerate(graph_seeds):
        g = erdos_renyi_connected(n_nodes, expected_degree, gseed)
        per_graph[gi] = triple_exponents(g, p_grid, cfg)
    t_of_p = per_graph.min(axis=0)
    argmin = per_graph.argmin(axis=0)
    seeds_arr = np.asarray(graph_seeds, dtype=np.uint64)
    return AsfeEstimate(
        p_grid=p_grid,
        t_of_p=t_of_p,
        q_of_p=p_grid / (p_grid - 1.0),
        per_graph=per_graph,
        graph_seeds=graph_seeds,
        argmin_graph_seed=seeds_arr[argmin],
        triple=(0, 1, 2),
        params={
            "n_graphs": n_graphs,
            "n_nodes": n_nodes,
            "expected_degree": expected_degree,
            "seed": seed,
        },
    )
