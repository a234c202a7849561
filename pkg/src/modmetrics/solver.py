"""p-modulus of the family of paths connecting two vertices.

For a density rho >= 0 on the edges, the p-energy is sum(rho^p) (max(rho)
at p = inf), and rho is admissible when every connecting path has
rho-length >= 1.  Mod_p is the minimum admissible energy.

Routes:

* exact special cases — p = 1 (minimum cut), p = 2 (Laplacian solve),
  p = inf (reciprocal hop count);
* `modulus_greedy` — constraint generation: solve the restricted problem on
  an active set of paths, add the most rho-violated path (Dijkstra), repeat;
* `modulus_potential` — minimize the vertex-potential energy
  sum |phi(x) - phi(y)|^p with phi(a) = 0, phi(b) = 1 via smoothed gradient
  descent with backtracking and epsilon-continuation; rho = |dphi|.

Both iterative routes return a certified bracket: the upper bound is the
energy of an explicitly admissible rescaled density, the lower bound is a
Lagrangian dual value of the problem restricted to discovered paths (weak
duality, plus monotonicity under enlarging the family).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize, nnls

from .graph import (
    Graph,
    Path,
    bfs_hops,
    min_cut,
    shortest_path_hops,
    voltage,
    _check_node,
)

TINY = 1e-300
_INNER_TOL = 1e-11
_EPS_FLOOR = 1e-9


class SolverError(RuntimeError):
    """Solver-side failure: stalled inner iteration or exceeded active-set cap."""


@dataclass
class SolverConfig:
    """Knobs shared by the iterative modulus routes.

    tolerance is the target relative duality gap; max_iterations counts
    gradient steps (potential) or outer constraint-generation rounds (greedy).
    """

    tolerance: float = 1e-6
    max_iterations: int = 200_000
    smoothing_epsilon_initial: float = 1e-2
    continuation_factor: float = 0.1
    greedy_eps_tol: float = 1e-6
    max_active_paths: int = 20_000


@dataclass
class ModulusResult:
    p: float
    a: int
    b: int
    value: float
    lower_bound: float
    upper_bound: float
    density: np.ndarray = field(repr=False)
    potential: np.ndarray | None = field(repr=False, default=None)
    iterations: int = 0
    active_paths: int = 0
    method: str = ""
    converged: bool = True


def p_energy(rho, p: float) -> float:
    """E_p(rho): sum(rho^p) for finite p >= 1, max(rho) at p = inf.

    For p > 16 the sum is accumulated in the log domain so that tiny
    densities at large exponents do not underflow term by term.
    """
    rho = np.asarray(rho, dtype=float)
    if math.isinf(p):
        return float(np.max(rho)) if rho.size else 0.0
    if p < 1:
        raise ValueError("p must be >= 1")
    if p > 16:
        pos = rho[rho > 0]
        if pos.size == 0:
            return 0.0
        lg = p * np.log(pos)
        top = lg.max()
        return float(math.exp(top) * np.exp(lg - top).sum())
    return float(np.sum(rho ** p))


def rho_shortest_path(g: Graph, rho, a: int, b: int) -> tuple[Path, float]:
    """rho-shortest a-b path by Dijkstra.

    Ties broken deterministically by (hop count, lexicographic vertex
    sequence): heap entries carry (length, hops, vertex tuple) so tuple
    comparison settles everything.  Zero-weight edges are fine.
    """
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise ValueError("need distinct endpoints")
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (g.num_edges,):
        raise ValueError("density length does not match edge count")
    if np.any(rho < 0) or not np.all(np.isfinite(rho)):
        raise ValueError("density must be finite and nonnegative")
    done = set()
    heap = [(0.0, 0, (a,))]
    while heap:
        dist, hops, verts = heapq.heappop(heap)
        u = verts[-1]
        if u in done:
            continue
        done.add(u)
        if u == b:
            eidx = tuple(g.edge_index[(x, y)] for x, y in zip(verts, verts[1:]))
            return Path(vertices=verts, edge_indices=eidx), dist
        for v, k in g.adjacency[u]:
            if v not in done:
                heapq.heappush(heap, (dist + rho[k], hops + 1, verts + (v,)))
    raise SolverError(f"no path from {a} to {b}")  # unreachable on connected graphs


# ---------------------------------------------------------------------------
# Restricted problem: min sum(rho^p) s.t. usage @ rho >= 1, rho >= 0.


def _comp_residual(lam: np.ndarray, ell: np.ndarray) -> float:
    """Worst violation of the restricted KKT system at lam >= 0.

    The complementarity conditions (ell_j >= 1, lam_j >= 0, and
    lam_j (ell_j - 1) = 0) collapse into min(lam_j, ell_j - 1) = 0.  An
    infeasible path always shows up (min picks the negative ell_j - 1 no
    matter the multiplier), while a slack path with a stray 1e-11 multiplier
    scores 1e-11 instead of its harmless slack.
    """
    if lam.size == 0:
        return 0.0
    return float(np.abs(np.minimum(lam, ell - 1.0)).max())


def _polish_kkt(usage: np.ndarray, p: float, lam: np.ndarray,
                target: float, max_iter: int = 100) -> np.ndarray:
    """Semismooth Newton (Levenberg-damped) on min(lam, ell(lam) - 1) = 0.

    Quasi-Newton stalls here when p is large: rho'(s) ~ s^((2-p)/(p-1)) blows
    up as an edge weight approaches zero, so the dual's curvature spans many
    orders of magnitude and progress stops being visible in the objective at
    double precision.  The min-split keeps the Newton system well-posed:
    paths on the multiplier side (lam_j < ell_j - 1) are zeroed outright,
    paths on the constraint side get an exact-Jacobian step on ell_j = 1 with
    J = U diag(rho'(s)) U^T, and the split re-sorts the active set every
    iteration.  Pinning ell_j = 1 for *every* path carrying a nonzero
    multiplier instead goes inconsistent as soon as a slack path picks up a
    stray 1e-11 multiplier, and no damping rescues a Newton step aimed at an
    infeasible equality system.
    """
    exponent = 1.0 / (p - 1.0)
    inv_p = 1.0 / p

    def state(vec):
        s = usage.T @ vec
        rho = (np.maximum(s, 0.0) * inv_p) ** exponent
        return s, rho, usage @ rho

    s, rho, ell = state(lam)
    err = _comp_residual(lam, ell)
    mu = 1e-12
    mask = np.zeros(lam.size, dtype=bool)
    for _ in range(max_iter):
        if err <= target:
            break
        mask[:] = ell - 1.0 <= lam
        act = np.nonzero(mask)[0]
        if act.size == 0:
            break
        with np.errstate(over="ignore", divide="ignore"):
            w = np.where(s > 0.0,
                         exponent * inv_p * (s * inv_p) ** (exponent - 1.0),
                         0.0)
        w = np.minimum(w, 1e60)
        rows = usage[act]
        J = (rows * w) @ rows.T
        scale = max(float(np.trace(J)) / act.size, 1e-30)
        # Multiplier-side rows of the semismooth system are the identity, so
        # their step is -lam_j; eliminate it into the constraint-side rhs so
        # one backtracked direction damps both sides together.
        lam_off = np.where(mask, 0.0, lam)
        rhs = (1.0 - ell[act]) + rows @ (w * (usage.T @ lam_off))
        direction = -lam_off
        improved = False
        for _ in range(8):
            try:
                delta = np.linalg.solve(
                    J + (mu * scale) * np.eye(act.size), rhs
                )
            except np.linalg.LinAlgError:
                mu *= 100.0
                continue
            direction[act] = delta
            alpha = 1.0
            for _ in range(4):
                trial = np.maximum(lam + alpha * direction, 0.0)
                s2, rho2, ell2 = state(trial)
                err2 = _comp_residual(trial, ell2)
                if err2 < err:
                    lam, s, ell, err = trial, s2, ell2, err2
                    mu = max(mu * 0.1, 1e-14)
                    improved = True
                    break
                alpha *= 0.5
            if improved:
                break
            mu *= 100.0
        if not improved:
            break
    return lam


def _coordinate_sweep(usage: np.ndarray, p: float, lam: np.ndarray,
                      tol: float = 1e-15, lower: bool = False) -> np.ndarray:
    """One Gauss-Seidel pass of exact coordinate ascent on the dual.

    For every path whose rho-length sits below 1, raise its own multiplier
    until the length hits 1 (scalar Brent solve).  Raising a multiplier never
    shortens any path, so a raise-only pass leaves every row feasible to the
    scalar tolerance, and each update maximises the concave dual exactly
    along that coordinate (the coordinate gradient is 1 - ell_j), so the
    certified lower bound only rises.

    With lower=True, multipliers on slack paths come down as well (to where
    the length hits 1, or to 0 if the path stays slack without support) —
    the exact coordinate optimum on both sides, which shrinks the
    complementarity gap lam_j (ell_j - 1).  Lowering can re-expose other
    rows, so follow a lowering pass with a raise-only pass before relying on
    feasibility.

    This is the fallback for the regime the Newton polish cannot reach: at
    large p the length of a path through a near-zero-weight edge grows like
    t^(1/(p-1)) in its own multiplier, so closing a 1e-4 deficit needs a
    ~1e-16 multiplier move.  No damped multivariate step survives that scale
    mix, while a bracketed scalar solve does not care.
    """
    exponent = 1.0 / (p - 1.0)
    inv_p = 1.0 / p
    eps = 4 * np.finfo(float).eps
    lam = lam.copy()
    s = usage.T @ lam
    for j in range(usage.shape[0]):
        edges = np.nonzero(usage[j])[0]

        def deficit(t, se=s[edges]):
            return float(((np.maximum(se + t, 0.0) * inv_p) ** exponent).sum()) - 1.0

        gap = deficit(0.0)
        if gap < -tol:
            hi = 1.0
            for _ in range(80):
                if deficit(hi) >= 0.0:
                    break
                hi *= 2.0
            t = brentq(deficit, 0.0, hi, xtol=1e-300, rtol=eps, maxiter=300)
        elif lower and gap > tol and lam[j] > 0.0:
            if deficit(-lam[j]) >= 0.0:
                t = -float(lam[j])
            else:
                t = brentq(deficit, -float(lam[j]), 0.0, xtol=1e-300, rtol=eps,
                           maxiter=300)
        else:
            continue
        lam[j] += t
        s[edges] += t
    return lam


def solve_restricted(usage: np.ndarray, p: float, lam0=None,
                     tol: float = _INNER_TOL, max_sweeps: int = 2000,
                     refine: bool = False):
    """Lagrangian-dual solve of the path-constrained energy minimum.

    Stationarity gives rho(lam) = (usage^T lam / p)^(1/(p-1)), which turns
    the dual into the smooth concave box-constrained problem

        max_{lam >= 0}  sum(lam) - (1 - 1/p) * sum_e s_e (s_e/p)^(1/(p-1)),
        s = usage^T lam,   grad = 1 - usage @ rho(lam),

    handed to L-BFGS-B (the projected gradient *is* the infeasibility) and
    finished by a damped-Newton polish of the KKT system, which keeps
    converging where the objective flatlines at double precision.  Returns
    (rho, primal, dual, lam, iters); `dual` is the Lagrangian value at lam —
    a certified lower bound no matter how early the optimizer stopped.

    refine=True adds rounds of exact coordinate ascent when the polish
    leaves a complementarity residual — the large-p rescue, too slow for
    the common path (the caller escalates on demand).
    """
    if not (1.0 < p < math.inf):
        raise ValueError("restricted solver needs 1 < p < inf")
    usage = np.asarray(usage, dtype=float)
    m, _ = usage.shape
    exponent = 1.0 / (p - 1.0)
    inv_p = 1.0 / p

    def rho_of(svals):
        # clamp: L-BFGS-B trial points can carry -1e-18 residue, and a
        # negative base under a fractional exponent is NaN
        return (np.maximum(svals, 0.0) * inv_p) ** exponent

    def neg_dual(lam):
        s = usage.T @ lam
        rho = rho_of(s)
        val = float(lam.sum()) - (1.0 - inv_p) * float(s @ rho)
        grad = 1.0 - usage @ rho
        return -val, -grad

    x0 = np.zeros(m)
    if lam0 is not None:
        x0[: len(lam0)] = np.maximum(lam0, 0.0)
    res = minimize(
        neg_dual, x0, jac=True, method="L-BFGS-B",
        bounds=[(0.0, None)] * m,
        options={"maxiter": max_sweeps, "maxfun": 10 * max_sweeps,
                 "ftol": 1e-16, "gtol": tol},
    )
    target = max(tol, 1e-13)
    lam = _polish_kkt(usage, p, np.maximum(res.x, 0.0), target=target)
    if refine:
        # Large-p degeneracy: when the Newton polish stalls (microscopic
        # steps on near-zero edges), alternate exact coordinate ascent with
        # re-polishing.  A lowering pass shrinks the complementarity gap, a
        # raise-only pass restores feasibility, the polish handles the
        # coupled directions; every piece is monotone in the dual, so the
        # certified bound only rises.
        prev = math.inf
        for _ in range(20):
            ell = usage @ rho_of(usage.T @ lam)
            err = _comp_residual(lam, ell)
            if err <= target or err > prev / 1.2:
                break
            prev = err
            lam = _coordinate_sweep(usage, p, lam, lower=True)
            lam = _coordinate_sweep(usage, p, lam)
            lam = _polish_kkt(usage, p, lam, target=target)
    # lock primal feasibility of the active rows no matter how the
    # complementarity loop exited
    ell = usage @ rho_of(usage.T @ lam)
    if float(ell.min()) < 1.0 - target:
        lam = _coordinate_sweep(usage, p, lam)
    rho = rho_of(usage.T @ lam)
    ell = usage @ rho
    primal = p_energy(rho, p)
    dual = primal + float(lam @ (1.0 - ell))
    return rho, primal, dual, lam, int(res.nit)


# ---------------------------------------------------------------------------
# Greedy constraint generation.


def modulus_greedy(g: Graph, a: int, b: int, p: float,
                   cfg: SolverConfig | None = None) -> ModulusResult:
    """Constraint-generation solve of Mod_p for 1 < p < inf.

    Maintains an active path set, solves the restricted problem exactly,
    then asks Dijkstra for the most violated path of the full family.  Stops
    when the full-family rho-length reaches 1 - greedy_eps_tol *and* the
    certified bracket is within the relative tolerance.
    """
    cfg = cfg or SolverConfig()
    if not (1.0 < p < math.inf):
        raise ValueError("greedy route needs 1 < p < inf")
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise ValueError("need distinct endpoints")
    m = g.num_edges
    first, _ = rho_shortest_path(g, np.ones(m), a, b)
    paths = [first]
    seen = {first.vertices}
    usage = first.usage(m)[None, :]
    lam = None
    best_lower = 0.0
    converged = False
    rho = np.zeros(m)
    upper = math.inf
    ell = 0.0
    it = 0
    retried = False
    hard = False
    while it < cfg.max_iterations:
        it += 1
        rho, primal, dual, lam, _ = solve_restricted(usage, p, lam, refine=hard)
        best_lower = max(best_lower, dual)
        path, ell = rho_shortest_path(g, rho, a, b)
        upper = primal / ell ** p if ell > 0 else math.inf
        if (
            ell >= 1.0 - cfg.greedy_eps_tol
            and upper - best_lower <= cfg.tolerance * max(best_lower, TINY)
        ):
            converged = True
            break
        if path.vertices in seen:
            # The "most violated" path is already active: no new constraint
            # to add.  One retry with a harder inner solve; if that cannot
            # close the bracket either, the active set is exhausted — report
            # the admissible density and its honest (wider-than-requested)
            # bracket rather than error out.  Only an inadmissible stall is
            # a real failure.
            if retried:
                if ell >= 1.0 - cfg.greedy_eps_tol:
                    break
                raise SolverError(
                    f"constraint generation stalled after {it} rounds "
                    f"(ell={ell:.12f})"
                )
            retried = True
            hard = True
            rho, primal, dual, lam, _ = solve_restricted(
                usage, p, lam, tol=_INNER_TOL * 1e-2, max_sweeps=10_000,
                refine=True,
            )
            best_lower = max(best_lower, dual)
            continue
        if len(paths) >= cfg.max_active_paths:
            raise SolverError(
                f"active path set exceeded cap ({cfg.max_active_paths})"
            )
        paths.append(path)
        seen.add(path.vertices)
        usage = np.vstack([usage, path.usage(m)])
        retried = False  # a new constraint is progress; re-arm the retry
    density = rho / ell if ell > 0.0 else rho
    # Recompute the reported value from the normalized density so that
    # p_energy(density, p) == value bit-exactly; primal/ell**p can differ in
    # the last ulp.  A valid lower bound stays valid when nudged down.
    value = p_energy(density, p) if ell > 0.0 else upper
    return ModulusResult(
        p=p, a=a, b=b,
        value=value,
        lower_bound=min(best_lower, value),
        upper_bound=value,
        density=density,
        potential=None,
        iterations=it,
        active_paths=len(paths),
        method="greedy",
        converged=converged,
    )


# ---------------------------------------------------------------------------
# Vertex-potential descent.


def smoothed_p_dirichlet(g: Graph, phi: np.ndarray, p: float, eps: float):
    """Value and gradient of sum_edges ((dphi^2 + eps^2)^(p/2) - eps^p).

    Pure function of phi; boundary handling (pinning phi at the endpoints)
    is the caller's job.
    """
    u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=g.num_edges)
    v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=g.num_edges)
    t = phi[u] - phi[v]
    w = t * t + eps * eps
    value = float(np.sum(w ** (p / 2.0) - eps ** p))
    gt = p * t * w ** (p / 2.0 - 1.0)
    grad = np.zeros(g.n)
    np.add.at(grad, u, gt)
    np.add.at(grad, v, -gt)
    return value, grad


def _tree_to(g: Graph, root: int):
    """BFS parents pointing one hop toward root, plus a deepest-first order."""
    par = np.full(g.n, -1, dtype=np.int64)
    hop = np.full(g.n, -1, dtype=np.int64)
    hop[root] = 0
    queue = [root]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for y, _ in g.adjacency[x]:
            if hop[y] < 0:
                hop[y] = hop[x] + 1
                par[y] = x
                queue.append(y)
    order = sorted(range(g.n), key=lambda i: (-int(hop[i]), i))
    return par, order


def _flow_lower_bound(g: Graph, phi: np.ndarray, p: float, a: int, b: int,
                      u: np.ndarray, v: np.ndarray, par, order) -> float:
    """Certified lower bound on Mod_p from the gradient flow of phi.

    Conjugate duality: Mod_p equals min E_q(f)^(1-p) over unit a-b flows,
    q = p/(p-1), so *any* unit flow certifies a lower bound.  The candidate
    j = |dphi|^(p-1) sign(dphi) is only approximately divergence-free away
    from the optimum; the interior excess is relayed to `a` along a BFS tree
    (deepest node first, each relays to its parent), then the repaired flow
    is normalized by its throughput.  Exact at the p-harmonic optimum.
    """
    t = phi[u] - phi[v]
    f = np.sign(t) * np.abs(t) ** (p - 1.0)
    ex = np.zeros(g.n)
    np.add.at(ex, u, f)
    np.add.at(ex, v, -f)
    for x in order:
        if x == a or x == b:
            continue
        e_x = ex[x]
        if e_x != 0.0:
            # cancel x's excess source by shipping e_x back in from its parent
            px = int(par[x])
            k = g.edge_index[(x, px)]
            if g.edges[k][0] == px:
                f[k] += e_x
            else:
                f[k] -= e_x
            ex[px] += e_x
            ex[x] = 0.0
    # conservative throughput: under-normalizing only weakens the bound
    throughput = min(abs(float(ex[a])), abs(float(ex[b])))
    if not throughput > 1e-300:
        return 0.0
    q = p / (p - 1.0)
    with np.errstate(over="ignore"):
        eq = float(np.sum((np.abs(f) / throughput) ** q))
    if not eq > 0.0 or math.isinf(eq):
        return 0.0
    return eq ** (1.0 - p)


def modulus_potential(g: Graph, a: int, b: int, p: float,
                      cfg: SolverConfig | None = None) -> ModulusResult:
    """Vertex-potential solve of Mod_p for 1 < p < inf.

    Minimizes the smoothed p-Dirichlet energy sum((dphi^2 + eps^2)^(p/2))
    over potentials with phi(a) = 0, phi(b) = 1 (L-BFGS-B on the interior
    values, eps shrunk by the continuation factor down to its floor).

    Certification at every pass: rho = |dphi| has rho-length >= 1 on every
    a-b path (telescoping), so E_p(rho/ell) with ell the rho-shortest length
    is a true upper bound; the gradient flow, divergence-repaired and
    normalized (`_flow_lower_bound`), certifies a lower bound.  The bracket
    collapses as phi approaches the p-harmonic optimum, and both sides stay
    valid even when the iteration budget runs out first.
    """
    cfg = cfg or SolverConfig()
    if not (1.0 < p < math.inf):
        raise ValueError("potential route needs 1 < p < inf")
    _check_node(g, a)
    _check_node(g, b)
    if a == b:
        raise ValueError("need distinct endpoints")
    m = g.num_edges
    u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=m)
    v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=m)
    ha = bfs_hops(g, a).astype(float)
    hb = bfs_hops(g, b).astype(float)
    phi = ha / (ha + hb)
    phi[a], phi[b] = 0.0, 1.0
    par, order = _tree_to(g, a)
    free = np.asarray([x for x in range(g.n) if x != a and x != b],
                      dtype=np.int64)

    eps = cfg.smoothing_epsilon_initial
    iters = 0
    best_upper = math.inf
    best_lower = 0.0
    rho_best = None
    phi_best = None
    converged = False
    stalled = 0
    while True:
        if free.size and iters < cfg.max_iterations:
            def fun(x):
                ph = phi.copy()
                ph[free] = x
                val, grad = smoothed_p_dirichlet(g, ph, p, eps)
                return val, grad[free]

            chunk = int(min(500, cfg.max_iterations - iters))
            res = minimize(
                fun, phi[free], jac=True, method="L-BFGS-B",
                options={"maxiter": chunk, "maxfun": 20 * chunk,
                         "ftol": 1e-16, "gtol": 1e-10},
            )
            phi[free] = res.x
            iters += max(int(res.nit), 1)
        rho = np.abs(phi[u] - phi[v])
        _, ell = rho_shortest_path(g, rho, a, b)
        improved = False
        if ell > 0.0:
            up = p_energy(rho, p) / ell ** p
            if up < best_upper - 1e-15 * best_upper:
                improved = True
            if up < best_upper:
                best_upper = up
                rho_best = rho / ell
                phi_best = phi.copy()
        low = _flow_lower_bound(g, phi, p, a, b, u, v, par, order)
        if low > best_lower * (1.0 + 1e-15) or (low > 0.0 and best_lower == 0.0):
            improved = True
        best_lower = max(best_lower, low)
        stalled = 0 if improved else stalled + 1
        if best_upper - best_lower <= cfg.tolerance * max(best_lower, TINY):
            converged = True
        if converged or iters >= cfg.max_iterations or free.size == 0:
            break
        if eps <= _EPS_FLOOR and stalled >= 5:
            break  # bracket stopped moving at the smoothing floor
        eps = max(eps * cfg.continuation_factor, _EPS_FLOOR)
    # As in the greedy route: report the energy of the normalized density
    # itself, so p_energy(density, p) == value holds bit-exactly.
    value = p_energy(rho_best, p) if rho_best is not None else best_upper
    return ModulusResult(
        p=p, a=a, b=b,
        value=value,
        lower_bound=min(best_lower, value),
        upper_bound=value,
        density=rho_best if rho_best is not None else np.zeros(m),
        potential=phi_best,
        iterations=iters,
        active_paths=0,
        method="potential",
        converged=converged,
    )


# ---------------------------------------------------------------------------
# Dispatch.


def modulus(g: Graph, a: int, b: int, p: float,
            cfg: SolverConfig | None = None, method: str = "auto") -> ModulusResult:
    """Mod_p of the a-b connecting family, routed by p and `method`.

    method is one of auto | greedy | potential.  p = 1, p = 2 (under auto)
    and p = inf use the exact routes regardless: minimum cut, Laplacian
    solve, and BFS respectively — the iterative solvers are only defined for
    1 < p < inf, and p = inf in particular must never go through them.
    a == b returns value +inf explicitly (the empty-path family).
    """
    cfg = cfg or SolverConfig()
    _check_node(g, a)
    _check_node(g, b)
    if method not in ("auto", "greedy", "potential"):
        raise ValueError(f"unknown method {method!r}")
    if not math.isinf(p):
        if not (p >= 1.0):
            raise ValueError("p must be >= 1 or inf")
    m = g.num_edges
    if a == b:
        return ModulusResult(
            p=p, a=a, b=b, value=math.inf, lower_bound=math.inf,
            upper_bound=math.inf, density=np.zeros(m), potential=None,
            iterations=0, active_paths=0, method="trivial", converged=True,
        )
    if math.isinf(p):
        ell = shortest_path_hops(g, a, b)
        val = 1.0 / ell
        return ModulusResult(
            p=p, a=a, b=b, value=val, lower_bound=val, upper_bound=val,
            density=np.full(m, 1.0 / ell), potential=None,
            iterations=0, active_paths=0, method="bfs", converged=True,
        )
    if p == 1.0:
        cut = min_cut(g, a, b)
        rho = np.zeros(m)
        rho[list(cut.cut_edges)] = 1.0
        val = float(cut.value)
        return ModulusResult(
            p=p, a=a, b=b, value=val, lower_bound=val, upper_bound=val,
            density=rho, potential=None, iterations=0, active_paths=0,
            method="mincut", converged=True,
        )
    if p == 2.0 and method == "auto":
        x = voltage(g, a, b)
        r_eff = float(x[b] - x[a])
        phi = (x - x[a]) / r_eff
        u = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=m)
        v = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=m)
        rho = np.abs(phi[u] - phi[v])
        val = 1.0 / r_eff
        return ModulusResult(
            p=p, a=a, b=b, value=val, lower_bound=val, upper_bound=val,
            density=rho, potential=phi, iterations=0, active_paths=0,
            method="laplacian", converged=True,
        )
    if method == "potential":
        return modulus_potential(g, a, b, p, cfg)
    return modulus_greedy(g, a, b, p, cfg)


# ---------------------------------------------------------------------------
# Extremality certificate.


@dataclass
class BeurlingCertificate:
    accepted: bool
    admissible: bool
    max_length_error: float
    residual: float
    multipliers: np.ndarray | None = field(repr=False, default=None)
    message: str = ""


def beurling_verify(g: Graph, family, rho, p: float,
                    tol: float = 1e-8) -> BeurlingCertificate:
    """Check the extremality criterion for rho against a candidate tight family.

    Accepts iff (1) rho is admissible for the full connecting family up to
    tol (Dijkstra), (2) every path in `family` has rho-length 1 up to tol,
    and (3) rho^(p-1) lies in the nonnegative cone spanned by the family's
    usage rows — by Farkas duality this is exactly the implication
    "usage h >= 0 implies h . rho^(p-1) >= 0", tested as a nonnegative
    least-squares residual (relative, <= tol).
    """
    if not (1.0 < p < math.inf):
        raise ValueError("extremality check needs 1 < p < inf")
    if not family:
        raise ValueError("family must be non-empty")
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (g.num_edges,):
        raise ValueError("density length does not match edge count")
    ends = {(pth.vertices[0], pth.vertices[-1]) for pth in family}
    if len(ends) != 1:
        raise ValueError("family paths must share endpoints (same orientation)")
    a, b = next(iter(ends))
    usage = np.vstack([pth.usage(g.num_edges) for pth in family])
    lengths = usage @ rho
    len_err = float(np.max(np.abs(lengths - 1.0)))
    _, ell = rho_shortest_path(g, rho, a, b)
    admissible = ell >= 1.0 - tol
    target = rho ** (p - 1.0)
    lam, rnorm = nnls(usage.T, target)
    scale = max(float(np.linalg.norm(target)), TINY)
    residual = float(rnorm) / scale
    ok = admissible and len_err <= tol and residual <= tol
    msg = []
    if not admissible:
        msg.append(f"density not admissible (shortest rho-length {ell:.6g})")
    if len_err > tol:
        msg.append(f"family not rho-unit-length (max error {len_err:.3g})")
    if residual > tol:
        msg.append(f"rho^(p-1) outside the usage cone (residual {residual:.3g})")
    return BeurlingCertificate(
        accepted=ok,
        admissible=admissible,
        max_length_error=len_err,
        residual=residual,
        multipliers=lam if ok else None,
        message="; ".join(msg) if msg else "extremal",
    )
