"""Isometric Euclidean embeddability via the Schoenberg quadratic form.

For points x_1..x_k and a base point x_0, the matrix
M_ij = d(x_i, x_0)^2 + d(x_0, x_j)^2 - d(x_i, x_j)^2 is PSD with rank <= n
iff the metric embeds isometrically in R^n; M/2 is then the Gram matrix of
the embedded points relative to the base, so coordinates fall out of an
eigendecomposition.

The eigensolver is a hand-rolled cyclic Jacobi: deterministic, dependency
free, entirely adequate below 500x500.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import DistanceMatrix

SQRT2 = math.sqrt(2.0)


def schoenberg_matrix(m: DistanceMatrix, base: int = 0) -> np.ndarray:
    """The quadratic-form matrix over the non-base points, in node order."""
    n = m.n
    if not (0 <= base < n):
        raise ValueError("base index out of range")
    others = [i for i in range(n) if i != base]
    d = m.values
    out = np.empty((n - 1, n - 1))
    for r, i in enumerate(others):
        for c, j in enumerate(others):
            out[r, c] = d[i, base] ** 2 + d[base, j] ** 2 - d[i, j] ** 2
    return out


def symmetric_eigen(M: np.ndarray, tol: float = 1e-12):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Rotations continue until the off-diagonal Frobenius norm falls below
    tol times the matrix Frobenius norm.  Returns (eigenvalues descending,
    eigenvector columns in matching order).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("need a square matrix")
    n = M.shape[0]
    scale = max(float(np.abs(M).max()), 1.0)
    if float(np.abs(M - M.T).max()) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (M + M.T)
    V = np.eye(n)
    fro = max(float(np.linalg.norm(A)), 1e-300)
    for _ in range(100):
        # Sum off-diagonal squares directly: subtracting the diagonal energy
        # from the total cancels catastrophically (noise floor ~ fro*sqrt(eps))
        # and would mask convergence below ~1e-7 * fro.
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= tol * fro:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                if abs(A[i, j]) <= 1e-30 * fro:
                    continue
                # Rotate to annihilate A[i, j].
                theta = (A[j, j] - A[i, i]) / (2.0 * A[i, j])
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_i = c * A[:, i] - s * A[:, j]
                rot_j = s * A[:, i] + c * A[:, j]
                A[:, i], A[:, j] = rot_i, rot_j
                rot_i = c * A[i, :] - s * A[j, :]
                rot_j = s * A[i, :] + c * A[j, :]
                A[i, :], A[j, :] = rot_i, rot_j
                A[i, j] = A[j, i] = 0.0
                rot_i = c * V[:, i] - s * V[:, j]
                rot_j = s * V[:, i] + c * V[:, j]
                V[:, i], V[:, j] = rot_i, rot_j
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass
class EmbeddingReport:
    base: int
    dimension: int  # target n
    eigenvalues: np.ndarray
    psd: bool
    rank: int
    rank_interval: tuple[int, int]
    embeddable: bool
    coordinates: np.ndarray | None = field(repr=False, default=None)
    round_trip_max_rel_error: float | None = None


def embeddability(m: DistanceMatrix, n: int, base: int = 0,
                  tol: float = 1e-9) -> EmbeddingReport:
    """Schoenberg check: embeds isometrically in R^n iff M is PSD with rank <= n.

    Eigenvalues above tol*|lambda|_max count toward rank; the reported
    interval widens the threshold a decade each way so boundary eigenvalues
    are never silently rounded into a verdict.  When PSD, coordinates
    (base point at the origin, rows in node order) come from the Gram
    factorization of M/2, and the report carries the worst relative
    round-trip distance error.
    """
    if n < 1:
        raise ValueError("target dimension must be >= 1")
    M = schoenberg_matrix(m, base)
    w, V = symmetric_eigen(M)
    scale = max(float(np.abs(w).max()), TINY_EIG)
    psd = bool(w.min() >= -tol * scale)
    rank = int(np.sum(w > tol * scale))
    rank_interval = (
        int(np.sum(w > 10.0 * tol * scale)),
        int(np.sum(w > 0.1 * tol * scale)),
    )
    embeddable = psd and rank <= n
    coords = None
    rt_err = None
    if psd:
        keep = w > tol * scale
        lam = np.maximum(w[keep], 0.0)
        X = V[:, keep] * np.sqrt(lam / 2.0)
        coords = np.zeros((m.n, X.shape[1]))
        others = [i for i in range(m.n) if i != base]
        for r, i in enumerate(others):
            coords[i] = X[r]
        rt_err = 0.0
        d = m.values
        for i in range(m.n):
            for j in range(i + 1, m.n):
                got = float(np.linalg.norm(coords[i] - coords[j]))
                ref = max(d[i, j], 1e-30)
                rt_err = max(rt_err, abs(got - d[i, j]) / ref)
    return EmbeddingReport(
        base=base, dimension=n, eigenvalues=w, psd=psd, rank=rank,
        rank_interval=rank_interval, embeddable=embeddable,
        coordinates=coords, round_trip_max_rel_error=rt_err,
    )


TINY_EIG = 1e-300


# ---------------------------------------------------------------------------
# The four-cycle family: side alpha = 1, diagonal beta in (0, 2].


def square_matrix(beta: float) -> np.ndarray:
    """Schoenberg matrix of the unit-side, diagonal-beta four-point square."""
    if not (0.0 < beta <= 2.0):
        raise ValueError("beta must lie in (0, 2] (triangle bound beta <= 2)")
    b2 = beta * beta
    return np.array([
        [2.0, b2, 2.0 - b2],
        [b2, 2.0 * b2, b2],
        [2.0 - b2, b2, 2.0],
    ])


def square_eigencurve(beta_grid):
    """Eigenvalues of the square's Schoenberg matrix along a beta grid.

    Returns (rows, brackets): rows is an array of (beta, l1, l2, l3) with
    eigenvalues descending; brackets lists consecutive grid pairs where the
    smallest eigenvalue changes sign (the planarity boundary sits at
    beta = sqrt(2)).
    """
    betas = np.asarray(beta_grid, dtype=float)
    if betas.size == 0:
        raise ValueError("empty beta grid")
    rows = np.empty((betas.size, 4))
    for i, beta in enumerate(betas):
        w, _ = symmetric_eigen(square_matrix(float(beta)))
        rows[i, 0] = beta
        rows[i, 1:] = w
    lmin = rows[:, 3]
    brackets = [
        (float(rows[i, 0]), float(rows[i + 1, 0]))
        for i in range(len(betas) - 1)
        if lmin[i] > 0.0 >= lmin[i + 1] or lmin[i] >= 0.0 > lmin[i + 1]
    ]
    return rows, brackets


def square_twist(theta: float) -> tuple[float, float]:
    """Fold the square along a diagonal by angle theta in [0, pi).

    Returns (h, beta): the half-diagonal height h = cos(theta/2) and the
    resulting free-diagonal length beta = sqrt(1 + cos(theta)).
    """
    if not (0.0 <= theta < math.pi):
        raise ValueError("theta must lie in [0, pi)")
    return math.cos(theta / 2.0), math.sqrt(1.0 + math.cos(theta))


def square_diag_ratio(p: float) -> float:
    """f(p) = 2^(1-2/p) (1 + 3^(1-p))^(1/p): the d_p diagonal/side ratio on C_4."""
    if not (1.0 <= p < math.inf):
        raise ValueError("need finite p >= 1")
    return 2.0 ** (1.0 - 2.0 / p) * (1.0 + 3.0 ** (1.0 - p)) ** (1.0 / p)


def square_p_threshold(tol: float = 1e-10) -> float:
    """The p where the C_4 diagonal ratio f(p) crosses sqrt(2).

    Below the root the d_p square embeds in R^3 (indeed R^2 exactly at the
    root); above it the Schoenberg form picks up a negative eigenvalue.
    f is monotone on the bracket (asserted on a sample) so bisection is safe.
    """
    lo, hi = 1.0, 16.0
    sample = np.linspace(lo, hi, 31)
    vals = [square_diag_ratio(x) for x in sample]
    if not all(x < y for x, y in zip(vals, vals[1:])):
        raise RuntimeError("diagonal ratio is not monotone on the bracket")
    if not (vals[0] < SQRT2 < vals[-1]):
        raise RuntimeError("sqrt(2) is not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if square_diag_ratio(mid) < SQRT2:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
