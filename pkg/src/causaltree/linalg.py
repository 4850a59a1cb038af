"""Small dense symmetric linear algebra helpers.

Everything works on plain ``numpy`` arrays. Matrices that pass through
:func:`as_symmetric` are checked for symmetry, symmetrized exactly and
returned read-only.
"""

import numpy as np
from scipy.linalg import solve_triangular

from .errors import IndexOutOfRange, NotPositiveDefinite, NotSymmetric

SYMMETRY_TOL = 1e-12
PIVOT_TOL = 1e-12


def as_symmetric(M, tol=SYMMETRY_TOL):
    """Validate ``M`` as a square symmetric matrix and return a frozen copy.

    The copy is ``(M + M.T) / 2`` so downstream code sees exact symmetry.
    """
    a = np.array(M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NotSymmetric(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotSymmetric("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.T))
    if asym > tol:
        raise NotSymmetric(f"matrix is not symmetric (max |M - M.T| = {asym:.3g})")
    a = 0.5 * (a + a.T)
    a.setflags(write=False)
    return a


def cholesky(M):
    """Lower-triangular ``L`` with ``M = L @ L.T``.

    Raises
    ------
    NotPositiveDefinite
        If any pivot ``L[i, i] ** 2`` is at or below ``1e-12``. No jitter is
        ever added.
    """
    a = np.asarray(M, dtype=float)
    try:
        L = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diagonal(L) ** 2
    bad = np.flatnonzero(~(pivots > PIVOT_TOL))
    if bad.size:
        k = int(bad[0])
        raise NotPositiveDefinite(f"pivot {k} is {pivots[k]:.3g} (<= {PIVOT_TOL:g})")
    return L


def log_det(M):
    """Natural log of ``det(M)`` for positive-definite ``M``."""
    L = cholesky(M)
    return 2.0 * float(np.sum(np.log(np.diagonal(L))))


def submatrix(M, indices):
    """Principal submatrix ``M[indices][:, indices]`` in the given order."""
    M = np.asarray(M)
    idx = np.asarray(indices, dtype=np.intp).reshape(-1)
    if len(set(idx.tolist())) != idx.size:
        raise IndexOutOfRange(f"indices must be distinct: {idx.tolist()}")
    if idx.size and (idx.min() < 0 or idx.max() >= M.shape[0]):
        raise IndexOutOfRange(f"indices {idx.tolist()} outside [0, {M.shape[0]})")
    return M[np.ix_(idx, idx)]


def cho_solve(L, B):
    """Solve ``(L L^T) X = B`` given the Cholesky factor ``L``."""
    y = solve_triangular(L, B, lower=True, check_finite=False)
    return solve_triangular(L.T, y, lower=False, check_finite=False)


def regress(K, parents, target):
    """Linear regression of variable ``target`` on ``parents`` under covariance ``K``.

    Returns ``(beta, residual_variance)`` with ``beta = K_pp^{-1} K_pv`` computed
    through a Cholesky solve. An empty parent set gives ``beta = []`` and the
    marginal variance.
    """
    K = np.asarray(K)
    parents = list(parents)
    var = float(K[target, target])
    if not parents:
        return np.zeros(0), var
    L = cholesky(submatrix(K, parents))
    kpv = K[parents, target]
    beta = cho_solve(L, kpv)
    return beta, var - float(kpv @ beta)
