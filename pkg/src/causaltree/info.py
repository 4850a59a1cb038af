"""Closed-form information measures for jointly Gaussian processes.

All quantities are in nats. Covariances are :class:`~causaltree.model.CovarianceMatrix`
instances; the process and time structure comes from their layout.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefinite, NumericalInconsistency, ValidationError
from .linalg import PIVOT_TOL, cholesky, log_det, regress, submatrix
from .model import CovarianceMatrix

CLAMP_TOL = 1e-9
KINDS = ("MI", "DI", "MIvar")


def _clamp(value, what):
    if value < -CLAMP_TOL:
        raise NumericalInconsistency(f"{what} = {value:.3g} nats is negative")
    return max(float(value), 0.0)


def _check_pair(K, a, b):
    m = K.layout.m
    if not (0 <= a < m and 0 <= b < m):
        raise ValidationError(f"process indices ({a}, {b}) outside [0, {m})")
    if a == b:
        raise ValidationError("information between a process and itself is not defined here")


def _ld(K, idx):
    return log_det(submatrix(K.sigma, idx)) if len(idx) else 0.0


def gaussian_mi(K, a, b):
    """Mutual information between whole processes ``a`` and ``b``."""
    _check_pair(K, a, b)
    A, B = K.layout.process(a), K.layout.process(b)
    value = 0.5 * (_ld(K, A) + _ld(K, B) - _ld(K, A + B))
    return _clamp(value, f"I(p{a}; p{b})")


def gaussian_di(K, src, dst):
    """Directed information ``I(src -> dst)``.

    Sum over time of ``I(Y_t; X_0..X_t | Y_0..Y_{t-1})`` where the source is
    conditioned up to and including the present, evaluated as

        1/2 log|K_{Y^n}| - sum_t 1/2 log(|K_{Y^t, X^t}| / |K_{Y^{t-1}, X^t}|)
    """
    _check_pair(K, src, dst)
    lay = K.layout
    X, Y = lay.process(src), lay.process(dst)
    total = 0.5 * _ld(K, Y)
    for t in range(1, lay.n + 1):
        total -= 0.5 * (_ld(K, Y[:t] + X[:t]) - _ld(K, Y[:t - 1] + X[:t]))
    return _clamp(total, f"I(p{src} -> p{dst})")


def _variable_mi(K):
    s = K.sigma
    d = np.diagonal(s)
    joint = np.outer(d, d) - s ** 2
    np.fill_diagonal(joint, 1.0)
    if np.any(joint <= 0):
        raise NotPositiveDefinite("a pair of variables is perfectly correlated")
    w = 0.5 * (np.log(d)[:, None] + np.log(d)[None, :] - np.log(joint))
    np.fill_diagonal(w, 0.0)
    if w.min() < -CLAMP_TOL:
        raise NumericalInconsistency(f"variable MI = {w.min():.3g} nats is negative")
    return np.maximum(w, 0.0)


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Pairwise information weights; ``weights[a, b]`` is the weight of edge ``a -> b``."""

    kind: str
    weights: np.ndarray
    layout: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown weight kind {self.kind!r}")
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"weights must be square, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if w.min() < -CLAMP_TOL:
            raise NumericalInconsistency(f"weight {w.min():.3g} is negative")
        w = np.maximum(w, 0.0)
        np.fill_diagonal(w, 0.0)
        if self.kind != "DI" and not np.allclose(w, w.T, rtol=0, atol=CLAMP_TOL):
            raise ValidationError(f"{self.kind} weights must be symmetric")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def size(self):
        return self.weights.shape[0]

    @property
    def symmetric(self):
        return self.kind != "DI"

    def labels(self):
        if self.layout is None:
            return [str(k) for k in range(self.size)]
        if self.kind == "MIvar":
            return self.layout.labels()
        return self.layout.process_labels()


def build_weights(K, kind="DI", workers=None):
    """Weight matrix of the given kind for covariance ``K``.

    ``DI`` evaluates all ``m(m-1)`` ordered pairs, ``MI`` the ``m(m-1)/2``
    unordered pairs of processes, ``MIvar`` every pair of the ``m * n`` scalar
    variables.
    """
    kind = _normalize_kind(kind)
    m = K.layout.m
    if kind == "MIvar":
        return WeightMatrix(kind, _variable_mi(K), K.layout)
    if kind == "DI":
        pairs = [(a, b) for a in range(m) for b in range(m) if a != b]
        fn = gaussian_di
    else:
        pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
        fn = gaussian_mi
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda p: fn(K, *p), pairs))
    else:
        values = [fn(K, a, b) for a, b in pairs]
    w = np.zeros((m, m))
    for (a, b), v in zip(pairs, values):
        w[a, b] = v
        if kind == "MI":
            w[b, a] = v
    return WeightMatrix(kind, w, K.layout)


def _normalize_kind(kind):
    table = {k.lower(): k for k in KINDS}
    try:
        return table[str(kind).lower()]
    except KeyError:
        raise ValidationError(f"unknown weight kind {kind!r} (expected one of {KINDS})") from None


def _factorization(layout, tree):
    """``[(variable, parents), ...]`` in an order where parents always come first."""
    m, n = layout.m, layout.n
    plan = []
    if tree.directed and tree.node_count == m:
        parent = tree.parents()
        order = tree.topological_order()
        for t in range(n):
            for i in order:
                pars = layout.process(i, t)
                if parent[i] >= 0:
                    pars = pars + layout.process(parent[i], t + 1)
                plan.append((layout.flat(i, t), pars))
    elif not tree.directed and tree.node_count == layout.size:
        parent = tree.parents(0)
        for v in tree.topological_order(0):
            plan.append((v, [] if parent[v] < 0 else [int(parent[v])]))
    elif not tree.directed and tree.node_count == m:
        # whole-process conditioning on the neighbour nearer the root
        parent = tree.parents(0)
        for i in tree.topological_order(0):
            for t in range(n):
                pars = layout.process(i, t)
                if parent[i] >= 0:
                    pars = pars + layout.process(parent[i])
                plan.append((layout.flat(i, t), pars))
    else:
        kind = "directed" if tree.directed else "undirected"
        raise ValidationError(
            f"{kind} tree on {tree.node_count} nodes does not fit a "
            f"{m}-process, {n}-step layout")
    return plan


def tree_to_gaussian(K, tree):
    """Covariance of the tree approximation of ``K``.

    Directed trees over processes give the causal dependence tree
    approximation: variable ``(i, t)`` is regressed on its own past and on the
    parent process up to and including time ``t``. Undirected trees over the
    ``m * n`` variables give the Chow-Liu approximation with one parent
    variable each. Undirected trees over processes condition each process on
    the whole neighbouring process nearer to node 0.
    """
    lay = K.layout
    N = lay.size
    plan = _factorization(lay, tree)
    order = np.array([v for v, _ in plan])
    pos = np.empty(N, dtype=int)
    pos[order] = np.arange(N)

    B = np.zeros((N, N))
    resid = np.empty(N)
    for v, pars in plan:
        beta, r = regress(K.sigma, pars, v)
        if not r > PIVOT_TOL:
            raise NotPositiveDefinite(f"residual variance {r:.3g} for variable {lay.coords(v)}")
        B[pos[v], pos[pars]] = beta
        resid[pos[v]] = r

    T = solve_triangular(np.eye(N) - B, np.eye(N), lower=True, unit_diagonal=True)
    S = (T * resid) @ T.T
    sigma = np.empty_like(S)
    sigma[np.ix_(order, order)] = S
    return CovarianceMatrix(lay, 0.5 * (sigma + sigma.T))


def gaussian_kl(K_true, K_approx):
    """``D(N(0, K_true) || N(0, K_approx))`` in nats."""
    St = getattr(K_true, "sigma", K_true)
    Sa = getattr(K_approx, "sigma", K_approx)
    St, Sa = np.asarray(St, dtype=float), np.asarray(Sa, dtype=float)
    if St.shape != Sa.shape:
        raise ValidationError(f"dimension mismatch: {St.shape} vs {Sa.shape}")
    Lt, La = cholesky(St), cholesky(Sa)
    # tr(Sa^-1 St) = ||La^-1 Lt||_F^2
    Z = solve_triangular(La, Lt, lower=True, check_finite=False)
    ld_t = 2.0 * np.sum(np.log(np.diagonal(Lt)))
    ld_a = 2.0 * np.sum(np.log(np.diagonal(La)))
    value = 0.5 * (np.sum(Z * Z) - St.shape[0] + ld_a - ld_t)
    return _clamp(value, "KL divergence")
