"""Binary hypothesis testing with exact and tree-approximated Gaussian likelihoods."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ValidationError
from .info import build_weights, tree_to_gaussian
from .linalg import cholesky
from .model import build_covariance, sample
from .trees import best_causal_tree, kruskal_max_tree

SCORERS = ("full", "causal", "chowliu")
LOG_2PI = math.log(2.0 * math.pi)


def loglik(K, x):
    """Zero-mean Gaussian log-density of ``x`` (a vector, or one sample per row)."""
    S = np.asarray(getattr(K, "sigma", K), dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != S.shape[0]:
        raise ValidationError(f"sample length {x.shape[-1]} != covariance dim {S.shape[0]}")
    L = cholesky(S)
    z = solve_triangular(L, np.atleast_2d(x).T, lower=True, check_finite=False)
    quad = np.sum(z * z, axis=0)
    out = -0.5 * (quad + 2.0 * np.sum(np.log(np.diagonal(L))) + S.shape[0] * LOG_2PI)
    return float(out[0]) if x.ndim == 1 else out


def llr(x, K0, K1):
    """Log-likelihood ratio ``log p1(x) - log p0(x)``; decide H1 when it exceeds the threshold."""
    return loglik(K1, x) - loglik(K0, x)


@dataclass(frozen=True, eq=False)
class RocCurve:
    """Step ROC curve; points are ordered by increasing threshold."""

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float
    label: str = ""

    @property
    def points(self):
        return list(zip(self.thresholds.tolist(), self.fpr.tolist(), self.tpr.tolist()))

    def tpr_at(self, fpr):
        """Best detection rate reachable at false-alarm rate ``fpr`` or below."""
        fpr = np.atleast_1d(np.asarray(fpr, dtype=float))
        # fpr is nonincreasing along the curve; reverse to search it ascending
        f, t = self.fpr[::-1], self.tpr[::-1]
        idx = np.searchsorted(f, fpr, side="right") - 1
        return t[np.clip(idx, 0, None)]


def roc_curve(scores0, scores1, label=""):
    """Exact empirical ROC for scores under H0 (``scores0``) and H1 (``scores1``).

    Thresholds are every observed score plus ``-inf`` and ``+inf``; a sample is
    declared H1 when its score is strictly above the threshold.
    """
    s0 = np.sort(np.asarray(scores0, dtype=float).ravel())
    s1 = np.sort(np.asarray(scores1, dtype=float).ravel())
    if s0.size == 0 or s1.size == 0:
        raise ValidationError("need at least one score under each hypothesis")
    tau = np.concatenate(([-np.inf], np.unique(np.concatenate((s0, s1))), [np.inf]))
    fpr = (s0.size - np.searchsorted(s0, tau, side="right")) / s0.size
    tpr = (s1.size - np.searchsorted(s1, tau, side="right")) / s1.size
    return RocCurve(tau, fpr, tpr, trapezoid_auc(fpr, tpr), label)


def trapezoid_auc(fpr, tpr):
    fpr, tpr = np.asarray(fpr), np.asarray(tpr)
    return float(np.sum((fpr[:-1] - fpr[1:]) * (tpr[:-1] + tpr[1:])) / 2.0)


def approximations(model0, model1):
    """Exact and tree-approximated covariances for both hypotheses.

    Each hypothesis gets its own best causal tree and its own variable-level
    Chow-Liu tree, learned from its exact covariance. Returns
    ``({scorer: (K0, K1)}, {scorer: (tree0, tree1)})``.
    """
    if model0.layout != model1.layout:
        raise ValidationError(f"layouts differ: {model0.layout} vs {model1.layout}")
    K = [build_covariance(model0), build_covariance(model1)]
    causal = [best_causal_tree(build_weights(k, "DI")) for k in K]
    chowliu = [kruskal_max_tree(build_weights(k, "MIvar")) for k in K]
    covs = {
        "full": tuple(K),
        "causal": tuple(tree_to_gaussian(k, t) for k, t in zip(K, causal)),
        "chowliu": tuple(tree_to_gaussian(k, t) for k, t in zip(K, chowliu)),
    }
    return covs, {"causal": tuple(causal), "chowliu": tuple(chowliu)}


def run_experiment(model0, model1, trials=10_000, seed=0):
    """Simulate ``trials`` draws per hypothesis and build one ROC curve per scorer.

    Samples under H0 use random stream 0 and samples under H1 stream 1 of
    ``seed``. Returns ``{"full": RocCurve, "causal": RocCurve, "chowliu": RocCurve}``.
    """
    if int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials}")
    covs, _ = approximations(model0, model1)
    x0 = sample(model0, seed, trials, stream=0)
    x1 = sample(model1, seed, trials, stream=1)
    curves = {}
    for name in SCORERS:
        K0, K1 = covs[name]
        curves[name] = roc_curve(llr(x0, K0, K1), llr(x1, K0, K1), label=name)
    return curves
