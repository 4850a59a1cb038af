"""Strictly causal linear Gaussian generative models.

A network of ``m`` processes observed for ``n`` timesteps is stacked into one
vector ``x`` of length ``m * n`` in time-major order, so every variable at
time ``t`` precedes every variable at time ``t + 1``. The model is

    x = A x + e,    e ~ N(0, diag(noise_vars))

with ``A[u, v] != 0`` only when ``v`` is strictly earlier than ``u``. Under
the time-major ordering that makes ``I - A`` unit lower triangular.
"""

from dataclasses import dataclass

import numpy as np
from numpy.random import Philox
from scipy.linalg import solve_triangular
from scipy.special import ndtri

from .errors import NotStrictlyCausal, ValidationError
from .linalg import as_symmetric, cholesky


@dataclass(frozen=True)
class ProcessLayout:
    """Map between ``(process, time)`` coordinates and flat variable indices."""

    m: int
    n: int

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 1 or self.n < 1:
            raise ValidationError(f"layout needs positive integers, got m={self.m}, n={self.n}")

    @property
    def size(self):
        return self.m * self.n

    def flat(self, i, t):
        if not (0 <= i < self.m and 0 <= t < self.n):
            raise ValidationError(f"(process {i}, time {t}) outside {self.m}x{self.n} layout")
        return t * self.m + i

    def coords(self, k):
        if not 0 <= k < self.size:
            raise ValidationError(f"flat index {k} outside [0, {self.size})")
        t, i = divmod(int(k), self.m)
        return i, t

    def time(self, k):
        return int(k) // self.m

    def process(self, i, upto=None):
        """Flat indices of process ``i`` at times ``0 .. upto - 1`` (all times by default)."""
        upto = self.n if upto is None else upto
        return [t * self.m + i for t in range(upto)]

    def labels(self):
        return [f"p{i}_t{t}" for t in range(self.n) for i in range(self.m)]

    def process_labels(self):
        return [f"p{i}" for i in range(self.m)]


@dataclass(frozen=True)
class Violation:
    """One broken model invariant, reported with ``(process, time)`` coordinates."""

    kind: str  # "causality" or "noise"
    to: tuple
    source: tuple | None
    value: float

    def __str__(self):
        if self.kind == "causality":
            return (f"coefficient to {self.to} from {self.source} = {self.value:g} "
                    "is not strictly causal")
        return f"noise variance at {self.to} = {self.value:g} is not positive"


@dataclass(frozen=True, eq=False)
class GenerativeModel:
    layout: ProcessLayout
    coeffs: np.ndarray
    noise_vars: np.ndarray

    def __post_init__(self):
        N = self.layout.size
        A = np.array(self.coeffs, dtype=float)
        if A.shape != (N, N):
            raise ValidationError(f"coeffs must be {N}x{N}, got {A.shape}")
        noise = np.broadcast_to(np.asarray(self.noise_vars, dtype=float), (N,)).copy()
        A.setflags(write=False)
        noise.setflags(write=False)
        object.__setattr__(self, "coeffs", A)
        object.__setattr__(self, "noise_vars", noise)

    @classmethod
    def from_edges(cls, m, n, edges, noise_vars=1.0):
        """Build a model from ``((i, t), (j, s), value)`` triples meaning x[i,t] += value * x[j,s]."""
        layout = ProcessLayout(m, n)
        A = np.zeros((layout.size, layout.size))
        for (i, t), (j, s), value in edges:
            A[layout.flat(i, t), layout.flat(j, s)] += value
        return cls(layout, A, noise_vars)

    @classmethod
    def lagged(cls, m, n, lags, noise_vars=1.0):
        """Time-invariant model from a ``{lag: m x m matrix}`` mapping.

        ``lags[k][i, j]`` is the gain from process ``j`` at time ``t - k`` to
        process ``i`` at time ``t``, applied for every ``t >= k``.
        """
        edges = []
        for k, G in lags.items():
            G = np.asarray(G, dtype=float)
            for t in range(k, n):
                for i, j in zip(*np.nonzero(G)):
                    edges.append(((int(i), t), (int(j), t - k), G[i, j]))
        return cls.from_edges(m, n, edges, noise_vars)


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    layout: ProcessLayout
    sigma: np.ndarray

    def __post_init__(self):
        sigma = as_symmetric(self.sigma)
        if sigma.shape[0] != self.layout.size:
            raise ValidationError(
                f"covariance is {sigma.shape[0]}-dimensional, layout needs {self.layout.size}")
        cholesky(sigma)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self):
        return self.sigma.shape[0]


def validate(model):
    """Return every violated model invariant; an empty list means the model is valid."""
    lay = model.layout
    out = []
    A = model.coeffs
    for u, v in zip(*np.nonzero(A)):
        if lay.time(v) >= lay.time(u):
            out.append(Violation("causality", lay.coords(u), lay.coords(v), float(A[u, v])))
    for k in np.flatnonzero(~(model.noise_vars > 0)):
        out.append(Violation("noise", lay.coords(k), None, float(model.noise_vars[k])))
    return out


def _check(model):
    bad = validate(model)
    if bad:
        raise NotStrictlyCausal("; ".join(map(str, bad)), bad)


def build_covariance(model):
    """Exact joint covariance ``(I - A)^{-1} D (I - A)^{-T}``."""
    _check(model)
    T = solve_triangular(np.eye(model.layout.size) - model.coeffs, np.eye(model.layout.size),
                         lower=True, unit_diagonal=True)
    sigma = (T * model.noise_vars) @ T.T
    return CovarianceMatrix(model.layout, 0.5 * (sigma + sigma.T))


_CHUNK = 1 << 15


def _blocks_per_sample(size):
    # Philox emits four 64-bit words per counter step.
    return -(-size // 4)


def standard_normals(seed, count, size, start=0, stream=0):
    """Standard normal draws, one row of ``size`` per sample index.

    Stream splitting rule: the generator is Philox keyed by ``(seed, stream)``;
    sample ``k`` is built from counter blocks ``[k*b, (k+1)*b)`` where
    ``b = ceil(size / 4)``, mapped to normals by the inverse normal CDF. Row
    ``k`` therefore depends only on ``(seed, stream, k)``, so any partition of
    the sample range reproduces the serial result bit for bit.
    """
    if count < 0 or start < 0:
        raise ValidationError("count and start must be non-negative")
    blocks = _blocks_per_sample(size)
    bitgen = Philox(key=np.array([seed, stream], dtype=np.uint64))
    if start:
        bitgen.advance(start * blocks)
    words = bitgen.random_raw(count * blocks * 4).reshape(count, blocks * 4)[:, :size]
    u = ((words >> np.uint64(11)).astype(float) + 0.5) * 2.0 ** -53
    return ndtri(u)


def sample(model, seed, count, start=0, stream=0):
    """Draw ``count`` vectors from the model, shape ``(count, m * n)``.

    Each draw solves ``(I - A) x = e`` by forward substitution in time-major
    order. ``start`` selects the first sample index, so
    ``sample(model, s, a + b)`` equals ``sample(model, s, a)`` stacked on
    ``sample(model, s, b, start=a)``.
    """
    _check(model)
    if count < 1:
        raise ValidationError(f"count must be positive, got {count}")
    N = model.layout.size
    IA = np.eye(N) - model.coeffs
    scale = np.sqrt(model.noise_vars)
    out = np.empty((count, N))
    for lo in range(0, count, _CHUNK):
        k = min(_CHUNK, count - lo)
        e = standard_normals(seed, k, N, start=start + lo, stream=stream) * scale
        out[lo:lo + k] = solve_triangular(IA, e.T, lower=True, unit_diagonal=True,
                                          check_finite=False).T
    return out
