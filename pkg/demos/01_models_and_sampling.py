# %% [markdown]
# # Strictly causal models, covariances and sampling
#
# A network of `m` processes observed for `n` steps is described by a
# coefficient matrix over the `m * n` variables. Variables are stored
# time-major: all processes at t=0, then all at t=1, and so on.

# %%
import numpy as np

from causaltree import GenerativeModel, build_covariance, sample, validate

# process 0 drives process 1 with a one-step delay; both have some memory
model = GenerativeModel.lagged(2, 4, {1: [[0.6, 0.0],
                                          [0.9, 0.3]]})
print(model.layout.labels())

# %% [markdown]
# Only arrows from strictly earlier times are allowed. `validate` lists
# every offending coefficient instead of stopping at the first one.

# %%
bad = GenerativeModel.from_edges(2, 2, [((1, 1), (0, 1), 0.5)])
for v in validate(bad):
    print(v)

# %% [markdown]
# The covariance follows from a triangular solve. Sampling is reproducible
# from a seed, and any block of samples can be drawn on its own.

# %%
K = build_covariance(model)
x = sample(model, seed=42, count=200_000)
print("largest deviation of the sample covariance:",
      np.abs(x.T @ x / len(x) - K.sigma).max().round(4))

tail = sample(model, seed=42, count=10, start=199_990)
print("block draw matches the serial run:", np.array_equal(tail, x[-10:]))
