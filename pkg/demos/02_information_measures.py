# %% [markdown]
# # Mutual and directed information between Gaussian processes
#
# All quantities are exact, computed from log-determinants of covariance
# blocks, and reported in nats.

# %%
from causaltree import GenerativeModel, build_covariance, build_weights, gaussian_di, gaussian_mi

model = GenerativeModel.lagged(3, 6, {1: [[0.5, 0.0, 0.0],
                                          [0.8, 0.5, 0.0],
                                          [0.0, 0.7, 0.5]]})
K = build_covariance(model)

# %% [markdown]
# Mutual information is symmetric. Directed information is not: it only
# credits the source's past and present for explaining the destination.

# %%
print(f"I(0;1)  = {gaussian_mi(K, 0, 1):.4f}")
print(f"I(0->1) = {gaussian_di(K, 0, 1):.4f}")
print(f"I(1->0) = {gaussian_di(K, 1, 0):.4f}")

# %%
W = build_weights(K, "DI")
print(W.kind)
print(W.weights.round(4))
