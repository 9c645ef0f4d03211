# %% [markdown]
# # Sammon mapping
#
# Sammon's stress weights each pairwise distance error by the inverse of
# the original distance, so small distances are preserved more carefully
# than large ones. The optimiser is a pseudo-Newton step with step halving,
# which keeps the stress trace non-increasing.

# %%
import numpy as np

from qsarmap.sammon import SammonConfig, embed, pairwise_distances, stress
from qsarmap.synthetic import collinear

x = collinear(10, 5, seed=3)
emb, trace = embed(x, 1)
print("collinear 5-D points, final stress %.2e after %d iterations"
      % (trace.stress_per_iteration[-1], trace.iterations_used))

# %% [markdown]
# The corners of a unit square cannot be placed on a line without error.
# Its PCA start places points on top of each other, so the mapping nudges
# them apart and says so.

# %%
square = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
emb, trace = embed(square, 1)
print(emb.coords.ravel())
print("stress %.5f" % trace.stress_per_iteration[-1])
print(emb.info["warnings"])

# %% [markdown]
# A random start gives a different local optimum on harder data; the
# trace is monotone either way.

# %%
rng = np.random.default_rng(1)
cloud = rng.standard_normal((40, 6))
for init in ("pca", "random"):
    _, trace = embed(cloud, 2, SammonConfig(init=init, seed=2))
    s = trace.stress_per_iteration
    print(f"{init:>6}: {s[0]:.4f} -> {s[-1]:.4f}, monotone={all(b <= a for a, b in zip(s, s[1:]))}")
