# %% [markdown]
# # Principal components by Jacobi rotation
#
# PCA here is built from the sample covariance and a cyclic Jacobi
# eigensolver, so no LAPACK routine is involved. We compare against
# `numpy.linalg.eigh` only as a sanity check.

# %%
import numpy as np

from qsarmap import load_fixture
from qsarmap.dataset import normalize
from qsarmap.pca import covariance, eigendecompose_symmetric, fit_pca, project

x = normalize(load_fixture("carcinogenicity")).values
c = covariance(x)
eig = eigendecompose_symmetric(c)
print("sweeps:", eig.sweeps)
print("leading eigenvalues:", np.round(eig.eigenvalues[:4], 4))
print("max deviation from eigh:", np.abs(eig.eigenvalues - np.linalg.eigh(c)[0][::-1]).max())

# %% [markdown]
# With z-scored columns the total variance equals the number of
# descriptors, and the ratio shows how much the first two axes keep.

# %%
model = fit_pca(x, 2)
print("total variance %.3f" % model.total_variance)
print("explained ratio:", np.round(model.explained_variance_ratio, 3))

# %%
emb = project(model, x)
print(emb.coords[:5])

# %% [markdown]
# No unit direction carries more variance than the first component.

# %%
rng = np.random.default_rng(0)
u = rng.standard_normal((1000, x.shape[1]))
u /= np.linalg.norm(u, axis=1, keepdims=True)
probe = np.sum(((x - x.mean(axis=0)) @ u.T) ** 2, axis=0) / (len(x) - 1)
print("best random probe %.3f <= %.3f" % (probe.max(), model.explained_variance[0]))
