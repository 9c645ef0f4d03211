# %% [markdown]
# # Do the classes separate?
#
# Each embedding is scored by how well its two classes split: a single
# cut in 1-D, a Fisher line in 2-D, a Fisher cut after a quadratic lift,
# and the silhouette width. When the lifted classifier beats the straight
# one by more than 0.02 the boundary is flagged as nonlinear.

# %%
import numpy as np

from qsarmap import analysis
from qsarmap.pca import fit_pca, project
from qsarmap.synthetic import disc_and_ring, linearly_separated

xor = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
m = analysis.evaluate(xor, [True, True, False, False], "xor")
print(f"XOR: linear {m.linear_accuracy}, quadratic {m.quadratic_accuracy}, {m.verdict}")

# %% [markdown]
# Two synthetic sets embedded in 8 dimensions: one split by a plane, one
# a disc inside a ring. PCA recovers the informative plane in both.

# %%
for name, (x, y) in {"linear": linearly_separated(seed=0),
                     "disc/ring": disc_and_ring(seed=0)}.items():
    emb = project(fit_pca(x, 2), x)
    m = analysis.evaluate(emb, y)
    print(f"{name:>9}: linear {m.linear_accuracy:.3f} quadratic {m.quadratic_accuracy:.3f} "
          f"silhouette {m.silhouette:.3f} -> {m.verdict}")

# %% [markdown]
# The full pipeline, as run by the `qsarmap` command, ranks every method
# per output dimension.

# %%
from qsarmap import fixture_path
from qsarmap.cli import RunConfig, run_pipeline

res = run_pipeline(RunConfig(input=str(fixture_path("carcinogenicity")),
                             endpoint="ActivityScore", out="unused"))
for k, order in res.report.ranking.items():
    print(f"k={k}:", ", ".join(f"{n} ({res.report.get(n, k).primary:.3f})" for n in order))
