# %% [markdown]
# # Nonlinear PCA with a sandglass autoencoder
#
# The network maps d inputs through a tanh layer to a k-unit linear
# bottleneck and back out again. The bottleneck activations are the
# low-dimensional coordinates.

# %%
import numpy as np

from qsarmap.nlpca import TrainConfig, fit, train
from qsarmap.pca import reconstruction_mse
from qsarmap.synthetic import rank_one

x = rank_one(50, 5, seed=0)
net, trace = train(x, 1)
print("layers:", net.layer_sizes)
print("mse after 1, 100, 2000 epochs:",
      ["%.2e" % trace.mse_per_epoch[i] for i in (0, 99, -1)])
print("PCA rank-1 reconstruction mse: %.2e" % reconstruction_mse(x, 1))

# %% [markdown]
# On a curve the one-unit bottleneck can follow the bend, while a single
# principal component can only keep a straight line.

# %%
t = np.linspace(-1, 1, 60)
arc = np.column_stack([t, t ** 2]) - [0, 1 / 3]
emb, net, trace = fit(arc, 1, TrainConfig(hidden_width=8, epochs=4000, learning_rate=0.02))
print("nlpca mse %.4f vs PCA %.4f" % (trace.final_mse, reconstruction_mse(arc, 1)))
