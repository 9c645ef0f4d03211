"""Nonlinear PCA with an autoassociative bottleneck network.

The network has the five-layer sandglass shape ``d -> h -> k -> h -> d``
with tanh on both hidden layers and identity activations at the
bottleneck and output. After training to reconstruct its input, the k
bottleneck activations are the nonlinear components.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dataset import DescriptorTable
from .embedding import Embedding
from .exceptions import DatasetError, TrainingDivergedError

FORMAT_HEADER = "qsarmap-nlpca-network"
FORMAT_VERSION = 1

# activation per weight layer: d->h, h->k, k->h, h->d
_TANH = (True, False, True, False)


@dataclass(frozen=True)
class TrainConfig:
    hidden_width: int = 8
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.hidden_width < 1:
            raise ValueError("hidden_width must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")


@dataclass
class AutoencoderNetwork:
    """Weights are stored as ``(fan_in, fan_out)`` matrices, applied as ``x @ W + b``."""

    layer_sizes: tuple
    weights: list
    biases: list

    def __post_init__(self):
        self.layer_sizes = tuple(int(s) for s in self.layer_sizes)
        d, h, k, h2, d2 = self.layer_sizes
        if d != d2 or h != h2:
            raise ValueError(f"layer sizes {self.layer_sizes} are not a sandglass")
        if k not in (1, 2) or k > d:
            raise ValueError(f"bottleneck width must be 1 or 2 and <= {d}")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            shape = self.layer_sizes[i], self.layer_sizes[i + 1]
            if np.shape(w) != shape or np.shape(b) != shape[1:]:
                raise ValueError(f"layer {i} parameters do not match {shape}")

    @property
    def input_dim(self):
        return self.layer_sizes[0]

    @property
    def bottleneck_dim(self):
        return self.layer_sizes[2]

    def parameters(self):
        """Flat list ``[W1, b1, W2, b2, W3, b3, W4, b4]`` (views, not copies)."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self):
        return AutoencoderNetwork(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )


@dataclass
class TrainTrace:
    mse_per_epoch: list = field(default_factory=list)
    final_mse: float = None

    def summary(self):
        m = self.mse_per_epoch
        return {
            "epochs": len(m),
            "final_mse": self.final_mse,
            "initial_mse": m[0] if m else None,
            "min_mse": min(m) if m else None,
        }


def init_network(d, k, config=None):
    """Seeded sandglass network; weights uniform in +-1/sqrt(fan_in), biases zero."""
    config = config or TrainConfig()
    if d < 1:
        raise ValueError("input dimension must be positive")
    if k > d:
        raise ValueError(f"bottleneck width {k} exceeds input dimension {d}")
    sizes = (d, config.hidden_width, k, config.hidden_width, d)
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return AutoencoderNetwork(sizes, weights, biases)


def _forward_batch(net, x):
    """Activations of every layer, input first."""
    acts = [x]
    for w, b, squash in zip(net.weights, net.biases, _TANH):
        z = acts[-1] @ w + b
        acts.append(np.tanh(z) if squash else z)
    return acts


def _check_input(net, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != net.input_dim:
        raise ValueError(f"expected {net.input_dim} features, got {x.shape[-1]}")
    return x


def forward(net, x):
    """Evaluate the network on one sample.

    Returns
    -------
    reconstruction : ndarray, shape (d,)
    bottleneck : ndarray, shape (k,)
    """
    x = _check_input(net, x)
    if x.ndim != 1:
        raise ValueError("forward takes a single sample; use encode for batches")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite values")
    acts = _forward_batch(net, x[None, :])
    return acts[4][0], acts[2][0]


def loss_gradient(net, batch):
    """Reconstruction mse and its exact gradient by backpropagation.

    The mse averages over samples and output coordinates. Gradients come
    back in the order of :meth:`AutoencoderNetwork.parameters`.
    """
    x = _check_input(net, batch)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("batch must be a nonempty N x d matrix")
    acts = _forward_batch(net, x)
    err = acts[-1] - x
    mse = float(np.mean(err * err))

    delta = 2.0 * err / err.size
    grads = [None] * 8
    for layer in range(3, -1, -1):
        grads[2 * layer] = acts[layer].T @ delta
        grads[2 * layer + 1] = delta.sum(axis=0)
        if layer:
            delta = delta @ net.weights[layer].T
            if _TANH[layer - 1]:
                delta = delta * (1.0 - acts[layer] ** 2)
    return mse, grads


def train(data, k, config=None):
    """Full-batch gradient descent with momentum.

    ``mse_per_epoch[i]`` is the loss after the i-th parameter update, so
    ``final_mse`` describes the returned network.

    Raises
    ------
    TrainingDivergedError
        If the loss or any parameter becomes non-finite.
    """
    config = config or TrainConfig()
    x = data.values if isinstance(data, DescriptorTable) else np.asarray(data, float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DatasetError("NLPCA training needs an N x d matrix with N >= 2")
    net = init_network(x.shape[1], k, config)
    trace = TrainTrace()
    if config.epochs == 0:
        return net, trace

    params = net.parameters()
    velocity = [np.zeros_like(p) for p in params]
    mse, grads = loss_gradient(net, x)
    # overflow is detected below and reported as divergence
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(1, config.epochs + 1):
            for p, v, g in zip(params, velocity, grads):
                v *= config.momentum
                v -= config.learning_rate * g
                p += v
            mse, grads = loss_gradient(net, x)
            if not np.isfinite(mse) or not all(np.all(np.isfinite(p)) for p in params):
                raise TrainingDivergedError(epoch)
            trace.mse_per_epoch.append(mse)
    trace.final_mse = mse
    return net, trace


def encode(net, data, trace=None):
    """Bottleneck activations for every row of ``data``."""
    x = data.values if isinstance(data, DescriptorTable) else np.asarray(data, float)
    x = _check_input(net, np.atleast_2d(x))
    coords = _forward_batch(net, x)[2]
    info = {"layer_sizes": list(net.layer_sizes)}
    if trace is not None:
        info.update(trace.summary())
    return Embedding(coords=coords, method="nlpca", info=info)


def fit(data, k, config=None):
    """Train a network and encode the training data in one call."""
    config = config or TrainConfig()
    net, trace = train(data, k, config)
    emb = encode(net, data, trace)
    emb.info["config"] = asdict(config)
    return emb, net, trace


def save_network(net, path):
    """Write parameters as versioned plain text.

    Layout: a header line ``qsarmap-nlpca-network 1``, a line of the five
    layer sizes, four lines of row-major weights (one line per layer,
    matrices shaped fan_in x fan_out), then four lines of biases. Numbers
    use Python's shortest round-trip repr, so loading is exact.
    """
    lines = [f"{FORMAT_HEADER} {FORMAT_VERSION}",
             " ".join(str(s) for s in net.layer_sizes)]
    for w in net.weights:
        lines.append(" ".join(repr(float(v)) for v in w.ravel()))
    for b in net.biases:
        lines.append(" ".join(repr(float(v)) for v in b))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_network(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 2 or head[0] != FORMAT_HEADER:
        raise ValueError(f"{path}: not a qsarmap network file")
    if int(head[1]) != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {head[1]}")
    if len(lines) != 10:
        raise ValueError(f"{path}: expected 10 lines, found {len(lines)}")
    sizes = tuple(int(s) for s in lines[1].split())
    weights, biases = [], []
    for i in range(4):
        vals = np.array([float(v) for v in lines[2 + i].split()])
        weights.append(vals.reshape(sizes[i], sizes[i + 1]))
        biases.append(np.array([float(v) for v in lines[6 + i].split()]).reshape(sizes[i + 1]))
    return AutoencoderNetwork(sizes, weights, biases)
