"""Separability metrics for labelled embeddings.

Visual judgments like "the classes cluster well" or "a linear classifier
will do" are made quantitative with four training-set metrics:

* best single-threshold accuracy along a 1-D axis,
* Fisher linear discriminant accuracy in 2-D,
* Fisher accuracy after a quadratic monomial lift,
* mean silhouette width of the two classes.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .dataset import EndpointLabeling
from .embedding import Embedding
from .exceptions import DegenerateLabelingError

FISHER_RIDGE = 1e-9
LINEAR_MARGIN = 0.02
LINEAR_ADEQUATE = "linear adequate"
NONLINEAR_INDICATED = "nonlinear boundary indicated"


def _labels(labels):
    y = labels.labels if isinstance(labels, EndpointLabeling) else np.asarray(labels, bool)
    if y.all() or not y.any():
        raise DegenerateLabelingError("both classes must be nonempty")
    return y


def _coords(embedding, n, k=None):
    x = embedding.coords if isinstance(embedding, Embedding) else np.asarray(embedding, float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != n:
        raise ValueError(f"embedding has {x.shape[0]} rows, labels have {n}")
    if k is not None and x.shape[1] != k:
        raise ValueError(f"expected {k}-column coordinates, got {x.shape[1]}")
    return x


def threshold_accuracy_1d(embedding, labels):
    """Best training accuracy of a single cut on a 1-D axis.

    Every midpoint between consecutive sorted coordinates and both infinite
    cuts are tried with both polarities (``+1`` predicts positive above the
    cut, ``-1`` below it). Ties go to the smallest cut, then to ``+1``.

    Returns
    -------
    accuracy : float
    cut : float
    polarity : int
    """
    y = _labels(labels)
    x = _coords(embedding, y.size, 1)[:, 0]
    s = np.sort(x)
    cuts = np.concatenate(([-np.inf], (s[:-1] + s[1:]) / 2, [np.inf]))
    above = x[None, :] > cuts[:, None]
    acc_up = np.mean(above == y[None, :], axis=1)
    acc_down = np.mean((x[None, :] < cuts[:, None]) == y[None, :], axis=1)

    best = max(acc_up.max(), acc_down.max())
    best_cut, best_pol = np.inf, 1
    for acc, pol in ((acc_up, 1), (acc_down, -1)):
        hits = np.flatnonzero(acc == best)
        if hits.size and cuts[hits[0]] < best_cut:
            best_cut, best_pol = cuts[hits[0]], pol
    return float(best), float(best_cut), best_pol


def _fisher_direction(x, y):
    pos, neg = x[y], x[~y]
    diff = pos.mean(axis=0) - neg.mean(axis=0)
    if np.linalg.norm(diff) <= 1e-12 * max(1.0, np.max(np.abs(x))):
        return None
    scatter = ((pos - pos.mean(axis=0)).T @ (pos - pos.mean(axis=0))
               + (neg - neg.mean(axis=0)).T @ (neg - neg.mean(axis=0)))
    w = np.linalg.solve(scatter + FISHER_RIDGE * np.eye(x.shape[1]), diff)
    norm = np.linalg.norm(w)
    return w / norm if norm > 0 else None


def _critical_directions(x):
    """Unit normals to every line through two of the points."""
    dirs = []
    for i, j in combinations(range(x.shape[0]), 2):
        v = x[j] - x[i]
        n = np.linalg.norm(v)
        if n > 0:
            dirs.append(np.array([-v[1], v[0]]) / n)
    return dirs or [np.array([1.0, 0.0])]


def _fisher_accuracy(x, y):
    w = _fisher_direction(x, y)
    if w is not None:
        acc, cut, _ = threshold_accuracy_1d(x @ w, y)
        return acc, w, cut
    # Equal class means leave the Fisher direction undefined (e.g. XOR);
    # fall back to the best sweep over all point-pair line normals.
    best = None
    for w in _critical_directions(x) if x.shape[1] == 2 else np.eye(x.shape[1]):
        acc, cut, _ = threshold_accuracy_1d(x @ w, y)
        if best is None or acc > best[0]:
            best = (acc, w, cut)
    return best


def linear_accuracy_2d(embedding, labels):
    """Training accuracy of a Fisher linear discriminant on 2-D coordinates.

    Returns
    -------
    accuracy : float
    direction : ndarray, shape (2,)
        Unit discriminant direction.
    cut : float
        Threshold along ``direction``.
    """
    y = _labels(labels)
    x = _coords(embedding, y.size, 2)
    acc, w, cut = _fisher_accuracy(x, y)
    return acc, w, cut


def quadratic_lift(x):
    """Monomials ``(x, y, x^2, y^2, xy)`` for 2-D input, ``(x, x^2)`` for 1-D."""
    x = np.asarray(x, dtype=float)
    if x.shape[1] == 1:
        return np.hstack([x, x * x])
    a, b = x[:, 0], x[:, 1]
    return np.column_stack([a, b, a * a, b * b, a * b])


def quadratic_accuracy_2d(embedding, labels):
    """Fisher accuracy after lifting 2-D points to quadratic monomials."""
    y = _labels(labels)
    x = _coords(embedding, y.size, 2)
    return _fisher_accuracy(quadratic_lift(x), y)[0]


def quadratic_accuracy_1d(embedding, labels):
    """1-D analogue of :func:`quadratic_accuracy_2d`: an interval classifier."""
    y = _labels(labels)
    x = _coords(embedding, y.size, 1)
    return _fisher_accuracy(quadratic_lift(x), y)[0]


def silhouette(embedding, labels):
    """Mean silhouette width of the two label classes.

    Points in a singleton class contribute 0.
    """
    y = _labels(labels)
    x = _coords(embedding, y.size)
    if y.size < 3:
        raise ValueError("silhouette needs at least 3 points")
    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    same = y[:, None] == y[None, :]
    n_same = same.sum(axis=1) - 1
    a = np.where(n_same > 0, (dist * same).sum(axis=1) / np.maximum(n_same, 1), 0.0)
    b = (dist * ~same).sum(axis=1) / (~same).sum(axis=1)
    denom = np.maximum(a, b)
    s = np.where((n_same > 0) & (denom > 0), (b - a) / np.where(denom > 0, denom, 1), 0.0)
    return float(s.mean())


@dataclass
class MethodMetrics:
    method: str
    k: int
    silhouette: float
    threshold_accuracy_1d: float = None
    cut: float = None
    polarity: int = None
    linear_accuracy: float = None
    direction: list = None
    quadratic_accuracy: float = None
    verdict: str = None

    @property
    def primary(self):
        return self.threshold_accuracy_1d if self.k == 1 else self.linear_accuracy

    def as_dict(self):
        out = {
            "method": self.method,
            "k": self.k,
            "silhouette": self.silhouette,
            "quadratic_accuracy": self.quadratic_accuracy,
            "verdict": self.verdict,
        }
        if self.k == 1:
            out["threshold_accuracy_1d"] = self.threshold_accuracy_1d
            out["cut"] = self.cut if np.isfinite(self.cut) else None
            out["polarity"] = self.polarity
        else:
            out["linear_accuracy"] = self.linear_accuracy
            out["direction"] = self.direction
        return out


@dataclass
class SeparabilityReport:
    """Metrics per (method, k) and a ranking per output dimension.

    ``ranking[k]`` orders method names by the primary accuracy for that
    dimension (threshold accuracy for k=1, Fisher accuracy for k=2), then
    silhouette, then name.
    """

    metrics: list = field(default_factory=list)
    ranking: dict = field(default_factory=dict)

    def get(self, method, k):
        for m in self.metrics:
            if m.method == method and m.k == k:
                return m
        raise KeyError((method, k))

    def best(self, k):
        return self.ranking[k][0]


def evaluate(embedding, labels, method=None):
    """All applicable metrics for a single embedding."""
    y = _labels(labels)
    x = _coords(embedding, y.size)
    method = method or getattr(embedding, "method", "embedding")
    k = x.shape[1]
    m = MethodMetrics(method=method, k=k, silhouette=silhouette(x, y))
    if k == 1:
        m.threshold_accuracy_1d, m.cut, m.polarity = threshold_accuracy_1d(x, y)
        m.quadratic_accuracy = quadratic_accuracy_1d(x, y)
    elif k == 2:
        acc, w, _ = linear_accuracy_2d(x, y)
        m.linear_accuracy = acc
        m.direction = [float(v) for v in w]
        m.quadratic_accuracy = quadratic_accuracy_2d(x, y)
    else:
        raise ValueError(f"only 1-D and 2-D embeddings are supported, got k={k}")
    ok = m.primary >= m.quadratic_accuracy - LINEAR_MARGIN
    m.verdict = LINEAR_ADEQUATE if ok else NONLINEAR_INDICATED
    return m


def compare_methods(embeddings, labels):
    """Score and rank a set of embeddings of the same compounds.

    Parameters
    ----------
    embeddings : iterable of (method, k, Embedding)
    labels : EndpointLabeling or array_like of bool

    Returns
    -------
    SeparabilityReport
    """
    y = _labels(labels)
    report = SeparabilityReport()
    for method, k, emb in embeddings:
        coords = _coords(emb, y.size)
        if coords.shape[1] != k:
            raise ValueError(f"{method}: declared k={k}, coordinates have {coords.shape[1]}")
        report.metrics.append(evaluate(coords, y, method))
    report.metrics.sort(key=lambda m: (m.k, m.method))
    for k in sorted({m.k for m in report.metrics}):
        group = [m for m in report.metrics if m.k == k]
        group.sort(key=lambda m: (-m.primary, -m.silhouette, m.method))
        report.ranking[k] = [m.method for m in group]
    return report
