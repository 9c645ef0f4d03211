"""Principal component analysis on the descriptor covariance matrix.

The symmetric eigenproblem is solved with cyclic Jacobi rotations in
round-robin (tournament) order: each sweep is split into rounds of
disjoint index pairs, and the rotations of one round commute, so they are
applied together as a single orthogonal similarity transform.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import DescriptorTable
from .embedding import Embedding
from .exceptions import ConvergenceError, DatasetError

MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-12
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    total_variance: float

    @property
    def k(self):
        return self.components.shape[1]

    @property
    def explained_variance_ratio(self):
        if self.total_variance == 0:
            return np.zeros_like(self.explained_variance)
        return self.explained_variance / self.total_variance


def _as_matrix(data):
    if isinstance(data, DescriptorTable):
        return data.values
    return np.asarray(data, dtype=float)


def covariance(data):
    """Sample covariance (divisor N-1) of the rows of ``data``.

    The result is exactly symmetric.
    """
    x = _as_matrix(data)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DatasetError("covariance needs an N x d matrix with N >= 2")
    centered = x - x.mean(axis=0)
    c = centered.T @ centered / (x.shape[0] - 1)
    return (c + c.T) / 2


def _round_robin(n):
    """Rounds of disjoint (p, q) pairs covering every p < q exactly once."""
    players = list(range(n)) + ([None] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(np.array(pairs, dtype=int).reshape(-1, 2))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return np.sqrt(np.sum(off * off))


def eigendecompose_symmetric(c):
    """Full spectral decomposition of a real symmetric matrix.

    Each eigenvector is signed so that its largest-magnitude entry is
    positive (the first such entry when several tie).

    Raises
    ------
    ValueError
        If ``c`` is not square and symmetric within 1e-10.
    ConvergenceError
        If the off-diagonal norm is not below 1e-12 (relative to the
        Frobenius norm) after 100 sweeps.
    """
    a = np.array(c, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL * max(1.0, scale):
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2
    n = a.shape[0]
    v = np.eye(n)

    frob = np.sqrt(np.sum(a * a))
    tol = OFF_DIAGONAL_TOL * frob
    rounds = _round_robin(n)
    sweeps = 0
    while _off_norm(a) > tol:
        if sweeps == MAX_SWEEPS:
            raise ConvergenceError("Jacobi eigensolver did not converge", _off_norm(a))
        for pairs in rounds:
            p, q = pairs[:, 0], pairs[:, 1]
            apq = a[p, q]
            active = apq != 0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            cos = 1 / np.sqrt(t * t + 1)
            sin = t * cos
            rot = np.eye(n)
            rot[p, p] = cos
            rot[q, q] = cos
            rot[p, q] = sin
            rot[q, p] = -sin
            a = rot.T @ a @ rot
            a = (a + a.T) / 2
            v = v @ rot
        sweeps += 1

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    for i in range(n):
        if v[np.argmax(np.abs(v[:, i])), i] < 0:
            v[:, i] = -v[:, i]
    return EigenDecomposition(eigenvalues=w, eigenvectors=v, sweeps=sweeps)


def fit_pca(data, k):
    """Fit a k-component PCA model to a table or an N x d matrix."""
    x = _as_matrix(data)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DatasetError("PCA needs an N x d matrix with N >= 2")
    d = x.shape[1]
    if not 1 <= k <= d:
        raise ValueError(f"cannot keep {k} components of {d}-dimensional data")
    c = covariance(x)
    eig = eigendecompose_symmetric(c)
    return PcaModel(
        mean=x.mean(axis=0),
        components=eig.eigenvectors[:, :k].copy(),
        explained_variance=np.maximum(eig.eigenvalues[:k], 0.0),
        total_variance=float(np.trace(c)),
    )


def project(model, data):
    """Coordinates of the rows of ``data`` on the model's components."""
    x = _as_matrix(data)
    if x.ndim != 2 or x.shape[1] != model.mean.size:
        raise ValueError(
            f"data has shape {x.shape}, model expects {model.mean.size} columns"
        )
    coords = (x - model.mean) @ model.components
    return Embedding(
        coords=coords,
        method="pca",
        info={
            "explained_variance": [float(e) for e in model.explained_variance],
            "explained_variance_ratio": [float(r) for r in model.explained_variance_ratio],
            "total_variance": model.total_variance,
        },
    )


def reconstruct(model, coords):
    """Map component coordinates back to the original descriptor space."""
    coords = np.asarray(coords, dtype=float).reshape(-1, model.k)
    return coords @ model.components.T + model.mean


def reconstruction_mse(data, k):
    """Mean squared error of the best rank-k PCA reconstruction of ``data``."""
    x = _as_matrix(data)
    model = fit_pca(x, k)
    recon = reconstruct(model, project(model, x).coords)
    return float(np.mean((x - recon) ** 2))
