"""Sammon's nonlinear mapping.

Low-dimensional coordinates Y are fitted so that their interpoint
distances d_ij approximate the input-space distances D_ij, by minimising

    E = (1 / c) * sum_{i<j} (D_ij - d_ij)**2 / D_ij,   c = sum_{i<j} D_ij

with Sammon's diagonal pseudo-Newton step plus step halving.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import DescriptorTable
from .embedding import Embedding
from .exceptions import DatasetError
from .pca import fit_pca, project

DISTANCE_FLOOR = 1e-12
HESSIAN_FLOOR = 1e-12
MAX_HALVINGS = 20


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric Euclidean distances with a zero diagonal.

    Off-diagonal zeros (coincident points) are raised to ``DISTANCE_FLOOR``;
    ``clamped_pairs`` counts how many unordered pairs were affected.
    """

    entries: np.ndarray
    clamped_pairs: int = 0

    @property
    def warnings(self):
        if not self.clamped_pairs:
            return ()
        return (f"{self.clamped_pairs} coincident point pair(s): "
                f"input distance clamped to {DISTANCE_FLOOR:g}",)

    def __len__(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class SammonConfig:
    step_factor: float = 0.35
    max_iterations: int = 500
    relative_tolerance: float = 1e-9
    init: str = "pca"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.step_factor <= 1:
            raise ValueError("step_factor must lie in (0, 1]")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.relative_tolerance <= 0:
            raise ValueError("relative_tolerance must be positive")
        if self.init not in ("pca", "random"):
            raise ValueError("init must be 'pca' or 'random'")


@dataclass
class SammonTrace:
    """Stress before the first iteration followed by one entry per iteration."""

    stress_per_iteration: list = field(default_factory=list)
    converged: bool = False
    iterations_used: int = 0

    def summary(self):
        s = self.stress_per_iteration
        return {
            "iterations_used": self.iterations_used,
            "converged": self.converged,
            "initial_stress": s[0] if s else None,
            "final_stress": s[-1] if s else None,
        }


def _euclidean(x):
    diff = x[:, None, :] - x[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def pairwise_distances(data):
    """Euclidean distance matrix of the rows of ``data``."""
    x = data.values if isinstance(data, DescriptorTable) else np.asarray(data, float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 2:
        raise DatasetError("need at least 2 points for a distance matrix")
    dist = _euclidean(x)
    n = dist.shape[0]
    off = ~np.eye(n, dtype=bool)
    zero = off & (dist < DISTANCE_FLOOR)
    dist[zero] = DISTANCE_FLOOR
    return DistanceMatrix(entries=dist, clamped_pairs=int(zero.sum()) // 2)


def _entries(dist):
    return dist.entries if isinstance(dist, DistanceMatrix) else np.asarray(dist, float)


def stress(dist, y):
    """Sammon stress of output coordinates ``y`` against input distances."""
    big_d = _entries(dist)
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    if y.shape[0] != big_d.shape[0]:
        raise ValueError("coordinate rows do not match the distance matrix")
    iu = np.triu_indices(big_d.shape[0], k=1)
    dd = big_d[iu]
    small = _euclidean(y)[iu]
    return float(np.sum((dd - small) ** 2 / dd) / np.sum(dd))


def stress_derivatives(dist, y):
    """First and (diagonal) second partial derivatives of the stress.

    Returns
    -------
    grad, hess_diag : ndarray, shape (N, k)
        ``dE/dy_il`` and ``d2E/dy_il2``. Output distances are floored at
        ``DISTANCE_FLOOR`` so coincident outputs stay finite.
    """
    big_d = _entries(dist).copy()
    y = np.asarray(y, dtype=float)
    n = big_d.shape[0]
    c = np.sum(big_d[np.triu_indices(n, k=1)])

    diff = y[:, None, :] - y[None, :, :]
    small = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    small = np.maximum(small, DISTANCE_FLOOR)
    np.fill_diagonal(big_d, 1.0)
    np.fill_diagonal(small, 1.0)

    denom = big_d * small
    delta = big_d - small
    ratio = delta / denom
    np.fill_diagonal(ratio, 0.0)
    inv = 1.0 / denom
    np.fill_diagonal(inv, 0.0)

    grad = (-2.0 / c) * np.einsum("ij,ijk->ik", ratio, diff)
    sq = diff * diff
    weight = (1.0 + delta / small)[:, :, None]
    hess = (-2.0 / c) * np.einsum(
        "ij,ijk->ik", inv, delta[:, :, None] - sq / small[:, :, None] * weight
    )
    return grad, hess


def _initial_coords(x, k, config):
    n, d = x.shape
    if config.init == "random":
        rng = np.random.default_rng(config.seed)
        return rng.standard_normal((n, k))
    kk = min(k, d)
    y = np.zeros((n, k))
    y[:, :kk] = project(fit_pca(x, kk), x).coords
    return y


def _break_ties(y, scale, seed):
    """Nudge coincident starting points apart; they are a stationary trap."""
    small = _euclidean(y)
    n = y.shape[0]
    tie = (small < 1e-9 * scale) & ~np.eye(n, dtype=bool)
    if not np.any(tie):
        return y, False
    rng = np.random.default_rng(seed)
    return y + 1e-4 * scale * rng.standard_normal(y.shape), True


def embed(data, k=2, config=None):
    """Map ``data`` to ``k`` dimensions by minimising Sammon stress.

    Parameters
    ----------
    data : DescriptorTable or array_like, shape (N, d)
    k : int
        Output dimension, 1 or 2 in normal use.
    config : SammonConfig, optional

    Returns
    -------
    embedding : Embedding
    trace : SammonTrace
    """
    config = config or SammonConfig()
    x = data.values if isinstance(data, DescriptorTable) else np.asarray(data, float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise DatasetError("Sammon mapping needs an N x d matrix with N >= 2")
    if k < 1:
        raise ValueError("k must be positive")

    dist = pairwise_distances(x)
    if dist.clamped_pairs == x.shape[0] * (x.shape[0] - 1) // 2:
        raise DatasetError("all points coincide; Sammon stress is undefined")

    y = _initial_coords(x, k, config)
    scale = float(np.max(dist.entries))
    y, nudged = _break_ties(y, scale, config.seed)

    e = stress(dist, y)
    trace = SammonTrace(stress_per_iteration=[e])
    for _ in range(config.max_iterations):
        if e == 0.0:
            trace.converged = True
            break
        grad, hess = stress_derivatives(dist, y)
        step = -config.step_factor * grad / np.maximum(np.abs(hess), HESSIAN_FLOOR)
        e_new, y_new = e, y
        for _ in range(MAX_HALVINGS + 1):
            candidate = y + step
            e_try = stress(dist, candidate)
            if e_try < e:
                e_new, y_new = e_try, candidate
                break
            step = step / 2
        change = (e - e_new) / e
        y, e = y_new, e_new
        trace.stress_per_iteration.append(e)
        trace.iterations_used += 1
        if change < config.relative_tolerance:
            trace.converged = True
            break

    warnings = list(dist.warnings)
    if nudged:
        warnings.append("coincident starting coordinates were perturbed")
    info = {"config": asdict(config), "final_stress": e, "warnings": warnings}
    info.update(trace.summary())
    return Embedding(coords=y, method="sammon", info=info), trace
