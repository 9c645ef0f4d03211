from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Embedding:
    """Low-dimensional coordinates produced by one mapping method.

    Attributes
    ----------
    coords : ndarray, shape (N, k)
    method : str
        One of ``"pca"``, ``"nlpca"``, ``"sammon"``.
    info : dict
        Method-specific provenance (configuration, final stress or mse, ...).
    """

    coords: np.ndarray
    method: str
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        object.__setattr__(self, "coords", coords)

    @property
    def k(self):
        return self.coords.shape[1]

    def __len__(self):
        return self.coords.shape[0]
