"""Seeded synthetic descriptor sets with known class geometry."""

import numpy as np

from .dataset import CARCINOGENICITY_DESCRIPTORS, DescriptorTable


def random_rotation(d, rng):
    """Haar-distributed orthogonal d x d matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def _embed_plane(plane, d, noise, rng):
    n = plane.shape[0]
    x = np.hstack([plane, noise * rng.standard_normal((n, d - 2))])
    return x @ random_rotation(d, rng).T


def linearly_separated(n=60, d=8, gap=1.0, noise=0.3, seed=0):
    """Two Gaussian blobs split by a margin inside a 2-D plane of R^d.

    The plane carries most of the variance; the other ``d - 2`` axes hold
    small isotropic noise. Points are drawn until every sample lies at least
    ``gap / 2`` from the separating line.

    Returns
    -------
    x : ndarray, shape (n, d)
    y : ndarray of bool, shape (n,)
    """
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2 == 0
    plane = np.empty((n, 2))
    for i in range(n):
        centre = 2.5 if y[i] else -2.5
        while True:
            p = rng.standard_normal(2) * [1.0, 2.0] + [centre, 0.0]
            if (p[0] > gap / 2) == y[i] and abs(p[0]) > gap / 2:
                break
        plane[i] = p
    return _embed_plane(plane, d, noise, rng), y


def disc_and_ring(n=80, d=8, noise=0.05, seed=0):
    """Positive class inside the unit disc, negatives on a ring of radius 1.6 to 2.6.

    Only a curved boundary separates the classes in the plane.
    """
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2 == 0
    radius = np.where(y, np.sqrt(rng.uniform(0, 1, n)), rng.uniform(1.6, 2.6, n))
    angle = rng.uniform(0, 2 * np.pi, n)
    plane = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return _embed_plane(plane, d, noise, rng), y


def collinear(n=10, d=5, seed=0):
    """``n`` distinct points on a random line through R^d."""
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(-3, 3, n))
    u = rng.standard_normal(d)
    return np.outer(t, u / np.linalg.norm(u)) + rng.standard_normal(d)


def rank_one(n=50, d=5, seed=0):
    """Zero-mean-latent data on a 1-D linear subspace of R^d (unit latent variance)."""
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(n)
    u = rng.standard_normal(d)
    return np.outer(t, u / np.linalg.norm(u))


def symmetric_endpoint(n, centre, step, rng):
    """``n`` endpoint values symmetric about ``centre`` in a random order.

    Values are ``centre +- step * j``; with ``step`` a power of two the mean
    is exactly ``centre`` in floating point.
    """
    half = np.arange(1, n // 2 + 1) * step
    values = np.concatenate([centre - half, centre + half, [centre] * (n % 2)])
    return rng.permutation(values)


# (mean, spread, integer-valued) for each descriptor of the 23-column schema
_CARCINOGENICITY_SCALES = {
    "Weight": (280.0, 90.0, False), "HDon": (1.5, 1.2, True),
    "HAcc": (4.0, 2.0, True), "XlogP": (2.2, 1.4, False),
    "TPSA": (60.0, 25.0, False), "Polariz": (28.0, 9.0, False),
    "Dipole": (3.0, 1.5, False), "LogS": (-3.0, 1.2, False),
    "NRotBond": (4.0, 2.5, True), "NVRO5": (0.3, 0.5, True),
    "NVERO5": (0.5, 0.7, True), "NAtoms": (30.0, 10.0, True),
    "NStereo": (0.8, 1.0, True), "Complexity": (320.0, 120.0, False),
    "RComplexity": (0.4, 0.15, False), "Diameter": (12.0, 3.0, True),
    "InertiaX": (900.0, 400.0, False), "InertiaY": (600.0, 250.0, False),
    "InertiaZ": (250.0, 100.0, False), "Span": (9.0, 2.5, False),
    "RGyr": (3.5, 0.9, False), "Eccentric": (0.85, 0.1, False),
    "Aspheric": (0.35, 0.15, False),
}


_SIGNED = {"XlogP", "LogS"}


def carcinogenicity_dataset(n=55, seed=2009):
    """Synthetic carcinogenicity-style table with the 23 descriptor columns.

    The endpoint ("ActivityScore") is symmetric about 29, so its mean is
    exactly 29 and the strict ``> 29`` rule splits the compounds evenly.
    Descriptors follow a three-factor latent model whose first factor is
    correlated with the endpoint.
    """
    rng = np.random.default_rng(seed)
    endpoint = symmetric_endpoint(n, 29.0, 0.5, rng)
    toxic = (endpoint - 29.0) / np.std(endpoint)
    latent = rng.standard_normal((n, 3))
    latent[:, 0] = 0.8 * toxic + 0.6 * latent[:, 0]
    loadings = rng.uniform(-1, 1, (3, len(CARCINOGENICITY_DESCRIPTORS)))
    z = latent @ loadings + 0.4 * rng.standard_normal((n, len(CARCINOGENICITY_DESCRIPTORS)))
    z /= z.std(axis=0)

    values = np.empty_like(z)
    for j, name in enumerate(CARCINOGENICITY_DESCRIPTORS):
        mean, spread, integer = _CARCINOGENICITY_SCALES[name]
        col = mean + spread * z[:, j]
        if name not in _SIGNED:
            col = np.clip(col, 0.0, 0.999 if name == "Eccentric" else None)
        values[:, j] = np.round(col) if integer else np.round(col, 4)
    ids = [f"CPDB-{i + 1:03d}" for i in range(n)]
    return DescriptorTable(ids, CARCINOGENICITY_DESCRIPTORS, values, "ActivityScore", endpoint)


def hept_like_dataset(n=80, d=10, seed=1997):
    """Synthetic anti-HIV style table: ``d`` descriptors and a pIC50 endpoint.

    Activity depends linearly on the descriptors, and one compound sits
    exactly on the pIC50 = 6 boundary.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    w = rng.standard_normal(d)
    score = x @ w
    pic50 = 6.0 + 1.2 * (score - np.median(score)) / score.std()
    pic50 += 0.15 * rng.standard_normal(n)
    pic50 = np.round(pic50, 2)
    pic50[0] = 6.0
    values = np.round(x * rng.uniform(0.5, 5, d) + rng.uniform(-2, 10, d), 4)
    ids = [f"HEPT-{i + 1:02d}" for i in range(n)]
    names = [f"desc{j + 1:02d}" for j in range(d)]
    return DescriptorTable(ids, names, values, "pIC50", pic50)


def write_csv(table, path):
    """Write a table in the layout :func:`qsarmap.dataset.load_csv` reads."""
    header = ["ID", *table.descriptor_names, table.endpoint_name]
    lines = [",".join(header)]
    for cid, row, e in zip(table.compound_ids, table.values, table.endpoint):
        lines.append(",".join([cid, *(repr(float(v)) for v in row), repr(float(e))]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
