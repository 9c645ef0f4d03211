import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsarmap.exceptions import DatasetError
from qsarmap.pca import (
    _round_robin,
    covariance,
    eigendecompose_symmetric,
    fit_pca,
    project,
    reconstruct,
    reconstruction_mse,
)


def brute_covariance(x):
    n, d = x.shape
    mean = [sum(x[i, j] for i in range(n)) / n for j in range(d)]
    c = np.zeros((d, d))
    for a in range(d):
        for b in range(d):
            c[a, b] = sum((x[i, a] - mean[a]) * (x[i, b] - mean[b]) for i in range(n)) / (n - 1)
    return c


def random_symmetric(rng, d):
    m = rng.standard_normal((d, d))
    return (m + m.T) / 2


class TestCovariance:
    def test_repeated_row(self):
        np.testing.assert_array_equal(covariance([[3, 3], [3, 3]]), np.zeros((2, 2)))

    def test_single_axis(self):
        np.testing.assert_array_equal(covariance([[1, 0], [-1, 0]]), [[2, 0], [0, 0]])

    def test_matches_double_loop(self, rng):
        x = rng.standard_normal((5, 3))
        np.testing.assert_allclose(covariance(x), brute_covariance(x), atol=1e-12, rtol=0)

    def test_exactly_symmetric(self, rng):
        c = covariance(rng.standard_normal((30, 7)))
        assert np.array_equal(c, c.T)

    def test_needs_two_rows(self):
        with pytest.raises(DatasetError):
            covariance([[1.0, 2.0]])


class TestEigendecompose:
    @pytest.mark.parametrize("n", [1, 2, 3, 6, 7, 25])
    def test_round_robin_covers_every_pair_once(self, n):
        seen = [tuple(p) for rnd in _round_robin(n) for p in rnd]
        assert sorted(seen) == [(i, j) for i in range(n) for j in range(i + 1, n)]
        for rnd in _round_robin(n):
            flat = rnd.ravel().tolist()
            assert len(flat) == len(set(flat))

    def test_identity(self):
        e = eigendecompose_symmetric(np.eye(4))
        np.testing.assert_array_equal(e.eigenvalues, 1.0)
        np.testing.assert_array_equal(e.eigenvectors, np.eye(4))

    def test_diagonal(self):
        e = eigendecompose_symmetric(np.diag([1.0, 3.0]))
        np.testing.assert_array_equal(e.eigenvalues, [3, 1])
        np.testing.assert_array_equal(e.eigenvectors, [[0, 1], [1, 0]])

    def test_two_by_two_closed_form(self):
        e = eigendecompose_symmetric([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(e.eigenvalues, [3, 1], atol=1e-14)
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(e.eigenvectors, [[r, r], [r, -r]], atol=1e-14)

    def test_sign_convention(self, rng):
        e = eigendecompose_symmetric(random_symmetric(rng, 9))
        for v in e.eigenvectors.T:
            assert v[np.argmax(np.abs(v))] > 0

    def test_agrees_with_lapack(self, rng):
        c = random_symmetric(rng, 12)
        e = eigendecompose_symmetric(c)
        np.testing.assert_allclose(e.eigenvalues, np.linalg.eigvalsh(c)[::-1], atol=1e-12)

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            eigendecompose_symmetric([[1.0, 2.0], [0.0, 1.0]])

    def test_deterministic(self, rng):
        c = random_symmetric(rng, 8)
        a, b = eigendecompose_symmetric(c), eigendecompose_symmetric(c)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_covariance_spectrum_nonnegative(self, rng):
        c = covariance(rng.standard_normal((4, 10)))  # rank 3
        e = eigendecompose_symmetric(c)
        assert np.all(e.eigenvalues >= -1e-10)
        assert np.all(np.diff(e.eigenvalues) <= 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**32 - 1), st.floats(-6, 6))
def test_eigen_invariants(d, seed, log_scale):
    rng = np.random.default_rng(seed)
    c = random_symmetric(rng, d) * 10.0 ** log_scale
    e = eigendecompose_symmetric(c)
    v, w = e.eigenvectors, e.eigenvalues
    norm = max(1.0, np.max(np.abs(c).sum(axis=1)))
    assert np.max(np.abs(c @ v - v * w)) < 1e-8 * norm
    assert np.max(np.abs(v.T @ v - np.eye(d))) < 1e-8
    assert np.all(np.diff(w) <= 0)


class TestFitPca:
    def test_rank_one_line(self):
        t = np.linspace(-2, 3, 11)
        model = fit_pca(np.column_stack([t, t]), 2)
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(model.components[:, 0], [r, r], atol=1e-12)
        assert model.explained_variance[1] == pytest.approx(0, abs=1e-12)

    def test_isotropic_gaussian(self):
        x = np.random.default_rng(7).standard_normal((500, 2))
        model = fit_pca(x, 1)
        ratio = model.explained_variance[0] / model.total_variance
        assert abs(ratio - 0.5) <= 0.15
        # variance along the returned axis, computed directly
        proj = (x - x.mean(axis=0)) @ model.components[:, 0]
        assert np.sum(proj ** 2) / 499 == pytest.approx(model.explained_variance[0], rel=1e-10)

    def test_full_spectrum_sums_to_trace(self, rng):
        x = rng.standard_normal((40, 6))
        model = fit_pca(x, 6)
        assert model.explained_variance.sum() == pytest.approx(model.total_variance, abs=1e-9)

    def test_model_invariants(self, rng):
        model = fit_pca(rng.standard_normal((30, 5)) * [5, 4, 3, 2, 1], 2)
        v = model.components
        np.testing.assert_allclose(v.T @ v, np.eye(2), atol=1e-8)
        assert np.all(np.diff(model.explained_variance) <= 0)
        assert model.explained_variance.sum() <= model.total_variance + 1e-9

    def test_k_too_large(self, rng):
        with pytest.raises(ValueError):
            fit_pca(rng.standard_normal((10, 2)), 3)

    def test_accepts_table(self, carcinogenicity):
        model = fit_pca(carcinogenicity, 2)
        assert model.components.shape == (23, 2)


class TestProject:
    def test_mean_maps_to_origin(self, rng):
        x = rng.standard_normal((20, 4))
        model = fit_pca(x, 2)
        np.testing.assert_allclose(project(model, model.mean[None, :]).coords, 0, atol=1e-15)

    def test_axis_aligned(self):
        col = np.array([-1.0, 0.5, 2.0, -1.5])
        x = np.column_stack([col, np.zeros(4), np.zeros(4)])
        emb = project(fit_pca(x, 1), x)
        np.testing.assert_allclose(np.abs(emb.coords[:, 0]), np.abs(col - col.mean()), atol=1e-14)
        assert emb.method == "pca"

    def test_brute_force_dot_products(self, rng):
        x = rng.standard_normal((6, 4))
        model = fit_pca(x, 2)
        coords = project(model, x).coords
        for i in range(6):
            for c in range(2):
                expected = sum(model.components[j, c] * (x[i, j] - model.mean[j]) for j in range(4))
                assert coords[i, c] == pytest.approx(expected, abs=1e-10)

    def test_dimension_mismatch(self, rng):
        model = fit_pca(rng.standard_normal((10, 3)), 1)
        with pytest.raises(ValueError):
            project(model, np.zeros((2, 4)))


class TestPcaProperties:
    def test_variance_maximality(self, rng):
        x = rng.standard_normal((80, 6)) @ rng.standard_normal((6, 6))
        model = fit_pca(x, 1)
        centered = x - x.mean(axis=0)
        u = rng.standard_normal((200, 6))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        variances = np.sum((centered @ u.T) ** 2, axis=0) / 79
        assert np.all(variances <= model.explained_variance[0] + 1e-9)

    def test_reconstruction_reprojects(self, rng):
        x = rng.standard_normal((25, 5))
        model = fit_pca(x, 2)
        emb = project(model, x).coords
        again = project(model, reconstruct(model, emb)).coords
        np.testing.assert_allclose(again, emb, atol=1e-9)

    def test_embedding_columns_uncorrelated(self, rng):
        x = rng.standard_normal((60, 5)) @ rng.standard_normal((5, 5))
        emb = project(fit_pca(x, 2), x).coords
        c = np.cov(emb.T)
        assert abs(c[0, 1]) < 1e-8

    def test_translation_invariance(self, rng):
        x = rng.standard_normal((30, 4))
        shift = rng.standard_normal(4) * 100
        a = project(fit_pca(x, 2), x).coords
        b = project(fit_pca(x + shift, 2), x + shift).coords
        np.testing.assert_allclose(a, b, atol=1e-9)

    def test_reconstruction_mse_of_exact_rank(self, rng):
        x = np.outer(rng.standard_normal(20), rng.standard_normal(5))
        assert reconstruction_mse(x, 1) < 1e-25
