import numpy as np
import pytest

import covreg as cr
from covreg.covariance import SampleCovariance, spectral_decompose
from covreg.errors import NegativeEigenvalueError, ValidationError, ZeroVarianceAsset

from conftest import brute_force_covariance, random_demeaned, random_scm


def panel_from(rows):
    rows = np.asarray(rows, dtype=float)
    ids = tuple(f"A{i}" for i in range(rows.shape[0]))
    return cr.demean(cr.ReturnsPanel(returns=rows, asset_ids=ids))


class TestSampleCovariance:
    def test_two_asset_anticorrelated(self):
        scm = cr.sample_covariance(panel_from([[1, 2, 3], [3, 2, 1]]))
        np.testing.assert_allclose(scm.c, [[1, -1], [-1, 1]], atol=1e-15)
        assert scm.n_obs_minus_one == 2

    def test_variance_formula(self):
        # x = [-1, 0, 1], M = 2: (1/2)(1 + 0 + 1) = 1
        scm = cr.sample_covariance(panel_from([[0, 1, 2], [2, 1, 0]]))
        assert scm.c[0, 0] == pytest.approx(1.0, abs=1e-15)

    def test_matches_brute_force_oracle(self, rng):
        x = random_demeaned(rng, 5, 21)
        scm = cr.sample_covariance(x)
        np.testing.assert_allclose(
            scm.c, brute_force_covariance(x.x), rtol=0, atol=1e-12
        )

    def test_exact_symmetry(self, rng):
        scm = random_scm(rng, 12, 7)
        assert np.array_equal(scm.c, scm.c.T)

    def test_zero_variance_asset_rejected(self):
        with pytest.raises(ZeroVarianceAsset):
            cr.sample_covariance(panel_from([[5, 5, 5], [1, 2, 3]]))


class TestSpectralDecompose:
    def test_rank_one_2x2(self):
        scm = SampleCovariance.from_matrix(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        sd = spectral_decompose(scm)
        assert sd.n_positive == 1
        np.testing.assert_allclose(sd.eigenvalues, [2.0])
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose(sd.components[0], [s, -s], atol=1e-12)

    def test_identity(self):
        sd = spectral_decompose(SampleCovariance.from_matrix(np.eye(3)))
        np.testing.assert_allclose(sd.eigenvalues, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(sd.reconstruct(), np.eye(3), atol=1e-12)

    def test_rank_bound_short_panel(self, rng):
        # 10 assets, 6 observations: rank at most M = 5
        sd = spectral_decompose(random_scm(rng, 10, 6))
        assert sd.n_positive <= 5

    def test_reconstruction(self, rng):
        scm = random_scm(rng, 8, 40)
        sd = spectral_decompose(scm)
        err = np.linalg.norm(sd.reconstruct() - scm.c)
        assert err <= 1e-8 * np.linalg.norm(scm.c)

    def test_orthonormal_components(self, rng):
        sd = spectral_decompose(random_scm(rng, 9, 30))
        gram = sd.components @ sd.components.T
        assert np.abs(gram - np.eye(sd.n_positive)).max() <= 1e-9

    def test_trace_preserved(self, rng):
        scm = random_scm(rng, 7, 50)
        sd = spectral_decompose(scm)
        trace = np.trace(scm.c)
        assert abs(sd.eigenvalues.sum() - trace) <= 1e-8 * trace

    def test_sign_convention(self, rng):
        sd = spectral_decompose(random_scm(rng, 6, 20))
        for row in sd.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_deterministic(self, rng):
        scm = random_scm(rng, 6, 20)
        a = spectral_decompose(scm)
        b = spectral_decompose(scm)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.components, b.components)

    def test_non_psd_input_rejected(self):
        bad = SampleCovariance.from_matrix(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NegativeEigenvalueError):
            spectral_decompose(bad)

    def test_quasi_null_scaling_consistent(self, rng):
        # relative threshold: rescaling the panel must not change the rank
        x = random_demeaned(rng, 10, 5)
        a = spectral_decompose(cr.sample_covariance(x))
        scaled = cr.DemeanedPanel(x.x * 1e-6)
        b = spectral_decompose(cr.sample_covariance(scaled))
        assert a.n_positive == b.n_positive


def test_asymmetric_matrix_rejected():
    with pytest.raises(ValidationError):
        SampleCovariance(c=np.array([[1.0, 0.2], [0.1, 1.0]]), n_obs_minus_one=5)
