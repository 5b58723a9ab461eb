"""Shared fixtures and independent oracles.

The oracles here are deliberately dumb (explicit Python loops, dense
general-purpose solves) so they stay independent of the vectorized
library paths they check.
"""

import numpy as np
import pytest

import covreg as cr
from covreg.factors import FactorModel


def brute_force_covariance(x: np.ndarray) -> np.ndarray:
    """Elementwise-loop SCM with denominator M = T - 1."""
    n, t = x.shape
    m = t - 1
    c = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for s in range(t):
                acc += x[i, s] * x[j, s]
            c[i, j] = acc / m
    return c


def brute_force_dense(model: FactorModel) -> np.ndarray:
    """Triple-loop assembly of diag(xi^2) + Omega Phi Omega^T."""
    n, k = model.n_assets, model.n_factors
    xi, omega, phi = model.specific_risk, model.loadings, model.fcm
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = xi[i] ** 2 if i == j else 0.0
            for a in range(k):
                for b in range(k):
                    acc += omega[i, a] * phi[a, b] * omega[j, b]
            d[i, j] = acc
    return d


def dense_solve_inverse(model: FactorModel) -> np.ndarray:
    """General-purpose dense inverse of the assembled matrix."""
    return np.linalg.inv(brute_force_dense(model))


def random_demeaned(rng, n, t) -> cr.DemeanedPanel:
    data = rng.standard_normal((n, t))
    return cr.DemeanedPanel(data - data.mean(axis=1, keepdims=True))


def random_scm(rng, n, t) -> cr.SampleCovariance:
    return cr.sample_covariance(random_demeaned(rng, n, t))


def random_pd_model(rng, n, k) -> FactorModel:
    """Random PD factor model: positive specific risk, PSD fcm."""
    xi = rng.uniform(0.5, 2.0, n)
    omega = rng.standard_normal((n, k))
    root = rng.standard_normal((k, k))
    phi = root @ root.T + 0.1 * np.eye(k)
    return FactorModel(specific_risk=xi, loadings=omega, fcm=0.5 * (phi + phi.T))


def random_matched_target(rng, scm: cr.SampleCovariance, k: int) -> FactorModel:
    """Random K-factor model rescaled so its diagonal equals the SCM's."""
    raw = random_pd_model(rng, scm.n_assets, k)
    raw_diag = np.diag(cr.dense(raw))
    scale = np.sqrt(scm.variances / raw_diag)
    return FactorModel(
        specific_risk=scale * raw.specific_risk,
        loadings=scale[:, None] * raw.loadings,
        fcm=raw.fcm,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
