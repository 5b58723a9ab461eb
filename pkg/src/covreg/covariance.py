"""Sample covariance construction and spectral decomposition.

C = (1/M) X X^T over serially demeaned returns X (unbiased denominator
M, not M+1). Eigenvalues within 1e-10 of the largest one from zero are
treated as quasi-null: rounded to zero and dropped from the
decomposition, so the retained count is the numerical rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeEigenvalueError, ValidationError, ZeroVarianceAsset
from .panels import DemeanedPanel

QUASI_NULL_REL = 1e-10


@dataclass(frozen=True)
class SampleCovariance:
    """Symmetric N x N sample covariance with its denominator."""

    c: np.ndarray
    n_obs_minus_one: int

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValidationError("covariance must be square")
        if not np.array_equal(c, c.T):
            raise ValidationError("covariance must be exactly symmetric")
        if np.any(np.diag(c) < 0):
            raise ValidationError("negative variance on the diagonal")

    @property
    def n_assets(self) -> int:
        return self.c.shape[0]

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.c)

    @classmethod
    def from_matrix(cls, c: np.ndarray, n_obs_minus_one: int | None = None
                    ) -> "SampleCovariance":
        """Wrap an externally supplied matrix, symmetrizing exactly."""
        c = np.asarray(c, dtype=float)
        sym = 0.5 * (c + c.T)
        if n_obs_minus_one is None:
            n_obs_minus_one = sym.shape[0]
        return cls(c=sym, n_obs_minus_one=n_obs_minus_one)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Positive eigenpairs of an SCM, sorted descending.

    components has shape (n_positive, N); row a is the a-th principal
    component. Quasi-null and matching small negative eigenvalues were
    rounded to zero and excluded.
    """

    eigenvalues: np.ndarray
    components: np.ndarray
    quasi_null_threshold: float

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        pc = np.asarray(self.components, dtype=float)
        ev.setflags(write=False)
        pc.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "components", pc)
        if np.any(ev <= 0):
            raise ValidationError("retained eigenvalues must be positive")
        if np.any(np.diff(ev) > 0):
            raise ValidationError("eigenvalues must be non-increasing")
        if pc.shape[0] != ev.shape[0]:
            raise ValidationError("one component per eigenvalue required")

    @property
    def n_positive(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def n_assets(self) -> int:
        return self.components.shape[1]

    def reconstruct(self) -> np.ndarray:
        """Sum of lambda(a) V(a) V(a)^T over retained pairs."""
        if self.n_positive == 0:
            return np.zeros((self.n_assets, self.n_assets))
        return (self.components.T * self.eigenvalues) @ self.components


def sample_covariance(x: DemeanedPanel) -> SampleCovariance:
    """C_ij = (1/M) sum_s x_is x_js."""
    m = x.n_obs - 1
    if m < 1:
        raise ValidationError("need at least 2 observations")
    c = (x.x @ x.x.T) / m
    c = 0.5 * (c + c.T)  # exact symmetry; BLAS product is only near-symmetric
    if np.any(np.diag(c) == 0):
        raise ZeroVarianceAsset("asset with zero sample variance")
    return SampleCovariance(c=c, n_obs_minus_one=m)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive."""
    out = vectors.copy()
    for row in out:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return out


def spectral_decompose(scm: SampleCovariance) -> SpectralDecomposition:
    """Eigendecompose, round quasi-null eigenvalues to zero, sort descending."""
    evals, evecs = np.linalg.eigh(scm.c)
    lam_max = evals[-1] if evals.size else 0.0
    threshold = QUASI_NULL_REL * max(lam_max, 0.0)
    if np.any(evals < -threshold):
        raise NegativeEigenvalueError(
            f"eigenvalue {evals.min():.6g} below -{threshold:.6g}; input not PSD"
        )
    keep = evals > threshold
    # descending order
    evals = evals[keep][::-1]
    evecs = evecs[:, keep][:, ::-1].T
    return SpectralDecomposition(
        eigenvalues=evals,
        components=_fix_signs(evecs),
        quasi_null_threshold=threshold,
    )
