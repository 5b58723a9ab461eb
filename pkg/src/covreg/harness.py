"""Synthetic panels, Bai-Yin edge checks, and out-of-sample stability runs.

All randomness flows from an explicit 64-bit seed through
numpy's SeedSequence, so every report is reproducible bit-for-bit.
Trials may run on a thread pool capped by COVREG_THREADS; per-trial
seeds are spawned up front so parallel and serial runs agree.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .covariance import SampleCovariance, spectral_decompose, sample_covariance
from .errors import InvalidSpec, SingularSpecificRisk, IllConditioned, SplitTooSmall
from .factors import FactorModel, dense, min_variance_weights
from .panels import DemeanedPanel, ReturnsPanel, demean
from .regularizers import (
    ShrinkageSpec,
    constant_correlation_target,
    diagonal_target,
    estimate_rho,
    shrink_as_factor_model,
    shrink_dense,
    truncated_pc_model,
)

GENERATORS = ("iid_unit", "one_factor")


def _thread_count() -> int:
    env = os.environ.get("COVREG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SyntheticSpec:
    """Deterministic synthetic-panel recipe."""

    n_assets: int
    n_obs: int
    generator: str = "iid_unit"
    seed: int = 0
    beta: np.ndarray | None = None
    factor_variance: float = 1.0
    specific_variances: np.ndarray | None = None

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise InvalidSpec(f"unknown generator {self.generator!r}")
        if self.n_assets < 2 or self.n_obs < 2:
            raise InvalidSpec("need n_assets >= 2 and n_obs >= 2")
        if self.generator == "one_factor":
            beta = np.asarray(
                self.beta if self.beta is not None else np.ones(self.n_assets),
                dtype=float,
            )
            sv = np.asarray(
                self.specific_variances
                if self.specific_variances is not None
                else np.ones(self.n_assets),
                dtype=float,
            )
            if beta.shape != (self.n_assets,) or sv.shape != (self.n_assets,):
                raise InvalidSpec("beta/specific_variances must have length N")
            if self.factor_variance < 0 or np.any(sv < 0):
                raise InvalidSpec("variances must be non-negative")
            beta.setflags(write=False)
            sv.setflags(write=False)
            object.__setattr__(self, "beta", beta)
            object.__setattr__(self, "specific_variances", sv)

    def true_covariance(self) -> np.ndarray:
        if self.generator == "iid_unit":
            return np.eye(self.n_assets)
        cov = self.factor_variance * np.outer(self.beta, self.beta)
        return cov + np.diag(self.specific_variances)


def generate_panel(spec: SyntheticSpec) -> ReturnsPanel:
    """Draw a seeded panel; same spec gives bitwise-identical output."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    n, t = spec.n_assets, spec.n_obs
    if spec.generator == "iid_unit":
        data = rng.standard_normal((n, t))
    else:
        f = np.sqrt(spec.factor_variance) * rng.standard_normal(t)
        eps = rng.standard_normal((n, t)) * np.sqrt(spec.specific_variances)[:, None]
        data = spec.beta[:, None] * f[None, :] + eps
    ids = tuple(f"A{i + 1:04d}" for i in range(n))
    return ReturnsPanel(returns=data, asset_ids=ids)


@dataclass(frozen=True)
class BaiYinReport:
    """Observed vs. limiting extreme eigenvalues for y = N/M."""

    y: float
    lambda_min_limit: float
    lambda_max_limit: float
    observed_min: float
    observed_max: float
    n_trials: int

    def to_json_dict(self) -> dict:
        return {
            "y": self.y,
            "lambda_min_limit": self.lambda_min_limit,
            "lambda_max_limit": self.lambda_max_limit,
            "observed_min": self.observed_min,
            "observed_max": self.observed_max,
            "n_trials": self.n_trials,
        }


def bai_yin_check(n: int, m: int, trials: int, seed: int) -> BaiYinReport:
    """Monte Carlo check of the (1 +- sqrt(y))^2 eigenvalue edges.

    Averages the extreme positive eigenvalues of demeaned unit-variance
    SCMs. When m < n the smallest *positive* eigenvalue stands in for
    the minimum.
    """
    if n < 2 or m < 2 or trials < 1:
        raise InvalidSpec("need n, m >= 2 and trials >= 1")
    y = n / m
    seeds = np.random.SeedSequence(seed).spawn(trials)

    def one_trial(child) -> tuple[float, float]:
        rng = np.random.default_rng(child)
        data = rng.standard_normal((n, m + 1))
        panel = ReturnsPanel(
            returns=data, asset_ids=tuple(f"A{i + 1:04d}" for i in range(n))
        )
        spectral = spectral_decompose(sample_covariance(demean(panel)))
        return spectral.eigenvalues[-1], spectral.eigenvalues[0]

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        extremes = list(pool.map(one_trial, seeds))
    mins, maxs = zip(*extremes)
    return BaiYinReport(
        y=y,
        lambda_min_limit=float((1.0 - np.sqrt(y)) ** 2),
        lambda_max_limit=float((1.0 + np.sqrt(y)) ** 2),
        observed_min=float(np.mean(mins)),
        observed_max=float(np.mean(maxs)),
        n_trials=trials,
    )


@dataclass(frozen=True)
class MethodConfig:
    """One estimator entry for the stability comparison.

    kind: "scm_ridge" (shrink toward diagonal with small fixed q, the
    stand-in for raw SCM when inversion is required), "shrink", or
    "truncated_pc". rho applies to the constant-correlation target and
    may be None for "auto".
    """

    kind: str
    label: str = ""
    q: float = 0.0
    f_hat: int = 0
    target_kind: str = "diagonal"
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in ("scm_ridge", "shrink", "truncated_pc"):
            raise InvalidSpec(f"unknown method kind {self.kind!r}")
        if self.target_kind not in ("diagonal", "constant_correlation"):
            raise InvalidSpec(f"unknown target kind {self.target_kind!r}")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.kind == "scm_ridge":
            return f"scm+ridge(q={self.q})"
        if self.kind == "shrink":
            return f"shrink(q={self.q},{self.target_kind})"
        return f"truncated_pc(f_hat={self.f_hat},{self.target_kind})"


def _build_target(scm: SampleCovariance, cfg: MethodConfig) -> FactorModel:
    if cfg.target_kind == "diagonal":
        return diagonal_target(scm)
    rho = cfg.rho if cfg.rho is not None else estimate_rho(scm)
    return constant_correlation_target(scm, rho)


def estimate_method(scm: SampleCovariance, cfg: MethodConfig
                    ) -> tuple[np.ndarray, FactorModel]:
    """Fit one method on an SCM; returns (dense matrix, factor model)."""
    spectral = spectral_decompose(scm)
    if cfg.kind in ("scm_ridge", "shrink"):
        q = cfg.q if cfg.kind == "shrink" else (cfg.q or 0.01)
        spec = ShrinkageSpec(q=q, target=_build_target(scm, cfg))
        model = shrink_as_factor_model(spectral, spec).base
        return shrink_dense(scm, spec), model
    target = _build_target(scm, cfg)
    truncated = truncated_pc_model(scm, spectral, target, cfg.f_hat)
    return dense(truncated.base), truncated.base


@dataclass(frozen=True)
class MethodRecord:
    label: str
    in_sample_error: float
    out_of_sample_error: float
    realized_variance: float | None
    invertible: bool
    truth_error: float | None = None
    leading_pc_overlap: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "in_sample_error": self.in_sample_error,
            "out_of_sample_error": self.out_of_sample_error,
            "realized_variance": self.realized_variance,
            "invertible": self.invertible,
            "truth_error": self.truth_error,
            "leading_pc_overlap": self.leading_pc_overlap,
        }


@dataclass(frozen=True)
class StabilityReport:
    records: tuple[MethodRecord, ...]
    n_train: int
    n_test: int

    def to_json_dict(self) -> dict:
        return {
            "n_train": self.n_train,
            "n_test": self.n_test,
            "records": [r.to_json_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def to_table(self) -> str:
        header = f"{'method':<36} {'in_err':>12} {'out_err':>12} {'real_var':>12}"
        lines = [header, "-" * len(header)]
        for r in self.records:
            rv = f"{r.realized_variance:.6g}" if r.invertible else "singular"
            lines.append(
                f"{r.label:<36} {r.in_sample_error:>12.6g} "
                f"{r.out_of_sample_error:>12.6g} {rv:>12}"
            )
        return "\n".join(lines)


def _offdiag_frobenius(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    np.fill_diagonal(diff, 0.0)
    return float(np.linalg.norm(diff))


def _leading_pc_overlap(train: SampleCovariance, test: SampleCovariance) -> float:
    v_train = spectral_decompose(train).components[0]
    v_test = spectral_decompose(test).components[0]
    return float(abs(v_train @ v_test))


def stability_experiment(
    panel: ReturnsPanel,
    split: float,
    methods: list[MethodConfig],
    truth: np.ndarray | None = None,
) -> StabilityReport:
    """Train/test comparison of regularizers on one panel.

    Each method is fitted on the first split fraction of observations;
    errors are off-diagonal Frobenius distances to the train-segment and
    test-segment SCMs (and to the truth matrix when supplied), plus the
    realized variance of the train-fitted minimum-variance weights over
    the test segment. Non-invertible fits are recorded, not raised.
    """
    if not 0.0 < split < 1.0:
        raise SplitTooSmall(f"split must be in (0, 1), got {split}")
    t = panel.n_obs
    n_train = int(round(split * t))
    n_test = t - n_train
    if n_train < 2 or n_test < 2:
        raise SplitTooSmall("both segments need at least 2 observations")

    train = ReturnsPanel(panel.returns[:, :n_train], panel.asset_ids)
    test = ReturnsPanel(panel.returns[:, n_train:], panel.asset_ids)
    scm_train = sample_covariance(demean(train))
    scm_test = sample_covariance(demean(test))
    pc_overlap = _leading_pc_overlap(scm_train, scm_test)

    records = []
    for cfg in methods:
        est, model = estimate_method(scm_train, cfg)
        in_err = _offdiag_frobenius(est, scm_train.c)
        out_err = _offdiag_frobenius(est, scm_test.c)
        truth_err = _offdiag_frobenius(est, truth) if truth is not None else None
        try:
            w = min_variance_weights(model)
            test_returns = w @ demean(test).x
            realized = float(test_returns @ test_returns / (n_test - 1))
            invertible = True
        except (SingularSpecificRisk, IllConditioned):
            realized, invertible = None, False
        records.append(
            MethodRecord(
                label=cfg.label,
                in_sample_error=in_err,
                out_of_sample_error=out_err,
                realized_variance=realized,
                invertible=invertible,
                truth_error=truth_err,
                leading_pc_overlap=pc_overlap,
            )
        )
    return StabilityReport(records=tuple(records), n_train=n_train, n_test=n_test)


def grid_search_q(
    panel: ReturnsPanel,
    target_kind: str,
    grid: list[float],
    split: float,
) -> float:
    """Pick the grid q with the lowest out-of-sample off-diagonal error.

    Ties go to the larger q (more regularization).
    """
    if not grid:
        raise InvalidSpec("empty q grid")
    for q in grid:
        if not 0.0 <= q <= 1.0:
            raise InvalidSpec(f"grid value {q} outside [0, 1]")
    methods = [
        MethodConfig(kind="shrink", q=q, target_kind=target_kind) for q in grid
    ]
    report = stability_experiment(panel, split, methods)
    errors = [r.out_of_sample_error for r in report.records]
    best = min(
        range(len(grid)),
        key=lambda i: (errors[i], -grid[i]),
    )
    return grid[best]
