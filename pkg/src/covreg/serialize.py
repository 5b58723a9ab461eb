"""Matrix and model serialization for CLI output.

CSV matrices are dense, headerless, 12 significant digits. JSON carries
full double round-trip precision (plain repr of Python floats).
"""

from __future__ import annotations

import json

import numpy as np

from .covariance import SpectralDecomposition
from .factors import FactorModel
from .regularizers import ShrunkFactorModel, TruncatedPCModel

CSV_FORMAT = "%.12g"


def matrix_to_csv(m: np.ndarray) -> str:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return "\n".join(
        ",".join(CSV_FORMAT % v for v in row) for row in m
    ) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [
        [float(tok) for tok in line.split(",")]
        for line in text.splitlines()
        if line.strip()
    ]
    return np.asarray(rows, dtype=float)


def matrix_to_json_dict(m: np.ndarray, **extra) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    out = {"n": m.shape[0], "data": m.ravel().tolist()}
    out.update(extra)
    return out


def spectral_to_json_dict(s: SpectralDecomposition) -> dict:
    return {
        "n": s.n_assets,
        "n_positive": s.n_positive,
        "eigenvalues": s.eigenvalues.tolist(),
        "components": s.components.ravel().tolist(),
        "quasi_null_threshold": s.quasi_null_threshold,
    }


def shrunk_to_json_dict(model: ShrunkFactorModel) -> dict:
    out = model.base.to_json_dict()
    out["q"] = model.q
    return out


def truncated_to_json_dict(model: TruncatedPCModel) -> dict:
    out = model.base.to_json_dict()
    out["f_hat"] = model.f_hat
    out["nu"] = model.nu.tolist()
    return out


def dumps(obj: dict) -> str:
    return json.dumps(obj)


def factor_model_from_json(text: str) -> FactorModel:
    return FactorModel.from_json_dict(json.loads(text))
