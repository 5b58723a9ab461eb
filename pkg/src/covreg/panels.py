"""Return-panel ingestion and serial demeaning.

Panels are N assets by M+1 time observations, oldest first. CSV layout:
one row per asset, asset id in the first column, one column per
observation, optional single header row. Missing values are a hard
error; there is no imputation path.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DuplicateAssetId,
    MissingValueError,
    ParseError,
    TooFewObservations,
    ValidationError,
)

_MISSING_TOKENS = {"", "na", "n/a", "nan", "null", "none", "#n/a"}


@dataclass(frozen=True)
class ReturnsPanel:
    """Validated raw return panel, N x (M+1)."""

    returns: np.ndarray
    asset_ids: tuple[str, ...]

    def __post_init__(self):
        r = np.asarray(self.returns, dtype=float)
        r.setflags(write=False)
        object.__setattr__(self, "returns", r)
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        if r.ndim != 2:
            raise ValidationError("returns must be a 2-D array")
        n, t = r.shape
        if n < 2:
            raise ValidationError(f"need at least 2 assets, got {n}")
        if t < 2:
            raise TooFewObservations(f"need at least 2 observations, got {t}")
        if not np.all(np.isfinite(r)):
            raise MissingValueError("panel contains non-finite entries")
        if len(self.asset_ids) != n:
            raise ValidationError(
                f"{len(self.asset_ids)} asset ids for {n} rows"
            )
        if len(set(self.asset_ids)) != n:
            raise DuplicateAssetId("asset ids are not unique")

    @property
    def n_assets(self) -> int:
        return self.returns.shape[0]

    @property
    def n_obs(self) -> int:
        return self.returns.shape[1]


@dataclass(frozen=True)
class DemeanedPanel:
    """Serially demeaned panel; every row sums to zero."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        row_sums = np.abs(x.sum(axis=1))
        scale = x.shape[1] * np.abs(x).max(initial=0.0)
        if np.any(row_sums > 1e-10 * scale):
            raise ValidationError("rows are not demeaned")

    @property
    def n_assets(self) -> int:
        return self.x.shape[0]

    @property
    def n_obs(self) -> int:
        return self.x.shape[1]


def demean(panel: ReturnsPanel) -> DemeanedPanel:
    """Subtract each asset's time-series mean from its row.

    A second pass removes the rounding residue of the first subtraction
    so row sums vanish relative to the demeaned values themselves.
    """
    x = panel.returns - panel.returns.mean(axis=1, keepdims=True)
    x = x - x.mean(axis=1, keepdims=True)
    return DemeanedPanel(x)


def _parse_cell(token: str, row: int, col: int) -> float:
    stripped = token.strip()
    if stripped.lower() in _MISSING_TOKENS:
        raise MissingValueError(f"missing value at row {row}, column {col}")
    try:
        value = float(stripped)
    except ValueError:
        raise ParseError(
            f"non-numeric cell {stripped!r} at row {row}, column {col}"
        ) from None
    if not np.isfinite(value):
        raise MissingValueError(f"non-finite value at row {row}, column {col}")
    return value


def load_panel(source, header: bool = True, delimiter: str = ",") -> ReturnsPanel:
    """Parse a CSV stream (or path) into a ReturnsPanel.

    With header=False the first column still holds asset ids unless every
    cell in the row parses as a number, in which case ids are synthesized
    as A0001, A0002, ...
    """
    if isinstance(source, (str, bytes)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_panel(fh, header=header, delimiter=delimiter)

    lines = [ln for ln in (raw.rstrip("\r\n") for raw in source) if ln.strip()]
    if header:
        if not lines:
            raise ParseError("empty input")
        lines = lines[1:]
    if not lines:
        raise ParseError("no data rows")

    rows = [ln.split(delimiter) for ln in lines]
    width = len(rows[0])
    for i, cells in enumerate(rows):
        if len(cells) != width:
            raise ParseError(
                f"row {i} has {len(cells)} cells, expected {width}"
            )

    # "no header" panels may be bare numbers with no id column
    ids_present = True
    if not header:
        try:
            float(rows[0][0].strip())
            ids_present = False
        except ValueError:
            ids_present = True

    if ids_present:
        asset_ids = [cells[0].strip() for cells in rows]
        data_cells = [cells[1:] for cells in rows]
    else:
        asset_ids = [f"A{i + 1:04d}" for i in range(len(rows))]
        data_cells = rows

    if not data_cells[0]:
        raise TooFewObservations("no observation columns")

    data = np.empty((len(rows), len(data_cells[0])), dtype=float)
    for i, cells in enumerate(data_cells):
        for j, token in enumerate(cells):
            data[i, j] = _parse_cell(token, i, j)

    return ReturnsPanel(returns=data, asset_ids=tuple(asset_ids))


def loads_panel(text: str, header: bool = True, delimiter: str = ",") -> ReturnsPanel:
    """Convenience wrapper: parse a panel from a CSV string."""
    return load_panel(io.StringIO(text), header=header, delimiter=delimiter)
