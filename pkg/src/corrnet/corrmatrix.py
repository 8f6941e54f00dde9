"""Monthly Pearson correlation matrices and month-by-month similarity of their rankings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .ingest import ReturnPanel, WindowSlice


class EstimationError(ValueError):
    """A correlation coefficient is undefined (zero variance, constant ranks)."""


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    label: str  # 'YYYY-MM', or 'full' for the all-records matrix
    assets: tuple[str, ...]
    values: np.ndarray
    n_obs: int

    @property
    def n(self) -> int:
        return len(self.assets)


@dataclass(frozen=True, eq=False)
class MonthMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    kind: str  # 'spearman' | 'link_mi'


def correlation_from_returns(
    returns: np.ndarray,
    assets: Sequence[str],
    label: str = "",
) -> CorrelationMatrix:
    """Sample Pearson matrix of the columns of `returns` (rows = days).

    Uses the n-1 normalization for both covariance and variances, so the
    convention cancels.  The upper triangle is computed once and mirrored;
    the diagonal is set to exactly 1.
    """
    x = np.asarray(returns, dtype=np.float64)
    n_obs, n = x.shape
    if n_obs < 2:
        raise EstimationError(f"{label}: need at least 2 observations, got {n_obs}")
    if np.isnan(x).any():
        raise EstimationError(f"{label}: window contains missing values")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n_obs - 1)
    var = np.diag(cov).copy()
    # relative to the raw scale: catches columns that are constant up to rounding
    scale = np.maximum(np.abs(x).max(axis=0), 1.0)
    flat = var <= (1e-13 * scale) ** 2
    if flat.any():
        names = ", ".join(assets[i] for i in np.nonzero(flat)[0])
        raise EstimationError(f"{label}: zero variance for {names}")
    sd = np.sqrt(var)
    corr = cov / np.outer(sd, sd)
    iu = np.triu_indices(n, 1)
    upper = np.clip(corr[iu], -1.0, 1.0)
    values = np.eye(n)
    values[iu] = upper
    values[(iu[1], iu[0])] = upper
    values.flags.writeable = False
    return CorrelationMatrix(label, tuple(assets), values, n_obs)


def pearson_matrix(window: WindowSlice, panel: ReturnPanel) -> CorrelationMatrix:
    rows = panel.returns[window.start:window.stop]
    return correlation_from_returns(rows, panel.assets, window.label)


def full_period_matrix(panel: ReturnPanel, label: str = "full") -> CorrelationMatrix:
    return correlation_from_returns(panel.returns, panel.assets, label)


def offdiag_vector(C) -> np.ndarray:
    """Upper triangle (i < j) in row-major order: c01, c02, ..., c12, ..."""
    values = C.values if isinstance(C, CorrelationMatrix) else np.asarray(C)
    return values[np.triu_indices(values.shape[0], 1)]


def average_offdiag(C) -> float:
    vec = offdiag_vector(C)
    return float(vec.mean()) if len(vec) else 0.0


def _centered_ranks(x: np.ndarray, what: str = "sequence") -> np.ndarray:
    r = rankdata(x, method="average")
    r = r - r.mean()
    norm = np.sqrt(r @ r)
    if norm == 0.0:
        raise EstimationError(f"{what} is constant; ranks are undefined")
    return r / norm


def spearman(x, y) -> float:
    """Pearson correlation of average-tied ranks."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman needs two 1-d sequences of equal length")
    if len(x) < 2:
        raise ValueError("spearman needs at least 2 values")
    rx = _centered_ranks(x, "x")
    ry = _centered_ranks(y, "y")
    return float(np.clip(rx @ ry, -1.0, 1.0))


def _symmetric_from_upper(full: np.ndarray, diagonal: float) -> np.ndarray:
    n = full.shape[0]
    out = np.triu(full, 1)
    out = out + out.T
    out[np.diag_indices(n)] = diagonal
    return out


def spearman_month_matrix(
    matrices: Sequence[CorrelationMatrix],
    labels: Optional[Sequence[str]] = None,
) -> MonthMatrix:
    """Spearman correlation of the off-diagonal coefficients for every pair of months."""
    if not matrices:
        raise ValueError("no matrices")
    assets = matrices[0].assets
    for C in matrices:
        if C.assets != assets:
            raise ValueError(f"{C.label}: asset order differs from {matrices[0].label}")
    ranks = np.array(
        [_centered_ranks(offdiag_vector(C), f"month {C.label}") for C in matrices]
    )
    sim = np.clip(ranks @ ranks.T, -1.0, 1.0)
    values = _symmetric_from_upper(sim, 1.0)
    values.flags.writeable = False
    labels = tuple(labels) if labels is not None else tuple(C.label for C in matrices)
    return MonthMatrix(labels, values, "spearman")
