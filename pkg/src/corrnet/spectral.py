"""Eigen-decomposition of correlation matrices and the monthly top-k spectral series."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .corrmatrix import CorrelationMatrix

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EigenSystem:
    label: str
    assets: tuple[str, ...]
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]
    reference_asset: str = ""


@dataclass(frozen=True, eq=False)
class EigenSeries:
    labels: tuple[str, ...]
    assets: tuple[str, ...]
    reference_asset: str
    eigenvalues: np.ndarray  # months x k
    eigenvectors: np.ndarray  # months x k x assets, oriented

    def explained(self) -> np.ndarray:
        return self.eigenvalues / len(self.assets)


def sym_eigen(C: Union[CorrelationMatrix, np.ndarray]) -> EigenSystem:
    """Full spectrum of a symmetric matrix, eigenvalues descending (LAPACK syevd)."""
    if isinstance(C, CorrelationMatrix):
        values, label, assets = C.values, C.label, C.assets
    else:
        values = np.asarray(C, dtype=np.float64)
        label, assets = "", tuple(str(k) for k in range(values.shape[0]))
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError(f"matrix must be square, got shape {values.shape}")
    asym = np.max(np.abs(values - values.T)) if values.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValueError(f"{label}: matrix not symmetric (max |C - C^T| = {asym:.3g})")
    w, v = np.linalg.eigh(values)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(label, assets, w[order], v[:, order])


def orient(v: np.ndarray, reference_index: int) -> np.ndarray:
    """Flip `v` so its reference component is positive.

    If that component is exactly zero, the largest-magnitude component
    (first one on ties) is made positive instead.
    """
    v = np.asarray(v, dtype=np.float64)
    ref = v[reference_index]
    if ref == 0.0:
        ref = v[int(np.argmax(np.abs(v)))]
    return -v if ref < 0.0 else v.copy()


def explained_variance(eigenvalue: float, n: int) -> float:
    if eigenvalue < 0:
        raise ValueError("eigenvalue must be non-negative")
    return eigenvalue / n


def eigen_series(
    matrices: Sequence[CorrelationMatrix],
    k: int = 3,
    reference: str = "BusSv",
) -> EigenSeries:
    if not matrices:
        raise ValueError("no matrices")
    assets = matrices[0].assets
    if reference not in assets:
        raise ValueError(f"reference asset {reference!r} not among assets")
    ref = assets.index(reference)
    vals = np.zeros((len(matrices), k))
    vecs = np.zeros((len(matrices), k, len(assets)))
    for m, C in enumerate(matrices):
        if C.assets != assets:
            raise ValueError(f"{C.label}: asset order differs")
        es = sym_eigen(C)
        vals[m] = es.eigenvalues[:k]
        for j in range(k):
            vecs[m, j] = orient(es.eigenvectors[:, j], ref)
    return EigenSeries(tuple(C.label for C in matrices), assets, reference, vals, vecs)
