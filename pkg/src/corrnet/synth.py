"""Synthetic factor-model return panels with known correlation structure."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .ingest import ASSETS, ReturnPanel

Number = Union[float, Sequence[float]]


def _per_asset(value: Number, n: int, name: str) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(value, dtype=np.float64), (n,)).copy()
    if arr.shape != (n,):
        raise ValueError(f"{name} must be a scalar or have {n} entries")
    return arr


@dataclass
class FactorSpec:
    """r_i(t) = beta_i F(t) + gamma_b B_b(t) + eps_i(t), all drivers standard normal.

    `blocks` partitions the asset indices; `block_loadings[b]` is the loading
    of every asset in block b on that block's factor.
    """

    n_assets: int
    n_days: int
    market_loading: Number = 0.0
    blocks: list[list[int]] = field(default_factory=list)
    block_loadings: list[float] = field(default_factory=list)
    idio_sigma: Number = 1.0
    seed: int = 0
    start: str = "2000-01-03"
    assets: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n_days < 2:
            raise ValueError("n_days must be >= 2")
        if not self.blocks:
            self.blocks = [list(range(self.n_assets))]
            self.block_loadings = self.block_loadings or [0.0]
        if len(self.block_loadings) != len(self.blocks):
            raise ValueError("one loading per block required")
        flat = sorted(i for b in self.blocks for i in b)
        if flat != list(range(self.n_assets)):
            raise ValueError("blocks must partition 0..n_assets-1")
        if np.any(_per_asset(self.idio_sigma, self.n_assets, "idio_sigma") <= 0):
            raise ValueError("idio_sigma must be positive")
        if not self.assets:
            self.assets = ASSETS if self.n_assets == len(ASSETS) else tuple(
                f"A{k:02d}" for k in range(self.n_assets)
            )
        self.assets = tuple(self.assets)
        if len(self.assets) != self.n_assets:
            raise ValueError("asset names do not match n_assets")

    @classmethod
    def from_dict(cls, data: dict) -> "FactorSpec":
        data = dict(data)
        if "assets" in data:
            data["assets"] = tuple(data["assets"])
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "FactorSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def block_of(self) -> np.ndarray:
        out = np.zeros(self.n_assets, dtype=np.int64)
        for b, members in enumerate(self.blocks):
            out[members] = b
        return out

    def gamma(self) -> np.ndarray:
        return np.asarray(self.block_loadings, dtype=np.float64)[self.block_of()]


def business_days(start: str, n: int) -> np.ndarray:
    first = np.busday_offset(np.datetime64(start, "D"), 0, roll="forward")
    return np.busday_offset(first, np.arange(n), roll="forward")


def factor_returns(spec: FactorSpec) -> ReturnPanel:
    rng = np.random.default_rng(spec.seed)
    n, t = spec.n_assets, spec.n_days
    beta = _per_asset(spec.market_loading, n, "market_loading")
    sigma = _per_asset(spec.idio_sigma, n, "idio_sigma")
    market = rng.standard_normal(t)
    block_f = rng.standard_normal((t, len(spec.blocks)))
    noise = rng.standard_normal((t, n))
    returns = market[:, None] * beta + block_f[:, spec.block_of()] * spec.gamma() + noise * sigma
    return ReturnPanel(business_days(spec.start, t), spec.assets, returns)


def population_correlation(spec: FactorSpec) -> np.ndarray:
    beta = _per_asset(spec.market_loading, spec.n_assets, "market_loading")
    sigma = _per_asset(spec.idio_sigma, spec.n_assets, "idio_sigma")
    gamma = spec.gamma()
    same = spec.block_of()[:, None] == spec.block_of()[None, :]
    cov = np.outer(beta, beta) + np.outer(gamma, gamma) * same
    sd = np.sqrt(beta**2 + gamma**2 + sigma**2)
    corr = cov / np.outer(sd, sd)
    np.fill_diagonal(corr, 1.0)
    return corr


def planted_blocks(sizes: Sequence[int]) -> list[list[int]]:
    out, start = [], 0
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def anchored_blocks_spec(
    sizes: Sequence[int],
    n_days: int,
    seed: int = 0,
    anchor_sigma: float = 0.1,
    member_sigma: float = 1.0,
    anchor_market: float = 1.2,
    member_market: float = 0.5,
) -> FactorSpec:
    """Block panel whose PMFG modules are unambiguous.

    Each block's first asset is a low-noise anchor that loads more on the
    market. Every block PMFG then forms a wheel around its anchor, and the
    edges forced between blocks attach to the anchors rather than to
    arbitrary low-degree members.
    """
    blocks = planted_blocks(sizes)
    n = sum(sizes)
    sigma = np.full(n, member_sigma)
    beta = np.full(n, member_market)
    for b in blocks:
        sigma[b[0]] = anchor_sigma
        beta[b[0]] = anchor_market
    return FactorSpec(n, n_days, market_loading=beta, blocks=blocks,
                      block_loadings=[1.0] * len(blocks), idio_sigma=sigma, seed=seed)
