"""End-to-end run: panel -> monthly matrices -> PMFGs, communities, metrics, spectra -> files."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .community import Partition, infomap, rank_order, rank_within, stationary_distribution
from .corrmatrix import (
    CorrelationMatrix,
    EstimationError,
    average_offdiag,
    full_period_matrix,
    offdiag_vector,
    pearson_matrix,
    spearman_month_matrix,
)
from .ingest import (
    CoverageError,
    ReturnPanel,
    ValidationReport,
    month_windows,
    parse_ff49_daily,
    parse_returns,
    read_text,
    to_month,
    validate_panel,
)
from .netmetrics import mi_month_matrix, node_series
from .pmfg import Pmfg, build_pmfg
from .render import ColorScale, render_heatmap
from .spectral import eigen_series, sym_eigen

log = logging.getLogger(__name__)

INCOMPLETE_MARKER = "INCOMPLETE"


class ValidationFailed(RuntimeError):
    def __init__(self, report: ValidationReport):
        super().__init__("input validation failed")
        self.report = report


class NumericalFailure(RuntimeError):
    def __init__(self, month: str, stage: str, cause: Exception):
        super().__init__(f"{stage} failed for {month}: {cause}")
        self.month = month
        self.stage = stage


@dataclass
class PipelineConfig:
    input_path: str
    output_dir: str
    window_months: int = 3
    first_label: str = "1969-09"
    last_label: str = "2011-12"
    restarts: int = 100
    seed: int = 0
    weighted: bool = False
    bits: bool = False
    impute: Optional[str] = None  # None | 'zero'
    universe: str = "ff49"  # 'ff49' enforces the 49 industry names; 'any' takes the file header
    reference: str = "BusSv"
    white_above: dict = field(
        default_factory=lambda: {"link_mi": 0.1, "degree": 30.0, "betweenness": 200.0}
    )
    color_stops: tuple = ColorScale().stops
    render: bool = True

    def __post_init__(self):
        if self.window_months < 1:
            raise ValueError("window_months must be >= 1")
        if to_month(self.first_label) > to_month(self.last_label):
            raise ValueError("first_label must not be after last_label")
        if self.impute not in (None, "zero"):
            raise ValueError(f"unknown impute mode {self.impute!r}")
        if self.universe not in ("ff49", "any"):
            raise ValueError(f"unknown universe {self.universe!r}")

    @property
    def data_start(self) -> np.datetime64:
        return to_month(self.first_label) - (self.window_months - 1)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["color_stops"] = [list(s) for s in self.color_stops]
        return d


def worker_count() -> int:
    env = os.environ.get("CORRNET_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def load_panel(config: PipelineConfig) -> ReturnPanel:
    text = read_text(config.input_path)
    if config.universe == "ff49":
        return parse_ff49_daily(text)
    return parse_returns(text)


def prepare_panel(panel: ReturnPanel, config: PipelineConfig) -> ReturnPanel:
    """Validate over the analysis range and return the in-range rows."""
    report = validate_panel(panel, config.data_start, config.last_label)
    if report.coverage_errors:
        raise ValidationFailed(report)
    sub = panel.select_months(config.data_start, config.last_label)
    if report.missing:
        if config.impute != "zero":
            raise ValidationFailed(report)
        sub = sub.impute_zero()
    return sub


def _build_month(C: CorrelationMatrix) -> Pmfg:
    return build_pmfg(C)


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class PipelineResult:
    output_dir: Path
    labels: tuple[str, ...]
    full_matrix: CorrelationMatrix
    full_pmfg: Pmfg
    partition: Partition
    order: list[int]


def run_pipeline(config: PipelineConfig, panel: Optional[ReturnPanel] = None) -> PipelineResult:
    """Run every stage and write the result tables under `config.output_dir`.

    Validation errors raise before anything is written.  A run that fails
    later leaves an INCOMPLETE marker next to the partial outputs.
    """
    if panel is None:
        panel = load_panel(config)
    panel = prepare_panel(panel, config)
    try:
        windows = month_windows(
            panel, config.window_months, config.first_label, config.last_label
        )
    except CoverageError as exc:
        report = validate_panel(panel, config.data_start, config.last_label)
        report.coverage_errors.append(str(exc))
        raise ValidationFailed(report) from exc

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    marker = out / INCOMPLETE_MARKER
    marker.write_text("run in progress or failed; outputs are not valid\n")
    for stale in ("manifest.json",):
        (out / stale).unlink(missing_ok=True)

    assets = panel.assets
    labels = tuple(w.label for w in windows)
    workers = worker_count()
    base = math.e if not config.bits else 2.0

    matrices = []
    for w in windows:
        try:
            matrices.append(pearson_matrix(w, panel))
        except EstimationError as exc:
            raise NumericalFailure(w.label, "correlation", exc) from exc
    for C in matrices:
        write_csv(out / "corr" / f"{C.label}.csv", ("asset",) + assets,
                  ([assets[i], *C.values[i]] for i in range(C.n)))
    write_csv(out / "avg_corr.csv", ("month", "avg_corr"),
              ((C.label, average_offdiag(C)) for C in matrices))

    try:
        full = full_period_matrix(panel)
    except EstimationError as exc:
        raise NumericalFailure("full", "correlation", exc) from exc
    full_pmfg = build_pmfg(full)
    write_csv(out / "pmfg" / "full.csv", ("i_name", "j_name", "weight"),
              ((assets[i], assets[j], w) for i, j, w in full_pmfg.edges))

    partition = infomap(full_pmfg, config.restarts, config.seed, config.weighted)
    flow = stationary_distribution(full_pmfg, config.weighted)
    ranks = rank_within(partition, flow)
    order = rank_order(partition, flow)
    write_csv(out / "communities" / "full.csv", ("node", "community", "rank"),
              ((assets[v], partition.assignment[v], ranks[v]) for v in order))
    log.info("full-period partition: %s communities, sizes %s, L=%.6f bits",
             partition.n_communities, partition.sizes(), partition.codelength)

    log.info("building %d monthly PMFGs with %d worker(s)", len(matrices), workers)
    graphs = _map(_build_month, matrices, workers)
    for g in graphs:
        write_csv(out / "pmfg" / f"{g.label}.csv", ("i_name", "j_name", "weight"),
                  ((assets[i], assets[j], w) for i, j, w in g.edges))

    ordered_names = tuple(assets[v] for v in order)
    series = {m: node_series(graphs, m) for m in ("degree", "betweenness")}
    for metric, s in series.items():
        write_csv(out / f"{metric}.csv", ("month",) + ordered_names,
                  ([lab, *(row[v] for v in order)] for lab, row in
                   zip(labels, s.values.astype(np.int64) if metric == "degree" else s.values)))

    mi = mi_month_matrix(graphs, base)
    write_csv(out / "link_mi.csv", ("month",) + labels,
              ([lab, *row] for lab, row in zip(labels, mi.values)))
    for C in matrices:
        vec = offdiag_vector(C)
        if len(vec) < 2 or np.ptp(vec) == 0.0:
            raise NumericalFailure(C.label, "spearman", EstimationError("constant off-diagonal ranks"))
    sp = spearman_month_matrix(matrices)
    write_csv(out / "spearman.csv", ("month",) + labels,
              ([lab, *row] for lab, row in zip(labels, sp.values)))

    reference = config.reference if config.reference in assets else assets[0]
    for C in matrices:
        try:
            sym_eigen(C)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise NumericalFailure(C.label, "spectral", exc) from exc
    eig = eigen_series(matrices, k=min(3, len(assets)), reference=reference)
    k = eig.eigenvalues.shape[1]
    write_csv(out / "eigenvalues.csv",
              ("month", *(f"lambda{j + 1}" for j in range(k)), *(f"ev{j + 1}" for j in range(k))),
              ([lab, *vals, *(vals / len(assets))] for lab, vals in zip(labels, eig.eigenvalues)))
    for j in range(min(2, k)):
        write_csv(out / f"eigvec{j + 1}.csv", ("month",) + ordered_names,
                  ([lab, *(vec[j][v] for v in order)] for lab, vec in zip(labels, eig.eigenvectors)))

    if config.render:
        scale = ColorScale(stops=tuple(tuple(s) for s in config.color_stops))
        thresholds = config.white_above
        (out / "link_mi.svg").write_text(render_heatmap(
            mi.values, labels, labels, scale, thresholds.get("link_mi"),
            title="link mutual information" + (" (bits)" if config.bits else " (nats)")))
        (out / "spearman.svg").write_text(render_heatmap(
            sp.values, labels, labels, scale, thresholds.get("spearman"),
            title="Spearman rank correlation of monthly correlations"))
        for metric, s in series.items():
            (out / f"{metric}.svg").write_text(render_heatmap(
                s.values[:, order].T, ordered_names, labels, scale, thresholds.get(metric),
                title=metric, cell=2.0))
        for j in range(min(2, k)):
            (out / f"eigvec{j + 1}.svg").write_text(render_heatmap(
                eig.eigenvectors[:, j, :][:, order].T, ordered_names, labels, scale,
                thresholds.get(f"eigvec{j + 1}"), title=f"eigenvector {j + 1} components", cell=2.0))

    outputs = {
        str(p.relative_to(out)): _sha256(p)
        for p in sorted(out.rglob("*"))
        if p.is_file() and p.name not in (INCOMPLETE_MARKER, "manifest.json")
    }
    manifest = {
        "status": "complete",
        "config": config.as_dict(),
        "input_sha256": _sha256(Path(config.input_path)) if Path(config.input_path).is_file() else None,
        "n_months": len(labels),
        "first_label": labels[0],
        "last_label": labels[-1],
        "color_scale": ColorScale(stops=tuple(tuple(s) for s in config.color_stops)).as_dict(),
        "mi_log_base": "2" if config.bits else "e",
        "partition": {
            "n_communities": partition.n_communities,
            "sizes": partition.sizes(),
            "codelength_bits": partition.codelength,
        },
        "versions": _versions(),
        "outputs": outputs,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    marker.unlink()
    return PipelineResult(out, labels, full, full_pmfg, partition, order)


def _versions() -> dict:
    import networkx
    import scipy

    return {
        "corrnet": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "networkx": networkx.__version__,
        "platform": sys.platform,
    }
