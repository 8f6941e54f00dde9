"""Reading, validating and windowing the daily 49-industry return panel.

The French data library ships the daily industry file as a text/CSV blob
with several sections (value-weighted, equal-weighted, ...).  We locate the
value-weighted section by its title, read the header and the date rows that
follow, and stop at the first line that is not a data row.
"""

from __future__ import annotations

import io
import re
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

ASSETS: tuple[str, ...] = (
    "Agric", "Food", "Soda", "Beer", "Smoke", "Toys", "Fun", "Books", "Hshld",
    "Clths", "Hlth", "MedEq", "Drugs", "Chems", "Rubbr", "Txtls", "BldMt",
    "Cnstr", "Steel", "FabPr", "Mach", "ElcEq", "Autos", "Aero", "Ships",
    "Guns", "Gold", "Mines", "Coal", "Oil", "Util", "Telcm", "PerSv", "BusSv",
    "Hardw", "Softw", "Chips", "LabEq", "Paper", "Boxes", "Trans", "Whlsl",
    "Rtail", "Meals", "Banks", "Insur", "RlEst", "Fin", "Other",
)

VALUE_WEIGHTED_SECTION = "Average Value Weighted Returns -- Daily"
MISSING_SENTINELS = (-99.99, -999.0)

_DATE_RE = re.compile(r"^(\d{4})-?(\d{2})-?(\d{2})$")


class FormatError(ValueError):
    """Input does not have the expected layout."""


class ParseError(FormatError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CoverageError(ValueError):
    """Requested months are not covered by the panel."""


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """Daily percent returns, one row per trading day.

    Missing cells (file sentinels) are stored as NaN.
    """

    dates: np.ndarray  # datetime64[D], strictly increasing
    assets: tuple[str, ...]
    returns: np.ndarray  # float64, len(dates) x len(assets)

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        returns = np.asarray(self.returns, dtype=np.float64)
        if returns.shape != (len(dates), len(self.assets)):
            raise FormatError(
                f"returns shape {returns.shape} does not match "
                f"{len(dates)} dates x {len(self.assets)} assets"
            )
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            raise FormatError("dates must be strictly increasing")
        dates.flags.writeable = False
        returns.flags.writeable = False
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "assets", tuple(self.assets))

    @property
    def months(self) -> np.ndarray:
        return self.dates.astype("datetime64[M]")

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.returns)

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other):
        if not isinstance(other, ReturnPanel):
            return NotImplemented
        return (
            self.assets == other.assets
            and np.array_equal(self.dates, other.dates)
            and np.array_equal(self.returns, other.returns, equal_nan=True)
        )

    def select_months(self, start, end) -> "ReturnPanel":
        """Rows whose calendar month lies in [start, end]."""
        start, end = to_month(start), to_month(end)
        months = self.months
        keep = (months >= start) & (months <= end)
        return ReturnPanel(self.dates[keep], self.assets, self.returns[keep])

    def impute_zero(self) -> "ReturnPanel":
        return ReturnPanel(self.dates, self.assets, np.nan_to_num(self.returns, nan=0.0))


@dataclass(frozen=True)
class WindowSlice:
    label_month: np.datetime64  # datetime64[M], last month of the window
    start: int
    stop: int

    @property
    def row_range(self) -> range:
        return range(self.start, self.stop)

    @property
    def n_obs(self) -> int:
        return self.stop - self.start

    @property
    def label(self) -> str:
        return str(self.label_month)


@dataclass
class ValidationReport:
    start: np.datetime64
    end: np.datetime64
    n_rows: int = 0
    missing: list[tuple[str, str]] = field(default_factory=list)
    gaps: list[tuple[str, str, int]] = field(default_factory=list)
    extreme: list[tuple[str, str, float]] = field(default_factory=list)
    coverage_errors: list[str] = field(default_factory=list)

    @property
    def n_missing(self) -> int:
        return len(self.missing)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.coverage_errors

    def summary(self) -> str:
        lines = [
            f"range {self.start} .. {self.end}: {self.n_rows} rows",
            f"missing cells: {self.n_missing}",
            f"date gaps > 7 days: {len(self.gaps)}",
            f"|return| > 100%: {len(self.extreme)}",
        ]
        for date, asset in self.missing[:10]:
            lines.append(f"  missing {date} {asset}")
        for a, b, days in self.gaps[:10]:
            lines.append(f"  gap {a} -> {b} ({days} days)")
        for date, asset, value in self.extreme[:10]:
            lines.append(f"  extreme {date} {asset} {value}")
        lines.extend(f"  coverage: {msg}" for msg in self.coverage_errors)
        lines.append("status: " + ("pass" if self.ok else "fail"))
        return "\n".join(lines)


def to_month(value) -> np.datetime64:
    """Accept 'YYYY-MM', 'YYYYMM', a date, or a datetime64 and return datetime64[M]."""
    if isinstance(value, np.datetime64):
        return value.astype("datetime64[M]")
    if isinstance(value, str):
        text = value.strip()
        if re.fullmatch(r"\d{6}", text):
            text = f"{text[:4]}-{text[4:]}"
        try:
            return np.datetime64(text[:7], "M")
        except ValueError as exc:
            raise ValueError(f"bad month {value!r}") from exc
    return np.datetime64(value, "M")


def parse_date(token: str) -> Optional[np.datetime64]:
    """Parse YYYYMMDD or YYYY-MM-DD; None if the token is not date-shaped."""
    m = _DATE_RE.match(token)
    if not m:
        return None
    y, mo, d = m.groups()
    try:
        return np.datetime64(f"{y}-{mo}-{d}", "D")
    except ValueError:
        return None


def _split(line: str) -> list[str]:
    if "," in line:
        return [tok.strip() for tok in line.split(",")]
    return line.split()


def _is_missing(value: float) -> bool:
    return any(abs(value - s) < 1e-9 for s in MISSING_SENTINELS)


def parse_returns(
    text: str,
    expected_assets: Optional[Sequence[str]] = None,
    section: str = VALUE_WEIGHTED_SECTION,
) -> ReturnPanel:
    """Parse a daily return table.

    If `section` appears as a line in the text, parsing starts right after it;
    otherwise the first header-looking line is used.  Data rows run until the
    first blank or non-numeric line.  With `expected_assets` the header must
    name exactly those columns in that order (case-insensitive).
    """
    lines = text.splitlines()
    start = 0
    for idx, line in enumerate(lines):
        if line.strip().lower() == section.lower():
            start = idx + 1
            break

    # header = last non-numeric line before the first date-led row
    header_idx = None
    first_data = None
    for idx in range(start, len(lines)):
        stripped = lines[idx].strip()
        if not stripped:
            continue
        tokens = _split(stripped)
        if re.match(r"^\d", tokens[0]):
            if header_idx is None:
                raise ParseError(idx + 1, "data row before any header")
            first_data = tokens
            break
        header_idx = idx
    if header_idx is None:
        raise FormatError("no header row found")
    if first_data is None:
        raise FormatError("empty data section")

    header = _split(lines[header_idx].strip())
    if len(header) == len(first_data) - 1:
        # whitespace layout with no label over the date column
        names = header
    else:
        names = header[1:]
    names = [n.strip() for n in names]

    if expected_assets is not None:
        if len(names) != len(expected_assets):
            raise FormatError(
                f"line {header_idx + 1}: expected {len(expected_assets) + 1} columns "
                f"(date + {len(expected_assets)} assets), found {len(names) + 1}"
            )
        for got, want in zip(names, expected_assets):
            if got.lower() != want.lower():
                raise FormatError(
                    f"line {header_idx + 1}: column {got!r} does not match expected {want!r}"
                )
        names = list(expected_assets)
    if len(set(names)) != len(names):
        raise FormatError(f"line {header_idx + 1}: duplicate column names")

    ncols = len(names)
    dates: list[np.datetime64] = []
    rows: list[list[float]] = []
    for idx in range(header_idx + 1, len(lines)):
        stripped = lines[idx].strip()
        if not stripped:
            if rows:
                break
            continue
        tokens = _split(stripped)
        first = tokens[0]
        if not re.match(r"^\d", first):
            break  # next section title or trailer text
        date = parse_date(first)
        if date is None:
            raise ParseError(idx + 1, f"malformed date {first!r}")
        if len(tokens) - 1 != ncols:
            raise ParseError(idx + 1, f"expected {ncols} values, found {len(tokens) - 1}")
        try:
            values = [float(tok) for tok in tokens[1:]]
        except ValueError as exc:
            raise ParseError(idx + 1, f"non-numeric value ({exc})") from exc
        dates.append(date)
        rows.append([np.nan if _is_missing(v) else v for v in values])

    if not rows:
        raise FormatError("empty data section")
    date_arr = np.array(dates, dtype="datetime64[D]")
    if len(date_arr) > 1:
        bad = np.nonzero(date_arr[1:] <= date_arr[:-1])[0]
        if len(bad):
            raise FormatError(f"dates not strictly increasing at {date_arr[bad[0] + 1]}")
    return ReturnPanel(date_arr, tuple(names), np.array(rows, dtype=np.float64))


def parse_ff49_daily(text: str, section: str = VALUE_WEIGHTED_SECTION) -> ReturnPanel:
    """Parse the French-library daily 49-industry file (value-weighted section)."""
    return parse_returns(text, expected_assets=ASSETS, section=section)


def read_text(path) -> str:
    """Read a text file, or the single CSV/TXT member of a zip archive."""
    path = Path(path)
    if path.suffix.lower() == ".zip":
        with zipfile.ZipFile(path) as zf:
            members = [m for m in zf.namelist() if m.lower().endswith((".csv", ".txt"))]
            if len(members) != 1:
                raise FormatError(f"{path}: expected one csv/txt member, found {members}")
            return zf.read(members[0]).decode("latin-1")
    return path.read_text(encoding="latin-1")


def format_panel_csv(panel: ReturnPanel) -> str:
    """Round-trip CSV: ISO dates, asset header, missing cells written as -99.99."""
    out = io.StringIO()
    out.write("date," + ",".join(panel.assets) + "\n")
    for date, row in zip(panel.dates, panel.returns):
        cells = ("-99.99" if np.isnan(v) else repr(float(v)) for v in row)
        out.write(f"{date}," + ",".join(cells) + "\n")
    return out.getvalue()


def write_panel_csv(panel: ReturnPanel, path) -> None:
    Path(path).write_text(format_panel_csv(panel), encoding="utf-8")


def validate_panel(panel: ReturnPanel, start, end) -> ValidationReport:
    start, end = to_month(start), to_month(end)
    report = ValidationReport(start=start, end=end)
    if len(panel) == 0:
        report.coverage_errors.append("panel is empty")
        return report
    first, last = panel.months[0], panel.months[-1]
    if first > start:
        report.coverage_errors.append(f"data starts {first}, requested start {start}")
    if last < end:
        report.coverage_errors.append(f"data ends {last}, requested end {end}")

    sub = panel.select_months(start, end)
    report.n_rows = len(sub)
    if len(sub):
        present = set(sub.months.tolist())
        month = max(start, first)
        while month <= min(end, last):
            if month.item() not in present:
                report.coverage_errors.append(f"no trading days in {month}")
            month += 1

    for r, c in zip(*np.nonzero(sub.missing)):
        report.missing.append((str(sub.dates[r]), sub.assets[c]))
    if len(sub) > 1:
        steps = np.diff(sub.dates).astype(int)
        for k in np.nonzero(steps > 7)[0]:
            report.gaps.append((str(sub.dates[k]), str(sub.dates[k + 1]), int(steps[k])))
    with np.errstate(invalid="ignore"):
        big = np.abs(sub.returns) > 100.0
    for r, c in zip(*np.nonzero(big)):
        report.extreme.append((str(sub.dates[r]), sub.assets[c], float(sub.returns[r, c])))
    return report


def month_windows(
    panel: ReturnPanel,
    window_months: int = 3,
    first_label=None,
    last_label=None,
    min_obs: Optional[int] = None,
) -> list[WindowSlice]:
    """One trailing window per label month; each covers `window_months` calendar months.

    `min_obs` defaults to n_assets + 1 so every window yields a full-rank
    correlation matrix; pass 2 to allow short windows.
    """
    if window_months < 1:
        raise ValueError("window_months must be >= 1")
    if len(panel) == 0:
        raise CoverageError("panel is empty")
    months = panel.months
    data_first, data_last = months[0], months[-1]
    first = to_month(first_label) if first_label is not None else data_first + (window_months - 1)
    last = to_month(last_label) if last_label is not None else data_last
    if first > last:
        raise ValueError(f"first label {first} is after last label {last}")
    if first - (window_months - 1) < data_first:
        raise CoverageError(
            f"window for {first} needs data from {first - (window_months - 1)}, "
            f"panel starts {data_first}"
        )
    if last > data_last:
        raise CoverageError(f"last label {last} is after panel end {data_last}")
    if min_obs is None:
        min_obs = len(panel.assets) + 1

    # row boundaries of each calendar month
    month_start = np.searchsorted(months, np.arange(first - (window_months - 1), last + 2))
    slices = []
    for k, label in enumerate(np.arange(first, last + 1)):
        lo = month_start[k]
        hi = month_start[k + window_months]
        for m in range(window_months):
            if month_start[k + m] == month_start[k + m + 1]:
                raise CoverageError(f"window {label}: no trading days in {label - (window_months - 1) + m}")
        if hi - lo < min_obs:
            raise CoverageError(
                f"window {label}: {hi - lo} observations, need at least {min_obs}"
            )
        slices.append(WindowSlice(label, int(lo), int(hi)))
    return slices
