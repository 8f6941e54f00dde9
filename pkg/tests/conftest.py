import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corrnet.ingest import ASSETS  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def ff_text(dates, values, equal_weighted=None, txt=False):
    """Text laid out like the French-library daily industry file."""
    def row(d, vals):
        stamp = str(np.datetime64(d, "D")).replace("-", "")
        if txt:
            return stamp + "".join(f"{v:8.2f}" for v in vals)
        return stamp + "," + ",".join(f"{v:7.2f}" for v in vals)

    def header():
        if txt:
            return "        " + "".join(f"{a:>8}" for a in ASSETS)
        return "," + ",".join(f"{a:<5}" for a in ASSETS)

    lines = [
        "This file was created by CMPT_IND_RETS_DAILY using the 201201 CRSP database.",
        "It contains value- and equal-weighted returns for 49 industry portfolios.",
        "Missing data are indicated by -99.99 or -999.",
        "",
        "  Average Value Weighted Returns -- Daily",
        header(),
    ]
    lines += [row(d, v) for d, v in zip(dates, values)]
    lines += ["", "  Average Equal Weighted Returns -- Daily", header()]
    ew = equal_weighted if equal_weighted is not None else np.asarray(values) * 0.5
    lines += [row(d, v) for d, v in zip(dates, ew)]
    lines += ["", "Copyright 2012 Kenneth R. French"]
    return "\n".join(lines) + "\n"


def trading_days(start, end):
    days = np.arange(np.datetime64(start, "D"), np.datetime64(end, "D") + 1)
    return days[np.is_busday(days)]


@pytest.fixture
def small_ff_panel_text():
    rng = np.random.default_rng(7)
    dates = trading_days("1969-07-01", "1969-12-31")
    values = np.round(rng.normal(0, 1, (len(dates), 49)), 2)
    return dates, values, ff_text(dates, values)


@pytest.fixture
def acceptance_report():
    def record(number: int, passed, text: str):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:2d}: {text}")
    return record


def real_data_path():
    path = os.environ.get("CORRNET_FF49_FILE")
    return Path(path) if path else None


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
