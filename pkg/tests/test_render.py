import re

import numpy as np
import pytest

from corrnet.render import ColorScale, render_heatmap

RECT = re.compile(r'<rect x="([\d.]+)" y="([\d.]+)" width="4" height="4" fill="(#[0-9a-f]{6})"/>')


def cells(svg):
    return RECT.findall(svg)


def test_two_by_two_extremes():
    svg = render_heatmap([[0.0, 1.0], [0.5, 0.25]], ["r0", "r1"], ["c0", "c1"])
    fills = [f for _, _, f in cells(svg)]
    assert len(fills) == 4
    assert fills[0] == "#0000ff" and fills[1] == "#ff0000"
    assert fills[2] == "#00c800"


def test_row_zero_at_bottom():
    svg = render_heatmap(np.arange(6.0).reshape(3, 2), ["a", "b", "c"], ["x", "y"])
    ys = [float(y) for _, y, _ in cells(svg)]
    assert ys[0] > ys[2] > ys[4]


def test_white_above():
    svg = render_heatmap([[0.05, 0.2], [0.1, 0.0]], ["a", "b"], ["x", "y"], white_above=0.1)
    fills = [f for _, _, f in cells(svg)]
    assert fills[1] == "#ffffff"
    assert fills[2] == "#ff0000"  # equal to the threshold: top of the ramp, not white
    assert "&gt; 0.1" in svg


def test_custom_scale():
    scale = ColorScale(stops=((0, 0, 0), (255, 255, 255)), vmin=0.0, vmax=2.0)
    fills = [f for _, _, f in cells(render_heatmap([[1.0]], ["a"], ["b"], scale))]
    assert fills == ["#808080"]


def test_bad_input():
    with pytest.raises(ValueError):
        render_heatmap(np.zeros((0, 0)), [], [])
    with pytest.raises(ValueError):
        render_heatmap([[np.nan]], ["a"], ["b"])
    with pytest.raises(ValueError):
        render_heatmap([[1.0, 2.0]], ["a"], ["b"])


def test_deterministic_and_escaped():
    m = np.random.default_rng(0).uniform(size=(5, 7))
    a = render_heatmap(m, list("abcde"), [f"<{k}>" for k in range(7)], title="x & y")
    assert a == render_heatmap(m.copy(), list("abcde"), [f"<{k}>" for k in range(7)], title="x & y")
    assert "&lt;0&gt;" in a and "x &amp; y" in a
    assert a.startswith("<?xml")
