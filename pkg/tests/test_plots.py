"""SVG chart emission: determinism, structure, error cases."""

import numpy as np
import pytest

from castlab.analysis import CorrelationSample, sample_adjacent_pairs
from castlab.image_io import histogram, synth_image
from castlab.plots import (plot_histogram_svg, plot_scatter_svg,
                           render_histogram_svg, render_scatter_svg)


def test_histogram_svg_deterministic_bytes(tmp_path):
    bins = histogram(synth_image("smooth_noise", 64, 64, seed=1))
    a, b = render_histogram_svg(bins), render_histogram_svg(bins)
    assert a == b
    p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_histogram_svg(bins, p1)
    plot_histogram_svg(bins, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_histogram_svg_uniform_bars():
    bins = np.full(256, 100, dtype=np.int64)
    svg = render_histogram_svg(bins)
    # 256 equal-height bars plus the background rect
    assert svg.count("<rect") == 257
    # skip the svg element's and the background rect's height attributes
    heights = {part.split('"')[0] for part in svg.split('height="')[3:]}
    assert len(heights) == 1
    assert "grey level" in svg and svg.startswith("<svg ")


def test_histogram_svg_validates_shape():
    with pytest.raises(ValueError):
        render_histogram_svg(np.zeros(100, dtype=np.int64))


def test_scatter_svg(tmp_path):
    img = synth_image("smooth_noise", 64, 64, seed=2)
    sample = sample_adjacent_pairs(img, n=300, seed=0)
    svg = render_scatter_svg(sample)
    assert svg.count("<circle") == 300
    assert render_scatter_svg(sample) == svg
    out = tmp_path / "s.svg"
    plot_scatter_svg(sample, out)
    assert out.read_text(encoding="utf-8") == svg


def test_scatter_empty_sample_errors():
    empty = CorrelationSample(x=np.array([], dtype=np.uint8), y=np.array([], dtype=np.uint8))
    with pytest.raises(ValueError):
        render_scatter_svg(empty)
