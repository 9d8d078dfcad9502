"""Static SVG charts: 256-bar grey-level histograms and adjacent-pixel
scatter plots.

Hand-rolled SVG keeps the toolkit free of plotting dependencies and makes
chart output byte-deterministic, so rendered files can be diffed and
asserted in tests.  All coordinates are formatted with two decimals.
"""

import numpy as np

from .analysis import CorrelationSample
from .errors import IoError


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _svg_document(width, height, body) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
            f'<rect width="{width}" height="{height}" fill="white"/>\n')
    return head + body + "</svg>\n"


def _axis_labels(x0, y0, x1, y1, x_title, y_title):
    parts = [
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y1)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" stroke="black"/>\n',
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(y1)}" stroke="black"/>\n',
        f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(y1 + 36)}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{x_title}</text>\n',
        f'<text x="14" y="{_fmt((y0 + y1) / 2)}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 14 {_fmt((y0 + y1) / 2)})">{y_title}</text>\n',
    ]
    return "".join(parts)


def render_histogram_svg(bins, title: str = "Grey-level histogram") -> str:
    """256 bars over grey levels 0..255; bar heights scale to the max bin."""
    bins = np.asarray(bins, dtype=np.int64)
    if bins.shape != (256,):
        raise ValueError(f"histogram must have 256 bins, got {bins.shape}")
    width, height = 700, 420
    x0, y0, x1, y1 = 60.0, 30.0, 680.0, 370.0
    top = max(int(bins.max()), 1)
    bar_w = (x1 - x0) / 256.0
    parts = [f'<text x="{_fmt((x0 + x1) / 2)}" y="20" font-size="14" text-anchor="middle" '
             f'font-family="sans-serif">{title}</text>\n']
    for level in range(256):
        h = (int(bins[level]) / top) * (y1 - y0)
        if h <= 0:
            continue
        parts.append(f'<rect x="{_fmt(x0 + level * bar_w)}" y="{_fmt(y1 - h)}" '
                     f'width="{_fmt(bar_w)}" height="{_fmt(h)}" fill="#4477aa"/>\n')
    for level in (0, 64, 128, 192, 255):
        cx = x0 + (level + 0.5) * bar_w
        parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(y1)}" x2="{_fmt(cx)}" y2="{_fmt(y1 + 5)}" '
                     f'stroke="black"/>\n')
        parts.append(f'<text x="{_fmt(cx)}" y="{_fmt(y1 + 18)}" font-size="11" '
                     f'text-anchor="middle" font-family="sans-serif">{level}</text>\n')
    for frac in (0.0, 0.5, 1.0):
        cy = y1 - frac * (y1 - y0)
        parts.append(f'<text x="{_fmt(x0 - 6)}" y="{_fmt(cy + 4)}" font-size="11" '
                     f'text-anchor="end" font-family="sans-serif">{int(round(frac * top))}</text>\n')
    parts.append(_axis_labels(x0, y0, x1, y1, "grey level", "pixel count"))
    return _svg_document(width, height, "".join(parts))


def render_scatter_svg(sample: CorrelationSample,
                       title: str = "Adjacent-pixel correlation") -> str:
    """One point per pair: x = grey level of a pixel, y = its neighbour's."""
    if len(sample) == 0:
        raise ValueError("cannot plot an empty correlation sample")
    width, height = 460, 470
    x0, y0, x1, y1 = 60.0, 30.0, 440.0, 410.0
    scale = (x1 - x0) / 255.0
    parts = [f'<text x="{_fmt((x0 + x1) / 2)}" y="20" font-size="14" text-anchor="middle" '
             f'font-family="sans-serif">{title}</text>\n']
    for gx, gy in zip(sample.x, sample.y):
        parts.append(f'<circle cx="{_fmt(x0 + int(gx) * scale)}" '
                     f'cy="{_fmt(y1 - int(gy) * scale)}" r="1.8" fill="#225588" '
                     f'fill-opacity="0.55"/>\n')
    for level in (0, 64, 128, 192, 255):
        cx = x0 + level * scale
        cy = y1 - level * scale
        parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(y1)}" x2="{_fmt(cx)}" y2="{_fmt(y1 + 5)}" '
                     f'stroke="black"/>\n')
        parts.append(f'<text x="{_fmt(cx)}" y="{_fmt(y1 + 18)}" font-size="11" '
                     f'text-anchor="middle" font-family="sans-serif">{level}</text>\n')
        parts.append(f'<text x="{_fmt(x0 - 6)}" y="{_fmt(cy + 4)}" font-size="11" '
                     f'text-anchor="end" font-family="sans-serif">{level}</text>\n')
    parts.append(_axis_labels(x0, y0, x1, y1,
                              "grey level of pixel (x, y)", "grey level of adjacent pixel"))
    return _svg_document(width, height, "".join(parts))


def _write_svg(text: str, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def plot_histogram_svg(bins, path, title: str = "Grey-level histogram") -> None:
    _write_svg(render_histogram_svg(bins, title), path)


def plot_scatter_svg(sample: CorrelationSample, path,
                     title: str = "Adjacent-pixel correlation") -> None:
    _write_svg(render_scatter_svg(sample, title), path)
