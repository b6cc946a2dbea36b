"""Self-contained SVG line charts.

Writes single-file charts with no third-party plotting dependency: line
series with optional error bars, dashed vertical marker lines, axis ticks,
and a legend.  Intended for quick visual inspection of sweep outputs, not
for publication typography.
"""

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import InvalidInputError

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
)

_MARGIN_LEFT = 64.0
_MARGIN_RIGHT = 18.0
_MARGIN_TOP = 34.0
_MARGIN_BOTTOM = 50.0


@dataclass(frozen=True)
class Series:
    """One polyline: x and y sequences plus an optional per-point error bar."""

    label: str
    x: tuple
    y: tuple
    yerr: tuple = None
    color: str = None

    def __post_init__(self):
        if len(self.x) != len(self.y):
            raise InvalidInputError("series x and y must have equal length")
        if self.yerr is not None and len(self.yerr) != len(self.x):
            raise InvalidInputError("series yerr length must match x")
        if len(self.x) == 0:
            raise InvalidInputError("series must contain at least one point")


def _nice_step(span, target=5):
    """Tick spacing of the form {1, 2, 5} * 10^k covering span/target."""
    if span <= 0:
        return 1.0
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def _ticks(lo, hi):
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    t = first
    while t <= hi + 1e-9 * max(1.0, abs(hi)):
        out.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return out


def _fmt(x):
    return f"{x:.6g}"


def _tick_label(x):
    return f"{x:.4g}"


def line_chart(
    series,
    path,
    title="",
    xlabel="",
    ylabel="",
    vlines=(),
    width=720,
    height=480,
):
    """Render the series to an SVG file and return the path.

    vlines: sequence of (x, label) pairs drawn as dashed vertical lines.
    """
    series = list(series)
    if not series:
        raise InvalidInputError("need at least one series")

    xs = [float(v) for s in series for v in s.x]
    ylo_pts = []
    yhi_pts = []
    for s in series:
        for i, v in enumerate(s.y):
            e = float(s.yerr[i]) if s.yerr is not None else 0.0
            ylo_pts.append(float(v) - e)
            yhi_pts.append(float(v) + e)
    x_lo, x_hi = min(xs), max(xs)
    for vx, _ in vlines:
        x_lo, x_hi = min(x_lo, float(vx)), max(x_hi, float(vx))
    y_lo, y_hi = min(ylo_pts), max(yhi_pts)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.04 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    px0, px1 = _MARGIN_LEFT, width - _MARGIN_RIGHT
    py0, py1 = height - _MARGIN_BOTTOM, _MARGIN_TOP

    def sx(x):
        return px0 + (float(x) - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(y):
        return py0 + (float(y) - y_lo) / (y_hi - y_lo) * (py1 - py0)

    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    parts.append(f'<rect width="{width}" height="{height}" fill="#ffffff"/>')
    parts.append(
        '<g font-family="Helvetica, Arial, sans-serif" font-size="12" fill="#222222">'
    )

    # gridlines and ticks
    for ty in _ticks(y_lo, y_hi):
        y = sy(ty)
        parts.append(
            f'<line x1="{_fmt(px0)}" y1="{_fmt(y)}" x2="{_fmt(px1)}" y2="{_fmt(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px0 - 6)}" y="{_fmt(y + 4)}" text-anchor="end">'
            f"{escape(_tick_label(ty))}</text>"
        )
    for tx in _ticks(x_lo, x_hi):
        x = sx(tx)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(py0)}" x2="{_fmt(x)}" y2="{_fmt(py0 + 5)}" '
            f'stroke="#555555" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(py0 + 18)}" text-anchor="middle">'
            f"{escape(_tick_label(tx))}</text>"
        )

    # frame
    parts.append(
        f'<rect x="{_fmt(px0)}" y="{_fmt(py1)}" width="{_fmt(px1 - px0)}" '
        f'height="{_fmt(py0 - py1)}" fill="none" stroke="#555555" stroke-width="1"/>'
    )

    # dashed vertical markers
    for vx, vlabel in vlines:
        x = sx(vx)
        if not px0 <= x <= px1:
            continue
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(py0)}" x2="{_fmt(x)}" y2="{_fmt(py1)}" '
            f'stroke="#444444" stroke-width="1" stroke-dasharray="5,4"/>'
        )
        if vlabel:
            parts.append(
                f'<text x="{_fmt(x + 4)}" y="{_fmt(py1 + 12)}" font-size="11">'
                f"{escape(str(vlabel))}</text>"
            )

    # series
    for si, s in enumerate(series):
        color = s.color or PALETTE[si % len(PALETTE)]
        if s.yerr is not None:
            for xi, yi, ei in zip(s.x, s.y, s.yerr):
                if ei <= 0:
                    continue
                x = sx(xi)
                ytop, ybot = sy(float(yi) + float(ei)), sy(float(yi) - float(ei))
                parts.append(
                    f'<line x1="{_fmt(x)}" y1="{_fmt(ybot)}" x2="{_fmt(x)}" '
                    f'y2="{_fmt(ytop)}" stroke="{color}" stroke-width="1"/>'
                )
                for ybar in (ytop, ybot):
                    parts.append(
                        f'<line x1="{_fmt(x - 3)}" y1="{_fmt(ybar)}" x2="{_fmt(x + 3)}" '
                        f'y2="{_fmt(ybar)}" stroke="{color}" stroke-width="1"/>'
                    )
        pts = " ".join(f"{_fmt(sx(xi))},{_fmt(sy(yi))}" for xi, yi in zip(s.x, s.y))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.6"/>'
        )
        for xi, yi in zip(s.x, s.y):
            parts.append(
                f'<circle cx="{_fmt(sx(xi))}" cy="{_fmt(sy(yi))}" r="2.2" fill="{color}"/>'
            )

    # legend
    ly = py1 + 10
    lx = px0 + 10
    for si, s in enumerate(series):
        color = s.color or PALETTE[si % len(PALETTE)]
        parts.append(
            f'<line x1="{_fmt(lx)}" y1="{_fmt(ly)}" x2="{_fmt(lx + 20)}" y2="{_fmt(ly)}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 26)}" y="{_fmt(ly + 4)}" font-size="11">'
            f"{escape(s.label)}</text>"
        )
        ly += 15

    # labels
    if title:
        parts.append(
            f'<text x="{_fmt((px0 + px1) / 2)}" y="20" text-anchor="middle" '
            f'font-size="14" font-weight="bold">{escape(title)}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{_fmt((px0 + px1) / 2)}" y="{_fmt(height - 14)}" '
            f'text-anchor="middle">{escape(xlabel)}</text>'
        )
    if ylabel:
        cy = (py0 + py1) / 2
        parts.append(
            f'<text x="16" y="{_fmt(cy)}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_fmt(cy)})">{escape(ylabel)}</text>'
        )

    parts.append("</g>")
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return path
