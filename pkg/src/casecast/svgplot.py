"""Minimal static SVG line charts.

Hand-rolled rather than pulling in a plotting stack: the output must be
byte-identical across runs and machines, and a small fixed subset of SVG is
easier to pin down than a full renderer's option surface. All coordinates
are formatted with two decimals for stability.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 40
MARGIN_BOTTOM = 48


def _nice_step(span: float, target_ticks: int = 6) -> float:
    """Largest step from {1, 2, 5} x 10^k giving at least target_ticks ticks."""
    if span <= 0:
        return 1.0
    rough = span / target_ticks
    power = 10.0 ** np.floor(np.log10(rough))
    for mult in (5.0, 2.0, 1.0):
        if mult * power <= rough:
            return float(mult * power)
    return float(power)


def _fmt_tick(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return f"{v:g}"


def render_line_chart(
    series: list[tuple[str, np.ndarray]],
    title: str = "",
    x_label: str = "days",
    y_label: str = "cases/day",
    width: int = 800,
    height: int = 480,
) -> str:
    """Render named series as an SVG line chart; x is the sample index."""
    if not series:
        raise ParameterError("nothing to plot")
    n = max(len(values) for _, values in series)
    if n < 2:
        raise ParameterError("need at least two points to draw a line")
    y_max = max(float(np.max(values)) for _, values in series if len(values))
    y_max = max(y_max, 1e-9)
    plot_w = width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = height - MARGIN_TOP - MARGIN_BOTTOM

    def sx(i: float) -> float:
        return MARGIN_LEFT + plot_w * i / (n - 1)

    def sy(v: float) -> float:
        return MARGIN_TOP + plot_h * (1.0 - v / y_max)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{_escape(title)}</text>'
        )

    x_step = max(int(_nice_step(n - 1)), 1)
    for tick in range(0, n, x_step):
        x = sx(tick)
        out.append(
            f'<line x1="{x:.2f}" y1="{MARGIN_TOP}" x2="{x:.2f}" '
            f'y2="{MARGIN_TOP + plot_h}" stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tick}</text>'
        )
    y_step = _nice_step(y_max)
    tick = 0.0
    while tick <= y_max * (1 + 1e-9):
        y = sy(tick)
        out.append(
            f'<line x1="{MARGIN_LEFT}" y1="{y:.2f}" x2="{MARGIN_LEFT + plot_w}" '
            f'y2="{y:.2f}" stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt_tick(tick)}</text>'
        )
        tick += y_step
    out.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#555555" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{height - 10}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">'
        f"{_escape(x_label)}</text>"
    )
    out.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})">'
        f"{_escape(y_label)}</text>"
    )

    for k, (label, values) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(
            f"{sx(i):.2f},{sy(float(v)):.2f}" for i, v in enumerate(values)
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        ly = MARGIN_TOP + 14 + 16 * k
        lx = MARGIN_LEFT + plot_w - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{_escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_forecast_svg(forecast) -> str:
    """Chart of one forecast: synthesized curve (when present) and its
    smoothed prediction."""
    title = f"{forecast.target_country} daily cases ({forecast.filter_id})"
    series = []
    if forecast.synthesized is not None:
        series.append(("synthesized", forecast.synthesized))
    series.append(("smoothed", forecast.daily_predicted))
    return render_line_chart(series, title=title)
