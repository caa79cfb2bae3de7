"""Self-contained SVG histogram charts with density curves."""

from html import escape
from typing import Sequence

import numpy as np

from dimercode.models.stats import Histogram, SmoothedDensity

WIDTH = 800
HEIGHT = 600
MARGIN_LEFT = 70
MARGIN_RIGHT = 158
MARGIN_TOP = 50
MARGIN_BOTTOM = 60
TICKS = 6
# Smoothed curve green, normal overlay red.
COLORS = ["#2ca02c", "#d62728", "#1f77b4", "#ff7f0e", "#9467bd"]
BAR_FILL = "#c6dbef"

Curve = tuple[str, SmoothedDensity]


def _format_tick(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 100:
        return f"{value:.0f}"
    if abs(value) >= 10:
        return f"{value:.1f}"
    return f"{value:.2f}"


def render_svg(
    histogram: Histogram,
    curves: Sequence[Curve] = (),
    title: str = "",
    x_label: str = "standardized value",
    y_label: str = "density",
) -> str:
    """
    One SVG document: density bars, one polyline per curve, labelled ticks.

    Output depends only on the inputs; coordinates are printed with two
    decimals.
    """
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    x_min = float(histogram.bin_edges[0])
    x_max = float(histogram.bin_edges[-1])
    y_max = float(histogram.densities.max())
    for _, curve in curves:
        x_min = min(x_min, float(curve.grid[0]))
        x_max = max(x_max, float(curve.grid[-1]))
        y_max = max(y_max, float(curve.values.max()))
    if y_max <= 0:
        y_max = 1.0
    y_max *= 1.1

    def x_px(x: float) -> float:
        return plot_left + (x - x_min) / (x_max - x_min) * (plot_right - plot_left)

    def y_px(y: float) -> float:
        return plot_bottom - y / y_max * (plot_bottom - plot_top)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
    ]
    if title:
        lines.append(
            f'<text x="{WIDTH / 2:.1f}" y="30" text-anchor="middle" font-size="18" '
            f'font-family="Arial">{escape(title)}</text>'
        )

    for left, right, density in zip(
        histogram.bin_edges[:-1], histogram.bin_edges[1:], histogram.densities
    ):
        top = y_px(float(density))
        lines.append(
            f'<rect class="bar" x="{x_px(float(left)):.2f}" y="{top:.2f}" '
            f'width="{x_px(float(right)) - x_px(float(left)):.2f}" '
            f'height="{plot_bottom - top:.2f}" fill="{BAR_FILL}" stroke="#6baed6"/>'
        )

    for value in np.linspace(0, y_max, TICKS + 1):
        y = y_px(float(value))
        lines.append(
            f'<line x1="{plot_left - 5}" y1="{y:.2f}" x2="{plot_left}" y2="{y:.2f}" '
            'stroke="#000000"/>'
        )
        lines.append(
            f'<text x="{plot_left - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="12" '
            f'font-family="Arial">{_format_tick(float(value))}</text>'
        )
    for value in np.linspace(x_min, x_max, TICKS + 1):
        x = x_px(float(value))
        lines.append(
            f'<line x1="{x:.2f}" y1="{plot_bottom}" x2="{x:.2f}" y2="{plot_bottom + 5}" '
            'stroke="#000000"/>'
        )
        lines.append(
            f'<text x="{x:.2f}" y="{plot_bottom + 20}" text-anchor="middle" font-size="12" '
            f'font-family="Arial">{_format_tick(float(value))}</text>'
        )
    lines.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    lines.append(
        f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )

    for index, (label, curve) in enumerate(curves):
        color = COLORS[index % len(COLORS)]
        points = " ".join(
            f"{x_px(float(x)):.2f},{y_px(float(y)):.2f}" for x, y in zip(curve.grid, curve.values)
        )
        lines.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>')
        legend_y = plot_top + 20 + index * 24
        lines.append(
            f'<line x1="{plot_right + 15}" y1="{legend_y}" x2="{plot_right + 40}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        lines.append(
            f'<text x="{plot_right + 46}" y="{legend_y + 4}" font-size="13" '
            f'font-family="Arial">{escape(label)}</text>'
        )

    lines.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-size="14" font-family="Arial">{escape(x_label)}</text>'
    )
    mid = (plot_top + plot_bottom) / 2
    lines.append(
        f'<text x="20" y="{mid:.1f}" text-anchor="middle" font-size="14" font-family="Arial" '
        f'transform="rotate(-90 20 {mid:.1f})">{escape(y_label)}</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
