"""Minimal deterministic SVG renderer for the CSV files the CLI emits.

No plotting dependency: output is assembled from text so identical inputs
give byte-identical SVG (a golden-file test relies on that). Coordinates
are affine images of the CSV values; the data are never rescaled
nonlinearly or resampled.
"""

from __future__ import annotations

import math
from pathlib import Path

WIDTH, HEIGHT = 640.0, 480.0
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64.0, 16.0, 28.0, 44.0
PLOT_W = WIDTH - MARGIN_L - MARGIN_R
PLOT_H = HEIGHT - MARGIN_T - MARGIN_B

GRAY = "#b0b0b0"
BLUE = "#1f5fbf"
ORANGE = "#e07020"

_RULE_COLORS = {"powerlaw": BLUE, "linear": ORANGE}


def _num(x: float) -> str:
    """Fixed two-decimal coordinate rendering, locale independent."""
    return f"{x:.2f}"


def _label(x: float) -> str:
    return format(float(x), ".6g")


class _Svg:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" '
            f'height="{HEIGHT:.0f}" viewBox="0 0 {WIDTH:.0f} {HEIGHT:.0f}">',
            f'<rect width="{WIDTH:.0f}" height="{HEIGHT:.0f}" fill="white"/>',
            f'<text x="{WIDTH / 2:.0f}" y="18" font-family="sans-serif" '
            f'font-size="13" text-anchor="middle">{title}</text>',
        ]

    def line(self, x1, y1, x2, y2, color="black", width=1.0):
        self.parts.append(
            f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
            f'stroke="{color}" stroke-width="{width:g}"/>'
        )

    def polyline(self, points, color, width=1.0):
        pts = " ".join(f"{_num(x)},{_num(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width:g}"/>'
        )

    def rect(self, x, y, w, h, fill):
        self.parts.append(
            f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(w)}" '
            f'height="{_num(h)}" fill="{fill}"/>'
        )

    def text(self, x, y, s, size=11, anchor="middle", color="black"):
        self.parts.append(
            f'<text x="{_num(x)}" y="{_num(y)}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="{anchor}" fill="{color}">{s}</text>'
        )

    def axes(self, xlabel: str, ylabel: str, x_min, x_max, y_min, y_max):
        x0, y0 = MARGIN_L, MARGIN_T + PLOT_H
        self.line(x0, y0, x0 + PLOT_W, y0)
        self.line(x0, y0, x0, MARGIN_T)
        self.text(x0 + PLOT_W / 2, HEIGHT - 10, xlabel, size=12)
        self.parts.append(
            f'<text x="14" y="{_num(MARGIN_T + PLOT_H / 2)}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 14 {_num(MARGIN_T + PLOT_H / 2)})">{ylabel}</text>'
        )
        self.text(x0, y0 + 16, _label(x_min), size=10)
        self.text(x0 + PLOT_W, y0 + 16, _label(x_max), size=10)
        self.text(x0 - 6, y0 + 4, _label(y_min), size=10, anchor="end")
        self.text(x0 - 6, MARGIN_T + 4, _label(y_max), size=10, anchor="end")

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _affine(v, v_min, v_max, out_min, out_max):
    if v_max == v_min:
        return (out_min + out_max) / 2.0
    return out_min + (v - v_min) / (v_max - v_min) * (out_max - out_min)


def _x(v, lo, hi):
    return _affine(v, lo, hi, MARGIN_L, MARGIN_L + PLOT_W)


def _y(v, lo, hi):
    return _affine(v, lo, hi, MARGIN_T + PLOT_H, MARGIN_T)


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    lines = path.read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:] if line]
    return header, rows


def plot_learning_curve(rows: list[list[str]]) -> str:
    """Per-trial filtered-reward traces in gray, mean of active trials in blue."""
    trials: dict[int, list[float]] = {}
    for row in rows:
        trials.setdefault(int(row[0]), []).append(float(row[3]))
    n_epochs = max(len(c) for c in trials.values())
    values = [v for c in trials.values() for v in c]
    y_lo, y_hi = min(values + [0.0]), max(values + [1.0])
    svg = _Svg("filtered reward per epoch")
    svg.axes("epoch", "filtered reward", 1, n_epochs, y_lo, y_hi)
    for curve in trials.values():
        svg.polyline(
            [
                (_x(i + 1, 1, n_epochs), _y(v, y_lo, y_hi))
                for i, v in enumerate(curve)
            ],
            GRAY,
        )
    mean_curve = []
    for i in range(n_epochs):
        active = [c[i] for c in trials.values() if i < len(c)]
        mean_curve.append(sum(active) / len(active))
    svg.polyline(
        [
            (_x(i + 1, 1, n_epochs), _y(v, y_lo, y_hi))
            for i, v in enumerate(mean_curve)
        ],
        BLUE,
        width=2.0,
    )
    return svg.render()


def plot_sweep(rows: list[list[str]]) -> str:
    """Mean epochs-to-goal versus learning rate, one polyline per rule."""
    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        mean = float(row[2])
        if math.isnan(mean):
            continue
        series.setdefault(row[0], []).append((float(row[1]), mean))
    points = [p for pts in series.values() for p in pts]
    if not points:
        raise ValueError("sweep CSV holds no converged points")
    x_lo, x_hi = min(p[0] for p in points), max(p[0] for p in points)
    y_lo, y_hi = 0.0, max(p[1] for p in points)
    svg = _Svg("mean epochs to goal vs hidden learning rate")
    svg.axes("lr_hidden", "mean epochs", x_lo, x_hi, y_lo, y_hi)
    for rule, pts in sorted(series.items()):
        color = _RULE_COLORS.get(rule, "black")
        svg.polyline(
            [(_x(px, x_lo, x_hi), _y(py, y_lo, y_hi)) for px, py in sorted(pts)],
            color,
            width=2.0,
        )
        svg.text(MARGIN_L + PLOT_W - 8, MARGIN_T + 16 * (len(svg.parts) % 7 + 1),
                 rule, anchor="end", color=color)
    return svg.render()


def _bar_chart(title: str, labels: list[str], values: list[float], colors) -> str:
    svg = _Svg(title)
    v_hi = max(values + [0.0])
    v_lo = min(values + [0.0])
    svg.axes("", "value", 0, len(labels), v_lo, v_hi)
    slot = PLOT_W / len(labels)
    zero_y = _y(0.0, v_lo, v_hi)
    for i, (label, value) in enumerate(zip(labels, values)):
        x = MARGIN_L + i * slot + slot * 0.2
        top = _y(value, v_lo, v_hi)
        y = min(top, zero_y)
        h = abs(zero_y - top)
        svg.rect(x, y, slot * 0.6, h, colors[i % len(colors)])
        svg.text(x + slot * 0.3, MARGIN_T + PLOT_H + 16, label, size=10)
        svg.text(x + slot * 0.3, y - 4, _label(value), size=10)
    return svg.render()


def plot_comparison(rows: list[list[str]]) -> str:
    labels = [row[0] for row in rows]
    values = [float(row[1]) for row in rows]
    colors = [_RULE_COLORS.get(lbl, GRAY) for lbl in labels]
    return _bar_chart("mean epochs to goal per rule", labels, values, colors)


def plot_stats(header: list[str], rows: list[list[str]]) -> str:
    values = [float(v) for v in rows[0]]
    return _bar_chart("Welch test statistics", header, values, [BLUE] * len(header))


def _heat_color(frac: float) -> str:
    """White to dark blue, linear in frac."""
    frac = min(max(frac, 0.0), 1.0)
    r = round(255 + (31 - 255) * frac)
    g = round(255 + (95 - 255) * frac)
    b = round(255 + (191 - 255) * frac)
    return f"rgb({r},{g},{b})"


def plot_pulse_map(rows: list[list[str]]) -> str:
    """Heatmap of on/off ratio over the (voltage, duration) grid."""
    voltages = sorted({float(r[0]) for r in rows})
    durations = sorted({float(r[1]) for r in rows})
    grid = {(float(r[0]), float(r[1])): float(r[2]) for r in rows}
    lo = min(grid.values())
    hi = max(grid.values())
    svg = _Svg(f"pulse-train on/off ratio (min {_label(lo)}, max {_label(hi)})")
    svg.axes(
        "pulse duration (s)", "pulse voltage (V)",
        durations[0], durations[-1], voltages[0], voltages[-1],
    )
    cell_w = PLOT_W / len(durations)
    cell_h = PLOT_H / len(voltages)
    for i, v in enumerate(voltages):
        for j, t in enumerate(durations):
            frac = 0.5 if hi == lo else (grid[(v, t)] - lo) / (hi - lo)
            svg.rect(
                MARGIN_L + j * cell_w,
                MARGIN_T + PLOT_H - (i + 1) * cell_h,
                cell_w,
                cell_h,
                _heat_color(frac),
            )
    return svg.render()


_DISPATCH = {
    ("trial", "epoch", "raw_reward", "filtered_reward"): (
        lambda header, rows: plot_learning_curve(rows)
    ),
    ("rule", "lr_hidden", "mean_epochs", "std_epochs", "n_converged"): (
        lambda header, rows: plot_sweep(rows)
    ),
    ("rule", "mean", "std", "n_converged"): (
        lambda header, rows: plot_comparison(rows)
    ),
    ("t", "nu", "p_one_sided", "p_two_sided"): plot_stats,
    ("voltage_v", "duration_s", "onoff_ratio"): (
        lambda header, rows: plot_pulse_map(rows)
    ),
}


def plot_csv(csv_path: Path, svg_path: Path) -> None:
    """Render one recognized CSV to SVG; ValueError for unknown schemas."""
    header, rows = read_csv(csv_path)
    key = tuple(header)
    if key not in _DISPATCH or not rows:
        raise ValueError(f"{csv_path}: unrecognized or empty CSV schema {header}")
    svg_path.write_text(_DISPATCH[key](header, rows))


KNOWN_FILES = (
    "learning_curve.csv",
    "sweep.csv",
    "comparison.csv",
    "stats.csv",
    "pulse_map.csv",
)


def plot_directory(directory: Path) -> list[Path]:
    """Plot every known CSV present in directory; returns the SVGs written."""
    written = []
    for name in KNOWN_FILES:
        csv_path = directory / name
        if csv_path.is_file():
            svg_path = csv_path.with_suffix(".svg")
            plot_csv(csv_path, svg_path)
            written.append(svg_path)
    return written
