"""Self-contained SVG charts for analysis reports.

No plotting library: the three figures are assembled from polylines, circles
and text with fixed two-decimal coordinates, so the output bytes depend only
on the report contents.
"""

from __future__ import annotations

import math
from pathlib import Path

from .pipeline import AnalysisReport, format_real

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 64, 20, 42, 48

SERIES_COLORS = {
    ("token", "lr"): "#1f77b4",
    ("token", "svm"): "#ff7f0e",
    ("sentence", "lr"): "#2ca02c",
    ("sentence", "svm"): "#d62728",
}
LEVEL_COLORS = {"token": "#1f77b4", "sentence": "#d62728"}

_AXIS_STYLE = 'stroke="#333333" stroke-width="1"'
_FONT = 'font-family="sans-serif"'


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    return format(round(x, 10), "g")


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    raw = (hi - lo) / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * magnitude
    for mult in (1.0, 2.0, 2.5, 5.0):
        if raw <= mult * magnitude:
            step = mult * magnitude
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


class _Svg:
    def __init__(self, width: int, height: int) -> None:
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def line(self, x1: float, y1: float, x2: float, y2: float, style: str) -> None:
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" {style}/>'
        )

    def polyline(self, points: list[tuple[float, float]], color: str) -> None:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    def circle(self, x: float, y: float, r: float, color: str) -> None:
        self.parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{color}"/>'
        )

    def text(
        self,
        x: float,
        y: float,
        content: str,
        size: int = 11,
        anchor: str = "start",
        color: str = "#333333",
    ) -> None:
        escaped = (
            content.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        )
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" {_FONT} font-size="{size}" '
            f'text-anchor="{anchor}" fill="{color}">{escaped}</text>'
        )

    def render(self) -> str:
        body = "\n".join(f"  {p}" for p in self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            f'  <rect width="{self.width}" height="{self.height}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )


def _data_range(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        return lo - 0.5, hi + 0.5
    pad = 0.06 * (hi - lo)
    return lo - pad, hi + pad


def _xy_chart(
    series: list[tuple[str, str, list[float], list[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    connect: bool = True,
    integer_x: bool = False,
    annotations: list[str] | None = None,
) -> str:
    """Shared renderer: each series is (label, color, xs, ys); markers always drawn."""
    svg = _Svg(WIDTH, HEIGHT)
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP

    all_x = [x for _, _, xs, _ in series for x in xs]
    all_y = [y for _, _, _, ys in series for y in ys]
    lo_x, hi_x = _data_range(all_x)
    lo_y, hi_y = _data_range(all_y)

    def sx(v: float) -> float:
        return x0 + (v - lo_x) / (hi_x - lo_x) * (x1 - x0)

    def sy(v: float) -> float:
        return y0 - (v - lo_y) / (hi_y - lo_y) * (y0 - y1)

    svg.text(WIDTH / 2, MARGIN_TOP - 18, title, size=14, anchor="middle")
    svg.line(x0, y0, x1, y0, _AXIS_STYLE)
    svg.line(x0, y0, x0, y1, _AXIS_STYLE)

    x_ticks = _nice_ticks(lo_x, hi_x)
    if integer_x:
        x_ticks = [t for t in x_ticks if float(t).is_integer()]
    for t in x_ticks:
        px = sx(t)
        svg.line(px, y0, px, y0 + 4, _AXIS_STYLE)
        svg.text(px, y0 + 17, _tick_label(t), size=10, anchor="middle")
    for t in _nice_ticks(lo_y, hi_y):
        py = sy(t)
        svg.line(x0 - 4, py, x0, py, _AXIS_STYLE)
        svg.line(x0, py, x1, py, 'stroke="#dddddd" stroke-width="0.5"')
        svg.text(x0 - 8, py + 3.5, _tick_label(t), size=10, anchor="end")
    svg.text((x0 + x1) / 2, HEIGHT - 12, xlabel, size=12, anchor="middle")
    svg.parts.append(
        f'<text x="16" y="{_fmt((y0 + y1) / 2)}" {_FONT} font-size="12" '
        f'text-anchor="middle" fill="#333333" '
        f'transform="rotate(-90 16 {_fmt((y0 + y1) / 2)})">{ylabel}</text>'
    )

    for label, color, xs, ys in series:
        pts = [(sx(x), sy(y)) for x, y in zip(xs, ys)]
        if connect and len(pts) >= 2:
            svg.polyline(pts, color)
        for px, py in pts:
            svg.circle(px, py, 2.6, color)

    legend_y = MARGIN_TOP + 8
    for label, color, _, _ in series:
        svg.line(x1 - 130, legend_y - 4, x1 - 112, legend_y - 4, f'stroke="{color}" stroke-width="2"')
        svg.text(x1 - 106, legend_y, label, size=11)
        legend_y += 16
    for note in annotations or []:
        svg.text(x0 + 10, legend_y, note, size=11, color="#555555")
        legend_y += 16

    return svg.render()


def _layer_series(report: AnalysisReport, metric: str) -> list[tuple[str, str, list[float], list[float]]]:
    out = []
    for level, lv in report.levels.items():
        xs = [float(m.layer) for m in lv.layers]
        if metric == "gdv":
            out.append((level, LEVEL_COLORS[level], xs, [m.gdv for m in lv.layers]))
        else:
            for kind in ("lr", "svm"):
                ys = [getattr(m, f"{kind}_accuracy") for m in lv.layers]
                out.append((f"{level} {kind.upper()}", SERIES_COLORS[(level, kind)], xs, ys))
    return out


def render_accuracy_chart(report: AnalysisReport) -> str:
    return _xy_chart(
        _layer_series(report, "accuracy"),
        title="Probe accuracy by layer",
        xlabel="layer",
        ylabel="held-out accuracy",
        integer_x=True,
    )


def render_gdv_chart(report: AnalysisReport) -> str:
    return _xy_chart(
        _layer_series(report, "gdv"),
        title="GDV by layer",
        xlabel="layer",
        ylabel="GDV",
        integer_x=True,
    )


def render_correlation_chart(report: AnalysisReport) -> str:
    """Accuracy-vs-GDV scatter with the rank correlation quoted per pairing."""
    series = []
    notes = []
    for level, lv in report.levels.items():
        gdvs = [m.gdv for m in lv.layers]
        for kind in ("lr", "svm"):
            accs = [getattr(m, f"{kind}_accuracy") for m in lv.layers]
            series.append((f"{level} {kind.upper()}", SERIES_COLORS[(level, kind)], gdvs, accs))
            result = lv.correlations.get(f"{kind}_vs_gdv")
            if isinstance(result, str) or result is None:
                notes.append(f"{level} {kind.upper()}: degenerate")
            else:
                notes.append(
                    f"{level} {kind.upper()}: r_s = {format_real(result.r_s)} "
                    f"(p = {format_real(result.p_value)}, n = {result.n})"
                )
    return _xy_chart(
        series,
        title="Accuracy vs GDV",
        xlabel="GDV",
        ylabel="held-out accuracy",
        connect=False,
        annotations=notes,
    )


def emit_figures(report: AnalysisReport, prefix: str | Path) -> list[Path]:
    """Write the three SVG figures next to the reports; returns the paths."""
    prefix = str(prefix)
    charts = {
        "accuracy.svg": render_accuracy_chart(report),
        "gdv.svg": render_gdv_chart(report),
        "correlation.svg": render_correlation_chart(report),
    }
    written = []
    for name, content in charts.items():
        path = Path(prefix + name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
        written.append(path)
    return written
