"""Deterministic SVG charts for sweep series.

Everything is emitted by hand — fixed canvas, fixed attribute order, numbers
formatted through one helper — so a given CSV always yields the same bytes.
No timestamps, ids, or library version strings end up in the output.
"""

from __future__ import annotations

import math
from pathlib import Path

from .series import SweepSeries, load_series

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 76, 20, 20, 58

Y_LABEL = "information rate (bits)"

# solid quantum curves, dashed classical reference, neutral error bars
CURVE_STYLE = {
    "i_q_analytic": ("#1f77b4", None),
    "i_q_optics": ("#2ca02c", None),
    "i_c_analytic": ("#d62728", "6 4"),
}
CURVE_LABEL = {
    "i_q_analytic": "quantum rate (analytic)",
    "i_q_optics": "quantum rate (optics)",
    "i_c_analytic": "classical limit",
}
POINT_LABEL = "Monte Carlo ± 1σ"


def _fmt(value: float) -> str:
    """Canvas coordinate: fixed two decimals, no negative zero."""
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def _fmt_tick(value: float) -> str:
    return f"{round(value, 12):.6g}"


def _el(tag: str, text: str | None = None, **attrs: str | float) -> str:
    rendered = "".join(
        f' {key.rstrip("_").replace("_", "-")}="{val}"' for key, val in attrs.items()
    )
    if text is None:
        return f"<{tag}{rendered}/>"
    return f"<{tag}{rendered}>{text}</{tag}>"


def _nice_step(span: float, target: int) -> float:
    raw = span / max(target, 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * magnitude * (1 + 1e-12):
            return mult * magnitude
    return 10.0 * magnitude


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step(hi - lo, target)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    value = first
    while value <= hi + 1e-9 * step:
        out.append(0.0 if abs(value) < 1e-12 * step else value)
        value += step
    return out


class _Scale:
    """Affine map from data to canvas coordinates."""

    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        self.lo, self.hi = lo, hi
        span = hi - lo
        self._gain = (out_hi - out_lo) / (span if span > 0 else 1.0)
        self._out_lo = out_lo

    def __call__(self, value: float) -> float:
        return self._out_lo + (value - self.lo) * self._gain


def _data_ranges(series: SweepSeries) -> tuple[float, float, float, float]:
    x_lo, x_hi = series.parameter[0], series.parameter[-1]
    if x_hi <= x_lo:  # single point
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    values = [v for _, curve in series.curves() for v in curve]
    values += [e - s for e, s in zip(series.i_exp, series.sigma)]
    values += [e + s for e, s in zip(series.i_exp, series.sigma)]
    y_lo = min(0.0, min(values))
    y_hi = max(values)
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    pad = 0.06 * (y_hi - y_lo)
    return x_lo, x_hi, y_lo, y_hi + pad


def render_svg(series: SweepSeries) -> str:
    """Render one sweep to an SVG document string."""
    x_lo, x_hi, y_lo, y_hi = _data_ranges(series)
    plot_l, plot_r = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_t, plot_b = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    sx = _Scale(x_lo, x_hi, plot_l, plot_r)
    sy = _Scale(y_lo, y_hi, plot_b, plot_t)  # y axis points up

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        _el("rect", x=0, y=0, width=WIDTH, height=HEIGHT, fill="#ffffff"),
        _el(
            "rect",
            class_="frame",
            x=plot_l,
            y=plot_t,
            width=plot_r - plot_l,
            height=plot_b - plot_t,
            fill="none",
            stroke="#333333",
            stroke_width="1",
        ),
    ]

    font = {"font_family": "sans-serif", "fill": "#333333"}
    for tick in _ticks(x_lo, x_hi):
        x = _fmt(sx(tick))
        parts.append(
            _el("line", x1=x, y1=_fmt(plot_b), x2=x, y2=_fmt(plot_b + 5),
                stroke="#333333", stroke_width="1")
        )
        parts.append(
            _el("text", _fmt_tick(tick), x=x, y=_fmt(plot_b + 19),
                font_size="12", text_anchor="middle", **font)
        )
    for tick in _ticks(y_lo, y_hi):
        y = _fmt(sy(tick))
        parts.append(
            _el("line", x1=_fmt(plot_l - 5), y1=y, x2=_fmt(plot_l), y2=y,
                stroke="#333333", stroke_width="1")
        )
        parts.append(
            _el("line", x1=_fmt(plot_l), y1=y, x2=_fmt(plot_r), y2=y,
                stroke="#dddddd", stroke_width="1")
        )
        parts.append(
            _el("text", _fmt_tick(tick), x=_fmt(plot_l - 9), y=_fmt(sy(tick) + 4),
                font_size="12", text_anchor="end", **font)
        )

    parts.append(
        _el("text", series.parameter_name, x=_fmt((plot_l + plot_r) / 2),
            y=_fmt(HEIGHT - 14), font_size="14", text_anchor="middle", **font)
    )
    parts.append(
        _el("text", Y_LABEL, x=_fmt(-(plot_t + plot_b) / 2), y="18",
            font_size="14", text_anchor="middle", transform="rotate(-90)", **font)
    )

    for name, values in series.curves():
        color, dashes = CURVE_STYLE[name]
        points = " ".join(
            f"{_fmt(sx(p))},{_fmt(sy(v))}" for p, v in zip(series.parameter, values)
        )
        attrs = {"class_": "curve", "points": points, "fill": "none",
                 "stroke": color, "stroke_width": "2"}
        if dashes is not None:
            attrs["stroke_dasharray"] = dashes
        parts.append(_el("polyline", **attrs))

    cap = 3.5
    for p, value, sigma in zip(series.parameter, series.i_exp, series.sigma):
        x = _fmt(sx(p))
        y_top, y_bot = _fmt(sy(value + sigma)), _fmt(sy(value - sigma))
        parts.append(
            _el("line", class_="errorbar", x1=x, y1=y_bot, x2=x, y2=y_top,
                stroke="#333333", stroke_width="1.5")
        )
        for y in (y_top, y_bot):
            parts.append(
                _el("line", x1=_fmt(sx(p) - cap), y1=y, x2=_fmt(sx(p) + cap), y2=y,
                    stroke="#333333", stroke_width="1.5")
            )
    for p, value in zip(series.parameter, series.i_exp):
        parts.append(
            _el("circle", class_="mc-point", cx=_fmt(sx(p)), cy=_fmt(sy(value)),
                r="3.2", fill="#ffffff", stroke="#333333", stroke_width="1.5")
        )

    legend_x, legend_y = plot_r - 196, plot_t + 10
    entries = [(CURVE_LABEL[name], CURVE_STYLE[name]) for name, _ in series.curves()]
    for i, (label, (color, dashes)) in enumerate(entries):
        y = legend_y + 18 * i
        line = {"x1": _fmt(legend_x), "y1": _fmt(y), "x2": _fmt(legend_x + 26),
                "y2": _fmt(y), "stroke": color, "stroke_width": "2"}
        if dashes is not None:
            line["stroke_dasharray"] = dashes
        parts.append(_el("line", **line))
        parts.append(
            _el("text", label, x=_fmt(legend_x + 32), y=_fmt(y + 4),
                font_size="12", **font)
        )
    y = legend_y + 18 * len(entries)
    parts.append(
        _el("circle", cx=_fmt(legend_x + 13), cy=_fmt(y), r="3.2",
            fill="#ffffff", stroke="#333333", stroke_width="1.5")
    )
    parts.append(
        _el("text", POINT_LABEL, x=_fmt(legend_x + 32), y=_fmt(y + 4),
            font_size="12", **font)
    )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(csv_path: str | Path, out_path: str | Path) -> Path:
    """Load a sweep CSV and write the chart; returns the output path."""
    series = load_series(csv_path)
    out = Path(out_path)
    out.write_text(render_svg(series), encoding="utf-8")
    return out
