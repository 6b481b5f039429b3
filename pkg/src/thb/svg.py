"""Minimal self-contained SVG emitters: line plots and space-time heatmaps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 440
MARGIN = dict(left=70, right=20, top=36, bottom=52)
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _f(x: float) -> str:
    return f"{x:.6g}"


def nice_ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


@dataclass
class Axes:
    xlim: Tuple[float, float]
    ylim: Tuple[float, float]
    width: int = WIDTH
    height: int = HEIGHT

    def __post_init__(self):
        for lim in ("xlim", "ylim"):
            lo, hi = getattr(self, lim)
            if hi == lo:
                pad = 0.5 * abs(lo) or 0.5
                setattr(self, lim, (lo - pad, hi + pad))

    @property
    def box(self):
        return (MARGIN["left"], MARGIN["top"], self.width - MARGIN["right"], self.height - MARGIN["bottom"])

    def px(self, x, y):
        x0, y0, x1, y1 = self.box
        (a, b), (c, d) = self.xlim, self.ylim
        return x0 + (x - a) / (b - a) * (x1 - x0), y1 - (y - c) / (d - c) * (y1 - y0)


@dataclass
class Figure:
    axes: Axes
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    body: List[str] = field(default_factory=list)
    legend: List[Tuple[str, str]] = field(default_factory=list)

    def line(self, xs: Sequence[float], ys: Sequence[float], color: str, label: Optional[str] = None,
             width: float = 1.6, dash: Optional[str] = None):
        pts = " ".join(f"{_f(px)},{_f(py)}" for px, py in (self.axes.px(x, y) for x, y in zip(xs, ys))
                       if np.isfinite(px) and np.isfinite(py))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.body.append(f'<polyline fill="none" stroke="{color}" stroke-width="{width}"{extra} points="{pts}"/>')
        if label:
            self.legend.append((label, color))

    def marker(self, x: float, y: float, text: str = "", color: str = "black"):
        px, py = self.axes.px(x, y)
        self.body.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="3.5" fill="{color}"/>')
        if text:
            self.text(x, y, text, dx=6, dy=-6)

    def text(self, x: float, y: float, s: str, dx: float = 0, dy: float = 0, size: int = 12):
        px, py = self.axes.px(x, y)
        self.body.append(f'<text x="{_f(px + dx)}" y="{_f(py + dy)}" font-size="{size}">{escape(s)}</text>')

    def _frame(self) -> List[str]:
        ax = self.axes
        x0, y0, x1, y1 = ax.box
        out = [f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" stroke="black"/>']
        for t in nice_ticks(*ax.xlim):
            px, _ = ax.px(t, ax.ylim[0])
            out.append(f'<line x1="{_f(px)}" y1="{y1}" x2="{_f(px)}" y2="{y1 + 5}" stroke="black"/>')
            out.append(f'<text x="{_f(px)}" y="{y1 + 18}" font-size="11" text-anchor="middle">{_f(t)}</text>')
        for t in nice_ticks(*ax.ylim):
            _, py = ax.px(ax.xlim[0], t)
            out.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" stroke="black"/>')
            out.append(f'<text x="{x0 - 8}" y="{_f(py + 4)}" font-size="11" text-anchor="end">{_f(t)}</text>')
        cx = (x0 + x1) / 2
        out.append(f'<text x="{_f(cx)}" y="{ax.height - 12}" font-size="13" text-anchor="middle">{escape(self.xlabel)}</text>')
        cy = (y0 + y1) / 2
        out.append(f'<text x="16" y="{_f(cy)}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 16 {_f(cy)})">{escape(self.ylabel)}</text>')
        out.append(f'<text x="{_f(cx)}" y="22" font-size="14" text-anchor="middle">{escape(self.title)}</text>')
        for i, (lab, col) in enumerate(self.legend):
            ly = y0 + 14 + 16 * i
            out.append(f'<line x1="{x1 - 150}" y1="{ly - 4}" x2="{x1 - 130}" y2="{ly - 4}" stroke="{col}" stroke-width="2"/>')
            out.append(f'<text x="{x1 - 125}" y="{ly}" font-size="11">{escape(lab)}</text>')
        return out

    def to_svg(self) -> str:
        ax = self.axes
        x0, y0, x1, y1 = ax.box
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{ax.width}" height="{ax.height}" '
                f'viewBox="0 0 {ax.width} {ax.height}" font-family="sans-serif">')
        clip = (f'<defs><clipPath id="plot"><rect x="{x0}" y="{y0}" width="{x1 - x0}" '
                f'height="{y1 - y0}"/></clipPath></defs>')
        parts = [head, '<rect width="100%" height="100%" fill="white"/>', clip,
                 '<g clip-path="url(#plot)">', *self.body, "</g>", *self._frame(), "</svg>"]
        return "\n".join(parts) + "\n"


def _viridis_like(s: float) -> str:
    # piecewise-linear blue -> teal -> yellow ramp
    stops = [(0.0, (68, 1, 84)), (0.5, (33, 145, 140)), (1.0, (253, 231, 37))]
    s = min(max(s, 0.0), 1.0)
    for (a, ca), (b, cb) in zip(stops, stops[1:]):
        if s <= b:
            w = (s - a) / (b - a)
            rgb = [round(p + w * (q - p)) for p, q in zip(ca, cb)]
            return "#%02x%02x%02x" % tuple(rgb)
    return "#%02x%02x%02x" % stops[-1][1]


def heatmap(t: np.ndarray, x: np.ndarray, data: np.ndarray, title: str = "", label: str = "u",
            max_cols: int = 300, max_rows: int = 100) -> str:
    """Space-time heatmap: time on the horizontal axis, space vertical."""
    step_t = max(1, int(np.ceil(len(t) / max_cols)))
    step_x = max(1, int(np.ceil(len(x) / max_rows)))
    tt, xx, z = t[::step_t], x[::step_x], data[::step_t, ::step_x]
    lo, hi = float(z.min()), float(z.max())
    span = hi - lo if hi > lo else 1.0
    dt = tt[1] - tt[0] if len(tt) > 1 else 1.0
    dx = 1.0 / len(xx)
    ax = Axes((float(tt[0]), float(tt[-1] + dt)), (0.0, 1.0), width=WIDTH + 70)
    fig = Figure(ax, title or f"{label}(x, t)", "t", "x")
    for i, ti in enumerate(tt):
        for j in range(len(xx)):
            px0, py0 = ax.px(ti, (j + 1) * dx)
            px1, py1 = ax.px(ti + dt, j * dx)
            col = _viridis_like((z[i, j] - lo) / span)
            fig.body.append(f'<rect x="{_f(px0)}" y="{_f(py0)}" width="{_f(px1 - px0 + 0.3)}" '
                            f'height="{_f(py1 - py0 + 0.3)}" fill="{col}"/>')
    svg = fig.to_svg()
    # colour bar to the right of the plot box
    x0, y0, x1, y1 = ax.box
    bar = []
    for k in range(50):
        yk = y1 - (k + 1) * (y1 - y0) / 50
        bar.append(f'<rect x="{x1 + 12}" y="{_f(yk)}" width="14" height="{_f((y1 - y0) / 50 + 0.3)}" '
                   f'fill="{_viridis_like((k + 0.5) / 50)}"/>')
    bar.append(f'<text x="{x1 + 30}" y="{y1}" font-size="10">{_f(lo)}</text>')
    bar.append(f'<text x="{x1 + 30}" y="{y0 + 8}" font-size="10">{_f(hi)}</text>')
    return svg.replace("</svg>\n", "\n".join(bar) + "\n</svg>\n")


def line_plot(series: Sequence[Tuple[Sequence[float], Sequence[float], str]], title: str = "",
              xlabel: str = "", ylabel: str = "",
              markers: Sequence[Tuple[float, float, str]] = (),
              xlim: Optional[Tuple[float, float]] = None, ylim: Optional[Tuple[float, float]] = None) -> str:
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    fin = np.isfinite(xs) & np.isfinite(ys)
    xlim = xlim or (float(xs[fin].min()), float(xs[fin].max()))
    if ylim is None:
        lo, hi = float(ys[fin].min()), float(ys[fin].max())
        pad = 0.05 * (hi - lo)
        ylim = (lo - pad, hi + pad)
    fig = Figure(Axes(xlim, ylim), title, xlabel, ylabel)
    for i, (sx, sy, lab) in enumerate(series):
        fig.line(sx, sy, PALETTE[i % len(PALETTE)], lab or None)
    for mx, my, lab in markers:
        fig.marker(mx, my, lab)
    return fig.to_svg()
