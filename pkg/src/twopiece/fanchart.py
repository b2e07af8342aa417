"""Density-forecast fan charts from a sequence of two-piece normal forecasts.

Each horizon is an independent marginal forecast.  For every coverage
level a band is computed either with equal tail probabilities or as the
highest-density interval.  For the two-piece normal the latter is
(mu - k sigma1, mu + k sigma2) with k = z_{(1+c)/2}: both endpoints sit at
the same density, and the interval holds mass 2 Phi(k) - 1 whatever the
two scales are.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .core import TwoPieceNormal
from .errors import DomainError
from .numerics import std_normal_quantile

__all__ = [
    "EQUAL_TAIL",
    "HIGHEST_DENSITY",
    "HorizonForecast",
    "FanChart",
    "BandTable",
    "RenderStyle",
    "interval_probability",
    "band",
    "build_bandtable",
    "render",
    "render_csv",
    "render_svg",
    "fan_chart",
]

EQUAL_TAIL = "equal-tail"
HIGHEST_DENSITY = "highest-density"
BAND_MODES = (EQUAL_TAIL, HIGHEST_DENSITY)

CSV_HEADER = ("horizon", "level", "lower", "upper", "mode", "mean", "median")


@dataclass(frozen=True)
class HorizonForecast:
    label: str
    dist: TwoPieceNormal


@dataclass(frozen=True)
class FanChart:
    horizons: tuple
    levels: tuple
    band_mode: str = EQUAL_TAIL

    def __post_init__(self):
        object.__setattr__(self, "horizons", tuple(self.horizons))
        object.__setattr__(self, "levels", tuple(float(c) for c in self.levels))
        if not self.horizons:
            raise DomainError("a fan chart needs at least one horizon")
        if not self.levels:
            raise DomainError("a fan chart needs at least one coverage level")
        if any(not 0.0 < c < 1.0 for c in self.levels):
            raise DomainError(f"coverage levels must lie in (0, 1), got {self.levels}")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise DomainError(f"coverage levels must be strictly increasing, got {self.levels}")
        if self.band_mode not in BAND_MODES:
            raise DomainError(f"band mode must be one of {BAND_MODES}, got {self.band_mode!r}")


@dataclass(frozen=True)
class BandTable:
    """Band endpoints indexed ``[horizon, level]`` plus the central path."""

    labels: tuple
    levels: tuple
    lower: np.ndarray
    upper: np.ndarray
    mode: np.ndarray
    mean: np.ndarray
    median: np.ndarray

    def rows(self):
        for i, label in enumerate(self.labels):
            for j, level in enumerate(self.levels):
                yield (label, level, self.lower[i, j], self.upper[i, j],
                       self.mode[i], self.mean[i], self.median[i])


def interval_probability(d: TwoPieceNormal, lo: float, hi: float) -> float:
    """P(lo < X <= hi), from the scaled normal distribution function."""
    if not lo < hi:
        raise DomainError(f"interval ({lo}, {hi}) is empty")
    if lo >= d.mu:
        # both ends in the right piece: difference of upper tails keeps precision
        return float(d.sf(lo) - d.sf(hi))
    return float(d.cdf(hi) - d.cdf(lo))


def band(d: TwoPieceNormal, coverage: float, mode: str = EQUAL_TAIL) -> tuple[float, float]:
    if not 0.0 < coverage < 1.0:
        raise DomainError(f"coverage must lie in (0, 1), got {coverage}")
    if mode == EQUAL_TAIL:
        return d.quantile(0.5 * (1.0 - coverage)), d.quantile(0.5 * (1.0 + coverage))
    if mode == HIGHEST_DENSITY:
        k = std_normal_quantile(0.5 * (1.0 + coverage))
        return d.mu - k * d.sigma1, d.mu + k * d.sigma2
    raise DomainError(f"band mode must be one of {BAND_MODES}, got {mode!r}")


def build_bandtable(chart: FanChart) -> BandTable:
    n_h, n_l = len(chart.horizons), len(chart.levels)
    lower = np.empty((n_h, n_l))
    upper = np.empty((n_h, n_l))
    central = np.empty((n_h, 3))
    for i, h in enumerate(chart.horizons):
        for j, c in enumerate(chart.levels):
            lower[i, j], upper[i, j] = band(h.dist, c, chart.band_mode)
        central[i] = h.dist.central_values()
    return BandTable(
        labels=tuple(h.label for h in chart.horizons),
        levels=chart.levels,
        lower=lower,
        upper=upper,
        mode=central[:, 2].copy(),
        mean=central[:, 0].copy(),
        median=central[:, 1].copy(),
    )


def _fmt(value: float) -> str:
    text = format(float(value), ".9g")
    return "0" if text == "-0" else text


def render_csv(table: BandTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for label, level, lo, hi, mode, mean, median in table.rows():
        writer.writerow([label, _fmt(level), _fmt(lo), _fmt(hi), _fmt(mode), _fmt(mean), _fmt(median)])
    return buf.getvalue()


@dataclass(frozen=True)
class RenderStyle:
    """SVG layout.  The canvas is fixed at 800 x 500 user units."""

    margin_left: float = 70.0
    margin_right: float = 30.0
    margin_top: float = 40.0
    margin_bottom: float = 60.0
    band_color: str = "#b2182b"
    band_opacity: float = 0.25
    path_color: str = "#222222"
    mean_color: str = "#2166ac"
    title: str = "Fan chart"

    width = 800.0
    height = 500.0


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    raw = (hi - lo) / count
    magnitude = 10.0 ** np.floor(np.log10(raw))
    step = min((m * magnitude for m in (1, 2, 2.5, 5, 10) if m * magnitude >= raw), default=raw)
    first = np.ceil(lo / step) * step
    return [float(t) for t in np.arange(first, hi + 0.5 * step, step) if lo <= t <= hi]


def render_svg(table: BandTable, style: RenderStyle | None = None) -> str:
    """Standalone SVG: nested translucent bands (widest first), mode path solid, mean dashed."""
    style = style or RenderStyle()
    n_h = len(table.labels)
    plot_w = style.width - style.margin_left - style.margin_right
    plot_h = style.height - style.margin_top - style.margin_bottom

    y_lo = float(min(table.lower.min(), table.mean.min(), table.mode.min()))
    y_hi = float(max(table.upper.max(), table.mean.max(), table.mode.max()))
    pad = 0.05 * (y_hi - y_lo) if y_hi > y_lo else 1.0
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(i):
        frac = 0.5 if n_h == 1 else i / (n_h - 1)
        return style.margin_left + frac * plot_w

    def py(v):
        return style.margin_top + (y_hi - v) / (y_hi - y_lo) * plot_h

    def pts(pairs):
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in pairs)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width:g}" height="{style.height:g}" '
        f'viewBox="0 0 {style.width:g} {style.height:g}">',
        f'<title>{escape(style.title)}</title>',
        f'<rect x="0" y="0" width="{style.width:g}" height="{style.height:g}" fill="#ffffff"/>',
    ]

    x0, x1 = style.margin_left, style.margin_left + plot_w
    y0, y1 = style.margin_top, style.margin_top + plot_h
    out.append(f'<g stroke="#999999" stroke-width="1" fill="none">'
               f'<line x1="{x0:.3f}" y1="{y1:.3f}" x2="{x1:.3f}" y2="{y1:.3f}"/>'
               f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x0:.3f}" y2="{y1:.3f}"/></g>')
    out.append('<g font-family="sans-serif" font-size="12" fill="#333333">')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<text x="{x0 - 6:.3f}" y="{py(t) + 4:.3f}" text-anchor="end">{_fmt(round(t, 10))}</text>')
    for i, label in enumerate(table.labels):
        out.append(f'<text x="{px(i):.3f}" y="{y1 + 20:.3f}" text-anchor="middle">{escape(str(label))}</text>')
    out.append('</g>')

    out.append(f'<g fill="{style.band_color}" fill-opacity="{style.band_opacity:g}" stroke="none">')
    for j in reversed(range(len(table.levels))):
        upper = [(px(i), py(table.upper[i, j])) for i in range(n_h)]
        lower = [(px(i), py(table.lower[i, j])) for i in reversed(range(n_h))]
        if n_h == 1:
            # a single horizon is drawn as a short box
            half = 0.05 * plot_w
            x = px(0)
            upper = [(x - half, upper[0][1]), (x + half, upper[0][1])]
            lower = [(x + half, lower[0][1]), (x - half, lower[0][1])]
        out.append(f'<polygon data-level="{_fmt(table.levels[j])}" points="{pts(upper + lower)}"/>')
    out.append('</g>')

    mode_path = [(px(i), py(table.mode[i])) for i in range(n_h)]
    mean_path = [(px(i), py(table.mean[i])) for i in range(n_h)]
    out.append(f'<polyline fill="none" stroke="{style.path_color}" stroke-width="2" points="{pts(mode_path)}"/>')
    out.append(f'<polyline fill="none" stroke="{style.mean_color}" stroke-width="1.5" '
               f'stroke-dasharray="6,4" points="{pts(mean_path)}"/>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def render(table: BandTable, style: RenderStyle | None = None) -> tuple[str, str]:
    """Return ``(svg_text, csv_text)``."""
    if not table.labels:
        raise DomainError("nothing to render")
    return render_svg(table, style), render_csv(table)


def fan_chart(rows: Sequence[tuple], levels: Sequence[float], band_mode: str = EQUAL_TAIL) -> FanChart:
    """Convenience constructor from ``(label, mu, sigma1, sigma2)`` rows."""
    return FanChart(tuple(HorizonForecast(str(r[0]), TwoPieceNormal(*map(float, r[1:4]))) for r in rows),
                    tuple(levels), band_mode)
