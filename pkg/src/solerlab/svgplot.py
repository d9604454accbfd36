"""Hand-rolled SVG renderings of sweep spectra (no plotting dependency).

One figure per spherical degree ell: the top panel shows Im lambda against
omega, the bottom panel Re lambda against omega.  Points are color-keyed by
|m|; artifact-suspect branches are drawn with dashed connecting lines and
hollow markers, everything else as filled dots.  Axes are fixed to
omega in (0.1, 1) and Im lambda in (-2.2, 2.2); the Re panel auto-scales.
"""

from __future__ import annotations

from collections import defaultdict

from .profile import _atomic_write

__all__ = ["render_sweep_svgs", "render_panel_svg"]

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f"]

_W, _H = 640, 720
_MARGIN = dict(left=60, right=20, top=30, gap=50, bottom=45)
_OMEGA_LIM = (0.1, 1.0)
_IM_LIM = (-2.2, 2.2)


def _color(m_abs):
    return _PALETTE[m_abs % len(_PALETTE)]


class _Panel:
    def __init__(self, x0, y0, w, h, xlim, ylim):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        a, b = self.xlim
        return self.x0 + (x - a) / (b - a) * self.w

    def py(self, y):
        a, b = self.ylim
        return self.y0 + self.h - (y - a) / (b - a) * self.h

    def clip(self, x, y):
        return self.xlim[0] <= x <= self.xlim[1] and self.ylim[0] <= y <= self.ylim[1]

    def frame(self, out, xlabel, ylabel, title=""):
        out.append(
            f'<rect x="{self.x0}" y="{self.y0}" width="{self.w}" height="{self.h}" '
            f'fill="none" stroke="black"/>')
        nt = 5
        for i in range(nt + 1):
            xv = self.xlim[0] + i * (self.xlim[1] - self.xlim[0]) / nt
            yv = self.ylim[0] + i * (self.ylim[1] - self.ylim[0]) / nt
            xp, yp = self.px(xv), self.py(yv)
            out.append(f'<line x1="{xp:.1f}" y1="{self.y0 + self.h}" '
                       f'x2="{xp:.1f}" y2="{self.y0 + self.h + 4}" stroke="black"/>')
            out.append(f'<text x="{xp:.1f}" y="{self.y0 + self.h + 16}" '
                       f'font-size="10" text-anchor="middle">{xv:.2g}</text>')
            out.append(f'<line x1="{self.x0 - 4}" y1="{yp:.1f}" '
                       f'x2="{self.x0}" y2="{yp:.1f}" stroke="black"/>')
            out.append(f'<text x="{self.x0 - 7}" y="{yp + 3:.1f}" font-size="10" '
                       f'text-anchor="end">{yv:.3g}</text>')
        out.append(f'<text x="{self.x0 + self.w / 2}" y="{self.y0 + self.h + 32}" '
                   f'font-size="12" text-anchor="middle">{xlabel}</text>')
        out.append(f'<text x="{self.x0 - 45}" y="{self.y0 + self.h / 2}" font-size="12" '
                   f'text-anchor="middle" transform="rotate(-90 {self.x0 - 45} '
                   f'{self.y0 + self.h / 2})">{ylabel}</text>')
        if title:
            out.append(f'<text x="{self.x0 + self.w / 2}" y="{self.y0 - 8}" '
                       f'font-size="13" text-anchor="middle">{title}</text>')


def _draw(panel, out, series):
    """series: {(m_abs, suspect): [(x, y), ...]}"""
    for (m_abs, suspect), pts in sorted(series.items()):
        pts = sorted(p for p in pts if panel.clip(*p))
        if not pts:
            continue
        col = _color(m_abs)
        if suspect and len(pts) > 1:
            path = " ".join(f"{panel.px(x):.1f},{panel.py(y):.1f}" for x, y in pts)
            out.append(f'<polyline points="{path}" fill="none" stroke="{col}" '
                       f'stroke-width="1" stroke-dasharray="4 3"/>')
        for x, y in pts:
            cx, cy = panel.px(x), panel.py(y)
            if suspect:
                out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="2.2" '
                           f'fill="white" stroke="{col}"/>')
            else:
                out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="1.8" fill="{col}"/>')


def render_panel_svg(rows, ell):
    """SVG text for one degree; rows are sweep-CSV tuples
    (omega, ell, m, eta2, re, im, tag)."""
    im_series = defaultdict(list)
    re_series = defaultdict(list)
    re_max = 1e-3
    for om, l, m, eta2, re, im, tag in rows:
        if l != ell:
            continue
        key = (abs(m), tag == "artifact-suspect")
        im_series[key].append((om, im))
        re_series[key].append((om, re))
        if tag != "artifact-suspect":
            re_max = max(re_max, abs(re))
    mg = _MARGIN
    ph = (_H - mg["top"] - mg["gap"] - mg["bottom"]) / 2
    pw = _W - mg["left"] - mg["right"]
    top = _Panel(mg["left"], mg["top"], pw, ph, _OMEGA_LIM, _IM_LIM)
    bot = _Panel(mg["left"], mg["top"] + ph + mg["gap"], pw, ph,
                 _OMEGA_LIM, (-1.1 * re_max, 1.1 * re_max))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    top.frame(out, "omega", "Im lambda", f"spectrum vs omega, ell = {ell}")
    bot.frame(out, "omega", "Re lambda")
    _draw(top, out, im_series)
    _draw(bot, out, re_series)
    # legend: one swatch per |m| present
    ms = sorted({abs(m) for _, l, m, *_ in rows if l == ell})
    for i, m_abs in enumerate(ms):
        y = mg["top"] + 12 + 14 * i
        out.append(f'<circle cx="{_W - 80}" cy="{y}" r="3" fill="{_color(m_abs)}"/>')
        out.append(f'<text x="{_W - 72}" y="{y + 4}" font-size="10">|m| = {m_abs}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_sweep_svgs(rows, out_dir):
    """Write one spectrum_ell<k>.svg per degree present in the rows;
    returns the list of paths written."""
    import os

    ells = sorted({l for _, l, *_ in rows})
    paths = []
    for ell in ells:
        path = os.path.join(str(out_dir), f"spectrum_ell{ell}.svg")
        _atomic_write(path, render_panel_svg(rows, ell))
        paths.append(path)
    return paths
