"""Hand-written SVG figures of the multiplicity base and the gradient of f in one chart plane.

Two pictures:

* ``multiplicity_picture``: each component as one closed ``<path>``,
  short ticks along the kernel line every few vertices, critical points
  as dots;
* ``gradient_picture``: streamlines of grad f seeded on a coarse grid,
  plus the components and critical points for reference.

The ``<path>`` element is reserved for components so its count equals the
component count; streamlines are ``<polyline>``.
"""
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from . import kernels
from .config import CHART_RADIUS
from .errors import OutputError
from .fields import sections
from .sphere import ChartId, ChartPoint
from .symbol import kernel_line

KINDS = ("multiplicity_picture", "gradient_picture")
SIZE = 640
MARGIN = 40
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")


class _Canvas:
    def __init__(self, half):
        self.half = half
        self.scale = (SIZE - 2 * MARGIN) / (2 * half)
        self.parts = []

    def xy(self, c):
        # chart plane to pixels; SVG y grows downwards
        return (MARGIN + (c.real + self.half) * self.scale, MARGIN + (self.half - c.imag) * self.scale)

    def pts(self, cs):
        return " ".join("%.3f,%.3f" % self.xy(c) for c in cs)

    def add(self, s):
        self.parts.append(s)


def _view_half(curves, chart):
    # fit the curves, but never zoom out so far that the unit circle is a speck
    half = CHART_RADIUS
    for c in curves:
        z = c.coords_in(chart)
        z = z[np.isfinite(z)]
        if z.size:
            half = max(half, min(float(np.max(np.abs(np.r_[z.real, z.imag]))) * 1.08, 4.0))
    return half


def _axes(cv, chart, title):
    lo, hi = cv.xy(complex(-cv.half, -cv.half)), cv.xy(complex(cv.half, cv.half))
    x0, y0 = cv.xy(0j)
    cv.add(f'<rect x="{lo[0]:.3f}" y="{hi[1]:.3f}" width="{hi[0] - lo[0]:.3f}" '
           f'height="{lo[1] - hi[1]:.3f}" fill="none" stroke="#999" stroke-width="0.5"/>')
    cv.add(f'<g class="axes" stroke="#444" stroke-width="0.8">'
           f'<line x1="{lo[0]:.3f}" y1="{y0:.3f}" x2="{hi[0]:.3f}" y2="{y0:.3f}"/>'
           f'<line x1="{x0:.3f}" y1="{lo[1]:.3f}" x2="{x0:.3f}" y2="{hi[1]:.3f}"/></g>')
    name = "z" if chart is ChartId.Chart1 else "w"
    ux, _ = cv.xy(complex(1, 0))
    _, uy = cv.xy(complex(0, 1))
    cv.add(f'<g class="labels" font-family="sans-serif" font-size="12" fill="#222">'
           f'<text x="{hi[0] - 30:.1f}" y="{y0 - 6:.1f}">Re {name}</text>'
           f'<text x="{x0 + 6:.1f}" y="{hi[1] + 14:.1f}">Im {name}</text>'
           f'<text x="{ux:.1f}" y="{y0 + 14:.1f}" text-anchor="middle">1</text>'
           f'<text x="{x0 - 8:.1f}" y="{uy + 4:.1f}" text-anchor="end">i</text>'
           f'<text class="chart-label" x="{MARGIN:.1f}" y="{MARGIN - 14:.1f}">'
           f'{escape(name)}-chart ({chart.name}){escape(title)}</text></g>')
    # unit circle, the equator of the sphere
    r = cv.scale
    cv.add(f'<circle cx="{x0:.3f}" cy="{y0:.3f}" r="{r:.3f}" fill="none" stroke="#bbb" '
           f'stroke-dasharray="4 3" stroke-width="0.6"/>')


def _component_path(cv, curve, k, chart):
    z = curve.coords_in(chart)
    ok = np.isfinite(z) & (np.abs(z.real) <= 50 * cv.half) & (np.abs(z.imag) <= 50 * cv.half)
    d = []
    pen = False
    for zk, good in zip(np.r_[z, z[:1]], np.r_[ok, ok[:1]]):
        if not good:
            pen = False
            continue
        x, y = cv.xy(zk)
        d.append(("L" if pen else "M") + f"{x:.3f},{y:.3f}")
        pen = True
    if ok.all():
        d.append("Z")
    col = _COLORS[k % len(_COLORS)]
    cv.add(f'<path class="component" id="component-{k}" d="{" ".join(d)}" fill="none" '
           f'stroke="{col}" stroke-width="1.6"/>')


def _kernel_ticks(cv, spec, curve, chart, every):
    z = curve.coords_in(chart)
    idx = np.arange(0, z.size, max(every, 1))
    idx = idx[np.isfinite(z[idx]) & (np.abs(z[idx]) <= 1.5 * cv.half)]
    if idx.size == 0:
        return
    zv, zw = sections(spec, chart, z[idx])
    good = np.abs(zv) > 1e-12
    d = np.zeros(idx.size, dtype=complex)
    d[good] = kernel_line(zv[good], zw[good])
    ln = 0.018 * cv.half
    segs = []
    for zk, dk in zip(z[idx][good], d[good]):
        (x1, y1), (x2, y2) = cv.xy(zk - ln * dk), cv.xy(zk + ln * dk)
        segs.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
    cv.add('<g class="kernel-ticks" stroke="#333" stroke-width="0.9">' + "".join(segs) + "</g>")


def _critical_dots(cv, critical_points, chart):
    dots = []
    for r in critical_points:
        p = r.point if isinstance(r.point, ChartPoint) else r
        if p.chart == chart:
            c = p.coord
        elif p.coord != 0:
            c = 1.0 / p.coord
        else:
            continue
        if abs(c.real) > cv.half or abs(c.imag) > cv.half:
            continue
        x, y = cv.xy(c)
        idx = getattr(r, "grad_index", 0)
        fill = {1: "#000", -1: "#fff"}.get(idx, "#888")
        dots.append(f'<circle class="critical" cx="{x:.3f}" cy="{y:.3f}" r="3.5" fill="{fill}" '
                    f'stroke="#000" stroke-width="1"><title>index {idx}</title></circle>')
    cv.add('<g class="critical-points">' + "".join(dots) + "</g>")


def _streamlines(cv, spec, chart, seeds_per_side=18, max_steps=400):
    qd, q1d, _, pd, p1d, _ = spec.polys(chart)
    g = np.linspace(-cv.half, cv.half, seeds_per_side + 2)[1:-1]
    seeds = (g[None, :] + 1j * g[:, None]).ravel().astype(np.complex128)
    step = cv.half / 150.0
    lines = []
    for sign in (1.0, -1.0):
        paths, counts = kernels.streamlines(qd.astype(np.complex128), q1d.astype(np.complex128),
                                            pd.astype(np.complex128), p1d.astype(np.complex128),
                                            seeds, step, max_steps, sign, cv.half, 1e-6)
        for path, n in zip(paths, counts):
            if n >= 2:
                lines.append(f'<polyline points="{cv.pts(path[:n])}"/>')
    cv.add('<g class="streamlines" fill="none" stroke="#7a9cc6" stroke-width="0.6">'
           + "".join(lines) + "</g>")


def render_svg(spec, curves, critical_points, kind, chart=ChartId.Chart1, tick_every=12):
    if kind not in KINDS:
        raise ValueError(f"unknown picture kind {kind!r}")
    chart = ChartId(chart)
    curves = list(curves)
    cv = _Canvas(_view_half(curves, chart))
    title = f", {len(curves)} component{'s' if len(curves) != 1 else ''}"
    if spec is not None and spec.label:
        title = f": {spec.label}" + title
    _axes(cv, chart, title)
    if kind == "gradient_picture" and spec is not None:
        _streamlines(cv, spec, chart)
    for k, c in enumerate(curves):
        _component_path(cv, c, k, chart)
    if kind == "multiplicity_picture" and spec is not None:
        for c in curves:
            _kernel_ticks(cv, spec, c, chart, tick_every)
    _critical_dots(cv, critical_points or (), chart)
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}" class="{kind}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="#fff"/>'] + cv.parts + ["</svg>"]) + "\n"


def emit_svg(spec, curves, critical_points, kind, path=None, chart=ChartId.Chart1, tick_every=12):
    """Render a figure; write it to ``path`` when given. Returns the SVG text."""
    text = render_svg(spec, curves, critical_points, kind, chart, tick_every)
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc}") from exc
    return text
