"""Extraction of the multiplicity base ``{f = 0}`` as oriented closed polylines.

Each chart is sampled on a square grid over ``|coord| <= CHART_RADIUS`` and
contoured by marching squares.  Chart 1 owns the disk ``|z| <= rho`` and
chart 2 the rest, for a seam radius ``rho`` near 1 chosen so that the level
set crosses the seam circle transversally.  Loops inside one owned region are
kept whole; loops crossing the seam are cut there and stitched at the exact
crossing points, so no component is reported twice and loops through both
poles are still recovered.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .config import CHART_RADIUS, DEFAULT_TOLERANCES
from .errors import NonGenericLevelSet, OrientationAmbiguous, TracingFailure
from .fields import f_values, grad_f, section_zeros, sections
from .sphere import ChartId, ChartPoint, alpha, embed_coords

log = logging.getLogger(__name__)

SEAM_CANDIDATES = (1.0, 1.06, 0.94, 1.12, 0.9, 1.17, 0.86)
_SEAM_SAMPLES = 4096
_SMALL_LOOP_CELLS = 4.0


@dataclass
class OrientedCurve:
    """Closed polyline on the sphere; the last vertex connects to the first.

    Vertices may switch charts along the loop (only across the seam).
    """
    charts: np.ndarray
    coords: np.ndarray
    orientation_check: float = float("nan")
    converged: np.ndarray = None

    def __post_init__(self):
        self.charts = np.asarray(self.charts, dtype=np.int8)
        self.coords = np.asarray(self.coords, dtype=complex)
        if self.charts.shape == ():
            self.charts = np.full(self.coords.shape, self.charts, dtype=np.int8)
        if self.converged is None:
            self.converged = np.ones(self.coords.shape, dtype=bool)

    @classmethod
    def in_chart(cls, chart, coords, **kw):
        coords = np.asarray(coords, dtype=complex)
        return cls(np.full(coords.shape, int(chart), dtype=np.int8), coords, **kw)

    def __len__(self):
        return self.coords.size

    @property
    def vertices(self):
        return [ChartPoint(ChartId(int(c)), complex(z)) for c, z in zip(self.charts, self.coords)]

    def reversed(self):
        return OrientedCurve(self.charts[::-1].copy(), self.coords[::-1].copy(),
                             self.orientation_check, self.converged[::-1].copy())

    def embedded(self):
        out = np.empty(self.coords.shape + (3,))
        for chart in ChartId:
            m = self.charts == chart
            out[m] = embed_coords(chart, self.coords[m])
        return out

    def coords_in(self, chart):
        """All vertices expressed in ``chart`` (inf at its pole)."""
        out = self.coords.copy()
        flip = self.charts != int(chart)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[flip] = 1.0 / out[flip]
        return out

    def neighbours_in_own_chart(self, shift):
        """Vertex ``k + shift`` expressed in the chart of vertex ``k``."""
        nb_c = np.roll(self.charts, -shift)
        nb = np.roll(self.coords, -shift).copy()
        flip = nb_c != self.charts
        nb[flip] = 1.0 / nb[flip]
        return nb

    def tangents(self):
        """Unit chart tangent at every vertex (central differences)."""
        d = self.neighbours_in_own_chart(1) - self.neighbours_in_own_chart(-1)
        return d / np.abs(d)

    def max_step(self):
        if len(self) < 2:
            return 0.0
        return float(np.max(np.abs(self.neighbours_in_own_chart(1) - self.coords)))

    def per_chart(self, values_fn):
        """Evaluate ``values_fn(chart, coords)`` vertex-wise in each vertex's chart."""
        out = None
        for chart in ChartId:
            m = self.charts == chart
            if not m.any():
                continue
            vals = values_fn(chart, self.coords[m])
            if out is None:
                out = np.empty(self.coords.shape, dtype=np.result_type(vals))
            out[m] = vals
        return out


@dataclass
class GenericityReport:
    min_grad_norm_on_curve: float
    fiber_defect_max: float
    verdict: str
    min_zero_separation: float = float("inf")
    unconverged_vertices: int = 0
    reasons: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# level-set refinement


def _f_scale(spec, chart, coords):
    zv, zw = sections(spec, chart, coords)
    return 1.0 + np.abs(zv) ** 2 + np.abs(zw) ** 2


def refine_on_level_set(spec, chart, coords, tol=DEFAULT_TOLERANCES.trace_tol, max_iter=20):
    """1-D Newton along the gradient onto ``f = 0``; returns ``(coords, converged)``."""
    c = np.array(coords, dtype=complex, copy=True).ravel()
    if c.size == 0:
        return c, np.ones(0, dtype=bool)
    live = np.ones(c.size, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(live)[0]
        if idx.size == 0:
            break
        x = c[idx]
        fv = f_values(spec, chart, x)
        g = grad_f(spec, chart, x)
        g2 = g.real ** 2 + g.imag ** 2
        tiny = np.abs(fv) <= 1e-15 * _f_scale(spec, chart, x)
        ok = (g2 > 0) & ~tiny
        step = np.zeros_like(x)
        step[ok] = fv[ok] * g[ok] / g2[ok]
        # keep Newton local: a step longer than a grid cell means a flat gradient
        s = np.abs(step)
        step = np.where(s > 0.05, step * (0.05 / np.maximum(s, 1e-300)), step)
        c[idx] = x - step
        live[idx[~ok | (np.abs(step) < 1e-16)]] = False
    conv = np.abs(f_values(spec, chart, c)) <= tol
    return c, conv


# ---------------------------------------------------------------------------
# per-chart marching squares


def _march(spec, chart, corner, h, n, tol, clip=True):
    """Refined marching-squares chains on the ``n x n`` node grid starting at ``corner``."""
    xs = np.arange(n) * h
    grid = corner + xs[None, :] + 1j * xs[:, None]
    fv = f_values(spec, chart, grid)
    centers = grid[:-1, :-1] + 0.5 * h * (1 + 1j)
    fc = f_values(spec, chart, centers)
    if clip:
        inside = np.abs(grid) <= CHART_RADIUS
        active = inside[:-1, :-1] & inside[:-1, 1:] & inside[1:, :-1] & inside[1:, 1:]
    else:
        active = np.ones((n - 1, n - 1), dtype=bool)
    pos = fv > 0
    segs, saddles = kernels.cell_segments(pos, fc > 0, active)

    if saddles.size:
        sc = centers.ravel()[saddles]
        gn = np.abs(grad_f(spec, chart, sc))
        bad = gn < tol.grad_floor
        if np.any(bad):
            raise NonGenericLevelSet(
                f"saddle cell on the zero set with |grad f| = {gn[bad].min():.3g} "
                f"near {chart.name} {complex(sc[bad][0]):.6g}")

    n_edges = 2 * n * (n - 1)
    order, offsets, closed = kernels.link_segments(segs, n_edges)
    pts = _edge_points(order, n, grid.ravel(), fv.ravel())
    pts, conv = refine_on_level_set(spec, chart, pts, tol.trace_tol)
    chains = []
    for k in range(closed.size):
        a, b = offsets[k], offsets[k + 1]
        cpts, ccv = _drop_repeats(pts[a:b], conv[a:b], bool(closed[k]))
        if cpts.size >= (3 if closed[k] else 2):
            chains.append((cpts, ccv, bool(closed[k])))
    return chains


def _chart_chains(spec, chart, grid_n, tol):
    """Refined marching-squares chains ``(coords, converged, closed)`` of one chart."""
    n = grid_n + 1
    h = 2 * CHART_RADIUS / grid_n
    chains = _march(spec, chart, -CHART_RADIUS * (1 + 1j), h, n, tol)
    out = []
    for pts, conv, closed in chains:
        if closed and _extent(pts) < _SMALL_LOOP_CELLS * h:
            out.extend(_retrace_small(spec, chart, pts, conv, h, tol))
        else:
            out.append((pts, conv, closed))
    return out, h


def _extent(pts):
    return max(np.ptp(pts.real), np.ptp(pts.imag))


def _retrace_small(spec, chart, pts, conv, h, tol):
    # a loop spanning a few cells is folded or clipped at grid resolution; redo it on a fine local grid
    center = 0.5 * (pts.real.min() + pts.real.max()) + 0.5j * (pts.imag.min() + pts.imag.max())
    half = 0.5 * _extent(pts) + 2 * h
    m = 96
    hl = 2 * half / (m - 1)
    local = _march(spec, chart, center - half * (1 + 1j), hl, m, tol, clip=False)
    if local and all(c for _, _, c in local):
        return local
    log.debug("local retrace near %s %s was not closed; keeping the coarse loop", chart.name, center)
    return [(pts, conv, True)]


def _edge_points(edge_ids, n, nodes, fv):
    nh = n * (n - 1)
    e = np.asarray(edge_ids)
    hor = e < nh
    i = np.where(hor, e // (n - 1), (e - nh) // n)
    j = np.where(hor, e % (n - 1), (e - nh) % n)
    a = i * n + j
    b = np.where(hor, a + 1, a + n)
    fa, fb = fv[a], fv[b]
    t = np.clip(fa / (fa - fb), 0.0, 1.0)
    return nodes[a] + t * (nodes[b] - nodes[a])


def _drop_repeats(pts, conv, closed):
    if pts.size < 2:
        return pts, conv
    keep = np.ones(pts.size, dtype=bool)
    keep[1:] = np.abs(np.diff(pts)) > 1e-10
    if closed and abs(pts[-1] - pts[0]) <= 1e-10:
        keep[-1] = False
    return pts[keep], conv[keep]


# ---------------------------------------------------------------------------
# seam


def _seam_profile(spec, rho, m=_SEAM_SAMPLES):
    theta = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    z = rho * np.exp(1j * theta)
    fv = f_values(spec, ChartId.Chart1, z)
    g = grad_f(spec, ChartId.Chart1, z)
    f_theta = (np.conj(g) * (1j * z)).real
    return theta, fv, f_theta


def choose_seam(spec):
    """Seam radius whose circle the level set crosses most transversally."""
    best, best_score = None, -1.0
    for rho in SEAM_CANDIDATES:
        _, fv, ft = _seam_profile(spec, rho)
        scale = np.max(np.abs(fv)) + 1e-300
        score = float(np.min(np.abs(fv) + 0.05 * np.abs(ft))) / scale
        if score > 1e-3:
            return rho
        if score > best_score:
            best, best_score = rho, score
    log.debug("no clean seam; using rho=%s (score %.3g)", best, best_score)
    return best


def seam_crossings(spec, rho):
    theta, fv, _ = _seam_profile(spec, rho)
    m = theta.size
    roots = []
    for k in np.nonzero(np.sign(fv) != np.sign(np.roll(fv, -1)))[0]:
        a = theta[k]
        b = theta[k + 1] if k + 1 < m else 2 * np.pi
        fa, fb = fv[k], fv[(k + 1) % m]
        if fa == 0.0:
            roots.append(a)
            continue
        if fb == 0.0:
            continue
        fn = lambda t: float(f_values(spec, ChartId.Chart1, rho * np.exp(1j * t)))
        roots.append(brentq(fn, a, b, xtol=1e-15, rtol=1e-15))
    return np.array(sorted(r % (2 * np.pi) for r in roots))


def _circle_hit(a, b, r):
    # parameter t in [0, 1] with |a + t (b - a)| = r
    d = b - a
    qa = abs(d) ** 2
    qb = 2 * (a.real * d.real + a.imag * d.imag)
    qc = abs(a) ** 2 - r * r
    disc = max(qb * qb - 4 * qa * qc, 0.0)
    sq = math.sqrt(disc)
    for t in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
        if -1e-9 <= t <= 1 + 1e-9:
            return a + min(max(t, 0.0), 1.0) * d
    return a + 0.5 * d


def _nearest_root(roots, angle, limit):
    d = np.abs(np.angle(np.exp(1j * (roots - angle))))
    j = int(np.argmin(d))
    if d[j] > limit:
        raise TracingFailure(f"contour meets the seam at angle {angle:.6g} with no crossing nearby")
    return j


def _pieces(chains, chart, rho, roots, h):
    """Split chains at the seam: complete loops plus (start_root, coords, end_root) arcs."""
    r = rho if chart is ChartId.Chart1 else 1.0 / rho
    limit = 4.0 * h / r + 1e-6
    loops, arcs = [], []
    for pts, conv, closed in chains:
        if chart is ChartId.Chart1:
            ins = np.abs(pts) <= r
        else:
            ins = np.abs(pts) < r
        if ins.all():
            if closed:
                loops.append((pts, conv))
                continue
            raise TracingFailure(f"open contour ends inside the owned disk of {chart.name}")
        if not ins.any():
            continue
        if closed:
            k0 = int(np.nonzero(~ins)[0][0])
            pts, conv, ins = np.roll(pts, -k0), np.roll(conv, -k0), np.roll(ins, -k0)
            pts, conv, ins = np.append(pts, pts[0]), np.append(conv, conv[0]), np.append(ins, False)
        elif ins[0] or ins[-1]:
            raise TracingFailure(f"open contour ends inside the owned disk of {chart.name}")
        k = 0
        m = pts.size
        while k < m:
            if not ins[k]:
                k += 1
                continue
            s = k
            while k < m and ins[k]:
                k += 1
            e = k - 1
            hit_in = _circle_hit(pts[s - 1], pts[s], r)
            hit_out = _circle_hit(pts[e], pts[e + 1], r)
            ang_in = np.angle(hit_in) if chart is ChartId.Chart1 else -np.angle(hit_in)
            ang_out = np.angle(hit_out) if chart is ChartId.Chart1 else -np.angle(hit_out)
            arcs.append((_nearest_root(roots, ang_in, limit), pts[s:e + 1], conv[s:e + 1],
                         _nearest_root(roots, ang_out, limit)))
    return loops, arcs


def _stitch(arcs1, arcs2, roots, rho):
    ends = {ChartId.Chart1: {}, ChartId.Chart2: {}}
    for chart, arcs in ((ChartId.Chart1, arcs1), (ChartId.Chart2, arcs2)):
        for idx, (j0, _, _, j1) in enumerate(arcs):
            for j, side in ((j0, 0), (j1, 1)):
                if j in ends[chart]:
                    raise TracingFailure(f"seam crossing {j} claimed twice in {chart.name}")
                ends[chart][j] = (idx, side)
    for chart in ChartId:
        if set(ends[chart]) != set(range(roots.size)):
            raise TracingFailure(
                f"{chart.name} arcs cover {len(ends[chart])} of {roots.size} seam crossings")
    seam_pt = rho * np.exp(1j * roots)
    used1 = [False] * len(arcs1)
    loops = []
    for start in range(len(arcs1)):
        if used1[start]:
            continue
        charts, coords, conv = [], [], []
        idx, forward, chart = start, True, ChartId.Chart1
        j_begin = arcs1[start][0]
        while True:
            arcs = arcs1 if chart is ChartId.Chart1 else arcs2
            j0, pts, cv, j1 = arcs[idx]
            if chart is ChartId.Chart1:
                used1[idx] = True
            if not forward:
                j0, j1, pts, cv = j1, j0, pts[::-1], cv[::-1]
            charts.append(np.array([1], dtype=np.int8))
            coords.append(seam_pt[j0:j0 + 1])
            conv.append(np.array([True]))
            charts.append(np.full(pts.size, int(chart), dtype=np.int8))
            coords.append(pts)
            conv.append(cv)
            if j1 == j_begin and chart is ChartId.Chart2:
                break
            chart = chart.other
            idx, side = ends[chart][j1]
            forward = side == 0
            if chart is ChartId.Chart1 and used1[idx]:
                raise TracingFailure("seam stitching revisited an arc")
        loops.append(OrientedCurve(np.concatenate(charts), np.concatenate(coords),
                                   converged=np.concatenate(conv)))
    return loops


# ---------------------------------------------------------------------------
# densification


def densify(spec, curve, tol=DEFAULT_TOLERANCES, max_passes=12, force=False):
    """Insert refined midpoints until steps <= max_step and chord sag <= chord_tol.

    With ``force=True`` every edge is bisected once first.
    """
    charts, coords, conv = curve.charts, curve.coords, curve.converged
    checked = np.zeros(coords.size, dtype=bool)  # edge k -> k+1 already accepted
    for npass in range(max_passes):
        nxt = np.roll(coords, -1).copy()
        flip = np.roll(charts, -1) != charts
        nxt[flip] = 1.0 / nxt[flip]
        mid0 = 0.5 * (coords + nxt)
        mid = mid0.copy()
        mconv = np.ones(coords.size, dtype=bool)
        todo = ~checked
        for chart in ChartId:
            m = todo & (charts == chart)
            if m.any():
                mid[m], mconv[m] = refine_on_level_set(spec, chart, mid0[m], tol.trace_tol)
        split = todo & ((np.abs(nxt - coords) > tol.max_step) | (np.abs(mid - mid0) > tol.chord_tol))
        if force and npass == 0:
            split = np.ones(coords.size, dtype=bool)
        checked = checked | ~split
        if not split.any():
            break
        k = np.nonzero(split)[0]
        ins_at = k + 1
        coords = np.insert(coords, ins_at, mid[k])
        charts = np.insert(charts, ins_at, charts[k])
        conv = np.insert(conv, ins_at, mconv[k])
        checked = np.insert(checked, ins_at, False)
        checked[k + np.arange(k.size)] = False
    # midpoint in chart of vertex k may have left that chart's comfortable range
    big = np.abs(coords) > 1.0 / 0.85 + 0.05
    coords[big] = 1.0 / coords[big]
    charts[big] = 3 - charts[big]
    return OrientedCurve(charts, coords, curve.orientation_check, conv)


# ---------------------------------------------------------------------------
# orientation


def orient_as_boundary(curve, spec, eps=1e-4, samples=128):
    """Traverse ``curve`` so that ``f < 0`` lies on its left."""
    n = len(curve)
    idx = np.unique(np.linspace(0, n - 1, min(samples, n)).astype(int))
    tang = curve.tangents()[idx]
    probe = curve.coords[idx] + eps * 1j * tang
    fl = np.empty(idx.size)
    for chart in ChartId:
        m = curve.charts[idx] == chart
        if m.any():
            fl[m] = f_values(spec, chart, probe[m])
    if np.all(np.abs(fl) < 1e-12):
        raise OrientationAmbiguous("f vanishes at every orientation probe")
    if np.sum(fl < 0) >= np.sum(fl > 0):
        out = OrientedCurve(curve.charts, curve.coords, converged=curve.converged)
        margin = -fl
    else:
        out = curve.reversed()
        margin = fl
    out.orientation_check = float(np.min(margin))
    return out


# ---------------------------------------------------------------------------
# public entry


def trace_level_set(spec, grid_n=256, tol=DEFAULT_TOLERANCES):
    """All components of ``{f = 0}``, refined, densified and oriented as boundary of ``{f < 0}``."""
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    rho = choose_seam(spec)
    roots = seam_crossings(spec, rho)
    loops, arcs = [], {}
    h = None
    for chart in ChartId:
        chains, h = _chart_chains(spec, chart, grid_n, tol)
        lp, ar = _pieces(chains, chart, rho, roots, h)
        loops.extend(OrientedCurve.in_chart(chart, p, converged=c) for p, c in lp)
        arcs[chart] = ar
    if roots.size or arcs[ChartId.Chart1] or arcs[ChartId.Chart2]:
        loops.extend(_stitch(arcs[ChartId.Chart1], arcs[ChartId.Chart2], roots, rho))
    out = []
    for c in loops:
        c = densify(spec, c, tol)
        out.append(orient_as_boundary(c, spec))
    out.sort(key=_curve_sort_key)
    log.debug("traced %d components (seam rho=%s, %d crossings)", len(out), rho, roots.size)
    return out


def trace_around(spec, point, curves=(), tol=DEFAULT_TOLERANCES, m=96):
    """Closed components of ``{f = 0}`` winding around ``point`` that are too small for the grid.

    Local grids of shrinking size are tried until one yields closed loops
    around the point. Returns oriented curves, or ``[]``.
    """
    chart, x = point.chart, point.coord
    near = min((float(np.min(np.abs(c.coords_in(chart) - x))) for c in curves), default=np.inf)
    for half in (1e-2, 1e-3, 1e-4, 1e-5):
        if half >= near:
            continue
        h = 2 * half / (m - 1)
        try:
            chains = _march(spec, chart, x - half * (1 + 1j), h, m, tol, clip=False)
        except NonGenericLevelSet:
            continue
        loops = [(p, c) for p, c, closed in chains if closed and
                 abs(np.sum(np.angle(np.roll(p - x, -1) / (p - x)))) > np.pi]
        if loops and all(closed for _, _, closed in chains):
            out = []
            for p, c in loops:
                cur = densify(spec, OrientedCurve.in_chart(chart, p, converged=c), tol)
                out.append(orient_as_boundary(cur, spec, eps=min(1e-4, 0.01 * half)))
            return out
    return []


def _curve_sort_key(c):
    # deterministic component order: by embedded centroid
    cen = c.embedded().mean(axis=0)
    return tuple(np.round(cen, 9))


def hausdorff_to_circle(curve, radius=1.0, chart=ChartId.Chart1, samples=4096):
    """Symmetric Hausdorff distance between the polyline and ``|coord| = radius``."""
    pts = curve.coords_in(chart)
    nxt = np.roll(pts, -1)
    t = np.linspace(0, 1, 9)[:-1]
    dense = (pts[:, None] + t[None, :] * (nxt - pts)[:, None]).ravel()
    d1 = np.max(np.abs(np.abs(dense) - radius))
    circ = radius * np.exp(1j * np.linspace(0, 2 * np.pi, samples, endpoint=False))
    seg_a, seg_b = pts, nxt
    d = seg_b - seg_a
    tt = np.clip(((circ[:, None] - seg_a[None, :]) * np.conj(d)[None, :]).real
                 / np.maximum(np.abs(d) ** 2, 1e-300)[None, :], 0, 1)
    dist = np.abs(circ[:, None] - (seg_a[None, :] + tt * d[None, :]))
    d2 = np.max(np.min(dist, axis=1))
    return float(max(d1, d2))


def enclosure_defects(spec, curves, probes):
    """Probe points whose total winding by the curves disagrees with the sign of f there.

    Seen from a probe's own chart, the oriented boundary of ``{f < 0}`` winds
    ``[f(x) < 0] - [f(pole) < 0]`` times around ``x``, the pole being the
    point at infinity of that chart. A mismatch means a component was missed.
    """
    bad = []
    for p in probes:
        ref = float(f_values(spec, p.chart.other, 0.0))
        fx = float(f_values(spec, p.chart, p.coord))
        if ref == 0.0 or fx == 0.0:
            continue
        expect = int(fx < 0) - int(ref < 0)
        total = 0.0
        for c in curves:
            with np.errstate(divide="ignore", invalid="ignore"):
                d = c.coords_in(p.chart) - p.coord
            if not np.all(np.isfinite(d)) or np.min(np.abs(d)) < 1e-9:
                total = np.nan
                break
            total += np.sum(np.angle(np.roll(d, -1) / d)) / (2 * np.pi)
        if np.isfinite(total) and round(total) != expect:
            bad.append(p)
    return bad


def genericity_diagnostic(spec, curves, tol=DEFAULT_TOLERANCES, probes=()):
    """Genericity verdict of the traced base; ``probes`` are points checked by :func:`enclosure_defects`."""
    reasons = []
    if curves:
        gmin = min(float(np.min(np.abs(c.per_chart(lambda ch, x: grad_f(spec, ch, x))))) for c in curves)

        def defect(ch, x):
            zv, zw = sections(spec, ch, x)
            return np.abs(np.abs(zv) - np.abs(zw))
        dmax = max(float(np.max(c.per_chart(defect))) for c in curves)
        unconv = sum(int(np.sum(~c.converged)) for c in curves)
    else:
        gmin, dmax, unconv = 0.0, 0.0, 0
        reasons.append("empty multiplicity base")

    zq = section_zeros(spec, "Q")
    zp = section_zeros(spec, "P")
    sep = float("inf")
    if zq and zp:
        eq = np.array([embed_coords(p.chart, p.coord) for p in zq])
        ep = np.array([embed_coords(p.chart, p.coord) for p in zp])
        sep = float(np.min(np.linalg.norm(eq[:, None, :] - ep[None, :, :], axis=-1)))
    if sep < 1e-6:
        reasons.append("V_Q and V_P share a zero")
    if gmin <= tol.grad_floor:
        reasons.append(f"|grad f| on the curve down to {gmin:.3g}")
    if dmax > tol.fiber_tol:
        reasons.append(f"fiber defect {dmax:.3g}")
    if unconv:
        reasons.append(f"{unconv} vertices failed to refine")
    missed = enclosure_defects(spec, curves, probes) if probes else []
    if missed:
        reasons.append(f"traced curves disagree with the sign of f at {len(missed)} probe points")

    if not curves or sep < 1e-6 or gmin <= 1e-2 * tol.grad_floor:
        verdict = "Degenerate"
    elif reasons:
        verdict = "Suspect"
    else:
        verdict = "Generic"
    return GenericityReport(gmin, dmax, verdict, sep, unconv, reasons)
