"""Winding numbers, field indices along curves, critical points of f, and the
three-way index check.

The multiplicity index is computed three ways:

* ``direct``: track the kernel direction of the symbol along each component
  against the curve's unit tangent and count its turns;
* ``w - v``: difference of the indices of V_P and V_Q along the curve;
* ``formula``: ``3 chi - 2 * sum`` of gradient indices of f over the
  critical points inside ``{f < 0}``.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import CHART_RADIUS, CHI_SPHERE, DEFAULT_TOLERANCES
from .errors import (BranchJump, DegenerateCritical, InconsistentIndices, NonGenericSymbol,
                     NonIntegralWinding, NumericalFailure, SectionVanishesOnCurve, UndersampledLoop, ZeroVector)
from .fields import f_values, grad_f, hess_f, section_zeros, sections
from .sphere import ChartId, ChartPoint, embed_coords
from .symbol import kernel_line
from .tracer import (_curve_sort_key, densify, enclosure_defects, genericity_diagnostic,
                     trace_around, trace_level_set)

log = logging.getLogger(__name__)

POWERS = {"V_Q": 1, "V_P": 3}

# |f| / (|zv|^2 + |zw|^2) at a critical point below which 0 counts as nearly critical
NEAR_CRITICAL_LEVEL = 1e-4


# ---------------------------------------------------------------------------
# winding


def _as_complex(samples):
    s = np.asarray(samples)
    if np.iscomplexobj(s):
        return s.ravel()
    s = s.astype(float)
    return s[..., 0] + 1j * s[..., 1]


def winding_turns(samples, closed=True, max_increment=np.pi / 2):
    """Accumulated angle of a sampled loop in units of full turns (not rounded)."""
    s = _as_complex(samples)
    if s.size == 0:
        return 0.0
    if np.any(np.abs(s) < 1e-14):
        raise ZeroVector("sample with modulus < 1e-14 in winding computation")
    nxt = np.roll(s, -1) if closed else s[1:]
    cur = s if closed else s[:-1]
    inc = np.angle(nxt / cur)
    if inc.size and np.max(np.abs(inc)) >= max_increment:
        raise UndersampledLoop(f"angle increment {np.max(np.abs(inc)):.3f} rad >= {max_increment:.3f}")
    return float(np.sum(inc) / (2 * np.pi))


def _round_turns(turns, residual):
    n = int(round(turns))
    r = abs(turns - n)
    if r >= residual:
        raise NonIntegralWinding(f"winding sum {turns:.4f} is {r:.3f} from an integer")
    return n, r


def winding_number(samples, closed=True, residual=DEFAULT_TOLERANCES.winding_residual):
    """Integer winding of nonzero planar samples around the origin.

    ``closed=True`` adds the increment from the last sample back to the
    first; with ``closed=False`` the samples must already end where they
    started.
    """
    return _round_turns(winding_turns(samples, closed), residual)[0]


# ---------------------------------------------------------------------------
# indices along curves


def _frame_scalars(spec, curve, n):
    zv, zw = curve.per_chart(lambda ch, x: sections(spec, ch, x)[0]), \
        curve.per_chart(lambda ch, x: sections(spec, ch, x)[1])
    return zv if n == 1 else zw


def field_index_with_residual(spec, curve, which, tol=DEFAULT_TOLERANCES):
    n = POWERS[which]
    s = _frame_scalars(spec, curve, n)
    if np.min(np.abs(s)) <= 1e-8:
        raise SectionVanishesOnCurve(f"{which} has modulus {np.min(np.abs(s)):.3g} on the curve")
    u = curve.tangents()
    return _round_turns(winding_turns(s / u ** n), tol.winding_residual)


def field_index_along_curve(spec, curve, which, tol=DEFAULT_TOLERANCES):
    """Index of V_Q (n=1) or V_P (n=3) along the oriented curve, against the n-th tangent power."""
    return field_index_with_residual(spec, curve, which, tol)[0]


def component_multiplicity_index(spec, curve, tol=DEFAULT_TOLERANCES):
    """``(index, residual, odd)`` of the kernel line field over one component."""
    zv = _frame_scalars(spec, curve, 1)
    zw = _frame_scalars(spec, curve, 3)
    scale = np.maximum(np.maximum(np.abs(zv), np.abs(zw)), 1.0)
    defect = np.abs(np.abs(zv) - np.abs(zw)) / scale
    if np.max(defect) > tol.fiber_tol:
        raise SectionVanishesOnCurve(f"fiber defect {np.max(defect):.3g} on the curve")
    if np.min(np.abs(zv)) <= 1e-8:
        raise SectionVanishesOnCurve("V_Q vanishes on the multiplicity base")
    u = curve.tangents()
    d = kernel_line(zv, zw) / u  # kernel direction seen from the tangent frame
    track = np.empty_like(d)
    track[0] = d[0]
    total = 0.0
    for k in range(1, d.size):
        a, b = d[k], -d[k]
        pick = a if abs(a - track[k - 1]) <= abs(b - track[k - 1]) else b
        inc = np.angle(pick / track[k - 1])
        if abs(inc) > np.pi / 4:
            raise BranchJump(f"kernel direction jumps {inc:.3f} rad at vertex {k}")
        track[k] = pick
        total += inc
    a, b = d[0], -d[0]
    back = a if abs(a - track[-1]) <= abs(b - track[-1]) else b
    inc = np.angle(back / track[-1])
    if abs(inc) > np.pi / 4:
        raise BranchJump(f"kernel direction jumps {inc:.3f} rad closing the loop")
    total += inc
    odd = bool(abs(back - d[0]) > 1.0)  # came back on the other branch
    # both branches sweep the same angle, hence the factor 2
    turns = 2.0 * (total / (2 * np.pi))
    n, r = _round_turns(turns, tol.winding_residual)
    return n, r, odd


def multiplicity_index_direct(spec, curves, tol=DEFAULT_TOLERANCES):
    per = [component_multiplicity_index(spec, c, tol)[0] for c in curves]
    return sum(per), per


# ---------------------------------------------------------------------------
# critical points


@dataclass(frozen=True)
class CriticalPointRec:
    point: ChartPoint
    grad_index: int
    f_value: float
    in_s_minus: bool
    grad_norm: float = 0.0


def _grad_hess(spec, charts, coords):
    g = np.empty(coords.shape, dtype=complex)
    hxx = np.empty(coords.shape)
    hxy = np.empty(coords.shape)
    hyy = np.empty(coords.shape)
    for chart in ChartId:
        m = charts == chart
        if m.any():
            g[m] = grad_f(spec, chart, coords[m])
            hxx[m], hxy[m], hyy[m] = hess_f(spec, chart, coords[m])
    return g, hxx, hxy, hyy


def _f_scale(spec, charts, coords):
    out = np.empty(coords.shape)
    for chart in ChartId:
        m = charts == chart
        if m.any():
            zv, zw = sections(spec, chart, coords[m])
            out[m] = 1.0 + np.abs(zv) ** 2 + np.abs(zw) ** 2
    return out


def newton_critical(spec, charts, coords, tol=DEFAULT_TOLERANCES, max_iter=60):
    """Vectorised Newton iteration for ``grad f = 0``; returns charts, coords, converged."""
    charts = np.array(charts, dtype=np.int8, copy=True)
    c = np.array(coords, dtype=complex, copy=True)
    live = np.ones(c.size, dtype=bool)
    conv = np.zeros(c.size, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(live)[0]
        if idx.size == 0:
            break
        g, hxx, hxy, hyy = _grad_hess(spec, charts[idx], c[idx])
        # relative to the size of f so large symbols converge as well as small ones
        done = np.abs(g) <= tol.newton_eps * _f_scale(spec, charts[idx], c[idx])
        conv[idx[done]] = True
        det = hxx * hyy - hxy * hxy
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = -(hyy * g.real - hxy * g.imag) / det
            dy = -(-hxy * g.real + hxx * g.imag) / det
            step = dx + 1j * dy
            bad = ~np.isfinite(step)
            step[bad] = 0
            s = np.abs(step)
            step = np.where(s > 0.1, step * (0.1 / np.where(s > 0, s, 1.0)), step)
        move = ~done & ~bad
        c[idx[move]] += step[move]
        live[idx[done | bad]] = False
        # hop charts rather than run off towards the other pole
        far = np.abs(c) > 1.5
        if far.any():
            c[far] = 1.0 / c[far]
            charts[far] = 3 - charts[far]
        out = (np.abs(c) > 50) & live
        live[out] = False
    return charts, c, conv


def _polish(spec, charts, coords, steps=3):
    # a few plain Newton steps past the convergence test, kept only while |grad f| drops
    for _ in range(steps):
        g, hxx, hxy, hyy = _grad_hess(spec, charts, coords)
        det = hxx * hyy - hxy * hxy
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (-(hyy * g.real - hxy * g.imag) - 1j * (-hxy * g.real + hxx * g.imag)) / det
        trial = np.where(np.isfinite(step) & (np.abs(step) < 1e-3), coords + step, coords)
        g2 = _grad_hess(spec, charts, trial)[0]
        coords = np.where(np.abs(g2) < np.abs(g), trial, coords)
    return coords


def _canonicalise(charts, coords):
    far = np.abs(coords) > 1.0
    coords = coords.copy()
    charts = charts.copy()
    coords[far] = 1.0 / coords[far]
    charts[far] = 3 - charts[far]
    return charts, coords


def gradient_index(spec, p, tol=DEFAULT_TOLERANCES):
    t = np.linspace(0, 2 * np.pi, tol.index_samples, endpoint=False)
    ring = p.coord + tol.index_radius * np.exp(1j * t)
    g = grad_f(spec, p.chart, ring)
    try:
        return winding_number(g, closed=True, residual=tol.winding_residual)
    except (UndersampledLoop, ZeroVector, NonIntegralWinding) as exc:
        raise DegenerateCritical(f"gradient index at {p} not resolved: {exc}") from exc


def _seeds(spec, chart, grid_n):
    xs = np.linspace(-CHART_RADIUS, CHART_RADIUS, grid_n)
    grid = xs[None, :] + 1j * xs[:, None]
    g = grad_f(spec, chart, grid)
    g2 = g.real ** 2 + g.imag ** 2
    core = g2[1:-1, 1:-1]
    is_min = np.ones_like(core, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            is_min &= core <= g2[1 + di:g2.shape[0] - 1 + di, 1 + dj:g2.shape[1] - 1 + dj]
    return grid[1:-1, 1:-1][is_min]


def find_critical_points(spec, region="SMinus", tol=DEFAULT_TOLERANCES, grid_n=256):
    """Critical points of f seeded from local minima of ``|grad f|^2`` in both charts."""
    charts, coords = [], []
    for chart in ChartId:
        s = _seeds(spec, chart, grid_n)
        charts.append(np.full(s.size, int(chart), dtype=np.int8))
        coords.append(s)
    charts = np.concatenate(charts)
    coords = np.concatenate(coords)
    charts, coords, conv = newton_critical(spec, charts, coords, tol)
    if np.any(~conv):
        log.debug("NewtonDivergence: %d of %d seeds did not converge", int(np.sum(~conv)), conv.size)
    charts, coords = _canonicalise(charts[conv], coords[conv])
    # polish in the owning chart, where the gradient bound is checked
    charts, coords, conv2 = newton_critical(spec, charts, coords, tol, max_iter=8)
    charts, coords = _canonicalise(charts[conv2], coords[conv2])
    coords = _polish(spec, charts, coords)

    recs = []
    kept = np.empty((0, 3))
    emb = np.empty((coords.size, 3))
    for chart in ChartId:
        m = charts == chart
        emb[m] = embed_coords(chart, coords[m])
    order = np.lexsort((coords.imag, coords.real, charts))
    for k in order:
        if kept.size and np.min(np.linalg.norm(kept - emb[k], axis=1)) < 1e-6:
            continue
        kept = np.vstack([kept, emb[k]])
        p = ChartPoint(ChartId(int(charts[k])), complex(coords[k]))
        fv = float(f_values(spec, p.chart, p.coord))
        gn = float(abs(grad_f(spec, p.chart, p.coord)))
        recs.append(CriticalPointRec(p, gradient_index(spec, p, tol), fv, fv < 0, gn))
    if region == "SMinus":
        recs = [r for r in recs if r.in_s_minus]
    return recs


# ---------------------------------------------------------------------------
# zeros of the sections (Poincare-Hopf)


def section_zero_indices(spec, which, tol=DEFAULT_TOLERANCES):
    """``[(point, index)]`` for the distinct zeros of V_Q (``'Q'``) or V_P (``'P'``)."""
    zeros = []
    for p in section_zeros(spec, which):
        if not any(q.chart == p.chart and abs(q.coord - p.coord) < 1e-9 for q in zeros):
            zeros.append(p)
    out = []
    t = np.linspace(0, 2 * np.pi, tol.index_samples, endpoint=False)
    for p in zeros:
        others = [abs(q.coord - p.coord) for q in zeros if q.chart == p.chart and q is not p]
        r = min([tol.index_radius] + [0.3 * d for d in others])
        ring = p.coord + r * np.exp(1j * t)
        zv, zw = sections(spec, p.chart, ring)
        s = zv if which == "Q" else zw
        # winding is scale free; normalise so high-order zeros stay above the zero-vector floor
        out.append((p, winding_number(s / np.max(np.abs(s)), closed=True)))
    return out


# ---------------------------------------------------------------------------
# three-way check


@dataclass
class ComponentIndex:
    component: int
    ind_w: int
    ind_v: int
    ind_M: int
    odd: bool
    residual: float
    vertices: int


@dataclass
class IndexReport:
    ind_direct: int
    ind_w_minus_v: int
    ind_formula: int
    per_component: list
    critical_points: list
    consistent: bool
    max_residual: float = 0.0
    genericity: object = None
    curves: list = field(default_factory=list, repr=False)

    @property
    def triple(self):
        return self.ind_direct, self.ind_w_minus_v, self.ind_formula


def _component_indices(spec, curve, tol, retries=3):
    for attempt in range(retries + 1):
        try:
            iw, rw = field_index_with_residual(spec, curve, "V_P", tol)
            iv, rv = field_index_with_residual(spec, curve, "V_Q", tol)
            im, rm, odd = component_multiplicity_index(spec, curve, tol)
            return curve, iw, iv, im, odd, max(rw, rv, rm)
        except (UndersampledLoop, BranchJump, NonIntegralWinding):
            if attempt == retries:
                raise
            curve = densify(spec, curve, tol, force=True)


def component_indices(spec, curves, tol=DEFAULT_TOLERANCES):
    out, new_curves = [], []
    for k, c in enumerate(curves):
        c, iw, iv, im, odd, res = _component_indices(spec, c, tol)
        new_curves.append(c)
        out.append(ComponentIndex(k, iw, iv, im, odd, res, len(c)))
    return out, new_curves


def _flag_critical_levels(spec, crit_all, gen, tol):
    # 0 must be a regular value of f: a critical point on (or next to) the zero set breaks that
    worst = None
    for r in crit_all:
        zv, zw = sections(spec, r.point.chart, r.point.coord)
        rel = abs(r.f_value) / max(abs(zv) ** 2 + abs(zw) ** 2, 1e-300)
        if worst is None or rel < worst[0]:
            worst = (rel, r)
    if worst is None or worst[0] > NEAR_CRITICAL_LEVEL:
        return
    rel, r = worst
    gen.reasons.append(f"critical point at {r.point.chart.name} {r.point.coord:.6g} has f = {r.f_value:.3g}")
    if rel <= tol.trace_tol:
        gen.verdict = "Degenerate"
    elif gen.verdict == "Generic":
        gen.verdict = "Suspect"


def verify_theorem_b(spec, grid_n=256, tol=DEFAULT_TOLERANCES, curves=None, require_generic=True,
                     strict=False, max_grid=1024):
    """Compute the multiplicity index three ways and compare them.

    Critical points and zeros of V_P serve as probes: each component of
    ``{f < 0}`` holds a minimum of f, so a traced base that fails to enclose
    them missed something. When we traced the curves ourselves we retry on a
    finer grid (up to ``max_grid``) before reporting the base as Suspect.
    """
    try:
        crit_all = find_critical_points(spec, "All", tol, max(grid_n, 256))
    except DegenerateCritical as exc:
        # a non-isolated critical set usually comes with a degenerate base; report that first
        if curves is None:
            curves = trace_level_set(spec, grid_n, tol)
        gen = genericity_diagnostic(spec, curves, tol)
        if gen.verdict != "Generic":
            raise NonGenericSymbol(f"verdict {gen.verdict}: {'; '.join(gen.reasons)}; {exc}") from exc
        raise
    probes = [r.point for r in crit_all] + list(section_zeros(spec, "P"))
    if curves is None:
        n = grid_n
        curves = trace_level_set(spec, n, tol)
        while enclosure_defects(spec, curves, probes) and 2 * n <= max_grid:
            n *= 2
            log.debug("retracing on grid_n=%d after enclosure mismatch", n)
            curves = trace_level_set(spec, n, tol)
        for p in enclosure_defects(spec, curves, probes):
            if not enclosure_defects(spec, curves, [p]):
                continue  # fixed by a loop recovered for an earlier probe
            extra = trace_around(spec, p, curves, tol)
            if extra:
                log.debug("recovered %d sub-grid components near %s", len(extra), p)
                curves = sorted(curves + extra, key=_curve_sort_key)
    gen = genericity_diagnostic(spec, curves, tol, probes)
    hopf = sum(r.grad_index for r in crit_all)
    if hopf != CHI_SPHERE:
        gen.reasons.append(f"gradient indices of all critical points sum to {hopf}, not {CHI_SPHERE}")
        if gen.verdict == "Generic":
            gen.verdict = "Suspect"
    _flag_critical_levels(spec, crit_all, gen, tol)
    if require_generic and gen.verdict != "Generic":
        raise NonGenericSymbol(f"verdict {gen.verdict}: {'; '.join(gen.reasons)}")
    try:
        per, curves = component_indices(spec, curves, tol)
    except NumericalFailure as exc:
        if gen.verdict == "Generic":
            raise
        raise NonGenericSymbol(f"verdict {gen.verdict}: {'; '.join(gen.reasons)}; {exc}") from exc
    crit = [r for r in crit_all if r.in_s_minus]
    ind_direct = sum(c.ind_M for c in per)
    ind_wv = sum(c.ind_w - c.ind_v for c in per)
    ind_formula = 3 * CHI_SPHERE - 2 * sum(r.grad_index for r in crit)
    consistent = ind_direct == ind_wv == ind_formula
    if strict and not consistent:
        raise InconsistentIndices(ind_direct, ind_wv, ind_formula)
    return IndexReport(ind_direct, ind_wv, ind_formula, per, crit, consistent,
                       max((c.residual for c in per), default=0.0), gen, curves)
