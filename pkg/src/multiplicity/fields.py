"""Polynomial sections V_Q of TS^2 and V_P of (TS^2)^3 and the scalar field f.

In chart 1 the frame scalars are ``zv = Q(z) alpha(z)`` and
``zw = P(z) alpha(z)^3``.  In chart 2 the same formulas hold with the
reciprocal polynomials ``-(w^2 Q(1/w))`` and ``-(w^6 P(1/w))``, expanded so
that ``w = 0`` is an ordinary point.  Everything below is vectorised over an
array of coordinates in one chart.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .sphere import ChartId, ChartPoint, alpha

Q_LEN = 3
P_LEN = 7


def _coeffs(values, length, name):
    arr = np.zeros(length, dtype=complex)
    vals = np.asarray(values, dtype=complex).ravel()
    if vals.size > length:
        raise ValidationError(f"{name} has {vals.size} coefficients, at most {length} allowed")
    arr[: vals.size] = vals
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite coefficients")
    return arr


@dataclass(frozen=True, eq=False)
class SymbolSpec:
    """Coefficient pair defining the symbol; both lists are in ascending order."""
    Q: np.ndarray
    P: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "Q", _coeffs(self.Q, Q_LEN, "Q"))
        object.__setattr__(self, "P", _coeffs(self.P, P_LEN, "P"))
        if not np.any(self.Q):
            raise ValidationError("Q is identically zero")
        if not np.any(self.P):
            raise ValidationError("P is identically zero")

    def __eq__(self, other):
        return (isinstance(other, SymbolSpec) and np.array_equal(self.Q, other.Q)
                and np.array_equal(self.P, other.P) and self.label == other.label)

    def __hash__(self):
        return hash((self.Q.tobytes(), self.P.tobytes(), self.label))

    def scaled(self, c):
        return SymbolSpec(c * self.Q, c * self.P, self.label)

    def chart_coeffs(self, chart):
        """Ascending coefficients of the chart polynomials (q, p)."""
        if ChartId(chart) is ChartId.Chart1:
            return self.Q, self.P
        return -self.Q[::-1], -self.P[::-1]

    @cached_property
    def _polys(self):
        out = {}
        for chart in ChartId:
            q, p = self.chart_coeffs(chart)
            qd, pd = q[::-1], p[::-1]  # descending, for polyval
            out[chart] = (qd, np.polyder(qd), np.polyder(qd, 2),
                          pd, np.polyder(pd), np.polyder(pd, 2))
        return out

    def polys(self, chart):
        return self._polys[ChartId(chart)]


def sections(spec, chart, coords):
    """Frame scalars ``(zv, zw)`` of V_Q and V_P at ``coords`` in ``chart``."""
    c = np.asarray(coords, dtype=complex)
    qd, _, _, pd, _, _ = spec.polys(chart)
    a = alpha(c)
    return np.polyval(qd, c) * a, np.polyval(pd, c) * a ** 3


def f_values(spec, chart, coords):
    c = np.asarray(coords, dtype=complex)
    qd, _, _, pd, _, _ = spec.polys(chart)
    a2 = alpha(c) ** 2
    q = np.polyval(qd, c)
    p = np.polyval(pd, c)
    return a2 * ((p.real ** 2 + p.imag ** 2) * a2 * a2 - (q.real ** 2 + q.imag ** 2))


def _grad_term(c, r, r1, a, k):
    # gradient (as d/dx + i d/dy) of |R|^2 alpha^k for holomorphic R
    return 2.0 * r * np.conj(r1) * a ** k - k * a ** (k + 1) * c * np.abs(r) ** 2


def grad_f(spec, chart, coords):
    """Chart gradient of f packed as the complex number ``f_x + i f_y``."""
    c = np.asarray(coords, dtype=complex)
    qd, q1d, _, pd, p1d, _ = spec.polys(chart)
    a = alpha(c)
    gp = _grad_term(c, np.polyval(pd, c), np.polyval(p1d, c), a, 6)
    gq = _grad_term(c, np.polyval(qd, c), np.polyval(q1d, c), a, 2)
    return gp - gq


def _hess_term(c, r, r1, r2, a, k):
    r_sq = np.abs(r) ** 2
    rc1 = r * np.conj(r1)
    ak, ak1, ak2 = a ** k, a ** (k + 1), a ** (k + 2)
    dz = (2.0 * np.abs(r1) ** 2 * ak - k * ak1 * np.conj(c) * rc1
          - k * (-0.5 * (k + 1) * ak2 * np.abs(c) ** 2 * r_sq + ak1 * r_sq + ak1 * c * r1 * np.conj(r)))
    dzb = (2.0 * r * np.conj(r2) * ak - k * ak1 * c * rc1
           - k * (-0.5 * (k + 1) * ak2 * c * c * r_sq + ak1 * c * rc1))
    return dz, dzb


def hess_f(spec, chart, coords):
    """Second partials ``(f_xx, f_xy, f_yy)`` of f in chart coordinates."""
    c = np.asarray(coords, dtype=complex)
    qd, q1d, q2d, pd, p1d, p2d = spec.polys(chart)
    a = alpha(c)
    pz, pzb = _hess_term(c, np.polyval(pd, c), np.polyval(p1d, c), np.polyval(p2d, c), a, 6)
    qz, qzb = _hess_term(c, np.polyval(qd, c), np.polyval(q1d, c), np.polyval(q2d, c), a, 2)
    gz, gzb = pz - qz, pzb - qzb
    dx = gz + gzb
    dy = 1j * (gz - gzb)
    return dx.real, dy.real, dy.imag


def eval_sections(spec, p):
    zv, zw = sections(spec, p.chart, p.coord)
    return complex(zv), complex(zw)


def eval_f(spec, p):
    return float(f_values(spec, p.chart, p.coord))


def eval_grad_f(spec, p):
    g = complex(grad_f(spec, p.chart, p.coord))
    return g.real, g.imag


@dataclass(frozen=True)
class FieldSample:
    point: ChartPoint
    zv: complex
    zw: complex
    f: float
    grad_f: tuple = field(default=(0.0, 0.0))


def sample(spec, p):
    zv, zw = eval_sections(spec, p)
    return FieldSample(p, zv, zw, eval_f(spec, p), eval_grad_f(spec, p))


def section_zeros(spec, which):
    """Zeros of V_Q (``which='Q'``) or V_P (``'P'``) on the sphere, each in its owning chart."""
    out = []
    for chart in ChartId:
        q, p = spec.chart_coeffs(chart)
        coeffs = q if which == "Q" else p
        desc = np.trim_zeros(coeffs[::-1], "f")
        if desc.size <= 1:
            continue
        for r in np.roots(desc):
            # zeros on the unit circle go to chart 1 whichever way rounding falls
            owned = abs(r) <= 1.0 + 1e-9 if chart is ChartId.Chart1 else abs(r) < 1.0 - 1e-9
            if owned:
                out.append(ChartPoint(chart, complex(r)))
    return out
