"""Two-chart stereographic atlas of the unit sphere.

Chart 1 (coordinate ``z``) covers everything but the north pole and sends
``z = 0`` to the south pole; chart 2 (coordinate ``w = 1/z``) covers everything
but the south pole.  Tangent data is expressed in the orthonormal frame
``e1 = (1/alpha) d/dx``, so a section of the n-th complex tensor power of the
tangent bundle is a single complex number per point.
"""
import enum
from dataclasses import dataclass

import numpy as np

from .errors import PoleNotInChart


class ChartId(enum.IntEnum):
    Chart1 = 1
    Chart2 = 2

    @property
    def other(self):
        return ChartId.Chart2 if self is ChartId.Chart1 else ChartId.Chart1


@dataclass(frozen=True)
class ChartPoint:
    chart: ChartId
    coord: complex

    def __post_init__(self):
        object.__setattr__(self, "chart", ChartId(self.chart))
        object.__setattr__(self, "coord", complex(self.coord))


@dataclass(frozen=True)
class FrameScalar:
    """``value`` times the n-th power of the chart frame ``e1``."""
    value: complex
    power: int

    @property
    def norm(self):
        return abs(self.value)


def embed_coords(chart, coords):
    """Vectorised embedding; returns an array of shape ``coords.shape + (3,)``.

    In chart 2 the conjugate coordinate enters the stereographic formula so
    that the holomorphic transition ``w = 1/z`` names the same point of R^3.
    """
    c = np.asarray(coords, dtype=complex)
    if ChartId(chart) is ChartId.Chart2:
        c = np.conj(c)
        sign = -1.0
    else:
        sign = 1.0
    r2 = c.real ** 2 + c.imag ** 2
    den = 1.0 + r2
    return np.stack([2 * c.real / den, 2 * c.imag / den, sign * (r2 - 1.0) / den], axis=-1)


def embed(p):
    return embed_coords(p.chart, p.coord)


def transition(p):
    if p.coord == 0:
        raise PoleNotInChart(f"{p.chart.name} origin is not covered by {p.chart.other.name}")
    return ChartPoint(p.chart.other, 1.0 / p.coord)


def conformal_factor(p):
    return 2.0 / (1.0 + abs(p.coord) ** 2)


def alpha(coords):
    c = np.asarray(coords)
    return 2.0 / (1.0 + c.real ** 2 + c.imag ** 2)


def frame_phase_coords(coords, n=1):
    """Unit factor taking an F^n frame scalar at ``coords`` into the other chart."""
    c = np.asarray(coords, dtype=complex)
    if np.any(c == 0):
        raise PoleNotInChart("frame transition undefined at the chart origin")
    u = -(c ** -2)
    return (u / np.abs(u)) ** n


def frame_transition_phase(p, n=1):
    if p.coord == 0:
        raise PoleNotInChart("frame transition undefined at the chart origin")
    return complex(frame_phase_coords(p.coord, n))


def canonical(p):
    """Re-express ``p`` in its owning chart (chart 1 owns ``|z| <= 1``)."""
    if abs(p.coord) > 1.0:
        return transition(p)
    return p


def to_chart(chart, charts, coords):
    """Express points given per-element in ``charts`` in the single ``chart``."""
    charts = np.asarray(charts)
    out = np.array(coords, dtype=complex, copy=True)
    flip = charts != int(chart)
    if np.any(out[flip] == 0):
        raise PoleNotInChart("point at the pole of the requested chart")
    out[flip] = 1.0 / out[flip]
    return out
