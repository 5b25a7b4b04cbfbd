import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multiplicity.errors import PoleNotInChart
from multiplicity.fields import SymbolSpec, sections
from multiplicity.sphere import (ChartId, ChartPoint, FrameScalar, canonical, conformal_factor, embed,
                                 embed_coords, frame_phase_coords, frame_transition_phase, to_chart,
                                 transition)

C1, C2 = ChartId.Chart1, ChartId.Chart2


def annulus_points(lo, hi):
    return st.builds(lambda r, t: r * cmath.exp(1j * t),
                     st.floats(lo, hi), st.floats(0, 2 * np.pi))


@pytest.mark.parametrize("p, expected", [
    (ChartPoint(C1, 0), (0, 0, -1)),
    (ChartPoint(C2, 0), (0, 0, 1)),
    (ChartPoint(C1, 1), (1, 0, 0)),
])
def test_embed_examples(p, expected):
    assert np.allclose(embed(p), expected, atol=1e-15)


@pytest.mark.parametrize("z, w", [(1, 1), (2, 0.5), (1j, -1j)])
def test_transition_examples(z, w):
    q = transition(ChartPoint(C1, z))
    assert q.chart is C2
    assert abs(q.coord - w) < 1e-15


def test_transition_at_origin_raises():
    with pytest.raises(PoleNotInChart):
        transition(ChartPoint(C1, 0))
    with pytest.raises(PoleNotInChart):
        frame_transition_phase(ChartPoint(C2, 0), 1)


@pytest.mark.parametrize("z, a", [(0, 2.0), (1, 1.0), (1j, 1.0), (3, 0.2), (-3j, 0.2)])
def test_conformal_factor_examples(z, a):
    assert conformal_factor(ChartPoint(C1, z)) == pytest.approx(a, abs=1e-15)


@pytest.mark.parametrize("z, n, u", [
    (1, 1, -1),
    (1, 3, -1),
    (cmath.exp(1j * np.pi / 4), 1, 1j),
])
def test_frame_transition_phase_examples(z, n, u):
    assert abs(frame_transition_phase(ChartPoint(C1, z), n) - u) < 1e-15


def test_chart_other_and_ints():
    assert C1.other is C2 and C2.other is C1
    assert [int(c) for c in ChartId] == [1, 2]


def test_framescalar_norm():
    assert FrameScalar(3 + 4j, 3).norm == 5


def test_canonical_owner():
    assert canonical(ChartPoint(C1, 0.5)).chart is C1
    assert canonical(ChartPoint(C1, 1.0)).chart is C1
    q = canonical(ChartPoint(C1, 2.0))
    assert q.chart is C2 and q.coord == 0.5


def test_to_chart_pole():
    with pytest.raises(PoleNotInChart):
        to_chart(C1, np.array([2]), np.array([0j]))
    assert np.allclose(to_chart(C1, np.array([1, 2]), np.array([2j, 2j])), [2j, -0.5j])


@given(annulus_points(0, 50), st.sampled_from([C1, C2]))
def test_embed_on_unit_sphere(c, chart):
    assert abs(np.linalg.norm(embed(ChartPoint(chart, c))) - 1) < 1e-12


@given(annulus_points(1e-3, 1e3), st.sampled_from([C1, C2]))
def test_transition_same_point(c, chart):
    p = ChartPoint(chart, c)
    assert np.linalg.norm(embed(transition(p)) - embed(p)) < 1e-12


@given(annulus_points(0.1, 10))
def test_transition_round_trip(z):
    p = ChartPoint(C1, z)
    back = transition(transition(p))
    assert back.chart is C1 and abs(back.coord - z) <= 1e-12 * max(1, abs(z))


@given(annulus_points(0, 5), annulus_points(0, 5), st.sampled_from([C1, C2]))
def test_embed_injective(a, b, chart):
    if abs(a - b) > 1e-6:
        ea, eb = embed_coords(chart, a), embed_coords(chart, b)
        assert np.linalg.norm(ea - eb) > 0


@given(annulus_points(0.5, 2), st.integers(1, 3))
def test_frame_phase_is_unit_and_inverse(z, n):
    u = frame_phase_coords(z, n)
    assert abs(abs(u) - 1) < 1e-14
    # going back from chart 2 at w = 1/z undoes the rotation
    assert abs(u * frame_phase_coords(1 / z, n) - 1) < 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=1), min_size=10, max_size=10), annulus_points(0.5, 2))
def test_frame_scalar_norms_chart_invariant(coeffs, z):
    if not any(coeffs[:3]) or not any(coeffs[3:]):
        return
    spec = SymbolSpec(coeffs[:3], coeffs[3:])
    zv1, zw1 = sections(spec, C1, z)
    zv2, zw2 = sections(spec, C2, 1 / z)
    scale = 1 + abs(zv1) + abs(zw1)
    assert abs(abs(zv1) - abs(zv2)) <= 1e-10 * scale
    assert abs(abs(zw1) - abs(zw2)) <= 1e-10 * scale
    # and the values themselves are related by the frame rotation
    assert abs(zv2 - frame_phase_coords(z, 1) * zv1) <= 1e-10 * scale
    assert abs(zw2 - frame_phase_coords(z, 3) * zw1) <= 1e-10 * scale
