import math

import numpy as np
import pytest

from multiplicity.config import DEFAULT_TOLERANCES
from multiplicity.errors import NonGenericLevelSet, NonGenericSymbol
from multiplicity.examples import degenerate, example1, example2, example2_scaled
from multiplicity.fields import SymbolSpec, f_values, grad_f, section_zeros, sections
from multiplicity.index import find_critical_points, verify_theorem_b
from multiplicity.sphere import ChartId
from multiplicity.tracer import (_march, choose_seam, densify, enclosure_defects, genericity_diagnostic,
                                 hausdorff_to_circle, orient_as_boundary, seam_crossings, trace_level_set)

from conftest import random_spec, unit_disk

C1, C2 = ChartId.Chart1, ChartId.Chart2
TOL = DEFAULT_TOLERANCES


def signed_area(z):
    return 0.5 * float(np.sum((z.real * np.roll(z.imag, -1) - np.roll(z.real, -1) * z.imag)))


def winding_about(z, x):
    d = z - x
    return float(np.sum(np.angle(np.roll(d, -1) / d)) / (2 * np.pi))


def check_curve_invariants(spec, c):
    fv = c.per_chart(lambda ch, x: f_values(spec, ch, x))
    assert np.max(np.abs(fv)) <= TOL.trace_tol
    assert c.max_step() <= TOL.max_step + 1e-12
    zv = c.per_chart(lambda ch, x: sections(spec, ch, x)[0])
    zw = c.per_chart(lambda ch, x: sections(spec, ch, x)[1])
    assert np.max(np.abs(np.abs(zv) - np.abs(zw))) <= TOL.fiber_tol
    assert c.orientation_check > 0


@pytest.fixture(scope="module")
def ex1_curves():
    return trace_level_set(example1())


@pytest.fixture(scope="module")
def ex2s_curves():
    return trace_level_set(example2_scaled())


def test_example1_single_unit_circle(ex1_curves):
    assert len(ex1_curves) == 1
    c = ex1_curves[0]
    assert np.max(np.abs(np.abs(c.coords_in(C1)) - 1)) <= 1e-6
    assert hausdorff_to_circle(c, 1.0) <= 1e-5
    check_curve_invariants(example1(), c)


def test_example1_clockwise_in_z(ex1_curves):
    # f < 0 outside the unit circle, so the boundary of that region runs clockwise
    assert signed_area(ex1_curves[0].coords_in(C1)) < 0


def test_constant_q_and_p_give_unit_circle():
    s = SymbolSpec([1], [1])
    cs = trace_level_set(s)
    assert len(cs) == 1
    assert hausdorff_to_circle(cs[0], 1.0) <= 1e-5
    # V_Q and V_P both vanish at infinity, so the base is not generic
    assert genericity_diagnostic(s, cs).verdict == "Degenerate"


def test_example2_as_stated_is_one_loop():
    # with Q = z^2, P = z^4 - 1 the set f < 0 is connected and its boundary is a single
    # loop through both charts, not five circles
    cs = trace_level_set(example2())
    assert len(cs) == 1
    assert set(cs[0].charts.tolist()) == {1, 2}
    check_curve_invariants(example2(), cs[0])


def test_example2_scaled_five_circles(ex2s_curves):
    assert len(ex2s_curves) == 5
    for c in ex2s_curves:
        check_curve_invariants(example2_scaled(), c)


def test_example2_scaled_loop_around_one_is_counterclockwise(ex2s_curves):
    around = [c for c in ex2s_curves if np.max(np.abs(c.coords_in(C1) - 1.0)) < 0.5]
    assert len(around) == 1
    z = around[0].coords_in(C1)
    assert winding_about(z, 1.0) == pytest.approx(1.0, abs=1e-9)
    assert signed_area(z) > 0


@pytest.mark.parametrize("spec_fn, expected", [(example1, 1), (example2, 1), (example2_scaled, 5)])
def test_component_count_stable_under_grid_doubling(spec_fn, expected):
    for n in (128, 256):
        assert len(trace_level_set(spec_fn(), n)) == expected


def test_orientation_idempotent(ex2s_curves):
    s = example2_scaled()
    for c in ex2s_curves:
        a = orient_as_boundary(c.reversed(), s)
        b = orient_as_boundary(c, s)
        assert np.array_equal(a.coords, b.coords) and np.array_equal(a.charts, b.charts)


def test_genericity_example1(ex1_curves):
    g = genericity_diagnostic(example1(), ex1_curves)
    assert g.verdict == "Generic"
    assert g.min_grad_norm_on_curve > 0.1
    assert g.fiber_defect_max <= 1e-6


def test_genericity_examples_generic(ex2s_curves):
    assert genericity_diagnostic(example2_scaled(), ex2s_curves).verdict == "Generic"
    cs = trace_level_set(example2())
    assert genericity_diagnostic(example2(), cs).verdict == "Generic"


def test_genericity_tangential_zero():
    s = degenerate()
    g = genericity_diagnostic(s, trace_level_set(s))
    assert g.verdict in ("Suspect", "Degenerate")


def test_tangency_scale_is_a_double_zero():
    # alpha^4 k^2 |z|^2 = 1 has a double root at |z|^2 = 1/3 when k = 4 sqrt(3) / 9
    s = degenerate()
    r = 1 / math.sqrt(3)
    for t in np.linspace(0, 2 * np.pi, 9):
        z = r * np.exp(1j * t)
        assert abs(f_values(s, C1, z)) < 1e-14
        assert abs(grad_f(s, C1, z)) < 1e-13
    # f <= 0 everywhere: the level set is touched, never crossed
    assert np.all(f_values(s, C1, np.linspace(0.01, 3, 500)) <= 1e-14)


SADDLE_SCALE = (1 + math.sqrt(2)) ** 2 / 4  # f vanishes at the saddles of Q = z^2, P = c (z^4 + 1)


def test_saddle_on_zero_set_raises():
    s = SymbolSpec([0, 0, 1], [SADDLE_SCALE, 0, 0, 0, SADDLE_SCALE])
    saddles = [r for r in find_critical_points(s, "All") if r.grad_index == -1]
    assert len(saddles) == 4
    assert max(abs(r.f_value) for r in saddles) < 1e-12
    p = saddles[0].point
    h = 1e-3
    with pytest.raises(NonGenericLevelSet):
        _march(s, p.chart, p.coord - 0.5 * h * (1 + 1j), h, 3, TOL, clip=False)


def test_saddle_on_zero_set_flagged_by_pipeline():
    s = SymbolSpec([0, 0, 1], [SADDLE_SCALE, 0, 0, 0, SADDLE_SCALE])
    with pytest.raises(NonGenericSymbol, match="Degenerate"):
        verify_theorem_b(s)


def test_grid_floor():
    with pytest.raises(ValueError):
        trace_level_set(example1(), 32)


def test_seam_crossings_are_roots():
    s = random_spec(3)
    rho = choose_seam(s)
    roots = seam_crossings(s, rho)
    assert roots.size % 2 == 0
    assert np.all(np.abs(f_values(s, C1, rho * np.exp(1j * roots))) < 1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_random_curves_invariants(seed):
    s = random_spec(seed)
    for c in trace_level_set(s):
        check_curve_invariants(s, c)


def test_densify_force_halves_steps(ex1_curves):
    c = ex1_curves[0]
    d = densify(example1(), c, force=True)
    assert len(d) >= 2 * len(c) - 1
    assert d.max_step() <= 0.5 * c.max_step() + 1e-9


def test_tiny_components_recovered():
    # Q scaled by about 0.01: the components are disks far smaller than one grid cell
    rng = np.random.default_rng(1004)
    k = 10 ** rng.uniform(-2, 2)
    s = SymbolSpec(k * unit_disk(rng, 3), unit_disk(rng, 7))
    probes = [r.point for r in find_critical_points(s, "All")] + list(section_zeros(s, "P"))
    assert enclosure_defects(s, trace_level_set(s), probes)
    rep = verify_theorem_b(s)
    assert not enclosure_defects(s, rep.curves, probes)
    assert rep.consistent and rep.genericity.verdict == "Generic"
