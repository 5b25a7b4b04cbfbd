import xml.etree.ElementTree as ET

import pytest

from multiplicity.errors import OutputError
from multiplicity.examples import example1, example2_scaled
from multiplicity.sphere import ChartId
from multiplicity.svg import emit_svg

NS = "{http://www.w3.org/2000/svg}"


def elements(text, tag):
    return ET.fromstring(text).iter(NS + tag)


def paths(text):
    return [e for e in elements(text, "path") if e.get("class") == "component"]


def test_example2_scaled_w_chart_five_paths(ex2s_report):
    svg = emit_svg(example2_scaled(), ex2s_report.curves, ex2s_report.critical_points,
                   "multiplicity_picture", chart=ChartId.Chart2)
    ps = paths(svg)
    assert len(ps) == 5
    assert all(p.get("d").rstrip().endswith("Z") for p in ps)
    assert len(list(elements(svg, "circle"))) >= 5  # critical points plus the equator


def test_example1_z_chart_one_path(ex1_report):
    svg = emit_svg(example1(), ex1_report.curves, ex1_report.critical_points, "multiplicity_picture")
    assert len(paths(svg)) == 1
    assert "z-chart" in svg
    ticks = [g for g in elements(svg, "g") if g.get("class") == "kernel-ticks"]
    assert ticks and len(list(ticks[0])) > 10


def test_empty_scene_has_axes_only():
    svg = emit_svg(None, [], [], "multiplicity_picture")
    root = ET.fromstring(svg)
    assert not paths(svg)
    assert any(g.get("class") == "axes" for g in root.iter(NS + "g"))
    assert "Chart1" in svg


def test_gradient_picture(ex2s_report):
    svg = emit_svg(example2_scaled(), ex2s_report.curves, ex2s_report.critical_points,
                   "gradient_picture", chart=ChartId.Chart2)
    lines = list(elements(svg, "polyline"))
    assert len(lines) > 50
    assert len(paths(svg)) == 5
    assert "w-chart" in svg


def test_writes_file_and_reports_io_errors(tmp_path, ex1_report):
    out = tmp_path / "m.svg"
    emit_svg(example1(), ex1_report.curves, [], "multiplicity_picture", out)
    ET.parse(out)
    with pytest.raises(OutputError):
        emit_svg(example1(), ex1_report.curves, [], "multiplicity_picture", tmp_path / "no" / "m.svg")


def test_unknown_kind():
    with pytest.raises(ValueError):
        emit_svg(None, [], [], "contour")
