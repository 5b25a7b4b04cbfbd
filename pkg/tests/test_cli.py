import json
import os
import subprocess
import sys

import pytest

from multiplicity.cli import build_parser, main

EX1 = {"label": "example1", "Q": [[0, 0], [0, 0], [1, 0]], "P": [[1, 0]]}


@pytest.fixture
def ex1_config(tmp_path):
    p = tmp_path / "ex1.json"
    p.write_text(json.dumps(EX1))
    return p


def test_demo_example1(tmp_path, capsys):
    assert main(["demo", "example1", "--output-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "direct=4 w-v=4 formula=4" in out
    assert {p.name for p in tmp_path.iterdir()} == {"report.json", "multiplicity.svg", "gradient.svg"}


def test_demo_degenerate(tmp_path, capsys):
    assert main(["demo", "degenerate", "--output-dir", str(tmp_path)]) == 3
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "NonGenericSymbol" and err["exit_code"] == 3


def test_bad_config_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"Q": [[1, 0]],\n "P": [[1, 0]],\n "grid": 3}')
    assert main(["verify", str(p)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ParseError" and err["line"] == 3
    assert main(["verify", str(tmp_path / "missing.json")]) == 2


def test_flags_override_config(ex1_config, tmp_path, capsys):
    code = main(["index", str(ex1_config), "--grid-n", "128", "--trace-tol", "1e-9",
                 "--output-dir", str(tmp_path / "o"), "--json"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["grid_n"] == 128 and rep["tolerances"]["trace_tol"] == 1e-9
    assert rep["command"] == "index" and rep["indices"]["formula"] == 4
    assert (tmp_path / "o" / "report.json").exists()


def test_trace_and_plot(ex1_config, tmp_path, capsys):
    assert main(["trace", str(ex1_config), "--output-dir", str(tmp_path / "t")]) == 0
    assert "components: 1" in capsys.readouterr().out
    assert main(["plot", str(ex1_config), "--output-dir", str(tmp_path / "p"), "--chart", "w"]) == 0
    assert "w-chart" in (tmp_path / "p" / "multiplicity.svg").read_text()


def test_parser_rejects_bad_flags():
    p = build_parser()
    for argv in (["demo", "nope"], ["verify"], ["trace", "x.json", "--grid-n", "-4"], []):
        with pytest.raises(SystemExit) as e:
            p.parse_args(argv)
        assert e.value.code == 2


def test_module_entry_point(tmp_path):
    env = dict(os.environ, MULTIPLICITY_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-m", "multiplicity", "demo", "example1", "--output-dir",
                          str(tmp_path), "--grid-n", "128"], capture_output=True, text=True, env=env)
    assert out.returncode == 0, out.stderr
    assert "consistent=True" in out.stdout
