"""Run configuration, the end-to-end pipeline and its JSON report.

Config document (JSON)::

    {
      "label": "example1",
      "Q": [[0, 0], [0, 0], [1, 0]],      # ascending, [re, im] pairs
      "P": [[1, 0]],
      "grid_n": 256,
      "tolerances": {"trace_tol": 1e-8},  # any subset; the rest default
      "outputs": ["report", "svg_multiplicity", "svg_gradient"],
      "output_dir": "out",
      "chart": "z"                        # or "w": chart the figures are drawn in
    }

The report is serialised with a fixed key order and ``repr``-exact floats,
so two runs of one config differ only in ``timestamp``.
"""
import datetime as _dt
import json
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (InconsistentIndices, MultiplicityError, NonGenericSymbol, OutputError, ParseError,
                     ValidationError)
from .fields import SymbolSpec
from .index import verify_theorem_b
from .sphere import ChartId, embed_coords
from .svg import emit_svg
from .tracer import genericity_diagnostic, trace_level_set

log = logging.getLogger(__name__)

REPORT_FORMAT = "multiplicity-report/1"
OUTPUTS = ("report", "svg_multiplicity", "svg_gradient")
MIN_GRID = 64
_KEYS = ("label", "Q", "P", "grid_n", "tolerances", "outputs", "output_dir", "chart")
_CHARTS = {"z": ChartId.Chart1, "w": ChartId.Chart2, 1: ChartId.Chart1, 2: ChartId.Chart2,
           "1": ChartId.Chart1, "2": ChartId.Chart2}


@dataclass
class RunConfig:
    spec: SymbolSpec
    grid_n: int = 256
    tolerances: Tolerances = DEFAULT_TOLERANCES
    outputs: frozenset = frozenset(OUTPUTS)
    output_dir: Path = Path(".")
    chart: ChartId = ChartId.Chart1

    def __post_init__(self):
        if isinstance(self.grid_n, bool) or not isinstance(self.grid_n, (int, np.integer)):
            raise ValidationError(f"grid_n must be an integer, got {self.grid_n!r}")
        if self.grid_n < MIN_GRID:
            raise ValidationError(f"grid_n must be >= {MIN_GRID}, got {self.grid_n}")
        self.outputs = frozenset(self.outputs)
        bad = self.outputs - set(OUTPUTS)
        if bad:
            raise ValidationError(f"unknown outputs {sorted(bad)}; choose from {list(OUTPUTS)}")
        self.output_dir = Path(self.output_dir)
        self.chart = ChartId(self.chart)

    def with_overrides(self, grid_n=None, output_dir=None, chart=None, **tol):
        return RunConfig(self.spec, self.grid_n if grid_n is None else grid_n,
                         make_tolerances(self.tolerances.as_dict() | {k: v for k, v in tol.items()
                                                                      if v is not None}),
                         self.outputs, self.output_dir if output_dir is None else output_dir,
                         self.chart if chart is None else parse_chart(chart))


# ---------------------------------------------------------------------------
# parsing


def _key_position(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _fail(text, key, msg, cls=ParseError):
    line, col = _key_position(text, key) if key else (None, None)
    where = f" (line {line}, column {col})" if line else ""
    if cls is ParseError:
        return ParseError(f"{msg}{where}", line, col, key)
    return cls(f"{msg}{where}")


def _coefficients(text, key, value):
    if not isinstance(value, list):
        raise _fail(text, key, f"{key} must be an array of [re, im] pairs")
    out = []
    for k, c in enumerate(value):
        if isinstance(c, (int, float)) and not isinstance(c, bool):
            out.append(complex(c))
        elif (isinstance(c, list) and len(c) == 2
              and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in c)):
            out.append(complex(c[0], c[1]))
        else:
            raise _fail(text, key, f"{key}[{k}] must be a number or an [re, im] pair")
    if not out:
        raise _fail(text, key, f"{key} is empty", ValidationError)
    return out


def make_tolerances(values):
    try:
        return DEFAULT_TOLERANCES.updated(**values)
    except TypeError as exc:
        raise ValidationError(f"unknown tolerance: {exc}") from exc
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def parse_chart(value):
    try:
        return _CHARTS[value]
    except (KeyError, TypeError):
        raise ValidationError(f"chart must be 'z' or 'w', got {value!r}") from None


def parse_config(text, base_dir=None):
    """Parse and validate a JSON config document into a :class:`RunConfig`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed config: {exc.msg} (line {exc.lineno}, column {exc.colno})",
                         exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("config must be a JSON object", 1, 1)
    for key in doc:
        if key not in _KEYS:
            raise _fail(text, key, f"unknown key {key!r}")
    for key in ("Q", "P"):
        if key not in doc:
            raise ParseError(f"missing required key {key!r}", field=key)
    q = _coefficients(text, "Q", doc["Q"])
    p = _coefficients(text, "P", doc["P"])
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise _fail(text, "label", "label must be a string")
    spec = SymbolSpec(q, p, label)

    tol = doc.get("tolerances", {})
    if not isinstance(tol, dict):
        raise _fail(text, "tolerances", "tolerances must be an object")
    for k, v in tol.items():
        if k not in DEFAULT_TOLERANCES.as_dict():
            raise _fail(text, k, f"unknown tolerance {k!r}")
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise _fail(text, k, f"tolerance {k} must be a number")
    if "index_samples" in tol and not float(tol["index_samples"]).is_integer():
        raise _fail(text, "index_samples", "index_samples must be an integer", ValidationError)
    tol = {k: (int(v) if k == "index_samples" else float(v)) for k, v in tol.items()}

    outputs = doc.get("outputs", list(OUTPUTS))
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise _fail(text, "outputs", "outputs must be an array of strings")
    out_dir = doc.get("output_dir", ".")
    if not isinstance(out_dir, str):
        raise _fail(text, "output_dir", "output_dir must be a string")
    out_dir = Path(out_dir)
    if base_dir is not None and not out_dir.is_absolute():
        out_dir = Path(base_dir) / out_dir
    grid_n = doc.get("grid_n", 256)
    if isinstance(grid_n, float) and grid_n.is_integer():
        grid_n = int(grid_n)
    return RunConfig(spec, grid_n, make_tolerances(tol), outputs, out_dir,
                     parse_chart(doc.get("chart", "z")))


def config_document(cfg):
    """The JSON config text that parses back to ``cfg``."""
    doc = {
        "label": cfg.spec.label,
        "Q": _pairs(cfg.spec.Q),
        "P": _pairs(cfg.spec.P),
        "grid_n": int(cfg.grid_n),
        "tolerances": cfg.tolerances.as_dict(),
        "outputs": [o for o in OUTPUTS if o in cfg.outputs],
        "output_dir": str(cfg.output_dir),
        "chart": "z" if cfg.chart is ChartId.Chart1 else "w",
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# report


def _num(x):
    x = float(x)
    return x if np.isfinite(x) else None


def _pairs(cs):
    return [[float(c.real), float(c.imag)] for c in np.asarray(cs, dtype=complex)]


def _point_record(r):
    p = r.point
    with np.errstate(divide="ignore", invalid="ignore"):
        other = 1.0 / p.coord if p.coord != 0 else None
    z = p.coord if p.chart is ChartId.Chart1 else other
    w = p.coord if p.chart is ChartId.Chart2 else other
    return {
        "chart": int(p.chart),
        "z": None if z is None else [float(z.real), float(z.imag)],
        "w": None if w is None else [float(w.real), float(w.imag)],
        "xyz": [float(v) for v in embed_coords(p.chart, p.coord)],
        "grad_index": int(r.grad_index),
        "f_value": _num(r.f_value),
        "in_s_minus": bool(r.in_s_minus),
    }


def _genericity_record(gen):
    if gen is None:
        return None
    return {
        "verdict": gen.verdict,
        "min_grad_norm_on_curve": _num(gen.min_grad_norm_on_curve),
        "fiber_defect_max": _num(gen.fiber_defect_max),
        "min_zero_separation": _num(gen.min_zero_separation),
        "unconverged_vertices": int(gen.unconverged_vertices),
        "reasons": list(gen.reasons),
    }


def build_report(cfg, command, curves=None, gen=None, index=None, error=None, exit_code=0,
                 artifacts=(), timestamp=None):
    rep = {
        "format": REPORT_FORMAT,
        "command": command,
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "spec": {"label": cfg.spec.label, "Q": _pairs(cfg.spec.Q), "P": _pairs(cfg.spec.P)},
        "grid_n": int(cfg.grid_n),
        "tolerances": cfg.tolerances.as_dict(),
        "verdict": gen.verdict if gen is not None else None,
        "genericity": _genericity_record(gen),
        "components": None if curves is None else len(curves),
        "curves": None if curves is None else [
            {"vertices": len(c), "charts": sorted({int(x) for x in c.charts}),
             "orientation_margin": _num(c.orientation_check)} for c in curves],
        "per_component": None,
        "critical_points": None,
        "indices": None,
        "consistent": None,
        "max_residual": None,
        "artifacts": list(artifacts),
        "exit_code": int(exit_code),
        "error": error,
    }
    if index is not None:
        rep["per_component"] = [
            {"component": c.component, "ind_v": c.ind_v, "ind_w": c.ind_w, "ind_M": c.ind_M,
             "odd": bool(c.odd), "residual": _num(c.residual), "vertices": c.vertices}
            for c in index.per_component]
        rep["critical_points"] = [_point_record(r) for r in index.critical_points]
        rep["indices"] = {"direct": index.ind_direct, "w_minus_v": index.ind_w_minus_v,
                          "formula": index.ind_formula}
        rep["consistent"] = bool(index.consistent)
        rep["max_residual"] = _num(index.max_residual)
    return rep


def dumps_report(rep):
    return json.dumps(rep, indent=2, allow_nan=False) + "\n"


def strip_timestamp(rep):
    return {k: v for k, v in rep.items() if k != "timestamp"}


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class RunResult:
    exit_code: int
    report: dict
    artifacts: list = field(default_factory=list)
    index: object = None
    curves: list = None
    seconds: float = 0.0


def _write(path, text):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def run_pipeline(cfg, command="verify", timestamp=None):
    """Run one CLI command on ``cfg``; artifacts go to ``cfg.output_dir``.

    ``trace`` stops after tracing and the genericity check, ``index`` and
    ``verify`` compute the three index values, ``plot`` only draws. Exit
    codes: 0 ok, 2 invalid input, 3 non-generic, 4 inconsistent indices,
    5 numerical or output failure.
    """
    t0 = time.perf_counter()
    curves = gen = index = error = None
    code = 0
    written = []
    tol = cfg.tolerances
    try:
        if command == "trace" or command == "plot":
            curves = trace_level_set(cfg.spec, cfg.grid_n, tol)
            gen = genericity_diagnostic(cfg.spec, curves, tol)
            if command == "trace" and gen.verdict != "Generic":
                raise NonGenericSymbol(f"verdict {gen.verdict}: {'; '.join(gen.reasons)}")
        elif command in ("index", "verify"):
            index = verify_theorem_b(cfg.spec, cfg.grid_n, tol, require_generic=False)
            curves, gen = index.curves, index.genericity
            if gen.verdict != "Generic":
                raise NonGenericSymbol(f"verdict {gen.verdict}: {'; '.join(gen.reasons)}")
            if not index.consistent:
                raise InconsistentIndices(*index.triple)
        else:
            raise ValidationError(f"unknown command {command!r}")
    except MultiplicityError as exc:
        code = exc.exit_code
        error = exc.record()
        log.info("%s failed: %s", command, exc)

    want_svg = command in ("plot", "verify")
    if want_svg and curves is not None:
        crit = index.critical_points if index is not None else []
        for name, kind, out in (("multiplicity.svg", "multiplicity_picture", "svg_multiplicity"),
                                ("gradient.svg", "gradient_picture", "svg_gradient")):
            if out in cfg.outputs or command == "plot":
                path = cfg.output_dir / name
                try:
                    try:
                        cfg.output_dir.mkdir(parents=True, exist_ok=True)
                    except OSError as exc:
                        raise OutputError(f"cannot create {cfg.output_dir}: {exc}") from exc
                    emit_svg(cfg.spec, curves, crit, kind, path, cfg.chart)
                    written.append(name)
                except MultiplicityError as exc:
                    code, error = code or exc.exit_code, error or exc.record()
    if "report" in cfg.outputs:
        written_all = written + ["report.json"]
    else:
        written_all = written
    rep = build_report(cfg, command, curves, gen, index, error, code, written_all, timestamp)
    if "report" in cfg.outputs:
        try:
            _write(cfg.output_dir / "report.json", dumps_report(rep))
        except OutputError as exc:
            code = code or exc.exit_code
            rep["exit_code"], rep["error"] = code, rep["error"] or exc.record()
    return RunResult(code, rep, written_all, index, curves, time.perf_counter() - t0)
