"""Multiplicity sets of symmetric 2x2 symbols over the Riemann sphere.

A symbol is given by two polynomials, ``Q`` (degree <= 2, a section of the
tangent bundle) and ``P`` (degree <= 6, a section of its cube). Its
multiplicity base is the zero set of ``f = |V_P|^2 - |V_Q|^2``; this package
traces that set, computes the index of the kernel line field along it in
three independent ways and draws both.
"""
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import MultiplicityError
from .examples import degenerate, example1, example2, example2_scaled
from .fields import SymbolSpec, f_values, grad_f, sections
from .index import IndexReport, find_critical_points, verify_theorem_b
from .sphere import ChartId, ChartPoint, embed, transition
from .svg import emit_svg
from .tracer import OrientedCurve, genericity_diagnostic, trace_level_set

__version__ = "0.1.0"

__all__ = [
    "ChartId", "ChartPoint", "DEFAULT_TOLERANCES", "IndexReport", "MultiplicityError",
    "OrientedCurve", "SymbolSpec", "Tolerances", "degenerate", "embed", "emit_svg", "example1",
    "example2", "example2_scaled", "f_values", "find_critical_points", "genericity_diagnostic",
    "grad_f", "sections", "trace_level_set", "transition", "verify_theorem_b",
]
