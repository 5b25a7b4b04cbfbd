"""Built-in symbols used by the demos and the tests.

Coefficients are ascending: ``Q = [a0, a1, a2]``, ``P = [b0, ..., b6]``.
"""
import math

from .fields import SymbolSpec


def example1():
    """``Q = z^2``, ``P = 1``: one circle, index 4."""
    return SymbolSpec([0, 0, 1], [1], "example1")


def example2():
    """``Q = z^2``, ``P = (z^2 - 1)(z^2 + 1) = z^4 - 1`` exactly as stated.

    Its ``{f < 0}`` is connected, so the base is a single loop; see
    :func:`example2_scaled` for the five-circle picture.
    """
    return SymbolSpec([0, 0, 1], [-1, 0, 0, 0, 1], "example2")


def example2_scaled(c=2.0):
    """``Q = z^2``, ``P = c (z^4 - 1)``; for ``c >= 1.5`` the base splits into five circles."""
    return SymbolSpec([0, 0, 1], [-c, 0, 0, 0, c], "example2-scaled")


# Tangency: f = alpha^2 |z|^4 (alpha^4 k^2 |z|^2 - 1) has a double zero at |z| = 1/sqrt(3)
# exactly when k = 4 sqrt(3) / 9.
TANGENT_SCALE = 4 * math.sqrt(3) / 9


def degenerate():
    """``Q = z^2``, ``P = k z^3`` with f tangent to zero on ``|z| = 1/sqrt(3)``."""
    return SymbolSpec([0, 0, 1], [0, 0, 0, TANGENT_SCALE], "degenerate")


DEMOS = {
    "example1": example1,
    "example2": example2,
    "example2-scaled": example2_scaled,
    "degenerate": degenerate,
}

# chart each demo is drawn in by default
DEMO_CHARTS = {"example1": 1, "example2": 2, "example2-scaled": 2, "degenerate": 1}
