"""Fiberwise algebra of traceless symmetric symbols on a rank-2 bundle.

A traceless symmetric 2x2 matrix ``[[p, q], [q, -p]]`` is stored as the
complex number ``p + iq``; a vector ``(a, b)`` as ``a + ib``.  With these
identifications the symbol attached to a pair ``(z, w)`` acts by
``v -> z v + w conj(v)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFiber


@dataclass(frozen=True)
class TracelessSym:
    p: float
    q: float

    @classmethod
    def from_complex(cls, c):
        return cls(float(np.real(c)), float(np.imag(c)))

    @property
    def as_complex(self):
        return complex(self.p, self.q)

    @property
    def norm(self):
        # (A, A) = tr(A^2) / 2 = p^2 + q^2
        return float(np.hypot(self.p, self.q))

    def matrix(self):
        return np.array([[self.p, self.q], [self.q, -self.p]])


@dataclass(frozen=True)
class SymbolFiber:
    z: complex
    w: complex


def phi(z, w, v):
    """Vectorised ``z v + w conj(v)``."""
    return z * v + w * np.conj(v)


def phi_apply(fiber, v):
    return TracelessSym.from_complex(phi(fiber.z, fiber.w, v))


def kernel_line(z, w):
    """Unit direction minimising ``|z v + w conj(v)|`` over the unit circle.

    Equals ``i (w/z)^{1/2}`` normalised, principal square root.  Vectorised;
    meaningful as a kernel only where ``|z| = |w| != 0``.
    """
    d = 1j * np.sqrt(np.asarray(w, dtype=complex) / np.asarray(z, dtype=complex))
    return d / np.abs(d)


def kernel_directions(fiber, tol=1e-9, expect_multiplicity=False):
    """Both unit kernel directions ``(d, -d)``, or ``None`` off the multiplicity set.

    Raises DegenerateFiber when both components vanish and the caller
    expects a multiplicity point there (the kernel would be the whole plane).
    """
    az, aw = abs(fiber.z), abs(fiber.w)
    if az <= tol and aw <= tol:
        if expect_multiplicity:
            raise DegenerateFiber(f"fiber ({fiber.z}, {fiber.w}) vanishes")
        return None
    if abs(az - aw) > tol or az <= tol:
        return None
    d = complex(kernel_line(fiber.z, fiber.w))
    return d, -d


def eigenvalues(trace_part, s0):
    """Eigenvalues ``(lambda1, lambda2)`` of ``trace_part/2 * I + s0``."""
    t = 0.5 * trace_part
    r = s0.norm
    return t - r, t + r


def equivariance_defect(z, w, theta, v):
    rot = np.exp(1j * theta)
    lhs = phi(rot * z, rot ** 3 * w, rot * v)
    rhs = rot ** 2 * phi(z, w, v)
    return np.abs(lhs - rhs)


def equivariance_check(fiber, theta, v):
    return float(equivariance_defect(fiber.z, fiber.w, theta, v))
