"""Bargmann factorization ``M = rotation(theta1) @ boost(lam) @ rotation(theta2)``.

The factors are recombined into a symmetric core conjugated by a rotation::

    M = rotation(delta) @ (R @ boost(lam) @ R) @ rotation(-delta),  R = rotation(theta)

with ``theta = (theta1 + theta2) / 2`` and ``delta = (theta1 - theta2) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sp2 import EPS_DET, Mat2, boost, check_unimodular, multiply, rotation, wrap_angle

EPS_DIAG = 1e-12


@dataclass(frozen=True)
class BargmannFactors:
    theta1: float
    lam: float
    theta2: float

    def matrix(self) -> Mat2:
        return multiply(multiply(rotation(self.theta1), boost(self.lam)), rotation(self.theta2))


@dataclass(frozen=True)
class Recombination:
    theta: float
    delta: float


def bargmann_decompose(m: Mat2, eps_det: float = EPS_DET, eps_diag: float = EPS_DIAG) -> BargmannFactors:
    """Two-sided rotation diagonalization of a unimodular matrix.

    Closed-form 2x2 SVD with both orthogonal factors proper rotations.
    With ``E, F, G, H`` the symmetric/antisymmetric combinations of the
    entries, the singular values are ``Q +/- R`` where ``Q = hypot(E, H)``
    and ``R = hypot(F, G)``; unimodularity gives ``Q**2 - R**2 = 1`` so
    ``lam = asinh(R)`` without forming a logarithm of a ratio.

    Canonical output: ``lam >= 0``, angles in ``(-2*pi, 2*pi]``, and when
    ``lam < eps_diag`` the whole rotation is carried by ``theta1``.
    """
    check_unimodular(m, eps_det)
    e = 0.5 * (m.a11 + m.a22)
    f = 0.5 * (m.a11 - m.a22)
    g = 0.5 * (m.a21 + m.a12)
    h = 0.5 * (m.a21 - m.a12)
    lam = math.asinh(math.hypot(f, g))
    a2 = math.atan2(h, e)
    if lam < eps_diag:
        return BargmannFactors(wrap_angle(2.0 * a2), 0.0, 0.0)
    a1 = math.atan2(g, f)
    return BargmannFactors(wrap_angle(a2 + a1), lam, wrap_angle(a2 - a1))


def recombine(f: BargmannFactors) -> Recombination:
    # Half-sum/half-difference of the angles themselves; never a matrix square root.
    return Recombination(theta=0.5 * (f.theta1 + f.theta2), delta=0.5 * (f.theta1 - f.theta2))


def symmetric_core(f: BargmannFactors) -> Mat2:
    """``rotation(theta) @ boost(lam) @ rotation(theta)``, the matrix conjugated by ``rotation(delta)``."""
    r = rotation(recombine(f).theta)
    return multiply(multiply(r, boost(f.lam)), r)


def reconstruct_from_core(f: BargmannFactors) -> Mat2:
    """``D @ K @ D^-1`` with ``D = rotation(delta)``; equals ``f.matrix()``."""
    delta = recombine(f).delta
    return multiply(multiply(rotation(delta), symmetric_core(f)), rotation(-delta))
