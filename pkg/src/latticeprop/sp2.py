"""Real 2x2 unimodular matrices and the one-parameter generators.

Angles follow the half-angle convention: ``rotation(theta)`` embeds
``theta / 2`` in its entries, so rotations have period 4*pi and
``rotation(2*pi) == -I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

EPS_DET = 1e-9
LAMBDA_MAX = 300.0


class DomainError(ValueError):
    """Input outside the domain of an operation (non-finite, non-unimodular, ...)."""


class OverflowGuardError(OverflowError):
    """A parameter or result would exceed the double-precision range."""


def _finite(*values: float) -> bool:
    # a finite sum rules out inf and nan; check entries only if the sum overflowed
    return math.isfinite(sum(values)) or all(math.isfinite(v) for v in values)


@dataclass(frozen=True, slots=True)
class Mat2:
    """Immutable real 2x2 matrix ``[[a11, a12], [a21, a22]]``."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        if not _finite(self.a11, self.a12, self.a21, self.a22):
            raise OverflowGuardError(f"non-finite matrix entries: {self.entries()}")

    @classmethod
    def from_array(cls, a) -> "Mat2":
        arr = np.asarray(a, dtype=float)
        if arr.shape == (4,):
            arr = arr.reshape(2, 2)
        if arr.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix entries must be finite")
        return cls(float(arr[0, 0]), float(arr[0, 1]), float(arr[1, 0]), float(arr[1, 1]))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    def entries(self) -> tuple[float, float, float, float]:
        """Row-major entries."""
        return (self.a11, self.a12, self.a21, self.a22)

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def half_trace(self) -> float:
        return 0.5 * (self.a11 + self.a22)

    def norm_inf(self) -> float:
        return max(abs(self.a11) + abs(self.a12), abs(self.a21) + abs(self.a22))

    def max_abs(self) -> float:
        return max(abs(self.a11), abs(self.a12), abs(self.a21), abs(self.a22))

    def transpose(self) -> "Mat2":
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def scale(self, s: float) -> "Mat2":
        return Mat2(s * self.a11, s * self.a12, s * self.a21, s * self.a22)

    def __neg__(self) -> "Mat2":
        return self.scale(-1.0)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return multiply(self, other)


def is_unimodular(m: Mat2, eps_det: float = EPS_DET) -> bool:
    """True when ``|det - 1| <= eps_det * max(1, ||m||_inf**2)``."""
    scale = max(1.0, m.norm_inf() ** 2)
    return abs(m.det() - 1.0) <= eps_det * scale


def check_unimodular(m: Mat2, eps_det: float = EPS_DET) -> Mat2:
    if not is_unimodular(m, eps_det):
        raise DomainError(f"matrix is not unimodular: det = {m.det()!r}")
    return m


def _check_param(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _check_rapidity(lam: float, name: str = "lambda") -> float:
    lam = _check_param(lam, name)
    if abs(lam) > LAMBDA_MAX:
        raise OverflowGuardError(f"|{name}| = {abs(lam)!r} exceeds LAMBDA_MAX = {LAMBDA_MAX}")
    return lam


def rotation(theta: float) -> Mat2:
    """``[[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]``."""
    half = 0.5 * _check_param(theta, "theta")
    c, s = math.cos(half), math.sin(half)
    return Mat2(c, -s, s, c)


def boost(lam: float) -> Mat2:
    """Diagonal boost ``diag(exp(lam), exp(-lam))``."""
    lam = _check_rapidity(lam)
    return Mat2(math.exp(lam), 0.0, 0.0, math.exp(-lam))


def squeeze45(lam: float) -> Mat2:
    """Boost along the 45-degree axis, ``rotation(pi/2) @ boost(lam) @ rotation(-pi/2)``."""
    lam = _check_rapidity(lam)
    c, s = math.cosh(lam), math.sinh(lam)
    return Mat2(c, s, s, c)


def shear(gamma: float, lower: bool = False) -> Mat2:
    """Upper shear ``[[1, gamma], [0, 1]]`` or lower shear ``[[1, 0], [-gamma, 1]]``."""
    gamma = _check_param(gamma, "gamma")
    if lower:
        return Mat2(1.0, 0.0, -gamma, 1.0)
    return Mat2(1.0, gamma, 0.0, 1.0)


def multiply(a: Mat2, b: Mat2) -> Mat2:
    return Mat2(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )


def product(mats: Iterable[Mat2]) -> Mat2:
    out = Mat2.identity()
    for m in mats:
        out = multiply(out, m)
    return out


def inverse(m: Mat2, eps_det: float = EPS_DET) -> Mat2:
    """Inverse of a unimodular matrix via the adjugate (no division)."""
    check_unimodular(m, eps_det)
    return Mat2(m.a22, -m.a12, -m.a21, m.a11)


def trace(m: Mat2) -> float:
    return m.trace()


def det(m: Mat2) -> float:
    return m.det()


def max_abs_diff(a: Mat2, b: Mat2) -> float:
    return max(abs(x - y) for x, y in zip(a.entries(), b.entries()))


def rel_diff(a: Mat2, b: Mat2) -> float:
    """Max entry difference relative to ``max(1, max|b|)``."""
    return max_abs_diff(a, b) / max(1.0, b.max_abs())


def wrap_angle(theta: float, period: float = 4.0 * math.pi) -> float:
    """Map ``theta`` into ``(-period/2, period/2]``."""
    half = 0.5 * period
    out = math.fmod(theta + half, period)
    if out <= 0.0:
        out += period
    return out - half


def parse_matrix(text: str | Iterable[str]) -> Mat2:
    """Parse four whitespace-separated reals (row-major)."""
    if not isinstance(text, str):
        text = " ".join(text)
    parts = text.split()
    if len(parts) != 4:
        raise DomainError(f"expected 4 matrix entries, got {len(parts)}")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"matrix entries must be reals: {exc}") from None
    if not _finite(*values):
        raise DomainError("matrix entries must be finite")
    return Mat2(*values)
