"""Little-group reduction ``M = sign * C @ W @ C^-1`` and closed-form powers.

``C = rotation(delta) @ S(eta)`` with ``S(eta) = diag(exp(eta/2), exp(-eta/2))``
and ``W`` one of

* elliptic    ``R(phi) = rotation(phi)``,
* hyperbolic  ``X(chi) = [[cosh(chi/2), sinh(chi/2)], [sinh(chi/2), cosh(chi/2)]]``,
* parabolic   ``E(gamma)``, upper ``[[1, gamma], [0, 1]]`` or lower ``[[1, 0], [-gamma, 1]]``,

so that ``M**N = sign**N * C @ W**N @ C^-1`` with ``W**N`` one of
``R(N*phi)``, ``X(N*chi)``, ``E(N*gamma)``.

Classification is by ``|half-trace|`` against 1 with tolerance ``eps_parab``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .sp2 import (
    EPS_DET,
    LAMBDA_MAX,
    DomainError,
    Mat2,
    OverflowGuardError,
    check_unimodular,
    inverse,
    multiply,
    rotation,
    shear,
    squeeze45,
)

EPS_PARAB = 1e-9


class ConventionError(ArithmeticError):
    """The closed-form parameter relations disagree with the half-trace class."""


@dataclass(frozen=True)
class Elliptic:
    phi: float  # in (0, 4*pi), cos(phi/2) = half-trace
    # rounding residual of phi; n * ulp(phi) would otherwise dominate at large n
    phi_tail: float = field(default=0.0, compare=False, repr=False)
    kind = "elliptic"

    def matrix(self) -> Mat2:
        return rotation(self.phi)

    def power(self, n: int) -> Mat2:
        half = np.longdouble(n) * (np.longdouble(self.phi) + np.longdouble(self.phi_tail)) / 2
        c, s = float(np.cos(half)), float(np.sin(half))
        return Mat2(c, -s, s, c)


@dataclass(frozen=True)
class Hyperbolic:
    chi: float  # > 0, cosh(chi/2) = |half-trace|
    kind = "hyperbolic"

    def matrix(self) -> Mat2:
        return squeeze45(0.5 * self.chi)

    def power(self, n: int) -> Mat2:
        arg = 0.5 * n * self.chi
        if abs(arg) > LAMBDA_MAX:
            raise OverflowGuardError(
                f"N*chi/2 = {arg!r} exceeds LAMBDA_MAX = {LAMBDA_MAX}; power overflows"
            )
        return squeeze45(arg)


@dataclass(frozen=True)
class Parabolic:
    gamma: float
    orientation: str = "upper"  # "upper" | "lower"
    kind = "parabolic"

    def matrix(self) -> Mat2:
        return shear(self.gamma, lower=self.orientation == "lower")

    def power(self, n: int) -> Mat2:
        return shear(n * self.gamma, lower=self.orientation == "lower")


@dataclass(frozen=True)
class Identity:
    kind = "identity"

    def matrix(self) -> Mat2:
        return Mat2.identity()

    def power(self, n: int) -> Mat2:
        return Mat2.identity()


WignerClass = Union[Elliptic, Hyperbolic, Parabolic, Identity]


def class_parameter(w: WignerClass) -> float | None:
    """phi, chi or gamma of a class; None for the identity."""
    if isinstance(w, Elliptic):
        return w.phi
    if isinstance(w, Hyperbolic):
        return w.chi
    if isinstance(w, Parabolic):
        return w.gamma
    return None


def squeeze_by(m: Mat2, eta: float) -> Mat2:
    """``S(eta) @ m @ S(eta)^-1`` computed entrywise."""
    e = math.exp(eta)
    return Mat2(m.a11, e * m.a12, m.a21 / e, m.a22)


def conjugate_by_rotation(m: Mat2, delta: float) -> Mat2:
    """``rotation(delta) @ m @ rotation(-delta)``."""
    if delta == 0.0:
        return m
    return multiply(multiply(rotation(delta), m), rotation(-delta))


def _acosh1p(t: float) -> float:
    """acosh(1 + t) for t >= 0 without cancellation."""
    return math.log1p(t + math.sqrt(t * (t + 2.0)))


def chebyshev_closed(x: float, n: int) -> tuple[float, float]:
    """``(T_n(x), U_{n-1}(x))`` by trig/hyperbolic closed forms.

    Guarded near ``|x| = 1`` where the generic formulas divide by a
    vanishing ``sin``/``sinh``. Used for powers inside the parabolic band.
    """
    if n == 0:
        return 1.0, 0.0
    sgn = 1.0 if x >= 0.0 else -1.0
    ax = abs(x)
    # parity of the sign factor: T_n(-x) = (-1)^n T_n(x), U_{n-1}(-x) = (-1)^(n-1) U_{n-1}(x)
    pt = sgn ** n
    pu = sgn ** (n - 1)
    if ax == 1.0:
        return pt, pu * n
    if ax < 1.0:
        t = 1.0 - ax
        s = math.sqrt(t * (1.0 + ax))
        a = math.atan2(s, ax)
        return pt * math.cos(n * a), pu * math.sin(n * a) / math.sin(a)
    a = _acosh1p(ax - 1.0)
    return pt * math.cosh(n * a), pu * math.sinh(n * a) / math.sinh(a)


@dataclass(frozen=True)
class WignerDecomposition:
    """``M = sign * C @ W @ C^-1`` with ``C = rotation(delta) @ S(eta)``.

    ``frame`` is the equal-diagonal matrix ``rotation(-delta) @ (sign*M) @ rotation(delta)``,
    i.e. ``S(eta) @ W @ S(eta)^-1`` up to rounding.
    """

    w_class: WignerClass
    sign: int
    delta: float
    eta: float
    frame: Mat2

    @property
    def conjugator(self) -> Mat2:
        e = math.exp(0.5 * self.eta)
        return multiply(rotation(self.delta), Mat2(e, 0.0, 0.0, 1.0 / e))

    def little_group(self) -> Mat2:
        return self.w_class.matrix()

    def reconstruct(self) -> Mat2:
        inner = squeeze_by(self.w_class.matrix(), self.eta)
        return conjugate_by_rotation(inner, self.delta).scale(float(self.sign))

    def power(self, n: int) -> Mat2:
        """``M**n`` from the little-group power; cost independent of ``n``."""
        n = int(n)
        if n < 0:
            return inverse(self.power(-n))
        if n == 0:
            return Mat2.identity()
        w = self.w_class
        if isinstance(w, (Elliptic, Hyperbolic)):
            inner = squeeze_by(w.power(n), self.eta)
        else:
            # Inside the tolerance band keep the residual curvature of the
            # half-trace; reduces to E(n*gamma) exactly at |half-trace| = 1.
            f = self.frame
            h = 0.5 * (f.a11 + f.a22)
            c, u = chebyshev_closed(h, n)
            inner = Mat2(c + u * (f.a11 - h), u * f.a12, u * f.a21, c + u * (f.a22 - h))
        out = conjugate_by_rotation(inner, self.delta)
        if self.sign < 0 and n % 2 == 1:
            out = -out
        return out


def _elliptic_from(m: Mat2, n21: float) -> Elliptic:
    # extended precision keeps the angle exact to ~1e-19, so n * phi stays
    # accurate for n up to ~1e9
    h = (np.longdouble(m.a11) + np.longdouble(m.a22)) / 2
    # sin(phi/2) carries the sign of n21; 1 - h^2 factored to avoid cancellation
    s = np.sqrt((1 - h) * (1 + h))
    phi = 2 * np.arctan2(s if n21 >= 0.0 else -s, h)
    if phi <= 0:
        phi += 8 * np.arctan2(np.longdouble(1), np.longdouble(0))
    head = float(phi)
    return Elliptic(head, float(phi - np.longdouble(head)))


def wigner_decompose(m: Mat2, eps_det: float = EPS_DET, eps_parab: float = EPS_PARAB) -> WignerDecomposition:
    """Reduce a unimodular matrix to its little-group form.

    1. ``delta = atan2(a22 - a11, a12 + a21)`` equalizes the diagonal of
       ``rotation(-delta) @ M @ rotation(delta)`` and leaves its symmetric
       off-diagonal part non-negative (so hyperbolic ``chi > 0``).
    2. ``exp(2*eta) = |n12 / n21|`` on the equal-diagonal frame.
    3. phi, chi or gamma from the remaining half-trace and off-diagonals.
    """
    check_unimodular(m, eps_det)
    h = m.half_trace
    gap = abs(h) - 1.0
    if gap < -eps_parab:
        sign = 1
    else:
        sign = 1 if h >= 0.0 else -1
    mp = m if sign > 0 else -m
    hp = sign * h

    y = mp.a22 - mp.a11
    x = mp.a12 + mp.a21
    delta = 0.0 if (x == 0.0 and y == 0.0) else math.atan2(y, x)
    if delta == -math.pi:
        delta = math.pi
    frame = conjugate_by_rotation(mp, -delta)
    n12, n21 = frame.a12, frame.a21

    if abs(gap) <= eps_parab:
        scale = max(1.0, mp.max_abs())
        if max(abs(mp.a11 - 1.0), abs(mp.a22 - 1.0), abs(mp.a12), abs(mp.a21)) <= eps_parab * scale:
            return WignerDecomposition(Identity(), sign, 0.0, 0.0, mp)
        if abs(n21) <= abs(n12):
            w: WignerClass = Parabolic(n12, "upper")
        else:
            w = Parabolic(-n21, "lower")
        return WignerDecomposition(w, sign, delta, 0.0, frame)

    if gap < 0.0:
        eta = 0.5 * (math.log(abs(n12)) - math.log(abs(n21)))
        return WignerDecomposition(_elliptic_from(m, n21), 1, delta, eta, frame)

    if n12 <= 0.0 or n21 <= 0.0:
        raise DomainError(f"hyperbolic frame has non-positive off-diagonals ({n12!r}, {n21!r})")
    chi = 2.0 * _acosh1p(hp - 1.0)
    eta = 0.5 * (math.log(n12) - math.log(n21))
    return WignerDecomposition(Hyperbolic(chi), sign, delta, eta, frame)


def classify(m: Mat2, eps_det: float = EPS_DET, eps_parab: float = EPS_PARAB) -> WignerClass:
    return wigner_decompose(m, eps_det, eps_parab).w_class


def closed_power(m: Mat2, n: int, eps_det: float = EPS_DET, eps_parab: float = EPS_PARAB) -> Mat2:
    """``m**n`` via the little-group closed form."""
    return wigner_decompose(m, eps_det, eps_parab).power(n)


def naive_power(m: Mat2, n: int) -> Mat2:
    """``n`` sequential 2x2 products; the O(n) reference."""
    n = int(n)
    if n < 0:
        return naive_power(inverse(m), -n)
    a11, a12, a21, a22 = 1.0, 0.0, 0.0, 1.0
    b11, b12, b21, b22 = m.entries()
    for _ in range(n):
        a11, a12, a21, a22 = (
            a11 * b11 + a12 * b21,
            a11 * b12 + a12 * b22,
            a21 * b11 + a22 * b21,
            a21 * b12 + a22 * b22,
        )
    if not all(math.isfinite(v) for v in (a11, a12, a21, a22)):
        raise OverflowGuardError(f"naive power overflowed at N = {n}")
    return Mat2(a11, a12, a21, a22)


def chebyshev_coefficients(x, n: int):
    """``(U_{n-1}(x), U_{n-2}(x))`` by the three-term recurrence.

    ``x`` may be a scalar or an array (vectorized over a batch).
    """
    if n < 0:
        raise DomainError("chebyshev recurrence needs n >= 0")
    scalar = np.ndim(x) == 0
    if scalar:
        x = float(x)
        two_x = 2.0 * x
        u_prev, u = -1.0, 0.0  # U_{-2}, U_{-1}
        for _ in range(n):
            u_prev, u = u, two_x * u - u_prev
        if not (math.isfinite(u) and math.isfinite(u_prev)):
            raise OverflowGuardError(f"chebyshev recurrence overflowed at N = {n}")
        return u, u_prev
    x = np.asarray(x, dtype=float)
    two_x = 2.0 * x
    u_prev = np.full_like(x, -1.0)
    u = np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            u_prev, u = u, two_x * u - u_prev
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(u_prev))):
        raise OverflowGuardError(f"chebyshev recurrence overflowed at N = {n}")
    return u, u_prev


def chebyshev_power(m: Mat2, n: int) -> Mat2:
    """``m**n = U_{n-1}(x) m - U_{n-2}(x) I`` with ``x`` the half-trace."""
    n = int(n)
    if n < 0:
        return chebyshev_power(inverse(m), -n)
    u1, u2 = chebyshev_coefficients(m.half_trace, n)
    return Mat2(u1 * m.a11 - u2, u1 * m.a12, u1 * m.a21, u1 * m.a22 - u2)


def params_from_bargmann(lam: float, theta: float, eps_parab: float = EPS_PARAB) -> tuple[WignerClass, float]:
    """Little-group class and squeeze parameter of ``rotation(theta) @ squeeze45(lam) @ rotation(theta)``.

    Closed-form relations, with ``num = cosh(lam) sin(theta) + sinh(lam)``
    and ``den = cosh(lam) sin(theta) - sinh(lam)``:

    * elliptic   (den > 0 when num > 0): ``cos(phi/2) = cosh(lam) cos(theta)``,
      ``exp(2 eta) = num / den``;
    * hyperbolic (den < 0 when num > 0): ``cosh(chi/2) = |cosh(lam) cos(theta)|``,
      ``exp(2 eta) = num / -den``;
    * parabolic  (den -> 0): ``exp(eta) sin(phi/2) -> num``, the shear magnitude,
      while ``eta`` itself diverges.

    The class itself is decided by ``|cosh(lam) cos(theta)|`` against 1, which
    agrees with the sign of ``den`` whenever ``num > 0`` because
    ``1 - (cosh(lam) cos(theta))**2 = num * den``.

    The returned ``eta`` is ``0.5 * log|num / den|``. Relative to
    :func:`wigner_decompose` of the same matrix it is ``-eta`` when the
    decomposition uses ``delta = 0`` and ``+eta`` when it uses ``delta = pi``.
    """
    lam = float(lam)
    theta = float(theta)
    if not (math.isfinite(lam) and math.isfinite(theta)):
        raise DomainError("lam and theta must be finite")
    ch, sh = math.cosh(lam), math.sinh(lam)
    st = math.sin(theta)
    h = ch * math.cos(theta)
    num = ch * st + sh
    den = ch * st - sh
    gap = abs(h) - 1.0

    if num > 0.0 and abs(gap) > eps_parab and (den > 0.0) != (gap < 0.0):
        raise ConventionError(
            f"sign criterion (den = {den!r}) disagrees with half-trace {h!r}"
        )

    if abs(gap) <= eps_parab:
        if num == 0.0 and den == 0.0:
            return Identity(), 0.0
        eta = math.inf if den == 0.0 else 0.5 * math.log(abs(num / den)) if num != 0.0 else -math.inf
        sign = 1.0 if h >= 0.0 else -1.0
        # frame off-diagonals of sign*K, swapped and negated when delta = pi
        n12, n21 = -sign * den, sign * num
        if sign * sh < 0.0:
            n12, n21 = -n21, -n12
        if abs(n21) <= abs(n12):
            return Parabolic(n12, "upper"), eta
        return Parabolic(-n21, "lower"), eta

    eta = 0.5 * (math.log(abs(num)) - math.log(abs(den)))
    if gap < 0.0:
        s = math.sqrt((1.0 - h) * (1.0 + h))
        half = math.atan2(math.copysign(s, num), h)
        phi = 2.0 * half
        if phi <= 0.0:
            phi += 4.0 * math.pi
        return Elliptic(phi), eta
    return Hyperbolic(2.0 * _acosh1p(abs(h) - 1.0)), eta
