"""Finite one-dimensional crystals: lossless dielectric stacks and delta lattices.

Wave-basis matrices live in SU(1,1) as ``[[alpha, beta], [conj(beta), conj(alpha)]]``
and map onto real unimodular matrices by a fixed componentwise isomorphism,
so the N-period power is taken with :func:`latticeprop.wigner.closed_power`
on the real image.

Conventions: normal incidence, real indices, layer thickness in nm.
Interfaces use the symmetrized form ``(1/t) [[1, r], [r, 1]]`` with
``t = 2 sqrt(n_j n_k) / (n_j + n_k)`` so every factor is unimodular.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .sp2 import EPS_DET, DomainError, Mat2, OverflowGuardError, multiply, rotation, shear
from .wigner import EPS_PARAB, chebyshev_power, naive_power, wigner_decompose

LOSSLESS_TOL = 1e-9


@dataclass(frozen=True)
class Su11Matrix:
    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = abs(self.alpha), abs(self.beta)
        if not math.isfinite(a * a):
            raise OverflowGuardError("|alpha|^2 overflows")
        resid = (a - b) * (a + b)
        if abs(resid - 1.0) > LOSSLESS_TOL * max(1.0, a * a):
            raise DomainError(f"not lossless: |alpha|^2 - |beta|^2 = {resid!r}")

    def __matmul__(self, other: "Su11Matrix") -> "Su11Matrix":
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return Su11Matrix(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def to_array(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.beta.conjugate(), self.alpha.conjugate()]])

    @property
    def transmittance(self) -> float:
        # |alpha| >= 1 exactly; clip roundoff just below it
        return min(1.0, 1.0 / abs(self.alpha) ** 2)

    @property
    def reflectance(self) -> float:
        return (abs(self.beta) / abs(self.alpha)) ** 2


SU11_IDENTITY = Su11Matrix(1.0 + 0j, 0j)


def su11_to_sp2(u: Su11Matrix) -> Mat2:
    a, b = u.alpha, u.beta
    return Mat2(a.real + b.real, b.imag - a.imag, a.imag + b.imag, a.real - b.real)


def sp2_to_su11(m: Mat2) -> Su11Matrix:
    alpha = complex(0.5 * (m.a11 + m.a22), 0.5 * (m.a21 - m.a12))
    beta = complex(0.5 * (m.a11 - m.a22), 0.5 * (m.a21 + m.a12))
    return Su11Matrix(alpha, beta)


# --------------------------------------------------------------------------
# configuration types


@dataclass(frozen=True)
class Layer:
    n: float
    d: float  # nm

    def __post_init__(self):
        if not (0.0 < self.n <= 100.0):
            raise DomainError(f"layer index must be in (0, 100], got {self.n!r}")
        if not (0.0 < self.d < 1e7):
            raise DomainError(f"layer thickness must be in (0, 1e7) nm, got {self.d!r}")


@dataclass(frozen=True)
class Scan:
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise DomainError("scan needs at least one point")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.stop < self.start:
            raise DomainError(f"invalid scan range [{self.start!r}, {self.stop!r}]")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class StackConfig:
    ambient_n: float
    exit_n: float
    cell: tuple[Layer, ...]
    periods: int
    scan: Scan  # wavelengths in nm

    def __post_init__(self):
        if not self.cell:
            raise DomainError("cell needs at least one layer")
        for n in (self.ambient_n, self.exit_n):
            if not (0.0 < n <= 100.0):
                raise DomainError(f"medium index must be in (0, 100], got {n!r}")
        if not (0 <= self.periods <= 10**9):
            raise DomainError(f"periods must be in [0, 1e9], got {self.periods!r}")
        if self.scan.start <= 0.0:
            raise DomainError("wavelengths must be positive")

    @property
    def symmetric(self) -> bool:
        return self.ambient_n == self.exit_n


@dataclass(frozen=True)
class DeltaLattice:
    """Delta barriers (g > 0) or wells (g < 0) of strength g spaced by a."""

    g: float
    a: float
    k_scan: Scan
    periods: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.g) and math.isfinite(self.a)) or self.a <= 0.0:
            raise DomainError("delta lattice needs finite g and a > 0")
        if self.k_scan.start <= 0.0:
            raise DomainError("k grid must be strictly positive")
        if not (0 <= self.periods <= 10**9):
            raise DomainError(f"periods must be in [0, 1e9], got {self.periods!r}")


Crystal = Union[StackConfig, DeltaLattice]


@dataclass(frozen=True)
class Response:
    T: float
    R: float
    half_trace: float
    w_class: str
    bloch_phase: float | None
    overflow: bool = False


@dataclass(frozen=True)
class SpectrumRow:
    x: float
    half_trace: float
    w_class: str
    bloch_phase: float | None
    T: float
    R: float
    overflow: bool = field(default=False, compare=False)


# --------------------------------------------------------------------------
# cell matrices


def propagation(n: float, d: float, lam_nm: float) -> Su11Matrix:
    phase = 2.0 * math.pi * n * d / lam_nm
    return Su11Matrix(complex(math.cos(phase), math.sin(phase)), 0j)


def interface(n_from: float, n_to: float) -> Su11Matrix:
    if n_from == n_to:
        return SU11_IDENTITY
    s = n_from + n_to
    t = 2.0 * math.sqrt(n_from * n_to) / s
    r = (n_from - n_to) / s
    return Su11Matrix(complex(1.0 / t), complex(r / t))


def cell_matrix_optical(cell: Sequence[Layer], lam_nm: float) -> Su11Matrix:
    """One closed period: propagate through each layer, then cross into the next.

    The last interface leads back into the first layer's medium.
    """
    if lam_nm <= 0.0:
        raise DomainError("wavelength must be positive")
    out = SU11_IDENTITY
    m = len(cell)
    for j, layer in enumerate(cell):
        out = out @ propagation(layer.n, layer.d, lam_nm)
        out = out @ interface(layer.n, cell[(j + 1) % m].n)
    return out


def cell_matrix_delta(lat: DeltaLattice, k: float) -> Mat2:
    """Lower shear ``g/k`` times free rotation over one period, basis ``(psi, psi'/k)``.

    Half-trace is the Kronig-Penney discriminant ``cos(ka) + g sin(ka) / (2k)``.
    """
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    return multiply(shear(lat.g / k, lower=True), rotation(2.0 * k * lat.a))


def kp_discriminant(g: float, a: float, k):
    """``cos(ka) + g sin(ka) / (2k)``; accepts arrays."""
    return np.cos(k * a) + g * np.sin(k * a) / (2.0 * k)


# --------------------------------------------------------------------------
# responses


PowerFn = Callable[[Mat2, int], Mat2]

_METHODS: dict[str, PowerFn] = {"naive": naive_power, "chebyshev": chebyshev_power}


def _cell_sp2(config: Crystal, x: float) -> Mat2:
    if isinstance(config, StackConfig):
        return su11_to_sp2(cell_matrix_optical(config.cell, x))
    return cell_matrix_delta(config, x)


def _bloch_phase(half_trace: float, w_class: str) -> float | None:
    if w_class != "elliptic":
        return None
    return math.acos(max(-1.0, min(1.0, half_trace)))


def stack_response(
    config: Crystal,
    x: float,
    periods: int | None = None,
    method: str = "closed",
    eps_det: float = EPS_DET,
    eps_parab: float = EPS_PARAB,
) -> Response:
    """T, R and the cell's class at one wavelength (nm) or wavenumber.

    ``method`` selects how the cell is powered: ``"closed"`` (little-group
    closed form), or the ``"naive"`` / ``"chebyshev"`` oracles.
    """
    n = config.periods if periods is None else int(periods)
    if n < 0:
        raise DomainError("periods must be non-negative")
    cell = _cell_sp2(config, x)
    dec = wigner_decompose(cell, eps_det, eps_parab)
    h = cell.half_trace
    w_class = dec.w_class.kind
    bloch = _bloch_phase(h, w_class)
    try:
        if method == "closed":
            total = dec.power(n)
        else:
            total = _METHODS[method](cell, n)
        u = sp2_to_su11(total)
        if isinstance(config, StackConfig):
            n1 = config.cell[0].n
            u = interface(config.ambient_n, n1) @ u @ interface(n1, config.exit_n)
    except OverflowGuardError:
        return Response(0.0, 1.0, h, w_class, bloch, overflow=True)
    return Response(u.transmittance, u.reflectance, h, w_class, bloch)


def _threads() -> int | None:
    raw = os.environ.get("LATTICEPROP_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"LATTICEPROP_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError("LATTICEPROP_THREADS must be >= 0")
    return None if n == 0 else n


def band_scan(
    config: Crystal,
    periods: int | None = None,
    eps_det: float = EPS_DET,
    eps_parab: float = EPS_PARAB,
    max_workers: int | None = None,
) -> list[SpectrumRow]:
    """One :class:`SpectrumRow` per scan point, in grid order."""
    scan = config.scan if isinstance(config, StackConfig) else config.k_scan
    grid = [float(v) for v in scan.grid()]

    def row(x: float) -> SpectrumRow:
        r = stack_response(config, x, periods, eps_det=eps_det, eps_parab=eps_parab)
        return SpectrumRow(x, r.half_trace, r.w_class, r.bloch_phase, r.T, r.R, r.overflow)

    workers = max_workers if max_workers is not None else _threads()
    if workers == 1 or len(grid) < 64:
        return [row(x) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, grid))


def class_runs(rows: Sequence[SpectrumRow]) -> list[tuple[str, float, float]]:
    """Contiguous runs ``(class, x_first, x_last)`` of identical class tags."""
    runs: list[tuple[str, float, float]] = []
    for r in rows:
        if runs and runs[-1][0] == r.w_class:
            runs[-1] = (r.w_class, runs[-1][1], r.x)
        else:
            runs.append((r.w_class, r.x, r.x))
    return runs


def gap_intervals(rows: Sequence[SpectrumRow]) -> list[tuple[float, float]]:
    return [(lo, hi) for kind, lo, hi in class_runs(rows) if kind == "hyperbolic"]


def quarter_wave_stack(
    n1: float = 1.38, n2: float = 2.35, lam0_nm: float = 550.0, periods: int = 10,
    lam_min_nm: float = 400.0, lam_max_nm: float = 800.0, points: int = 201,
    ambient_n: float = 1.0,
) -> StackConfig:
    """Two-layer stack with each optical thickness a quarter of ``lam0_nm``."""
    cell = (Layer(n1, lam0_nm / (4.0 * n1)), Layer(n2, lam0_nm / (4.0 * n2)))
    return StackConfig(ambient_n, ambient_n, cell, periods, Scan(lam_min_nm, lam_max_nm, points))
