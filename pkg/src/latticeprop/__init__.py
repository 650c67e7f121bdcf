"""Closed-form powers of 2x2 unimodular transfer matrices and finite 1D crystals."""

__version__ = "0.1.0"

from .bargmann import BargmannFactors, Recombination, bargmann_decompose, recombine, symmetric_core
from .crystal import (
    DeltaLattice,
    Layer,
    Scan,
    SpectrumRow,
    StackConfig,
    Su11Matrix,
    band_scan,
    cell_matrix_delta,
    cell_matrix_optical,
    sp2_to_su11,
    stack_response,
    su11_to_sp2,
)
from .sp2 import (
    DomainError,
    Mat2,
    OverflowGuardError,
    boost,
    det,
    inverse,
    max_abs_diff,
    multiply,
    rotation,
    shear,
    squeeze45,
    trace,
)
from .wigner import (
    Elliptic,
    Hyperbolic,
    Identity,
    Parabolic,
    WignerDecomposition,
    chebyshev_power,
    classify,
    closed_power,
    naive_power,
    params_from_bargmann,
    wigner_decompose,
)
