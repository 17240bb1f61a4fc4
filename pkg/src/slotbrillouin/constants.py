"""Physical constants and frequency-unit helpers.

All quantities in this package are SI.  Angular frequencies are stored in
rad/s everywhere; the two helpers below convert at the boundaries (CLI
output, CSV columns) where cyclic frequency in Hz is the friendlier unit.
"""

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values used throughout the package (SI units)."""

    hbar: float = 1.054571817e-34
    """Reduced Planck constant (J s)."""

    k_B: float = 1.380649e-23
    """Boltzmann constant (J/K), exact since the 2019 SI redefinition."""

    c0: float = 299792458.0
    """Vacuum speed of light (m/s), exact."""

    eps0: float = 8.8541878128e-12
    """Vacuum permittivity (F/m)."""


CONSTANTS = PhysicalConstants()


def hz_to_angular(f: float) -> float:
    """Convert cyclic frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * f


def angular_to_hz(omega: float) -> float:
    """Convert angular frequency (rad/s) to cyclic frequency (Hz)."""
    return omega / TWO_PI
