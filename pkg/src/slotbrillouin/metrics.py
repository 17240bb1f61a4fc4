"""Quantum optomechanics figures of merit.

Everything here is closed-form arithmetic on rates; angular frequencies
in, SI out.  The single-photon cooperativity C0 = 4 g0^2 / (kappa Gamma)
sets both the phonon lasing threshold and the pump power needed for
coherent dynamics against the thermal bath.
"""

import math
from dataclasses import dataclass

from .constants import CONSTANTS
from .errors import DomainError


def cooperativity(g0: float, kappa: float, gamma: float) -> float:
    """Single-photon cooperativity 4 g0^2 / (kappa Gamma)."""
    if g0 < 0.0:
        raise DomainError(f"g0 = {g0} must be >= 0")
    if kappa <= 0.0 or gamma <= 0.0:
        raise DomainError("kappa and gamma must be positive")
    return 4.0 * g0**2 / (kappa * gamma)


def lasing_threshold(
    g0: float,
    kappa: float,
    gamma: float,
    omega: float,
    kappa_ext: float | None = None,
    detuning: float = 0.0,
) -> float:
    """Input power at the phonon lasing threshold (W).

    Threshold is one intracavity photon per 1/C0, converted to input
    power through the cavity Lorentzian:

        P_th = (1 / C0) hbar omega ((kappa/2)^2 + Delta^2) / kappa_ext

    Defaults: critical coupling kappa_ext = kappa / 2, zero detuning.
    """
    if omega <= 0.0:
        raise DomainError(f"omega = {omega} must be positive")
    if kappa_ext is None:
        kappa_ext = kappa / 2.0
    if kappa_ext <= 0.0:
        raise DomainError(f"kappa_ext = {kappa_ext} must be positive")
    c0 = cooperativity(g0, kappa, gamma)
    if c0 == 0.0:
        raise DomainError("g0 = 0 gives an infinite threshold")
    n_th = 1.0 / c0
    return n_th * CONSTANTS.hbar * omega * ((kappa / 2.0) ** 2 + detuning**2) / kappa_ext


def thermal_occupancy(omega_m: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at omega_m (rad/s) and T (K)."""
    if omega_m <= 0.0:
        raise DomainError(f"omega_m = {omega_m} must be positive")
    if temperature < 0.0:
        raise DomainError(f"temperature = {temperature} K must be >= 0")
    if temperature == 0.0:
        return 0.0
    x = CONSTANTS.hbar * omega_m / (CONSTANTS.k_B * temperature)
    if x > 700.0:
        # expm1 overflows near x = 709; there 1/expm1(x) = exp(-x) to
        # double precision, and exp underflows gracefully to 0
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def coherence_check(c0: float, n_photons: float, n_thermal: float) -> tuple[bool, float]:
    """Quantum-coherent drive against the thermal bath.

    Returns (C0 n_p > n_m, C0 n_p / n_m); the inequality is strict and
    the margin is inf for a drive against an empty bath.
    """
    if c0 < 0.0 or n_photons < 0.0 or n_thermal < 0.0:
        raise DomainError("C0, photon and phonon numbers must be >= 0")
    drive = c0 * n_photons
    if n_thermal == 0.0:
        margin = math.inf if drive > 0.0 else 0.0
    else:
        margin = drive / n_thermal
    return drive > n_thermal, margin


def sideband_resolved(omega_m: float, kappa: float) -> bool:
    """True in the resolved-sideband regime Omega > kappa (strict)."""
    if omega_m < 0.0 or kappa <= 0.0:
        raise DomainError("omega_m must be >= 0 and kappa positive")
    return omega_m > kappa


@dataclass(frozen=True)
class DesignReport:
    """One sweep point: solved quantities plus derived figures of merit.

    Angular-frequency fields are rad/s.  A failed point keeps its row
    with NaN numerics and the error kind in ``status``.  The capillary
    entry is advisory ("yes"/"no"/"unknown"): whether the slot fills at
    the configured film thickness.
    """

    width: float
    bc: str
    n_eff: float
    eta_slot: float
    m_opt: int
    m_acoustic: int
    omega_brillouin: float
    g0: float
    kappa: float
    q_acoustic: float
    gamma: float
    cooperativity: float
    p_threshold: float
    temperature: float
    n_thermal: float
    sideband_resolved: bool
    status: str
    capillary_filled: str = "unknown"

    def consistent(self, rtol: float = 1e-12) -> bool:
        """Recompute C0 from the stored rates and compare."""
        if self.status != "ok":
            return True
        expected = cooperativity(self.g0, self.kappa, self.gamma)
        return math.isclose(self.cooperativity, expected, rel_tol=rtol)

    @property
    def coherence_photons(self) -> float:
        """Intracavity photons needed to beat the bath: n_m / C0."""
        if self.cooperativity == 0.0:
            return math.inf
        return self.n_thermal / self.cooperativity
