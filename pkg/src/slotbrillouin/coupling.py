"""Optomechanical coupling between optical and acoustic slot modes.

The backward (counter-propagating) Brillouin process scatters a pump
whispering-gallery mode of azimuthal order m_opt into the
counter-propagating Stokes mode at order -m_opt, absorbing the momentum
difference 2 m_opt with an acoustic wave.  The acoustic frequency that
matches this wavevector is

    Omega_B = 2 pi * (2 c1 n_eff / lambda)

for sound speed c1 and pump effective index n_eff.

The vacuum coupling rate follows from the permittivity modulation of the
fluid by the zero-point pressure mode: with volumetric strain
strain_zp = p_zp p_hat / K,

    g0 = (omega / 2) (eps_fluid - 1) *
         [int_slot strain_zp |E|^2 dA] / [int eps_r |E|^2 dA]

where |E| is the full vector magnitude.  The reported g0 is the
magnitude of that expression.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .acoustic import AcousticMode
from .constants import TWO_PI
from .errors import DomainError, StateError, UnsupportedSchemeError
from .geometry import Mesh2D, Region
from .optical import OpticalMode, cell_intensity, energy_integral

DIRECTIONS = ("backward", "forward")


def brillouin_shift(n_eff: float, sound_speed: float, wavelength: float) -> float:
    """Backward-scattering Brillouin frequency 2 pi (2 c1 n_eff / lambda), rad/s."""
    if n_eff <= 0.0 or sound_speed <= 0.0 or wavelength <= 0.0:
        raise DomainError("n_eff, sound_speed and wavelength must be positive")
    return TWO_PI * 2.0 * sound_speed * n_eff / wavelength


@dataclass(frozen=True)
class PhaseMatchRecord:
    """Momentum bookkeeping for one scattering configuration.

    ``scheme`` is always "counter-modal" here: pump and Stokes occupy the
    same transverse mode with opposite azimuthal orders.  Intra- and
    inter-modal forward schemes are classifications only and never
    produced by this pipeline.
    """

    direction: str
    scheme: str
    m_opt: int
    m_acoustic: int
    omega_pump: float
    omega_stokes: float
    omega_brillouin: float

    def __post_init__(self):
        if self.omega_stokes != self.omega_pump - self.omega_brillouin:
            raise DomainError("omega_stokes must equal omega_pump - omega_brillouin")


def phase_match(
    m_opt: int,
    direction: str = "backward",
    omega_pump: float = 0.0,
    omega_brillouin: float = 0.0,
    kappa: float | None = None,
) -> PhaseMatchRecord:
    """Phase-matched acoustic order for a scattering direction.

    Backward scattering needs m_acoustic = 2 m_opt.  Forward scattering
    is out of scope and raises UnsupportedSchemeError.  When ``kappa`` is
    supplied, the counter-modal requirement Omega_B < kappa (pump and
    Stokes inside one optical linewidth) is enforced.
    """
    if direction not in DIRECTIONS:
        raise DomainError(f"direction = {direction!r} not in {DIRECTIONS}")
    if direction == "forward":
        raise UnsupportedSchemeError(
            "forward intra/inter-modal scattering is not modeled; only the "
            "backward counter-modal scheme is supported"
        )
    if m_opt < 1:
        raise DomainError(f"m_opt = {m_opt} must be >= 1")
    if kappa is not None and not omega_brillouin < kappa:
        raise DomainError(
            f"counter-modal scheme needs Omega_B < kappa, got "
            f"{omega_brillouin} >= {kappa}"
        )
    return PhaseMatchRecord(
        direction=direction,
        scheme="counter-modal",
        m_opt=m_opt,
        m_acoustic=2 * m_opt,
        omega_pump=omega_pump,
        omega_stokes=omega_pump - omega_brillouin,
        omega_brillouin=omega_brillouin,
    )


@dataclass(frozen=True)
class CouplingResult:
    """Vacuum coupling rate and the pieces it came from."""

    g0: float
    overlap: float
    eta_slot: float
    p_zp: float
    m_opt: int
    m_acoustic: int
    omega_brillouin: float

    def __post_init__(self):
        if self.g0 < 0.0:
            raise DomainError(f"g0 = {self.g0} must be >= 0")


def coupling_rate(
    optical: OpticalMode, acoustic: AcousticMode, mesh: Mesh2D
) -> CouplingResult:
    """Overlap-integral vacuum coupling rate g0 (rad/s).

    The acoustic strain field is interpolated onto the optical mesh's
    slot cell centers; both integrals use the same cell quadrature as the
    mode normalization.
    """
    if optical.mesh is not mesh and not (
        np.array_equal(optical.mesh.x_edges, mesh.x_edges)
        and np.array_equal(optical.mesh.y_edges, mesh.y_edges)
    ):
        raise DomainError("optical mode was solved on a different mesh")
    if not acoustic.normalized:
        raise StateError(
            "acoustic mode has no zero-point amplitude; run zero_point_normalize first"
        )

    slot_mask = mesh.region == int(Region.HELIUM_SLOT)
    if not slot_mask.any():
        raise DomainError("mesh has no slot region")
    slot_cols = np.where(slot_mask.any(axis=1))[0]
    slot_rows = np.where(slot_mask.any(axis=0))[0]
    x_lo = mesh.x_edges[slot_cols[0]]
    x_hi = mesh.x_edges[slot_cols[-1] + 1]
    width = x_hi - x_lo
    if abs(width - acoustic.slot_width) > 1e-9 * max(width, acoustic.slot_width):
        raise DomainError(
            f"acoustic mode solved for slot width {acoustic.slot_width} m but "
            f"mesh slot is {width} m"
        )

    interp = RegularGridInterpolator(
        (acoustic.x_centers, acoustic.y_centers),
        acoustic.strain_zp,
        bounds_error=False,
        fill_value=None,
    )
    xc = mesh.x_centers[slot_cols]
    yc = mesh.y_centers[slot_rows]
    pts = np.stack(np.meshgrid(xc, yc, indexing="ij"), axis=-1).reshape(-1, 2)
    strain = interp(pts).reshape(len(xc), len(yc))

    intensity = cell_intensity(optical)
    areas = mesh.cell_areas
    sub_mask = slot_mask[np.ix_(slot_cols, slot_rows)]
    numerator = float(
        (strain * intensity[np.ix_(slot_cols, slot_rows)] * areas[np.ix_(slot_cols, slot_rows)])[
            sub_mask
        ].sum()
    )
    denominator = energy_integral(optical)

    eps_fluid = float(mesh.eps_r[slot_mask].max())
    overlap = numerator / denominator
    g0 = abs(0.5 * optical.omega * (eps_fluid - 1.0) * overlap)

    slot_energy = float(
        (mesh.eps_r * intensity * areas)[slot_mask].sum()
    )
    eta_slot = slot_energy / denominator

    return CouplingResult(
        g0=g0,
        overlap=overlap,
        eta_slot=eta_slot,
        p_zp=acoustic.p_zp,
        m_opt=int(round(acoustic.m / 2.0)),
        m_acoustic=acoustic.m,
        omega_brillouin=acoustic.omega,
    )


def uniform_field_oracle(
    omega: float, eps_fluid: float, p_zp: float, bulk_modulus: float, eta_slot: float
) -> float:
    """Closed-form g0 estimate for a uniform acoustic mode (rad/s).

    Treats the strain as the constant p_zp / K across the slot, so the
    overlap integral collapses to the slot energy fraction:

        g0 ~ (omega / 2) (eps_fluid - 1) (p_zp / K) eta_slot

    Independent of the discretized overlap path; the full calculation
    must agree with this within a small factor for slot-confined modes.
    """
    if omega <= 0.0 or bulk_modulus <= 0.0:
        raise DomainError("omega and bulk modulus must be positive")
    if not 0.0 <= eta_slot <= 1.0:
        raise DomainError(f"eta_slot = {eta_slot} outside [0, 1]")
    return 0.5 * omega * (eps_fluid - 1.0) * (p_zp / bulk_modulus) * eta_slot
