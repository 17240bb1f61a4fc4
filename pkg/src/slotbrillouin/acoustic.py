"""Acoustic modes of the fluid column inside the slot.

An azimuthally traveling pressure wave p(x, y) e^{i(m phi - Omega t)} in
the slot obeys a scalar Helmholtz equation on the slot cross-section:

    (-laplacian_xy + k^2) p = (Omega / c)^2 p,      k = m / R_ac

with R_ac the slot centerline radius.  Slot walls and floor are rigid
silicon/silica (Neumann); the top is either sealed (Neumann) or an open
free surface (pressure-release Dirichlet).

The cross-section operator is assembled with cell-centered finite
differences on a uniform grid (mirror ghosts for Neumann, negated ghosts
for Dirichlet) and diagonalized densely, which is exact for the sealed
fundamental (uniform pressure) and second-order accurate otherwise.

Zero-point normalization scales the mode so its potential energy accounts
for half a quantum: integral of (1/2) K (p_zp p_hat / K)^2 over the slot
volume equals hbar Omega / 2, giving the pressure scale p_zp and the
volumetric strain field strain_zp = p_zp p_hat / K used by the coupling
integral.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .constants import CONSTANTS, TWO_PI
from .errors import DomainError
from .fieldio import dump_fields, load_fields
from .geometry import TOP_BOUNDARIES, SlotRingGeometry
from .materials import Material

DEFAULT_RESOLUTION = (16, 48)

# The sealed fundamental must come out uniform to this tolerance.
UNIFORMITY_TOL = 1e-6


@dataclass(eq=False)
class AcousticMode:
    """One transverse acoustic mode of the slot column.

    ``p_hat`` is the dimensionless mode shape on cell centers, scaled to
    max |p_hat| = 1.  ``p_zp`` and ``strain_zp`` stay None until
    :func:`zero_point_normalize` runs.
    """

    bc: str
    m: int
    k: float
    omega: float
    mu: float
    p_hat: np.ndarray
    x_centers: np.ndarray
    y_centers: np.ndarray
    cell_area: float
    slot_width: float
    slot_height: float
    acoustic_radius: float
    sound_speed: float
    propagating: bool
    p_zp: float | None = None
    strain_zp: np.ndarray | None = field(default=None, repr=False)

    @property
    def normalized(self) -> bool:
        return self.p_zp is not None

    def shape_integral(self) -> float:
        """Volume integral of p_hat^2 over the slot torus (m^3)."""
        return float((self.p_hat**2).sum()) * self.cell_area * TWO_PI * self.acoustic_radius


def _laplacian_1d(n: int, spacing: float, hi_dirichlet: bool) -> sp.csr_matrix:
    """Cell-centered 1D -d2/dt2 with Neumann at the low end and either
    Neumann or Dirichlet at the high end."""
    main = np.full(n, 2.0)
    main[0] = 1.0
    main[-1] = 3.0 if hi_dirichlet else 1.0
    off = np.full(n - 1, -1.0)
    return sp.diags([off, main, off], offsets=(-1, 0, 1)).tocsr() / spacing**2


def solve_acoustic_modes(
    geometry: SlotRingGeometry,
    fluid: Material,
    m: int,
    bc: str,
    count: int = 3,
    resolution: tuple[int, int] = DEFAULT_RESOLUTION,
) -> list[AcousticMode]:
    """Lowest ``count`` transverse modes at azimuthal order ``m``.

    Modes come out sorted by frequency.  ``m = 0`` with a sealed top
    returns the zero-frequency uniform mode flagged non-propagating.
    """
    if bc not in TOP_BOUNDARIES:
        raise DomainError(f"bc = {bc!r} not in {TOP_BOUNDARIES}")
    if m < 0:
        raise DomainError(f"azimuthal order m = {m} must be >= 0")
    if not fluid.is_fluid:
        raise DomainError(f"material {fluid.name!r} has no acoustic properties")
    nx, ny = resolution
    if nx < 4 or ny < 4:
        raise DomainError(f"acoustic resolution {resolution} too coarse")

    w = geometry.slot_width
    h = geometry.slot_height
    dx = w / nx
    dy = h / ny
    lap = sp.kron(_laplacian_1d(nx, dx, False), sp.eye(ny)) + sp.kron(
        sp.eye(nx), _laplacian_1d(ny, dy, bc == "open")
    )
    mus, vecs = scipy.linalg.eigh(lap.toarray(), subset_by_index=[0, count - 1])

    k = m / geometry.acoustic_radius
    c1 = fluid.c
    x_centers = -w / 2.0 + dx * (np.arange(nx) + 0.5)
    y_centers = dy * (np.arange(ny) + 0.5)

    # eigh returns the zero eigenvalue of the all-Neumann problem with
    # roundoff of order eps * ||L||; anything below that floor is zero
    mu_floor = 1e-12 * (4.0 / dx**2 + 4.0 / dy**2)
    modes = []
    for rank in range(len(mus)):
        mu = float(mus[rank])
        mu = 0.0 if mu < mu_floor else mu
        p = vecs[:, rank].reshape(nx, ny)
        peak = p.ravel()[np.argmax(np.abs(p))]
        p = p / peak  # max |p_hat| = 1 with deterministic sign
        omega = c1 * math.sqrt(k**2 + mu)
        modes.append(
            AcousticMode(
                bc=bc,
                m=m,
                k=k,
                omega=omega,
                mu=mu,
                p_hat=p,
                x_centers=x_centers,
                y_centers=y_centers,
                cell_area=dx * dy,
                slot_width=w,
                slot_height=h,
                acoustic_radius=geometry.acoustic_radius,
                sound_speed=c1,
                propagating=omega > 0.0,
            )
        )
    return modes


def solve_acoustic_mode(
    geometry: SlotRingGeometry,
    fluid: Material,
    m: int,
    bc: str,
    resolution: tuple[int, int] = DEFAULT_RESOLUTION,
) -> AcousticMode:
    """Fundamental transverse mode at azimuthal order ``m``."""
    return solve_acoustic_modes(geometry, fluid, m, bc, count=1, resolution=resolution)[0]


def zero_point_normalize(mode: AcousticMode, bulk_modulus: float) -> float:
    """Scale the mode to zero-point amplitude.

    Sets ``mode.p_zp`` (Pa) and ``mode.strain_zp`` and returns p_zp.  For
    the sealed uniform fundamental this reduces to the textbook
    sqrt(hbar Omega K / V) with V the slot torus volume.
    """
    if bulk_modulus <= 0.0:
        raise DomainError(f"bulk modulus {bulk_modulus} must be positive")
    shape = mode.shape_integral()
    if shape <= 0.0:
        raise DomainError("mode shape integral vanished; mode not solved on slot")
    p_zp = math.sqrt(CONSTANTS.hbar * mode.omega * bulk_modulus / shape)
    mode.p_zp = p_zp
    mode.strain_zp = p_zp * mode.p_hat / bulk_modulus
    return p_zp


def acoustic_linewidth(omega: float, quality_factor: float) -> float:
    """Energy decay rate Gamma = Omega / Q (rad/s)."""
    if quality_factor <= 0.0:
        raise DomainError(f"quality factor {quality_factor} must be positive")
    if omega < 0.0:
        raise DomainError(f"omega = {omega} must be >= 0")
    return omega / quality_factor


def rectangle_mode_frequency(
    geometry: SlotRingGeometry, fluid: Material, m: int, bc: str
) -> float:
    """Closed-form fundamental frequency for the rectangular slot (rad/s).

    Sealed: Omega = c k.  Open: Omega = c sqrt(k^2 + (pi / 2h)^2).  Used
    as the analytic cross-check for the finite-difference path.
    """
    if bc not in TOP_BOUNDARIES:
        raise DomainError(f"bc = {bc!r} not in {TOP_BOUNDARIES}")
    k = m / geometry.acoustic_radius
    if bc == "sealed":
        return fluid.c * k
    return fluid.c * math.sqrt(k**2 + (math.pi / (2.0 * geometry.slot_height)) ** 2)


def dump_acoustic_mode(mode: AcousticMode, path) -> None:
    """Write the mode in the shared plain-text field format."""
    meta = {
        "bc": mode.bc,
        "m": mode.m,
        "k": mode.k,
        "omega": mode.omega,
        "slot_width": mode.slot_width,
        "slot_height": mode.slot_height,
        "acoustic_radius": mode.acoustic_radius,
    }
    if mode.p_zp is not None:
        meta["p_zp"] = mode.p_zp
    dump_fields(
        path,
        kind="acoustic-mode",
        meta=meta,
        axes={"x": mode.x_centers, "y": mode.y_centers},
        arrays={"p_hat": mode.p_hat},
    )


def load_acoustic_mode(path):
    """Read an acoustic dump; returns (meta, axes, arrays)."""
    kind, meta, axes, arrays = load_fields(path)
    if kind != "acoustic-mode":
        raise DomainError(f"{path}: expected an acoustic-mode dump, got {kind!r}")
    return meta, axes, arrays
