"""Capillary filling energetics for the fluid slot.

A van der Waals film of thickness d coats the slot walls; the slot
fills completely when doing so lowers the total energy.  Per unit
length along the slot the balance has two pieces:

* surface: filling trades two film-vapor wall interfaces of height
  (h - d) for one top meniscus of width w, costing
  sigma * (w - 2 (h - d));
* van der Waals: the added liquid sits farther than d from any wall,
  where the wall attraction ~ alpha / z^3 no longer pays for it, costing
  alpha * integral of z^-3 over the region {z > d} of the cross
  section, with z the distance to the nearest wall (two side walls
  plus the floor; the top is open).

The integral has a closed form, assembled in :func:`_vdw_integral` and
checked in the tests against direct numerical quadrature.  The energy
difference is +infinity as d -> 0 and negative for a tall narrow slot
once d is large enough, so there is a critical film thickness below
which the slot stays empty.
"""

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError
from .geometry import SlotRingGeometry

#: Transition-search bisection tolerance (m).
_ROOT_XTOL = 1e-11

#: Points in the coarse sign scan that brackets the root.
_SCAN_POINTS = 64


@dataclass(frozen=True)
class CapillaryModel:
    """Film energetics inputs.

    surface_tension : liquid-vapor surface tension (N/m).
    vdw_coefficient : wall attraction strength alpha in E = alpha / z^3
        per unit area (J, i.e. J m^3 / m^3 in the integral below).
    """

    surface_tension: float = 3.75e-4
    vdw_coefficient: float = 3.8e-22

    def __post_init__(self) -> None:
        if self.surface_tension <= 0.0:
            raise DomainError(f"surface_tension = {self.surface_tension} must be positive")
        if self.vdw_coefficient <= 0.0:
            raise DomainError(f"vdw_coefficient = {self.vdw_coefficient} must be positive")


@dataclass(frozen=True)
class FillResult:
    """Outcome of the transition search.

    status is one of "transition" (sign change found,
    critical_thickness holds the root), "always-filled" or
    "never-filled" (no sign change in the searched range;
    critical_thickness is NaN).
    """

    status: str
    critical_thickness: float


def _vdw_integral(half_width: float, height: float, d: float) -> float:
    """Closed form of the z^-3 integral over {z > d} (units 1/m).

    z = min(distance to nearer side wall, distance to floor).  By
    symmetry integrate the half cross section u in (d, a], y in (d, h]
    of min(u, y)^-3 and double, with a the half width.
    """
    a = half_width
    h = height
    # Inner edge of the u-range where the diagonal z = u still matters.
    b = min(a, h)
    j = (
        (b - d) / (2.0 * d**2)
        - 1.5 * (1.0 / d - 1.0 / b)
        + (h / 2.0) * (1.0 / d**2 - 1.0 / b**2)
    )
    if a > h:
        # Wide shallow slot: for u in (h, a] the floor is always nearer.
        j += (a - h) * 0.5 * (1.0 / d**2 - 1.0 / h**2)
    return 2.0 * j


def fill_energy_delta(
    geometry: SlotRingGeometry,
    film_thickness: float,
    model: CapillaryModel | None = None,
) -> float:
    """Energy change per unit slot length on filling (J/m).

    Negative means the filled slot is favorable at this film thickness.
    film_thickness must be positive and smaller than both the half
    width and the depth, else the films have already merged and the
    two-state comparison is meaningless.
    """
    if model is None:
        model = CapillaryModel()
    w = geometry.slot_width
    h = geometry.slot_height
    d_max = min(w / 2.0, h)
    if not 0.0 < film_thickness < d_max:
        raise DomainError(
            f"film_thickness = {film_thickness} m must be in (0, {d_max}) m "
            "for this slot"
        )
    surface = model.surface_tension * (w - 2.0 * (h - film_thickness))
    vdw = model.vdw_coefficient * _vdw_integral(w / 2.0, h, film_thickness)
    return surface + vdw


def slot_fills(
    geometry: SlotRingGeometry,
    film_thickness: float,
    model: CapillaryModel | None = None,
) -> bool:
    """True when filling lowers the energy at this film thickness."""
    return fill_energy_delta(geometry, film_thickness, model) < 0.0


def fill_transition_thickness(
    geometry: SlotRingGeometry,
    model: CapillaryModel | None = None,
    lower: float = 1e-10,
    upper: float | None = None,
) -> FillResult:
    """Locate the film thickness where the filling energy changes sign.

    Scans [lower, upper] on a log grid for a sign change, then bisects
    the bracketing pair.  upper defaults to 95% of the largest
    admissible thickness for the slot.  When the energy keeps one sign
    across the whole range the result reports "always-filled" or
    "never-filled" instead of a root.
    """
    if model is None:
        model = CapillaryModel()
    d_max = min(geometry.slot_width / 2.0, geometry.slot_height)
    if upper is None:
        upper = 0.95 * d_max
    if not 0.0 < lower < upper < d_max:
        raise DomainError(
            f"search range ({lower}, {upper}) m must be increasing and "
            f"inside (0, {d_max}) m"
        )

    def delta(d: float) -> float:
        return fill_energy_delta(geometry, d, model)

    grid = [
        lower * (upper / lower) ** (i / (_SCAN_POINTS - 1))
        for i in range(_SCAN_POINTS)
    ]
    values = [delta(d) for d in grid]
    for d_lo, d_hi, v_lo, v_hi in zip(grid, grid[1:], values, values[1:]):
        if v_lo == 0.0:
            return FillResult("transition", d_lo)
        if v_lo * v_hi < 0.0:
            root = brentq(delta, d_lo, d_hi, xtol=_ROOT_XTOL)
            return FillResult("transition", float(root))
    if values[-1] == 0.0:
        return FillResult("transition", grid[-1])
    status = "always-filled" if values[0] < 0.0 else "never-filled"
    return FillResult(status, math.nan)
