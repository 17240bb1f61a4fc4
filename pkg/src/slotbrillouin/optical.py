"""Full-vector optical waveguide eigenmode solver.

Frequency-domain finite differences for the transverse electric field
(Ex, Ey) of translation-invariant modes E(x, y) e^{i beta z}.  Eliminating
Ez and Hz from Maxwell's equations gives the coupled operator

    Pxx Ex + Pxy Ey = beta^2 Ex
    Pyx Ex + Pyy Ey = beta^2 Ey

with

    Pxx Ex = d/dx[(1/ez) d(ex Ex)/dx] + d2Ex/dy2 + k0^2 ex Ex
    Pxy Ey = d/dx[(1/ez) d(ey Ey)/dy - dEy/dy]
    Pyx Ex = d/dy[(1/ez) d(ex Ex)/dx - dEx/dx]
    Pyy Ey = d/dy[(1/ez) d(ey Ey)/dy] + d2Ey/dx2 + k0^2 ey Ey

Unknowns sit on interior mesh vertices; the domain wall is a perfect
electric conductor, enforced by zeroing all boundary-vertex components
(harmless behind the padding, which keeps guided fields at the wall below
1e-8 of their peak).  The permittivities ex, ey, ez seen by each vertex
are averaged over the four touching cells: harmonic along the component's
own axis (the direction in which the normal D-field is continuous),
arithmetic along the other (tangential E continuous).  In uniform regions
the cross blocks vanish identically and the scheme reduces to the scalar
five-point stencil.

The eigenproblem is solved with shift-invert restarted Arnoldi around a
user-supplied effective-index guess, using a fixed-seed start vector so
repeated runs are bit-identical.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import CONSTANTS, TWO_PI
from .errors import ConvergenceError, DomainError
from .fieldio import dump_fields, load_fields
from .geometry import Mesh2D, Region

_EIGS_SEED = 7
_EIGS_TOL = 1e-10
RESIDUAL_LIMIT = 1e-8


@dataclass(frozen=True)
class OpticalOperator:
    """Assembled finite-difference operator for one mesh and wavelength."""

    matrix: sp.csr_matrix
    mesh: Mesh2D
    wavelength: float
    k0: float
    n_interior: int
    eps_xv: np.ndarray
    eps_yv: np.ndarray
    eps_zv: np.ndarray

    @property
    def ndof(self) -> int:
        return 2 * self.n_interior


@dataclass(frozen=True)
class OpticalMode:
    """One guided eigenmode on the mesh vertex grid.

    Field arrays have shape (nx + 1, ny + 1) with zeros on the boundary
    ring.  Ex and Ey are real up to dtype; Ez is the derived longitudinal
    component, 90 degrees out of phase.  Fields are scaled so the discrete
    energy integral of eps_r |E|^2 over the domain equals 1.
    """

    mesh: Mesh2D
    wavelength: float
    n_eff: float
    Ex: np.ndarray
    Ey: np.ndarray
    Ez: np.ndarray
    polarization: str
    residual: float

    def __post_init__(self):
        if not self.n_eff > 0.0:
            raise DomainError(f"n_eff = {self.n_eff} must be positive")

    @property
    def beta(self) -> float:
        """Propagation constant (rad/m)."""
        return self.n_eff * TWO_PI / self.wavelength

    @property
    def omega(self) -> float:
        """Optical angular frequency (rad/s)."""
        return TWO_PI * CONSTANTS.c0 / self.wavelength


def _central_weights(a, b):
    """Three-point first-derivative weights for spacings a (left), b (right)."""
    return -b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))


def _vertex_eps(mesh: Mesh2D):
    """Averaged permittivities at interior vertices, shape (nx-1, ny-1)."""
    e = mesh.eps_r
    wxm = mesh.dx[:-1][:, None]
    wxp = mesh.dx[1:][:, None]
    wym = mesh.dy[:-1][None, :]
    wyp = mesh.dy[1:][None, :]
    e_mm = e[:-1, :-1]
    e_pm = e[1:, :-1]
    e_mp = e[:-1, 1:]
    e_pp = e[1:, 1:]

    harm_lo = (wxm + wxp) / (wxm / e_mm + wxp / e_pm)
    harm_hi = (wxm + wxp) / (wxm / e_mp + wxp / e_pp)
    eps_xv = (harm_lo * wym + harm_hi * wyp) / (wym + wyp)

    vert_lo = (wym + wyp) / (wym / e_mm + wyp / e_mp)
    vert_hi = (wym + wyp) / (wym / e_pm + wyp / e_pp)
    eps_yv = (vert_lo * wxm + vert_hi * wxp) / (wxm + wxp)

    eps_zv = (e_mm * wxm * wym + e_pm * wxp * wym + e_mp * wxm * wyp + e_pp * wxp * wyp) / (
        (wxm + wxp) * (wym + wyp)
    )
    return eps_xv, eps_yv, eps_zv


def assemble_operator(mesh: Mesh2D, wavelength: float) -> OpticalOperator:
    """Build the sparse eigenvalue operator for ``mesh`` at ``wavelength``.

    The matrix is real with a structurally symmetric sparsity pattern and
    has 2 x (interior vertex count) rows: Ex unknowns first, then Ey.
    """
    if wavelength <= 0.0:
        raise DomainError(f"wavelength = {wavelength} m must be positive")
    nx, ny = mesh.nx, mesh.ny
    if nx < 3 or ny < 3:
        raise DomainError("mesh too small: need at least 3 cells along each axis")
    k0 = TWO_PI / wavelength
    dx, dy = mesh.dx, mesh.dy
    ni, nj = nx - 1, ny - 1
    n_int = ni * nj

    eps_xv, eps_yv, eps_zv = _vertex_eps(mesh)

    # Midline permittivities for the conservative flux terms: eps_z sampled
    # between vertex columns (mx, per cell column at each interior gridline)
    # and between vertex rows (my).
    e = mesh.eps_r
    mx = (e[:, :-1] * dy[:-1] + e[:, 1:] * dy[1:]) / (dy[:-1] + dy[1:])  # (nx, nj)
    my = (e[:-1, :] * dx[:-1, None] + e[1:, :] * dx[1:, None]) / (
        dx[:-1, None] + dx[1:, None]
    )  # (ni, ny)

    dxm = dx[:-1][:, None]  # left spacing at vertex i
    dxp = dx[1:][:, None]
    dym = dy[:-1][None, :]
    dyp = dy[1:][None, :]
    ddx = 0.5 * (dxm + dxp)
    ddy = 0.5 * (dym + dyp)

    iv, jv = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    row_ex = iv * nj + jv
    row_ey = row_ex + n_int

    rows, cols, vals = [], [], []

    def put(r, c, v, mask=None):
        if mask is None:
            rows.append(r.ravel())
            cols.append(c.ravel())
            vals.append(np.broadcast_to(v, r.shape).ravel())
        else:
            rows.append(r[mask])
            cols.append(c[mask])
            vals.append(np.broadcast_to(v, r.shape)[mask])

    in_w = iv >= 1
    in_e = iv <= ni - 2
    in_s = jv >= 1
    in_n = jv <= nj - 2

    def shift(arr, di, dj):
        """arr sampled at (i+di, j+dj); out-of-range entries are garbage and
        must be masked by the caller."""
        return np.roll(np.roll(arr, -di, axis=0), -dj, axis=1)

    # --- Ex row: Pxx -------------------------------------------------------
    mxm = mx[:ni, :]  # mx at cell column i-1 (vertex index space)
    mxp = mx[1:, :]
    coef_w = shift(eps_xv, -1, 0) / (dxm * mxm * ddx)
    coef_e = shift(eps_xv, 1, 0) / (dxp * mxp * ddx)
    coef_c = -eps_xv * (1.0 / (dxp * mxp) + 1.0 / (dxm * mxm)) / ddx
    put(row_ex, shift(row_ex, -1, 0), coef_w, in_w)
    put(row_ex, shift(row_ex, 1, 0), coef_e, in_e)
    put(row_ex, row_ex, coef_c)
    # d2/dy2 and k0^2 terms
    put(row_ex, shift(row_ex, 0, -1), 1.0 / (dym * ddy), in_s)
    put(row_ex, shift(row_ex, 0, 1), 1.0 / (dyp * ddy), in_n)
    put(row_ex, row_ex, -(1.0 / dym + 1.0 / dyp) / ddy + k0**2 * eps_xv)

    # --- Ey row: Pyy -------------------------------------------------------
    mym = my[:, :nj]
    myp = my[:, 1:]
    coef_s = shift(eps_yv, 0, -1) / (dym * mym * ddy)
    coef_n = shift(eps_yv, 0, 1) / (dyp * myp * ddy)
    coef_c = -eps_yv * (1.0 / (dyp * myp) + 1.0 / (dym * mym)) / ddy
    put(row_ey, shift(row_ey, 0, -1), coef_s, in_s)
    put(row_ey, shift(row_ey, 0, 1), coef_n, in_n)
    put(row_ey, row_ey, coef_c)
    put(row_ey, shift(row_ey, -1, 0), 1.0 / (dxm * ddx), in_w)
    put(row_ey, shift(row_ey, 1, 0), 1.0 / (dxp * ddx), in_e)
    put(row_ey, row_ey, -(1.0 / dxm + 1.0 / dxp) / ddx + k0**2 * eps_yv)

    # --- Cross blocks ------------------------------------------------------
    # Pxy: d/dx of G, where G = (1/ez) d(ey Ey)/dy - dEy/dy vanishes in
    # uniform regions and on the domain wall.  Central differences in both
    # steps give a nine-point coupling.
    cxm, cx0, cxp = _central_weights(dxm, dxp)
    cym, cy0, cyp = _central_weights(dym, dyp)
    x_weights = {-1: cxm, 0: cx0, 1: cxp}
    y_weights = {-1: cym, 0: cy0, 1: cyp}
    x_valid = {-1: in_w, 0: np.ones_like(in_w), 1: in_e}
    y_valid = {-1: in_s, 0: np.ones_like(in_s), 1: in_n}

    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            mask = x_valid[di] & y_valid[dj]
            ratio = shift(eps_yv, di, dj) / shift(eps_zv, di, 0) - 1.0
            coef = x_weights[di] * y_weights[dj] * ratio
            put(row_ex, shift(row_ey, di, dj), coef, mask)

    # Pyx: d/dy of H, H = (1/ez) d(ex Ex)/dx - dEx/dx.
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            mask = x_valid[di] & y_valid[dj]
            ratio = shift(eps_xv, di, dj) / shift(eps_zv, 0, dj) - 1.0
            coef = y_weights[dj] * x_weights[di] * ratio
            put(row_ey, shift(row_ex, di, dj), coef, mask)

    matrix = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(2 * n_int, 2 * n_int),
    ).tocsr()
    return OpticalOperator(
        matrix=matrix,
        mesh=mesh,
        wavelength=wavelength,
        k0=k0,
        n_interior=n_int,
        eps_xv=eps_xv,
        eps_yv=eps_yv,
        eps_zv=eps_zv,
    )


def _index_bounds(mesh: Mesh2D):
    """(guiding index, highest non-guiding index) from the mesh itself."""
    n_hi = math.sqrt(float(mesh.eps_r.max()))
    not_core = mesh.eps_r[mesh.region != int(Region.SILICON)]
    if not_core.size:
        n_lo = math.sqrt(float(not_core.max()))
    else:
        n_lo = 1.0
    return n_hi, n_lo


def _derive_ez(op: OpticalOperator, ex_full, ey_full, beta):
    """Longitudinal field from the divergence condition div(eps E) = 0."""
    mesh = op.mesh
    dx, dy = mesh.dx, mesh.dy
    dxm = dx[:-1][:, None]
    dxp = dx[1:][:, None]
    dym = dy[:-1][None, :]
    dyp = dy[1:][None, :]
    cxm, cx0, cxp = _central_weights(dxm, dxp)
    cym, cy0, cyp = _central_weights(dym, dyp)

    fx = np.zeros_like(ex_full)
    fx[1:-1, 1:-1] = op.eps_xv * ex_full[1:-1, 1:-1]
    fy = np.zeros_like(ey_full)
    fy[1:-1, 1:-1] = op.eps_yv * ey_full[1:-1, 1:-1]

    div = (
        cxm * fx[:-2, 1:-1]
        + cx0 * fx[1:-1, 1:-1]
        + cxp * fx[2:, 1:-1]
        + cym * fy[1:-1, :-2]
        + cy0 * fy[1:-1, 1:-1]
        + cyp * fy[1:-1, 2:]
    )
    ez = np.zeros(ex_full.shape, dtype=complex)
    ez[1:-1, 1:-1] = 1j * div / (beta * op.eps_zv)
    return ez


def cell_intensity(mode: OpticalMode) -> np.ndarray:
    """|E|^2 averaged over each cell's four corner vertices, shape (nx, ny)."""
    mag = (np.abs(mode.Ex) ** 2 + np.abs(mode.Ey) ** 2 + np.abs(mode.Ez) ** 2).real
    return 0.25 * (mag[:-1, :-1] + mag[1:, :-1] + mag[:-1, 1:] + mag[1:, 1:])


def energy_integral(mode: OpticalMode) -> float:
    """Discrete integral of eps_r |E|^2 over the whole domain."""
    mesh = mode.mesh
    return float((mesh.eps_r * cell_intensity(mode) * mesh.cell_areas).sum())


def slot_energy_fraction(mode: OpticalMode) -> float:
    """Fraction of the eps_r |E|^2 integral inside the fluid slot."""
    mesh = mode.mesh
    contrib = mesh.eps_r * cell_intensity(mode) * mesh.cell_areas
    total = float(contrib.sum())
    in_slot = float(contrib[mesh.region == int(Region.HELIUM_SLOT)].sum())
    return in_slot / total


def solve_modes(op: OpticalOperator, n_eff_guess: float, count: int = 4) -> list[OpticalMode]:
    """Guided modes with effective index nearest ``n_eff_guess``.

    Returns up to ``count`` modes sorted by descending n_eff.  Raises
    ConvergenceError when no candidate survives the physical-range and
    residual filters.
    """
    n_hi, n_lo = _index_bounds(op.mesh)
    if not 1.0 <= n_eff_guess <= n_hi:
        raise DomainError(
            f"n_eff_guess = {n_eff_guess} outside [1, {n_hi:.4f}] for this mesh"
        )
    if count < 1:
        raise DomainError(f"count = {count} must be >= 1")

    a = op.matrix
    sigma = (n_eff_guess * op.k0) ** 2
    k_req = min(count + 6, op.ndof - 2)
    v0 = np.random.default_rng(_EIGS_SEED).standard_normal(op.ndof)
    try:
        vals, vecs = spla.eigs(a, k=k_req, sigma=sigma, v0=v0, tol=_EIGS_TOL)
    except spla.ArpackNoConvergence as exc:
        vals, vecs = exc.eigenvalues, exc.eigenvectors
        if vals is None or len(vals) == 0:
            raise ConvergenceError("Arnoldi iteration found no eigenpairs") from exc

    norm_a = float(np.abs(a).sum(axis=0).max())
    candidates = []
    for idx in range(len(vals)):
        lam = vals[idx]
        if abs(lam.imag) > 1e-8 * max(abs(lam.real), 1.0):
            continue
        beta_sq = lam.real
        if beta_sq <= 0.0:
            continue
        n_eff = math.sqrt(beta_sq) / op.k0
        if not n_lo < n_eff < n_hi:
            continue
        vec = vecs[:, idx]
        resid = float(np.linalg.norm(a @ vec - lam * vec) / (norm_a * np.linalg.norm(vec)))
        candidates.append((n_eff, vec, resid))

    if not candidates:
        raise ConvergenceError(
            f"no guided mode with n_eff in ({n_lo:.4f}, {n_hi:.4f}) near "
            f"guess {n_eff_guess}",
            residuals=[],
        )
    bad = [r for (_, _, r) in candidates if r > RESIDUAL_LIMIT]
    if bad:
        raise ConvergenceError(
            f"{len(bad)} candidate mode(s) exceed residual limit {RESIDUAL_LIMIT}",
            residuals=bad,
        )

    candidates.sort(key=lambda item: abs(item[0] - n_eff_guess))
    picked = sorted(candidates[:count], key=lambda item: -item[0])

    mesh = op.mesh
    ni, nj = mesh.nx - 1, mesh.ny - 1
    modes = []
    for n_eff, vec, resid in picked:
        vec = np.real(vec)
        ex = np.zeros((mesh.nx + 1, mesh.ny + 1))
        ey = np.zeros_like(ex)
        ex[1:-1, 1:-1] = vec[: op.n_interior].reshape(ni, nj)
        ey[1:-1, 1:-1] = vec[op.n_interior :].reshape(ni, nj)
        beta = n_eff * op.k0
        ez = _derive_ez(op, ex, ey, beta)

        weights = mesh.eps_r * mesh.cell_areas
        avg = lambda f: 0.25 * (f[:-1, :-1] + f[1:, :-1] + f[:-1, 1:] + f[1:, 1:])
        power_x = float((weights * avg(ex**2)).sum())
        power_y = float((weights * avg(ey**2)).sum())
        polarization = "TE-like" if power_x >= power_y else "TM-like"

        dominant = ex if polarization == "TE-like" else ey
        peak = dominant.ravel()[np.argmax(np.abs(dominant))]
        sign = 1.0 if peak >= 0.0 else -1.0
        total = float(
            (weights * avg(ex**2 + ey**2 + np.abs(ez) ** 2)).sum()
        )
        scale = sign / math.sqrt(total)

        modes.append(
            OpticalMode(
                mesh=mesh,
                wavelength=op.wavelength,
                n_eff=n_eff,
                Ex=(ex * scale).astype(complex),
                Ey=(ey * scale).astype(complex),
                Ez=ez * scale,
                polarization=polarization,
                residual=resid,
            )
        )
    return modes


def slot_wall_field_ratio(mode: OpticalMode) -> float:
    """Ratio of |Ex| just inside the slot fluid to just inside the rail.

    Evaluated at mid-height of the slot by linear extrapolation onto the
    slot wall from the two nearest vertices on each side, which removes
    the first-order bias from sampling a finite distance into each
    material.  For the fundamental TE-like mode this approximates the
    permittivity contrast eps_rail / eps_fill.
    """
    mesh = mode.mesh
    slot_cols = np.where(np.any(mesh.region == int(Region.HELIUM_SLOT), axis=1))[0]
    if slot_cols.size == 0:
        raise DomainError("mesh has no slot region")
    wall = slot_cols[-1] + 1  # vertex index of the fluid/rail interface
    slot_rows = np.where(mesh.region[slot_cols[0]] == int(Region.HELIUM_SLOT))[0]
    j = slot_rows[len(slot_rows) // 2]  # a vertex row at slot mid-height

    x = mesh.x_edges
    ex = np.abs(mode.Ex[:, j])

    def extrapolate(i1, i2):
        x1, x2 = x[i1], x[i2]
        f1, f2 = ex[i1], ex[i2]
        return f1 + (f1 - f2) * (x[wall] - x1) / (x1 - x2)

    inside_fluid = extrapolate(wall - 1, wall - 2)
    inside_rail = extrapolate(wall + 1, wall + 2)
    return float(inside_fluid / inside_rail)


def resonance_order(n_eff: float, radius: float, wavelength: float):
    """Azimuthal order of a whispering-gallery resonance.

    Returns (exact value 2 pi R n_eff / lambda, nearest integer).
    """
    if n_eff <= 0.0 or radius <= 0.0 or wavelength <= 0.0:
        raise DomainError("n_eff, radius and wavelength must be positive")
    value = TWO_PI * radius * n_eff / wavelength
    return value, int(round(value))


def implied_index(order: int, radius: float, wavelength: float) -> float:
    """Effective index implied by an integer azimuthal order."""
    return order * wavelength / (TWO_PI * radius)


def check_resonance_order(order: int, radius: float, wavelength: float, n_max: float = 3.48) -> float:
    """Warn when an azimuthal order is inconsistent with any guided index.

    Returns the implied index either way; emits a UserWarning when it
    falls outside [1, n_max], which catches transcription errors in
    externally supplied orders.
    """
    n_implied = implied_index(order, radius, wavelength)
    if not 1.0 <= n_implied <= n_max:
        warnings.warn(
            f"azimuthal order {order} implies n_eff = {n_implied:.3f}, outside "
            f"[1, {n_max}] for radius {radius} m at wavelength {wavelength} m",
            UserWarning,
            stacklevel=2,
        )
    return n_implied


def dump_mode(mode: OpticalMode, path) -> None:
    """Write the mode to a plain-text field dump (bit-exact round trip)."""
    dump_fields(
        path,
        kind="optical-mode",
        meta={
            "wavelength": mode.wavelength,
            "n_eff": mode.n_eff,
            "polarization": mode.polarization,
            "residual": mode.residual,
        },
        axes={"x": mode.mesh.x_edges, "y": mode.mesh.y_edges},
        arrays={"Ex": mode.Ex, "Ey": mode.Ey, "Ez": mode.Ez},
    )


def load_mode(path):
    """Read a mode dump; returns (meta, axes, arrays)."""
    kind, meta, axes, arrays = load_fields(path)
    if kind != "optical-mode":
        raise DomainError(f"{path}: expected an optical-mode dump, got {kind!r}")
    return meta, axes, arrays
