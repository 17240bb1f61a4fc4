"""Slot-width sweep: solve, couple, tabulate, plot.

One sweep point is (slot width, top boundary, acoustic Q).  The optical
problem does not see the top boundary, so each width solves optics once
and reuses the mode for every boundary condition; Q only rescales the
derived rates.  Failures are contained per point: the row stays in the
output with NaN numerics and a short status word, so a long sweep never
dies on one bad geometry.

CSV rows carry ordinary frequencies (Hz); rad/s is internal only.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from .acoustic import acoustic_linewidth, solve_acoustic_mode, zero_point_normalize
from .capillary import slot_fills
from .config import SweepConfig
from .constants import CONSTANTS, TWO_PI, angular_to_hz, hz_to_angular
from .coupling import coupling_rate, phase_match
from .errors import (
    ConvergenceError,
    DomainError,
    MeshBudgetError,
    SlotBrillouinError,
    UnsupportedSchemeError,
)
from .geometry import build_mesh
from .materials import builtin_material
from .metrics import (
    DesignReport,
    cooperativity,
    lasing_threshold,
    sideband_resolved,
    thermal_occupancy,
)
from .optical import (
    assemble_operator,
    resonance_order,
    slot_energy_fraction,
    solve_modes,
)

#: Column order is a stable contract for downstream tooling.
CSV_HEADER = (
    "width_m, bc, n_eff, eta_slot, m_opt, m_ac, omega_B_Hz, g0_Hz, kappa_Hz, "
    "Q_ac, Gamma_Hz, C0, P_th_W, T_K, n_m, sideband_resolved, status"
)

_CSV_COMMENT = "# slotbrillouin sweep v1"

_STATUS_BY_ERROR = (
    (MeshBudgetError, "mesh-budget"),
    (ConvergenceError, "no-convergence"),
    (UnsupportedSchemeError, "unsupported"),
    (DomainError, "domain"),
)


def _status_for(err: SlotBrillouinError) -> str:
    for klass, word in _STATUS_BY_ERROR:
        if isinstance(err, klass):
            return word
    return "error"


def _capillary_advisory(config: SweepConfig, width: float) -> str:
    """"yes"/"no" when the filling model applies, else "unknown"."""
    try:
        geometry = config.geometry(width)
        filled = slot_fills(geometry, config.film_thickness_m, config.capillary_model())
    except SlotBrillouinError:
        return "unknown"
    return "yes" if filled else "no"


_GUESS_LADDER = (1.9, 1.6, 1.47)
_ETA_CONFINED = 0.05


def _select_mode(modes):
    """Slot-guided candidate: the TE-like mode keeping the most energy in the slot."""
    te = [m for m in modes if m.polarization == "TE-like"]
    pool = te if te else modes
    return max(pool, key=slot_energy_fraction)


def _solve_slot_mode(operator, config: SweepConfig):
    """Best slot-confined mode over a ladder of effective-index guesses.

    The slot mode's n_eff falls from about 2.2 at 5 nm slots to just
    above the substrate index at 150 nm, so one shift-invert target
    cannot cover the whole sweep.  Guesses are tried in order and the
    search stops at the first clearly slot-confined hit; if nothing
    reaches that bar the best candidate seen is still returned.
    """
    guesses = [config.n_eff_guess]
    guesses += [g for g in _GUESS_LADDER if abs(g - config.n_eff_guess) > 1e-9]
    best = None
    best_eta = -1.0
    last_err: SlotBrillouinError | None = None
    for guess in guesses:
        try:
            modes = solve_modes(operator, guess, count=config.optical_mode_count)
        except SlotBrillouinError as err:
            last_err = err
            continue
        candidate = _select_mode(modes)
        eta = slot_energy_fraction(candidate)
        if eta > best_eta:
            best, best_eta = candidate, eta
        if best_eta >= _ETA_CONFINED:
            break
    if best is None:
        assert last_err is not None
        raise last_err
    return best


def _failed_report(
    config: SweepConfig,
    width: float,
    bc: str,
    q: float,
    status: str,
    advisory: str,
    n_eff: float = math.nan,
    eta_slot: float = math.nan,
    m_opt: int = 0,
    m_acoustic: int = 0,
) -> DesignReport:
    nan = math.nan
    return DesignReport(
        width=width,
        bc=bc,
        n_eff=n_eff,
        eta_slot=eta_slot,
        m_opt=m_opt,
        m_acoustic=m_acoustic,
        omega_brillouin=nan,
        g0=nan,
        kappa=config.kappa(),
        q_acoustic=q,
        gamma=nan,
        cooperativity=nan,
        p_threshold=nan,
        temperature=config.temperature_k,
        n_thermal=nan,
        sideband_resolved=False,
        status=status,
        capillary_filled=advisory,
    )


def _solve_width(config: SweepConfig, width: float) -> list[DesignReport]:
    """All reports for one slot width, boundary-major then Q-major."""
    advisory = _capillary_advisory(config, width)
    rows: list[DesignReport] = []
    try:
        geometry = config.geometry(width)
        mesh = build_mesh(geometry, config.mesh_spec())
        operator = assemble_operator(mesh, config.wavelength_m)
        mode = _solve_slot_mode(operator, config)
        n_eff = mode.n_eff
        eta_slot = slot_energy_fraction(mode)
        _, m_opt = resonance_order(n_eff, geometry.acoustic_radius, config.wavelength_m)
        match = phase_match(m_opt)
    except SlotBrillouinError as err:
        status = _status_for(err)
        for bc in config.boundaries:
            for q in config.quality_factors:
                rows.append(_failed_report(config, width, bc, q, status, advisory))
        return rows

    kappa = config.kappa()
    omega_pump = TWO_PI * CONSTANTS.c0 / config.wavelength_m
    fluid = builtin_material(config.fill)
    for bc in config.boundaries:
        try:
            acoustic = solve_acoustic_mode(
                config.geometry(width, bc),
                fluid,
                match.m_acoustic,
                bc,
                resolution=config.resolution,
            )
            zero_point_normalize(acoustic, fluid.K)
            result = coupling_rate(mode, acoustic, mesh)
        except SlotBrillouinError as err:
            status = _status_for(err)
            for q in config.quality_factors:
                rows.append(
                    _failed_report(
                        config, width, bc, q, status, advisory,
                        n_eff=n_eff, eta_slot=eta_slot,
                        m_opt=m_opt, m_acoustic=match.m_acoustic,
                    )
                )
            continue
        omega_m = acoustic.omega
        n_thermal = thermal_occupancy(omega_m, config.temperature_k)
        resolved = sideband_resolved(omega_m, kappa)
        for q in config.quality_factors:
            gamma = acoustic_linewidth(omega_m, q)
            rows.append(
                DesignReport(
                    width=width,
                    bc=bc,
                    n_eff=n_eff,
                    eta_slot=eta_slot,
                    m_opt=m_opt,
                    m_acoustic=match.m_acoustic,
                    omega_brillouin=omega_m,
                    g0=result.g0,
                    kappa=kappa,
                    q_acoustic=q,
                    gamma=gamma,
                    cooperativity=cooperativity(result.g0, kappa, gamma),
                    p_threshold=lasing_threshold(result.g0, kappa, gamma, omega_pump),
                    temperature=config.temperature_k,
                    n_thermal=n_thermal,
                    sideband_resolved=resolved,
                    status="ok",
                    capillary_filled=advisory,
                )
            )
    return rows


def run_sweep(config: SweepConfig, workers: int | None = None) -> list[DesignReport]:
    """Reports for every (width, boundary, Q), width-major order."""
    if workers is None:
        workers = config.workers
    if workers < 1:
        raise DomainError(f"workers = {workers} must be >= 1")
    widths = [float(w) for w in config.widths()]
    solve = partial(_solve_width, config)
    if workers == 1:
        per_width = [solve(w) for w in widths]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_width = list(pool.map(solve, widths))
    return [report for rows in per_width for report in rows]


# ---------------------------------------------------------------------------
# CSV


def _csv_row(report: DesignReport) -> str:
    def num(x: float) -> str:
        return f"{x:.8e}"

    cells = (
        num(report.width),
        report.bc,
        num(report.n_eff),
        num(report.eta_slot),
        str(report.m_opt),
        str(report.m_acoustic),
        num(angular_to_hz(report.omega_brillouin)),
        num(angular_to_hz(report.g0)),
        num(angular_to_hz(report.kappa)),
        num(report.q_acoustic),
        num(angular_to_hz(report.gamma)),
        num(report.cooperativity),
        num(report.p_threshold),
        num(report.temperature),
        num(report.n_thermal),
        "true" if report.sideband_resolved else "false",
        report.status,
    )
    return ", ".join(cells)


def emit_csv(reports: list[DesignReport], path) -> None:
    """Write the sweep table; byte-identical for identical reports."""
    lines = [_CSV_COMMENT, CSV_HEADER]
    lines.extend(_csv_row(r) for r in reports)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def load_csv(path) -> list[DesignReport]:
    """Parse a sweep table back into reports.

    The capillary advisory is not a CSV column, so loaded reports carry
    "unknown" there.
    """
    with open(path, encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    rows = [line for line in lines if line and not line.startswith("#")]
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"unexpected sweep CSV header in {path}")
    reports = []
    for line in rows[1:]:
        cells = [cell.strip() for cell in line.split(",")]
        if len(cells) != 17:
            raise ValueError(f"expected 17 columns, got {len(cells)}: {line!r}")
        reports.append(
            DesignReport(
                width=float(cells[0]),
                bc=cells[1],
                n_eff=float(cells[2]),
                eta_slot=float(cells[3]),
                m_opt=int(cells[4]),
                m_acoustic=int(cells[5]),
                omega_brillouin=hz_to_angular(float(cells[6])),
                g0=hz_to_angular(float(cells[7])),
                kappa=hz_to_angular(float(cells[8])),
                q_acoustic=float(cells[9]),
                gamma=hz_to_angular(float(cells[10])),
                cooperativity=float(cells[11]),
                p_threshold=float(cells[12]),
                temperature=float(cells[13]),
                n_thermal=float(cells[14]),
                sideband_resolved=cells[15] == "true",
                status=cells[16],
            )
        )
    return reports


# ---------------------------------------------------------------------------
# SVG


_SVG_SIZE = (720, 580)
_PANEL_BOX = {"x0": 80.0, "width": 600.0, "height": 200.0}
_SERIES_COLOR = {
    "g0-sealed": "#1f77b4",
    "g0-open": "#d62728",
    "eta-slot": "#2ca02c",
}


def _limits(values, pad=0.06):
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if hi == lo:
        step = max(abs(hi), 1.0) * 0.5
        return lo - step, hi + step
    span = hi - lo
    return lo - pad * span, hi + pad * span


def _panel(y0: float, xlabel: str, ylabel: str, series) -> list[str]:
    """Axes frame, ticks, labels and polylines for one plot panel.

    ``series`` is a list of (svg id, [(x, y), ...]) with data already in
    display units.
    """
    x0 = _PANEL_BOX["x0"]
    width = _PANEL_BOX["width"]
    height = _PANEL_BOX["height"]
    x_lo, x_hi = _limits([p[0] for _, pts in series for p in pts])
    y_lo, y_hi = _limits([p[1] for _, pts in series for p in pts])

    def px(x: float) -> float:
        return x0 + (x - x_lo) / (x_hi - x_lo) * width

    def py(y: float) -> float:
        return y0 + height - (y - y_lo) / (y_hi - y_lo) * height

    parts = [
        f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{width:.2f}" '
        f'height="{height:.2f}" fill="none" stroke="black"/>'
    ]
    for i in range(5):
        xv = x_lo + (x_hi - x_lo) * i / 4.0
        yv = y_lo + (y_hi - y_lo) * i / 4.0
        xt, yt = px(xv), py(yv)
        parts.append(
            f'<line x1="{xt:.2f}" y1="{y0 + height:.2f}" x2="{xt:.2f}" '
            f'y2="{y0 + height + 5:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{xt:.2f}" y="{y0 + height + 18:.2f}" '
            f'text-anchor="middle">{xv:.3g}</text>'
        )
        parts.append(
            f'<line x1="{x0 - 5:.2f}" y1="{yt:.2f}" x2="{x0:.2f}" '
            f'y2="{yt:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.2f}" y="{yt + 4:.2f}" '
            f'text-anchor="end">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{x0 + width / 2:.2f}" y="{y0 + height + 36:.2f}" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text transform="rotate(-90 {x0 - 52:.2f} {y0 + height / 2:.2f})" '
        f'x="{x0 - 52:.2f}" y="{y0 + height / 2:.2f}" '
        f'text-anchor="middle">{ylabel}</text>'
    )
    for rank, (sid, pts) in enumerate(series):
        color = _SERIES_COLOR[sid]
        if pts:
            coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
            parts.append(
                f'<polyline id="{sid}" points="{coords}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        else:
            parts.append(f'<g id="{sid}"/>')
        lx = x0 + width - 150.0
        ly = y0 + 16.0 + 16.0 * rank
        parts.append(
            f'<line x1="{lx:.2f}" y1="{ly:.2f}" x2="{lx + 24:.2f}" '
            f'y2="{ly:.2f}" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(f'<text x="{lx + 30:.2f}" y="{ly + 4:.2f}">{sid}</text>')
    return parts


def emit_svg(reports: list[DesignReport], path) -> None:
    """Two-panel summary plot: g0 per boundary condition, then the slot
    energy fraction, both against slot width."""
    ok = [r for r in reports if r.status == "ok" and math.isfinite(r.g0)]
    by_bc: dict[str, dict[float, float]] = {}
    eta: dict[float, float] = {}
    for report in ok:
        by_bc.setdefault(report.bc, {})[report.width] = angular_to_hz(report.g0) / 1e3
        eta.setdefault(report.width, report.eta_slot)

    def curve(table: dict[float, float]):
        return [(w * 1e9, table[w]) for w in sorted(table)]

    g0_series = [
        (f"g0-{bc}", curve(by_bc[bc])) for bc in ("sealed", "open") if bc in by_bc
    ]
    if not g0_series:
        g0_series = [("g0-sealed", [])]
    width_px, height_px = _SVG_SIZE
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" '
        f'height="{height_px}" viewBox="0 0 {width_px} {height_px}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width_px}" height="{height_px}" fill="white"/>',
        '<text x="360" y="24" text-anchor="middle" font-size="14">'
        "Slot width sweep</text>",
    ]
    parts.extend(_panel(40.0, "slot width (nm)", "g0/2pi (kHz)", g0_series))
    parts.extend(
        _panel(330.0, "slot width (nm)", "slot energy fraction", [("eta-slot", curve(eta))])
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(parts) + "\n")
