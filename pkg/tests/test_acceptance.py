"""End-to-end design-target gates for the default geometry.

Each test checks one shipping gate and prints a single ACCEPTANCE
verdict line with the measured numbers.  Gates the current
discretization genuinely misses stay red on purpose; the point of this
file is an honest scoreboard, not a green one.
"""

import math
import time

import numpy as np
import pytest

from test_optical import _slab_mesh, _slab_te0_index

from slotbrillouin.acoustic import (
    rectangle_mode_frequency,
    solve_acoustic_mode,
    zero_point_normalize,
)
from slotbrillouin.capillary import fill_transition_thickness
from slotbrillouin.constants import CONSTANTS
from slotbrillouin.coupling import brillouin_shift
from slotbrillouin.geometry import SlotRingGeometry
from slotbrillouin.metrics import cooperativity, lasing_threshold
from slotbrillouin.optical import assemble_operator, slot_wall_field_ratio, solve_modes
from slotbrillouin.sweep import emit_csv

_TWO_PI = 2.0 * math.pi


def _verdict(number: int, title: str, ok: bool, details: str) -> None:
    line = f"ACCEPTANCE {number:02d} {title}: {'PASS' if ok else 'FAIL'} - {details}"
    print(line)
    assert ok, line


def _ok_rows(reports, bc=None):
    rows = [r for r in reports if r.status == "ok"]
    if bc is not None:
        rows = [r for r in rows if r.bc == bc]
    return rows


def test_acceptance_01_g0_sweep(full_sweep):
    reports, elapsed = full_sweep
    clauses = []
    details = []
    for bc in ("sealed", "open"):
        rows = _ok_rows(reports, bc)
        g0_khz = np.array([r.g0 for r in rows]) / _TWO_PI / 1e3
        widths = np.array([r.width for r in rows])
        peak = float(g0_khz.max())
        floor = float(g0_khz.min())
        argmax_nm = float(widths[int(np.argmax(g0_khz))] * 1e9)
        clauses.append(150.0 <= peak <= 400.0)
        clauses.append(floor > 100.0)
        clauses.append(10.0 <= argmax_nm <= 80.0)
        details.append(
            f"{bc}: peak {peak:.1f} kHz @ {argmax_nm:.0f} nm, floor {floor:.1f} kHz"
        )
    clauses.append(elapsed < 1800.0)
    details.append(f"runtime {elapsed:.0f} s")
    _verdict(
        1,
        "g0 sweep window [150, 400] kHz, floor > 100 kHz, argmax in [10, 80] nm",
        all(clauses),
        "; ".join(details),
    )


def test_acceptance_02_slot_fraction(full_sweep):
    reports, _ = full_sweep
    rows = _ok_rows(reports, "sealed")
    eta = np.array([r.eta_slot for r in rows])
    widths = np.array([r.width for r in rows])
    peak = float(eta.max())
    argmax_nm = float(widths[int(np.argmax(eta))] * 1e9)
    order = np.argsort(widths)
    eta_first, eta_second = eta[order[0]], eta[order[1]]
    ok = (
        0.18 <= peak <= 0.32
        and 40.0 <= argmax_nm <= 80.0
        and eta_first < eta_second
        and eta_first < 0.6 * peak
    )
    _verdict(
        2,
        "slot energy fraction peaks at 0.25 +/- 0.07 for w = 60 +/- 20 nm",
        ok,
        f"peak {peak:.4f} @ {argmax_nm:.0f} nm, eta(w_min) {eta_first:.4f}",
    )


def test_acceptance_03_zero_point_pressure(helium):
    mode = solve_acoustic_mode(SlotRingGeometry(), helium, 130, "sealed")
    p_zp = zero_point_normalize(mode, helium.K)
    ok = 0.5 <= p_zp <= 5.0
    _verdict(3, "zero-point pressure in [0.5, 5] Pa", ok, f"p_zp {p_zp:.3f} Pa")


def test_acceptance_04_cooperativity_endpoints():
    g0 = _TWO_PI * 250e3
    kappa = _TWO_PI * 1e9
    omega_m = _TWO_PI * 400e6
    low = cooperativity(g0, kappa, omega_m / 1e5)
    high = cooperativity(g0, kappa, omega_m / 1e8)
    ok = abs(low - 0.0625) <= 1e-6 and abs(high - 62.5) <= 1e-3
    _verdict(
        4,
        "C0 endpoints 0.0625 / 62.5 at Q = 1e5 / 1e8",
        ok,
        f"C0(1e5) {low:.7f}, C0(1e8) {high:.4f}",
    )


def test_acceptance_05_lasing_threshold():
    g0 = _TWO_PI * 250e3
    kappa = _TWO_PI * 1e9
    omega_m = _TWO_PI * 400e6
    omega = _TWO_PI * CONSTANTS.c0 / 1.55e-6
    p_th = lasing_threshold(g0, kappa, omega_m / 1e4, omega)
    ok = 30e-9 <= p_th <= 300e-9
    _verdict(5, "lasing threshold in [30, 300] nW", ok, f"P_th {p_th * 1e9:.1f} nW")


def test_acceptance_06_brillouin_shift_tunability(full_sweep, helium, default_config):
    lam = default_config.wavelength_m
    low = brillouin_shift(1.0, helium.c, lam) / _TWO_PI
    high = brillouin_shift(3.48, helium.c, lam) / _TWO_PI
    reports, _ = full_sweep
    at_default = [
        r.omega_brillouin / _TWO_PI
        for r in _ok_rows(reports)
        if abs(r.width - 50e-9) < 1e-12
    ]
    ok = (
        low == pytest.approx(307e6, rel=1e-2)
        and high == pytest.approx(1.07e9, rel=1e-2)
        and at_default
        and all(350e6 < f < 700e6 for f in at_default)
    )
    solved = ", ".join(f"{f / 1e6:.1f}" for f in at_default)
    _verdict(
        6,
        "shift spans [307 MHz, 1.07 GHz]; solved default in [350, 700] MHz",
        ok,
        f"span [{low / 1e6:.1f} MHz, {high / 1e9:.3f} GHz], default [{solved}] MHz",
    )


def test_acceptance_07_oracle_equivalence(default_mode, default_config, helium):
    start = time.monotonic()
    mesh = _slab_mesh(220e-9)
    op = assemble_operator(mesh, default_config.wavelength_m)
    slab = solve_modes(op, 2.9, count=2)[0]
    slab_err = abs(slab.n_eff - _slab_te0_index(220e-9)) / _slab_te0_index(220e-9)

    geometry = SlotRingGeometry()
    ac_err = 0.0
    for bc in ("sealed", "open"):
        got = solve_acoustic_mode(geometry, helium, 130, bc).omega
        want = rectangle_mode_frequency(geometry, helium, 130, bc)
        ac_err = max(ac_err, abs(got - want) / want)

    ratio = slot_wall_field_ratio(default_mode)
    expected = 3.48**2 / 1.029**2
    jump_err = abs(ratio - expected) / expected
    elapsed = time.monotonic() - start

    ok = slab_err < 1e-3 and ac_err < 1e-4 and jump_err < 0.05
    _verdict(
        7,
        "slab < 1e-3, rectangle < 1e-4, wall jump within 5%",
        ok,
        f"slab {slab_err:.2e}, rectangle {ac_err:.2e}, jump {jump_err:.2%}, "
        f"{elapsed:.1f} s",
    )


def test_acceptance_08_strain_energy_normalization(full_sweep, default_config, helium):
    reports, _ = full_sweep
    worst = 0.0
    checked = 0
    for row in _ok_rows(reports):
        geometry = default_config.geometry(row.width, row.bc)
        mode = solve_acoustic_mode(
            geometry, helium, row.m_acoustic, row.bc, resolution=default_config.resolution
        )
        zero_point_normalize(mode, helium.K)
        pressure = mode.p_zp * mode.p_hat
        energy = (
            float((pressure**2).sum())
            * mode.cell_area
            * _TWO_PI
            * mode.acoustic_radius
            / (2.0 * helium.K)
        )
        target = 0.5 * CONSTANTS.hbar * mode.omega
        worst = max(worst, abs(energy - target) / target)
        checked += 1
    ok = checked > 0 and worst < 1e-6
    _verdict(
        8,
        "re-integrated strain energy equals hbar Omega / 2",
        ok,
        f"{checked} modes, worst relative error {worst:.2e}",
    )


def test_acceptance_09_determinism(full_sweep, full_sweep_repeat, tmp_path):
    reports, _ = full_sweep
    first = tmp_path / "run1.csv"
    second = tmp_path / "run2.csv"
    emit_csv(reports, first)
    emit_csv(full_sweep_repeat, second)
    ok = first.read_bytes() == second.read_bytes()
    _verdict(
        9,
        "two default sweeps produce byte-identical CSV",
        ok,
        f"{len(reports)} rows vs {len(full_sweep_repeat)} rows",
    )


def test_acceptance_10_capillary_transition():
    result = fill_transition_thickness(SlotRingGeometry())
    ok = result.status == "transition" and 0.5e-9 <= result.critical_thickness <= 10e-9
    _verdict(
        10,
        "filling transition thickness in [0.5, 10] nm",
        ok,
        f"{result.status} at {result.critical_thickness * 1e9:.2f} nm",
    )
