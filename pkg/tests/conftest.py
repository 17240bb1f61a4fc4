"""Shared fixtures.

Expensive solves are session-scoped: the default-design optical solve is
reused by the optical, coupling and acceptance tests, and the two full
design sweeps (the second one exists to prove run-to-run determinism) are
built lazily so unit-test-only runs never pay for them.
"""

import time

import pytest

from slotbrillouin.config import SweepConfig
from slotbrillouin.geometry import build_mesh
from slotbrillouin.materials import builtin_material
from slotbrillouin.optical import assemble_operator, solve_modes
from slotbrillouin.sweep import _select_mode, run_sweep


@pytest.fixture(scope="session")
def default_config():
    return SweepConfig()


@pytest.fixture(scope="session")
def helium():
    return builtin_material("helium")


@pytest.fixture(scope="session")
def default_solution(default_config):
    """Mesh, operator and solved modes for the default cross-section."""
    geometry = default_config.geometry(50e-9)
    mesh = build_mesh(geometry, default_config.mesh_spec())
    operator = assemble_operator(mesh, default_config.wavelength_m)
    modes = solve_modes(
        operator, default_config.n_eff_guess, count=default_config.optical_mode_count
    )
    return geometry, mesh, operator, modes


@pytest.fixture(scope="session")
def default_mode(default_solution):
    """The slot-confined fundamental at the default cross-section."""
    _, _, _, modes = default_solution
    return _select_mode(modes)


@pytest.fixture(scope="session")
def full_sweep(default_config):
    """One complete default sweep plus its wall-clock duration in seconds."""
    start = time.monotonic()
    rows = run_sweep(default_config)
    return rows, time.monotonic() - start


@pytest.fixture(scope="session")
def full_sweep_repeat(default_config):
    """Second complete default sweep, for determinism checks."""
    return run_sweep(default_config)
