"""Cross-section validation and mesh generation guarantees."""

import numpy as np
import pytest

from slotbrillouin.errors import DomainError, MeshBudgetError
from slotbrillouin.geometry import (
    Mesh2D,
    MeshSpec,
    Region,
    SLOT_WIDTH_MAX,
    SLOT_WIDTH_MIN,
    SlotRingGeometry,
    build_mesh,
)


def test_default_geometry_is_valid():
    g = SlotRingGeometry()
    assert g.slot_width == pytest.approx(50e-9)
    assert g.rail_width == pytest.approx(250e-9)
    assert g.top_boundary == "sealed"


def test_acoustic_radius_is_slot_centerline():
    g = SlotRingGeometry()
    assert g.acoustic_radius == pytest.approx(10e-6 - 250e-9 - 25e-9)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"slot_width": 0.5 * SLOT_WIDTH_MIN},
        {"slot_width": 2.0 * SLOT_WIDTH_MAX},
        {"slot_height": -1e-9},
        {"rail_width": 0.0},
        {"ring_radius": 1e-7},
        {"top_boundary": "clamped"},
        {"ring_radius": 2e-6, "rail_width": 1.5e-6, "slot_width": 500e-9},
    ],
)
def test_invalid_geometry_rejected(kwargs):
    with pytest.raises(DomainError):
        SlotRingGeometry(**kwargs)


def test_mesh_spec_validation():
    with pytest.raises(DomainError):
        MeshSpec(grading_ratio=2.5)
    with pytest.raises(DomainError):
        MeshSpec(slot_cells=0)
    with pytest.raises(DomainError):
        MeshSpec(cell_budget=10)


def test_slot_edges_fall_exactly_on_mesh_lines():
    g = SlotRingGeometry()
    mesh = build_mesh(g, MeshSpec())
    half = g.slot_width / 2.0
    for line in (-half, half, 0.0, g.slot_height):
        assert np.min(np.abs(mesh.x_edges - line)) < 1e-18 or np.min(
            np.abs(mesh.y_edges - line)
        ) < 1e-18


def test_slot_region_area_exact():
    g = SlotRingGeometry()
    mesh = build_mesh(g, MeshSpec())
    expected = g.slot_width * g.slot_height
    assert mesh.region_area(Region.HELIUM_SLOT) == pytest.approx(expected, rel=1e-12)


def test_rail_region_area_exact():
    g = SlotRingGeometry()
    mesh = build_mesh(g, MeshSpec())
    expected = 2.0 * g.rail_width * g.slot_height
    assert mesh.region_area(Region.SILICON) == pytest.approx(expected, rel=1e-12)


def test_minimum_cells_across_slot():
    spec = MeshSpec()
    for width in (1e-9, 5e-9, 50e-9, 150e-9):
        g = SlotRingGeometry(slot_width=width)
        mesh = build_mesh(g, spec)
        half = g.slot_width / 2.0
        inside = (mesh.x_edges >= -half - 1e-18) & (mesh.x_edges <= half + 1e-18)
        assert inside.sum() - 1 >= spec.slot_cells


def test_grading_ratio_bounded():
    mesh = build_mesh(SlotRingGeometry(), MeshSpec())
    assert mesh.max_grading_ratio() <= MeshSpec().grading_ratio + 1e-9


def test_padding_clearance():
    g = SlotRingGeometry()
    spec = MeshSpec()
    mesh = build_mesh(g, spec)
    outer = g.slot_width / 2.0 + g.rail_width
    assert mesh.x_edges[-1] - outer >= spec.padding * (1.0 - 1e-12)
    assert -mesh.x_edges[0] - outer >= spec.padding * (1.0 - 1e-12)
    assert mesh.y_edges[-1] - g.slot_height >= spec.padding * (1.0 - 1e-12)
    assert -mesh.y_edges[0] >= spec.padding * (1.0 - 1e-12)


def test_cell_budget_enforced():
    with pytest.raises(MeshBudgetError):
        build_mesh(SlotRingGeometry(), MeshSpec(cell_budget=1000))


def test_permittivity_by_region():
    g = SlotRingGeometry()
    mesh = build_mesh(g, MeshSpec())
    slot = mesh.region == int(Region.HELIUM_SLOT)
    rail = mesh.region == int(Region.SILICON)
    assert np.allclose(mesh.eps_r[slot], g.fill.eps_r)
    assert np.allclose(mesh.eps_r[rail], 3.48**2)
    below = mesh.y_centers < 0.0
    assert np.allclose(mesh.eps_r[:, below], g.substrate.eps_r)


def test_mesh_arrays_consistent():
    mesh = build_mesh(SlotRingGeometry(), MeshSpec())
    assert mesh.region.shape == (mesh.nx, mesh.ny)
    assert mesh.eps_r.shape == (mesh.nx, mesh.ny)
    assert np.all(mesh.dx > 0.0)
    assert np.all(mesh.dy > 0.0)
    assert mesh.cell_areas.sum() == pytest.approx(mesh.domain_area, rel=1e-12)


def test_mesh_is_deterministic():
    a = build_mesh(SlotRingGeometry(), MeshSpec())
    b = build_mesh(SlotRingGeometry(), MeshSpec())
    assert np.array_equal(a.x_edges, b.x_edges)
    assert np.array_equal(a.y_edges, b.y_edges)
    assert np.array_equal(a.region, b.region)


def test_debug_dump_writes_header(tmp_path):
    mesh = build_mesh(SlotRingGeometry(slot_width=20e-9), MeshSpec())
    path = tmp_path / "mesh.txt"
    mesh.dump_debug(path)
    first = path.read_text().splitlines()[0]
    assert first.startswith("# slotbrillouin mesh dump")
