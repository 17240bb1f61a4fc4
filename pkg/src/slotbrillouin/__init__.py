"""Design toolkit for superfluid-filled slot-waveguide ring resonators.

The pipeline: mesh a slot cross section, solve its guided optical modes
and the fluid column's acoustic modes, phase-match them on the ring,
and evaluate the vacuum optomechanical coupling rate plus the quantum
figures of merit it implies.  :func:`run_sweep` drives the whole chain
over a range of slot widths.
"""

from .acoustic import (
    AcousticMode,
    acoustic_linewidth,
    solve_acoustic_mode,
    solve_acoustic_modes,
    zero_point_normalize,
)
from .capillary import (
    CapillaryModel,
    FillResult,
    fill_energy_delta,
    fill_transition_thickness,
    slot_fills,
)
from .config import SweepConfig, from_toml, load_config, save_config, to_toml
from .constants import CONSTANTS, PhysicalConstants
from .coupling import (
    CouplingResult,
    PhaseMatchRecord,
    brillouin_shift,
    coupling_rate,
    phase_match,
    uniform_field_oracle,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    MaterialNotFoundError,
    MeshBudgetError,
    SlotBrillouinError,
    StateError,
    UnsupportedSchemeError,
)
from .geometry import Mesh2D, MeshSpec, Region, SlotRingGeometry, build_mesh
from .materials import Material, builtin_material, builtin_names, load_materials
from .metrics import (
    DesignReport,
    coherence_check,
    cooperativity,
    lasing_threshold,
    sideband_resolved,
    thermal_occupancy,
)
from .optical import (
    OpticalMode,
    OpticalOperator,
    assemble_operator,
    resonance_order,
    slot_energy_fraction,
    solve_modes,
)
from .sweep import emit_csv, emit_svg, load_csv, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AcousticMode",
    "CapillaryModel",
    "ConfigError",
    "ConvergenceError",
    "CouplingResult",
    "CONSTANTS",
    "DesignReport",
    "DomainError",
    "FillResult",
    "Material",
    "MaterialNotFoundError",
    "Mesh2D",
    "MeshBudgetError",
    "MeshSpec",
    "OpticalMode",
    "OpticalOperator",
    "PhaseMatchRecord",
    "PhysicalConstants",
    "Region",
    "SlotBrillouinError",
    "SlotRingGeometry",
    "StateError",
    "SweepConfig",
    "UnsupportedSchemeError",
    "acoustic_linewidth",
    "assemble_operator",
    "brillouin_shift",
    "builtin_material",
    "builtin_names",
    "build_mesh",
    "coherence_check",
    "cooperativity",
    "coupling_rate",
    "emit_csv",
    "emit_svg",
    "fill_energy_delta",
    "fill_transition_thickness",
    "from_toml",
    "lasing_threshold",
    "load_config",
    "load_csv",
    "load_materials",
    "phase_match",
    "resonance_order",
    "run_sweep",
    "save_config",
    "sideband_resolved",
    "slot_energy_fraction",
    "slot_fills",
    "solve_acoustic_mode",
    "solve_acoustic_modes",
    "solve_modes",
    "thermal_occupancy",
    "to_toml",
    "uniform_field_oracle",
    "zero_point_normalize",
    "__version__",
]
