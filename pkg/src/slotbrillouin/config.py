"""Sweep configuration: TOML in, validated dataclass out, TOML back.

The file keeps human units in key names (_m, _hz, _k) and the dataclass
stores exactly those values, so a load/emit cycle is the identity on
every field.  Validation collects all problems before raising, and
unknown keys get a nearest-match suggestion instead of a bare rejection.
"""

import difflib
from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from .capillary import CapillaryModel
from .constants import hz_to_angular
from .errors import ConfigError, MaterialNotFoundError, SlotBrillouinError
from .geometry import (
    SLOT_WIDTH_MAX,
    SLOT_WIDTH_MIN,
    TOP_BOUNDARIES,
    MeshSpec,
    SlotRingGeometry,
)
from .materials import builtin_material


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep run needs, in file units.

    Lengths are meters, kappa_hz is an ordinary (not angular) linewidth,
    temperature_k is kelvin.  Sequence fields are tuples so the config
    hashes and compares by value.
    """

    # [geometry]
    ring_radius_m: float = 10e-6
    slot_height_m: float = 220e-9
    rail_width_m: float = 250e-9
    substrate: str = "silica"
    cladding: str = "vacuum"
    fill: str = "helium"
    # [mesh]
    background_m: float = 80e-9
    core_cell_m: float = 5e-9
    slot_cells: int = 64
    grading_ratio: float = 1.2
    padding_m: float = 2.325e-6
    cell_budget: int = 120000
    conformal_bend: bool = False
    # [optical]
    wavelength_m: float = 1.55e-6
    n_eff_guess: float = 2.2
    optical_mode_count: int = 6
    # [acoustic]
    resolution: tuple[int, int] = (16, 48)
    acoustic_mode_count: int = 3
    quality_factors: tuple[float, ...] = (1e5,)
    # [sweep]
    width_min_m: float = 5e-9
    width_max_m: float = 1.5e-7
    width_count: int = 30
    boundaries: tuple[str, ...] = ("sealed", "open")
    # [environment]
    temperature_k: float = 0.02
    kappa_hz: float = 1e9
    # [capillary]
    film_thickness_m: float = 1e-9
    surface_tension: float = 3.75e-4
    vdw_coefficient: float = 3.8e-22
    # [output]
    csv_path: str = "sweep.csv"
    svg_path: str = "sweep.svg"
    workers: int = 1

    def widths(self) -> np.ndarray:
        """Evenly spaced slot widths, min to max inclusive."""
        return np.linspace(self.width_min_m, self.width_max_m, self.width_count)

    def geometry(self, width: float, top_boundary: str | None = None) -> SlotRingGeometry:
        """Cross-section at one sweep point."""
        if top_boundary is None:
            top_boundary = self.boundaries[0]
        return SlotRingGeometry(
            ring_radius=self.ring_radius_m,
            slot_width=width,
            slot_height=self.slot_height_m,
            rail_width=self.rail_width_m,
            substrate=builtin_material(self.substrate),
            cladding=builtin_material(self.cladding),
            fill=builtin_material(self.fill),
            top_boundary=top_boundary,
        )

    def mesh_spec(self) -> MeshSpec:
        return MeshSpec(
            background=self.background_m,
            core_cell=self.core_cell_m,
            slot_cells=self.slot_cells,
            grading_ratio=self.grading_ratio,
            padding=self.padding_m,
            cell_budget=self.cell_budget,
            conformal_bend=self.conformal_bend,
        )

    def capillary_model(self) -> CapillaryModel:
        return CapillaryModel(
            surface_tension=self.surface_tension,
            vdw_coefficient=self.vdw_coefficient,
        )

    def kappa(self) -> float:
        """Optical linewidth in rad/s."""
        return hz_to_angular(self.kappa_hz)


#: section -> {toml key: dataclass field}.  Emission order follows this.
_LAYOUT: dict[str, dict[str, str]] = {
    "geometry": {
        "ring_radius_m": "ring_radius_m",
        "slot_height_m": "slot_height_m",
        "rail_width_m": "rail_width_m",
        "substrate": "substrate",
        "cladding": "cladding",
        "fill": "fill",
    },
    "mesh": {
        "background_m": "background_m",
        "core_cell_m": "core_cell_m",
        "slot_cells": "slot_cells",
        "grading_ratio": "grading_ratio",
        "padding_m": "padding_m",
        "cell_budget": "cell_budget",
        "conformal_bend": "conformal_bend",
    },
    "optical": {
        "wavelength_m": "wavelength_m",
        "n_eff_guess": "n_eff_guess",
        "mode_count": "optical_mode_count",
    },
    "acoustic": {
        "resolution": "resolution",
        "mode_count": "acoustic_mode_count",
        "quality_factors": "quality_factors",
    },
    "sweep": {
        "width_min_m": "width_min_m",
        "width_max_m": "width_max_m",
        "width_count": "width_count",
        "boundaries": "boundaries",
    },
    "environment": {
        "temperature_k": "temperature_k",
        "kappa_hz": "kappa_hz",
    },
    "capillary": {
        "film_thickness_m": "film_thickness_m",
        "surface_tension": "surface_tension",
        "vdw_coefficient": "vdw_coefficient",
    },
    "output": {
        "csv": "csv_path",
        "svg": "svg_path",
        "workers": "workers",
    },
}

_FIELD_TYPES = {f.name: f.type for f in fields(SweepConfig)}


def _coerce(section: str, key: str, field: str, value, problems: list[str]):
    """Type-check one value against the dataclass annotation.

    Returns the coerced value, or None after recording a problem.  TOML
    integers are accepted where floats are annotated.
    """
    where = f"[{section}] {key}"
    kind = _FIELD_TYPES[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{where}: expected a number, got {value!r}")
            return None
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append(f"{where}: expected an integer, got {value!r}")
            return None
        return value
    if kind is bool:
        if not isinstance(value, bool):
            problems.append(f"{where}: expected true/false, got {value!r}")
            return None
        return value
    if kind is str:
        if not isinstance(value, str):
            problems.append(f"{where}: expected a string, got {value!r}")
            return None
        return value
    if kind == tuple[int, int]:
        ok = (
            isinstance(value, list)
            and len(value) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
        )
        if not ok:
            problems.append(f"{where}: expected two integers, got {value!r}")
            return None
        return (value[0], value[1])
    if kind == tuple[float, ...]:
        ok = isinstance(value, list) and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        )
        if not ok:
            problems.append(f"{where}: expected a list of numbers, got {value!r}")
            return None
        return tuple(float(v) for v in value)
    if kind == tuple[str, ...]:
        ok = isinstance(value, list) and all(isinstance(v, str) for v in value)
        if not ok:
            problems.append(f"{where}: expected a list of strings, got {value!r}")
            return None
        return tuple(value)
    raise AssertionError(f"unhandled field annotation {kind!r}")


def _suggest(name: str, known) -> str:
    close = difflib.get_close_matches(name, list(known), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _semantic_problems(cfg: SweepConfig) -> list[str]:
    """Value-level checks that need the fully assembled config."""
    problems: list[str] = []
    for section, keys in (
        ("geometry", ("ring_radius_m", "slot_height_m", "rail_width_m")),
        ("mesh", ("background_m", "core_cell_m", "grading_ratio", "padding_m")),
        ("optical", ("wavelength_m", "n_eff_guess")),
        ("environment", ("temperature_k", "kappa_hz")),
        ("capillary", ("film_thickness_m", "surface_tension", "vdw_coefficient")),
    ):
        for key in keys:
            field = _LAYOUT[section].get(key, key)
            if getattr(cfg, field) <= 0.0:
                problems.append(f"[{section}] {key}: must be positive")
    for name, count in (
        ("slot_cells", cfg.slot_cells),
        ("[optical] mode_count", cfg.optical_mode_count),
        ("[acoustic] mode_count", cfg.acoustic_mode_count),
        ("[output] workers", cfg.workers),
    ):
        if count < 1:
            problems.append(f"{name}: must be >= 1")
    if any(r < 4 for r in cfg.resolution):
        problems.append("[acoustic] resolution: each direction needs >= 4 cells")
    if not cfg.quality_factors:
        problems.append("[acoustic] quality_factors: must not be empty")
    elif any(q <= 0.0 for q in cfg.quality_factors):
        problems.append("[acoustic] quality_factors: all entries must be positive")
    if cfg.width_count < 2:
        problems.append("[sweep] width_count: must be >= 2")
    if not cfg.width_min_m < cfg.width_max_m:
        problems.append("[sweep] width_min_m must be smaller than width_max_m")
    if cfg.width_min_m < SLOT_WIDTH_MIN or cfg.width_max_m > SLOT_WIDTH_MAX:
        problems.append(
            f"[sweep] widths must stay inside [{SLOT_WIDTH_MIN}, {SLOT_WIDTH_MAX}] m"
        )
    if not cfg.boundaries:
        problems.append("[sweep] boundaries: must not be empty")
    else:
        for bc in cfg.boundaries:
            if bc not in TOP_BOUNDARIES:
                problems.append(
                    f"[sweep] boundaries: {bc!r} not in {TOP_BOUNDARIES}"
                    f"{_suggest(bc, TOP_BOUNDARIES)}"
                )
        if len(set(cfg.boundaries)) != len(cfg.boundaries):
            problems.append("[sweep] boundaries: duplicate entries")
    for key in ("substrate", "cladding", "fill"):
        name = getattr(cfg, key)
        try:
            material = builtin_material(name)
        except MaterialNotFoundError as err:
            problems.append(
                f"[geometry] {key}: {name!r} not a builtin material"
                f"{_suggest(name, err.available)}"
            )
            continue
        if key == "fill" and not material.is_fluid:
            problems.append(
                f"[geometry] fill: {name!r} has no sound speed, cannot host "
                "acoustic modes"
            )
    return problems


def from_toml(text: str) -> SweepConfig:
    """Parse and validate; raises ConfigError with every problem found."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError([f"not valid TOML: {err}"]) from err
    problems: list[str] = []
    overrides: dict[str, object] = {}
    for section, body in raw.items():
        if section not in _LAYOUT:
            problems.append(
                f"unknown section [{section}]{_suggest(section, _LAYOUT)}"
            )
            continue
        if not isinstance(body, dict):
            problems.append(f"[{section}] must be a table, got {body!r}")
            continue
        keys = _LAYOUT[section]
        for key, value in body.items():
            if key not in keys:
                problems.append(
                    f"[{section}] unknown key {key!r}{_suggest(key, keys)}"
                )
                continue
            coerced = _coerce(section, key, keys[key], value, problems)
            if coerced is not None:
                overrides[keys[key]] = coerced
    if problems:
        raise ConfigError(problems)
    try:
        cfg = SweepConfig(**overrides)
    except SlotBrillouinError as err:
        raise ConfigError([str(err)]) from err
    problems = _semantic_problems(cfg)
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path) -> SweepConfig:
    with open(path, encoding="utf-8") as handle:
        return from_toml(handle.read())


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, tuple):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise AssertionError(f"unhandled config value {value!r}")


def to_toml(cfg: SweepConfig) -> str:
    """Emit in canonical section/key order; load(to_toml(c)) == c."""
    lines: list[str] = []
    for section, keys in _LAYOUT.items():
        lines.append(f"[{section}]")
        for key, field in keys.items():
            lines.append(f"{key} = {_format_value(getattr(cfg, field))}")
        lines.append("")
    return "\n".join(lines)


def save_config(cfg: SweepConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(to_toml(cfg))
