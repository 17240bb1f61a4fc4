"""Material properties and electrostriction figures of merit.

Materials are simple frozen records loaded from a plain-text TOML table
(``data/materials.toml``).  The table is the single source of truth for
built-in values; code never hard-codes an index or a modulus.

The figure of merit used to rank fluids for photoelastic coupling is
``gamma_e / sqrt(K)``: a soft, polarizable medium responds strongly to
both optical forces and pressure fluctuations.
"""

import math
from dataclasses import dataclass
from importlib import resources

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import DomainError, MaterialNotFoundError

_ALLOWED_KEYS = {"name", "n", "rho", "c", "K"}
_REQUIRED_KEYS = {"name", "n"}

# Tolerance for cross-checking a listed bulk modulus against rho*c^2.
_K_CONSISTENCY_RTOL = 1e-9


@dataclass(frozen=True)
class Material:
    """Optical and acoustic properties of one medium (SI units).

    Acoustic fields are ``None`` for media that never appear in the
    acoustic solve (vacuum, the solid template materials when only their
    index matters).
    """

    name: str
    n: float
    rho: float | None = None
    c: float | None = None
    K: float | None = None

    def __post_init__(self):
        if self.n < 1.0:
            raise DomainError(f"material {self.name!r}: refractive index {self.n} < 1")
        for field in ("rho", "c", "K"):
            value = getattr(self, field)
            if value is not None and value <= 0.0:
                raise DomainError(f"material {self.name!r}: {field} = {value} must be positive")
        if (self.rho is None) != (self.c is None):
            raise DomainError(
                f"material {self.name!r}: rho and c must be given together"
            )
        if self.rho is not None and self.c is not None:
            derived = self.rho * self.c**2
            if self.K is None:
                object.__setattr__(self, "K", derived)
            elif abs(self.K - derived) > _K_CONSISTENCY_RTOL * derived:
                raise DomainError(
                    f"material {self.name!r}: K = {self.K} inconsistent with "
                    f"rho*c^2 = {derived}"
                )

    @property
    def eps_r(self) -> float:
        """Relative permittivity n**2 (dimensionless)."""
        return self.n * self.n

    @property
    def is_fluid(self) -> bool:
        """True when the record carries enough data for an acoustic solve."""
        return self.rho is not None and self.c is not None


def electrostrictive_constant(eps_r: float) -> float:
    """Clausius-Mossotti electrostrictive constant (eps_r - 1)(eps_r + 2)/3.

    Valid for eps_r >= 1; raises DomainError below that.
    """
    if eps_r < 1.0:
        raise DomainError(f"eps_r = {eps_r} < 1 has no electrostrictive meaning here")
    return (eps_r - 1.0) * (eps_r + 2.0) / 3.0


def material_fom(gamma_e: float, bulk_modulus: float) -> float:
    """Photoelastic figure of merit gamma_e / sqrt(K) (Pa^-1/2)."""
    if bulk_modulus <= 0.0:
        raise DomainError(f"bulk modulus {bulk_modulus} must be positive")
    return gamma_e / math.sqrt(bulk_modulus)


def _parse_record(record: dict, index: int) -> Material:
    if not isinstance(record, dict):
        raise DomainError(f"material record {index}: expected a table")
    unknown = set(record) - _ALLOWED_KEYS
    if unknown:
        raise DomainError(
            f"material record {index}: unknown keys {sorted(unknown)}; "
            f"allowed keys are {sorted(_ALLOWED_KEYS)}"
        )
    missing = _REQUIRED_KEYS - set(record)
    if missing:
        raise DomainError(f"material record {index}: missing keys {sorted(missing)}")
    numeric = {}
    for key in ("n", "rho", "c", "K"):
        if key in record:
            value = record[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"material record {index}: {key} must be a number")
            numeric[key] = float(value)
    return Material(name=str(record["name"]), **numeric)


def load_materials(text: str) -> dict[str, Material]:
    """Parse a TOML material table into a name-keyed dict.

    The document needs a ``version`` integer and a ``material`` array of
    tables; every other top-level key is rejected.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise DomainError(f"material table is not valid TOML: {exc}") from exc
    unknown = set(doc) - {"version", "material"}
    if unknown:
        raise DomainError(f"material table: unknown top-level keys {sorted(unknown)}")
    if doc.get("version") != 1:
        raise DomainError(f"material table: unsupported version {doc.get('version')!r}")
    records = doc.get("material", [])
    table: dict[str, Material] = {}
    for i, record in enumerate(records):
        material = _parse_record(record, i)
        if material.name in table:
            raise DomainError(f"material record {i}: duplicate name {material.name!r}")
        table[material.name] = material
    return table


def _load_builtin_table() -> dict[str, Material]:
    text = resources.files("slotbrillouin.data").joinpath("materials.toml").read_text("utf-8")
    return load_materials(text)


_BUILTIN: dict[str, Material] | None = None


def builtin_material(name: str) -> Material:
    """Look up one of the built-in materials by name."""
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = _load_builtin_table()
    try:
        return _BUILTIN[name]
    except KeyError:
        raise MaterialNotFoundError(name, list(_BUILTIN)) from None


def builtin_names() -> list[str]:
    """Sorted names of all built-in materials."""
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = _load_builtin_table()
    return sorted(_BUILTIN)
