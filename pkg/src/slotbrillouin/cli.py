"""Command line front end.

Every subcommand prints a JSON document on stdout so results pipe into
other tools; human-oriented progress goes to stderr behind --verbose.

Exit codes: 0 success (including a sweep with some failed points),
1 solver failure / all sweep points failed, 2 bad configuration or
arguments, 3 file I/O problems.
"""

import argparse
import json
import logging
import math
import os
import sys

from . import acoustic as acoustic_mod
from . import optical as optical_mod
from .acoustic import acoustic_linewidth, solve_acoustic_mode, zero_point_normalize
from .capillary import fill_energy_delta, fill_transition_thickness, slot_fills
from .config import SweepConfig, load_config, save_config
from .constants import angular_to_hz, hz_to_angular
from .errors import ConfigError, SlotBrillouinError
from .geometry import build_mesh
from .materials import builtin_material
from .metrics import (
    DesignReport,
    cooperativity,
    lasing_threshold,
    sideband_resolved,
    thermal_occupancy,
)
from .optical import assemble_operator, resonance_order, slot_energy_fraction, solve_modes
from .sweep import _solve_width, emit_csv, emit_svg, run_sweep

log = logging.getLogger("slotbrillouin")

_ENV_CSV = "SLOTBRILLOUIN_OUT_CSV"
_ENV_SVG = "SLOTBRILLOUIN_OUT_SVG"
_ENV_WORKERS = "SLOTBRILLOUIN_WORKERS"


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _finite(x: float):
    """NaN/inf are not JSON; report them as null."""
    return x if math.isfinite(x) else None


def _report_json(report: DesignReport) -> dict:
    return {
        "width_m": report.width,
        "bc": report.bc,
        "n_eff": _finite(report.n_eff),
        "eta_slot": _finite(report.eta_slot),
        "m_opt": report.m_opt,
        "m_ac": report.m_acoustic,
        "omega_B_Hz": _finite(angular_to_hz(report.omega_brillouin)),
        "g0_Hz": _finite(angular_to_hz(report.g0)),
        "kappa_Hz": _finite(angular_to_hz(report.kappa)),
        "Q_ac": report.q_acoustic,
        "Gamma_Hz": _finite(angular_to_hz(report.gamma)),
        "C0": _finite(report.cooperativity),
        "P_th_W": _finite(report.p_threshold),
        "T_K": report.temperature,
        "n_m": _finite(report.n_thermal),
        "sideband_resolved": report.sideband_resolved,
        "status": report.status,
        "capillary_filled": report.capillary_filled,
    }


def _load(args) -> SweepConfig:
    if args.config is None:
        return SweepConfig()
    log.info("loading configuration from %s", args.config)
    return load_config(args.config)


def _cmd_optical(args) -> int:
    config = _load(args)
    geometry = config.geometry(args.width)
    log.info("meshing %g nm slot", args.width * 1e9)
    mesh = build_mesh(geometry, config.mesh_spec())
    log.info("solving %d x %d cell operator", mesh.nx, mesh.ny)
    modes = solve_modes(
        assemble_operator(mesh, config.wavelength_m),
        config.n_eff_guess,
        count=config.optical_mode_count,
    )
    payload = []
    for mode in modes:
        _, m_opt = resonance_order(
            mode.n_eff, geometry.acoustic_radius, config.wavelength_m
        )
        payload.append(
            {
                "n_eff": mode.n_eff,
                "polarization": mode.polarization,
                "eta_slot": slot_energy_fraction(mode),
                "residual": mode.residual,
                "m_opt": m_opt,
            }
        )
    if args.dump is not None:
        optical_mod.dump_mode(modes[0], args.dump)
        log.info("wrote field dump to %s", args.dump)
    _emit({"width_m": args.width, "wavelength_m": config.wavelength_m, "modes": payload})
    return 0


def _cmd_acoustic(args) -> int:
    config = _load(args)
    geometry = config.geometry(args.width, args.bc)
    fluid = builtin_material(config.fill)
    mode = solve_acoustic_mode(
        geometry, fluid, args.m, args.bc, resolution=config.resolution
    )
    p_zp = zero_point_normalize(mode, fluid.K)
    if args.dump is not None:
        acoustic_mod.dump_acoustic_mode(mode, args.dump)
        log.info("wrote field dump to %s", args.dump)
    _emit(
        {
            "width_m": args.width,
            "bc": args.bc,
            "m": args.m,
            "omega_Hz": angular_to_hz(mode.omega),
            "wavenumber_per_m": mode.k,
            "propagating": mode.propagating,
            "p_zp_Pa": p_zp,
        }
    )
    return 0


def _cmd_couple(args) -> int:
    config = _load(args)
    reports = _solve_width(config, args.width)
    _emit([_report_json(r) for r in reports])
    return 0 if any(r.status == "ok" for r in reports) else 1


def _cmd_metrics(args) -> int:
    config = _load(args)
    g0 = hz_to_angular(args.g0_hz)
    omega_m = hz_to_angular(args.omega_b_hz)
    kappa = config.kappa()
    q = config.quality_factors[0] if args.q is None else args.q
    gamma = acoustic_linewidth(omega_m, q)
    omega_pump = hz_to_angular(args.pump_hz)
    _emit(
        {
            "g0_Hz": args.g0_hz,
            "omega_B_Hz": args.omega_b_hz,
            "kappa_Hz": config.kappa_hz,
            "Q_ac": q,
            "Gamma_Hz": angular_to_hz(gamma),
            "C0": cooperativity(g0, kappa, gamma),
            "P_th_W": lasing_threshold(g0, kappa, gamma, omega_pump),
            "T_K": config.temperature_k,
            "n_m": thermal_occupancy(omega_m, config.temperature_k),
            "sideband_resolved": sideband_resolved(omega_m, kappa),
        }
    )
    return 0


def _cmd_capillary(args) -> int:
    config = _load(args)
    geometry = config.geometry(args.width)
    model = config.capillary_model()
    film = config.film_thickness_m if args.film is None else args.film
    transition = fill_transition_thickness(geometry, model)
    _emit(
        {
            "width_m": args.width,
            "film_thickness_m": film,
            "delta_E_J_per_m": fill_energy_delta(geometry, film, model),
            "fills": slot_fills(geometry, film, model),
            "status": transition.status,
            "critical_thickness_m": _finite(transition.critical_thickness),
        }
    )
    return 0


def _cmd_sweep(args) -> int:
    config = _load(args)
    csv_path = args.out_csv or os.environ.get(_ENV_CSV) or config.csv_path
    svg_path = args.out_svg or os.environ.get(_ENV_SVG) or config.svg_path
    workers = args.workers
    if workers is None and _ENV_WORKERS in os.environ:
        raw = os.environ[_ENV_WORKERS]
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError([f"{_ENV_WORKERS}={raw!r} is not an integer"]) from None
    log.info(
        "sweeping %d widths x %d boundaries", config.width_count, len(config.boundaries)
    )
    reports = run_sweep(config, workers=workers)
    emit_csv(reports, csv_path)
    emit_svg(reports, svg_path)
    ok = sum(1 for r in reports if r.status == "ok")
    _emit(
        {
            "points": len(reports),
            "ok": ok,
            "failed": len(reports) - ok,
            "csv": str(csv_path),
            "svg": str(svg_path),
        }
    )
    return 0 if ok else 1


def _cmd_config(args) -> int:
    config = _load(args)
    if args.out is not None:
        save_config(config, args.out)
        log.info("wrote configuration to %s", args.out)
    else:
        from .config import to_toml

        print(to_toml(config), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slotbrillouin",
        description="Design calculations for fluid-filled slot ring resonators.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="TOML", help="configuration file")
    common.add_argument(
        "--verbose", action="store_true", help="progress details on stderr"
    )
    width_arg = dict(type=float, default=50e-9, metavar="M", help="slot width in meters")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "optical-mode", parents=[common], help="solve guided optical modes"
    )
    p.add_argument("--width", **width_arg)
    p.add_argument("--dump", metavar="PATH", help="write the leading mode's fields")
    p.set_defaults(handler=_cmd_optical)

    p = sub.add_parser(
        "acoustic-mode", parents=[common], help="solve one acoustic slot mode"
    )
    p.add_argument("--width", **width_arg)
    p.add_argument("--m", type=int, required=True, help="azimuthal order")
    p.add_argument("--bc", choices=("sealed", "open"), default="sealed")
    p.add_argument("--dump", metavar="PATH", help="write the pressure field")
    p.set_defaults(handler=_cmd_acoustic)

    p = sub.add_parser(
        "couple", parents=[common], help="full coupling pipeline at one width"
    )
    p.add_argument("--width", **width_arg)
    p.set_defaults(handler=_cmd_couple)

    p = sub.add_parser(
        "metrics", parents=[common], help="figures of merit from given rates"
    )
    p.add_argument("--g0-hz", type=float, required=True, help="coupling rate (Hz)")
    p.add_argument(
        "--omega-b-hz", type=float, required=True, help="acoustic frequency (Hz)"
    )
    p.add_argument("--pump-hz", type=float, default=193.4e12, help="pump frequency (Hz)")
    p.add_argument("--q", type=float, help="acoustic quality factor")
    p.set_defaults(handler=_cmd_metrics)

    p = sub.add_parser(
        "capillary", parents=[common], help="slot filling energetics"
    )
    p.add_argument("--width", **width_arg)
    p.add_argument("--film", type=float, metavar="M", help="film thickness in meters")
    p.set_defaults(handler=_cmd_capillary)

    p = sub.add_parser("sweep", parents=[common], help="slot width sweep to CSV + SVG")
    p.add_argument("--out-csv", metavar="PATH", help="sweep table destination")
    p.add_argument("--out-svg", metavar="PATH", help="summary plot destination")
    p.add_argument("--workers", type=int, help="parallel width solves")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser(
        "config", parents=[common], help="print or write the effective configuration"
    )
    p.add_argument("--out", metavar="PATH", help="write instead of printing")
    p.set_defaults(handler=_cmd_config)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 3
    except SlotBrillouinError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
