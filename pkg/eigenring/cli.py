"""Command-line front end: eigenring {polygon,well,ring,map,sweep}."""
import argparse
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import (
    create_map_command,
    create_polygon_command,
    create_ring_command,
    create_sweep_command,
    create_well_command,
)
from .base_command import ComputeCommand
from .config import RunConfig, Settings, get_settings
from .errors import DomainError, EigenringError, ValidationFailure
from .utils import configure_logging, load_json

logger = logging.getLogger(__name__)

COMMAND_FACTORIES = {
    "polygon": create_polygon_command,
    "well": create_well_command,
    "ring": create_ring_command,
    "map": create_map_command,
    "sweep": create_sweep_command,
}

# config field <- settings field, used when neither the command line nor --config sets it
SETTINGS_DEFAULTS = {
    "polygon": {"tol": "direction_tol", "max_steps": "max_steps"},
    "well": {"grid_points": "grid_points", "refine_factor": "refine_factor", "xtol": "root_xtol"},
    "ring": {"grid_points": "grid_points", "quad_epsabs": "quad_epsabs",
             "circulant_tol": "circulant_tol", "overlap_tol": "overlap_tol"},
    "map": {},
    "sweep": {},
}

RING_FLAGS = {"ring_n": "n", "ring_L": "L", "ring_a": "a", "ring_V0": "V0", "ring_shift": "shift"}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run config; command-line flags override it")
    parser.add_argument("--out", help="Output directory (default from EIGENRING_OUTPUT_DIR)")
    parser.add_argument("--format", choices=["csv", "json", "both"], help="Table format")
    parser.add_argument("--log-level", dest="log_level",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")


def _add_angle(parser: argparse.ArgumentParser, required: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--theta", type=float, help="Angle in radians, in (0, pi/2)")
    group.add_argument("--theta-frac", dest="theta_frac", type=float, nargs=2, metavar=("P", "Q"),
                       help="Angle p*pi/q")
    parser.add_argument("--lambda", dest="lambda", type=float, help="lambda in (0, 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenring",
        description="Polygon transformations, finite wells on a circle and rings of coupled wells",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    info = {name: factory().get_info() for name, factory in COMMAND_FACTORIES.items()}

    polygon = subparsers.add_parser("polygon", help=info["polygon"]["description"])
    polygon.add_argument("action", nargs="?", choices=["decompose", "eigenvalues", "iterate"])
    source = polygon.add_mutually_exclusive_group()
    source.add_argument("--random", type=int, metavar="N", help="Seeded random N-gon")
    source.add_argument("--regular", type=int, metavar="N", help="Regular N-gon")
    source.add_argument("--vertices", metavar="PAIRS",
                        help="Inline RE,IM vertices separated by spaces or ';', "
                             "e.g. --vertices='-1,0;1,0;0,1'")
    source.add_argument("--file", help="Polygon file with one 're im' pair per line")
    polygon.add_argument("--seed", type=int, help="Seed for --random")
    _add_angle(polygon)
    polygon.add_argument("--tol", type=float, help="Direction-change tolerance")
    polygon.add_argument("--max-steps", dest="max_steps", type=int, help="Iteration cap")
    polygon.add_argument("--trace", action="store_true", default=None, help="Write the residual trace")
    _add_common(polygon)

    well = subparsers.add_parser("well", help=info["well"]["description"])
    well.add_argument("--L", dest="L", type=float, help="Well width (nm)")
    well.add_argument("--l", dest="l", type=float, help="Circle length (nm)")
    well.add_argument("--V0", dest="V0", type=float, help="Well depth (meV)")
    well.add_argument("--shift", type=float, help="Potential shift V' (meV)")
    well.add_argument("--grid-points", dest="grid_points", type=int)
    well.add_argument("--refine-factor", dest="refine_factor", type=int)
    well.add_argument("--xtol", type=float, help="Root tolerance (meV)")
    well.add_argument("--count-limit", dest="count_limit", type=int)
    well.add_argument("--sample-points", dest="sample_points", type=int,
                      help="Write the lowest symmetric wavefunction at this many points")
    _add_common(well)

    ring = subparsers.add_parser("ring", help=info["ring"]["description"])
    ring.add_argument("--n", type=int, help="Number of wells")
    ring.add_argument("--L", dest="L", type=float, help="Well width (nm)")
    ring.add_argument("--a", dest="a", type=float, help="Well spacing (nm)")
    ring.add_argument("--V0", dest="V0", type=float, help="Well depth (meV)")
    ring.add_argument("--shift", type=float, help="Potential shift V' (meV)")
    ring.add_argument("--truncate-nn", dest="truncate_nn", action="store_true", default=None)
    ring.add_argument("--quad-epsabs", dest="quad_epsabs", type=float)
    ring.add_argument("--circulant-tol", dest="circulant_tol", type=float)
    ring.add_argument("--overlap-tol", dest="overlap_tol", type=float)
    ring.add_argument("--grid-points", dest="grid_points", type=int)
    _add_common(ring)

    mapping = subparsers.add_parser("map", help=info["map"]["description"])
    _add_angle(mapping)
    mapping.add_argument("--h11", type=float, help="Raw diagonal integral (meV)")
    mapping.add_argument("--h12", type=float, help="Raw nearest-neighbour integral (meV)")
    mapping.add_argument("--w-only", dest="w_only", action="store_true", default=None,
                         help="Only report the target entries W1, W2")
    mapping.add_argument("--convention", choices=["halved", "exact"])
    mapping.add_argument("--ring-n", dest="ring_n", type=int)
    mapping.add_argument("--ring-L", dest="ring_L", type=float)
    mapping.add_argument("--ring-a", dest="ring_a", type=float)
    mapping.add_argument("--ring-V0", dest="ring_V0", type=float)
    mapping.add_argument("--ring-shift", dest="ring_shift", type=float)
    _add_common(mapping)

    sweep = subparsers.add_parser("sweep", help=info["sweep"]["description"])
    sweep.add_argument("kind", nargs="?", choices=["dominance", "well"])
    sweep.add_argument("--shards", type=int)
    sweep.add_argument("--samples", type=int)
    sweep.add_argument("--n", type=int)
    sweep.add_argument("--lambda", dest="lambda", type=float)
    sweep.add_argument("--L", dest="L", type=float)
    sweep.add_argument("--V0", dest="V0", type=float)
    sweep.add_argument("--shift", type=float)
    sweep.add_argument("--l-min", dest="l_min", type=float)
    sweep.add_argument("--l-max", dest="l_max", type=float)
    sweep.add_argument("--grid-points", dest="grid_points", type=int)
    _add_common(sweep)

    return parser


def _parse_vertex(text: str) -> List[float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"vertex {text!r} is not of the form RE,IM")
    try:
        return [float(parts[0]), float(parts[1])]
    except ValueError:
        raise DomainError(f"vertex {text!r} is not of the form RE,IM")


def config_from_args(args: argparse.Namespace, settings: Settings,
                     command: ComputeCommand) -> RunConfig:
    """Merge --config, command-line flags and settings defaults into a validated run config."""
    name = args.command
    values: Dict[str, Any] = {}
    if args.config:
        values.update(load_json(args.config))

    flags = {key: value for key, value in vars(args).items()
             if value is not None and key not in ("command", "config", "log_level")}

    theta_frac = flags.pop("theta_frac", None)
    if theta_frac is not None:
        p, q = theta_frac
        if q == 0:
            raise DomainError("--theta-frac denominator must be non-zero")
        flags["theta"] = p * math.pi / q
    if "vertices" in flags:
        pairs = flags["vertices"].replace(";", " ").split()
        flags["vertices"] = [_parse_vertex(text) for text in pairs]

    ring_flags = {RING_FLAGS[key]: flags.pop(key) for key in list(flags) if key in RING_FLAGS}
    if ring_flags:
        ring = dict(values.get("ring") or {})
        ring.update(ring_flags)
        flags["ring"] = ring
    values.update(flags)

    values.setdefault("out", settings.output_dir)
    for field_name, setting_name in SETTINGS_DEFAULTS[name].items():
        values.setdefault(field_name, getattr(settings, setting_name))
    if name == "map" and values.get("ring"):
        for field_name, setting_name in SETTINGS_DEFAULTS["ring"].items():
            values["ring"].setdefault(field_name, getattr(settings, setting_name))

    return command.config_model.model_validate(values)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns 0 on success, 2 for invalid input, 3 for numerical failures."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    configure_logging(args.log_level or settings.log_level)

    command = COMMAND_FACTORIES[args.command]()
    try:
        config = config_from_args(args, settings, command)
    except ValidationError as e:
        logger.error(f"Invalid {args.command} configuration: {e}")
        print(f"invalid configuration: {e}", file=sys.stderr)
        return ValidationFailure.exit_code
    except (EigenringError, OSError, json.JSONDecodeError) as e:
        logger.error(f"Cannot build {args.command} configuration: {e}")
        print(f"invalid configuration: {e}", file=sys.stderr)
        return getattr(e, "exit_code", ValidationFailure.exit_code)

    result = command.run(config)
    if result.success:
        print(result.message)
        for path in result.artifacts:
            print(f"  wrote {path}")
    else:
        print(f"{command.name} failed: {result.message}", file=sys.stderr)
        if result.data:
            print(json.dumps(result.to_dict()["data"], indent=2, sort_keys=True), file=sys.stderr)
    return result.exit_code
