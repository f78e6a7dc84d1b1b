"""
Command Line Interface
----------------------

    floatforge run CONFIG [--output-dir DIR] [--audit]
    floatforge check CONFIG
    floatforge oracle cuboid --b B --h H [--l L] --rho-s RHO [--g G] [--alpha-max A] [--step S]
    floatforge oracle heel --b B --h H --rho-s RHO [--step S]
    floatforge volume [--radius R] [--speed U] [--steps N]

Oracle and volume results are written to stdout as CSV. Exit codes:
0 success, 1 configuration error, 2 numerical divergence, 3 consistency
violation.

Author: FloatForge Developers
License: MIT
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

import numpy as np
import pandas as pd

from floatforge import __version__
from floatforge.errors import FloatForgeError, ValidityError
from floatforge.forge import FloatForge
from floatforge.hydrostatics.cuboid import (
    FloatingCuboid,
    cuboid_GM,
    equilibrium_heel_oracle,
    stability_curve,
    wall_sided_limit,
)
from floatforge.scenarios.base import DIVERGED
from floatforge.scenarios.diagnostics import sweep_voxel_volume, voxel_volume_summary
from floatforge.utils import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floatforge",
        description="Free-surface lattice Boltzmann simulations with floating rigid bodies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the scenario of a configuration file")
    run.add_argument("config", help="scenario configuration file")
    run.add_argument("--output-dir", help="override [run] output_dir")
    run.add_argument("--audit", action="store_true", help="record cell state transitions")

    check = commands.add_parser("check", help="validate a configuration and its stability")
    check.add_argument("config", help="scenario configuration file")

    oracle = commands.add_parser("oracle", help="analytic hydrostatics")
    kinds = oracle.add_subparsers(dest="oracle", required=True)

    cuboid = kinds.add_parser("cuboid", help="metacentric height and righting moment curve")
    cuboid.add_argument("--b", type=float, required=True, help="width")
    cuboid.add_argument("--h", type=float, required=True, help="height")
    cuboid.add_argument("--l", type=float, default=1.0, help="length (default 1)")
    cuboid.add_argument("--rho-s", type=float, required=True, help="body density in (0, 1)")
    cuboid.add_argument("--g", type=float, default=1.0, help="gravity (default 1)")
    cuboid.add_argument(
        "--alpha-max", type=float, default=None,
        help="largest heel angle in degrees (default: just below the wall-sided limit)",
    )
    cuboid.add_argument("--step", type=float, default=1.0, help="angle increment in degrees")

    heel = kinds.add_parser("heel", help="stable heel angles by brute-force search")
    heel.add_argument("--b", type=float, required=True, help="width")
    heel.add_argument("--h", type=float, required=True, help="height")
    heel.add_argument("--rho-s", type=float, required=True, help="body density in (0, 1)")
    heel.add_argument("--step", type=float, default=0.01, help="grid spacing in degrees")

    volume = commands.add_parser("volume", help="covered cells of a sphere moving along x")
    volume.add_argument("--radius", type=float, default=5.0)
    volume.add_argument("--speed", type=float, default=1e-4)
    volume.add_argument("--steps", type=int, default=10000)
    volume.add_argument("--series", action="store_true", help="print the count of every step")
    return parser


def _oracle_cuboid(args: argparse.Namespace, out: TextIO) -> int:
    try:
        box = FloatingCuboid(args.b, args.h, args.l, args.rho_s, g=args.g)
    except ValueError as exc:
        raise ValidityError(str(exc)) from exc
    if args.step <= 0:
        raise ValidityError(f"--step must be positive, got {args.step}")
    limit = wall_sided_limit(box)
    alpha_max = args.alpha_max if args.alpha_max is not None else limit
    if alpha_max >= limit:
        if args.alpha_max is not None:
            raise ValidityError(
                f"--alpha-max {alpha_max} is outside the wall-sided range (limit {limit:.4f} deg)"
            )
        alpha_max = np.nextafter(limit, 0.0)
    alphas = np.arange(0.0, alpha_max + 1e-12, args.step)
    alphas = alphas[alphas < limit]
    curve = stability_curve(box, alphas)
    frame = curve.to_frame()
    frame.insert(1, "GM", [cuboid_GM(box, a) for a in alphas])
    frame.to_csv(out, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


def _oracle_heel(args: argparse.Namespace, out: TextIO) -> int:
    if not 0.0 < args.rho_s < 1.0:
        raise ValidityError(f"--rho-s must lie in (0, 1), got {args.rho_s}")
    roots = equilibrium_heel_oracle(args.b, args.h, args.rho_s, step=args.step)
    frame = pd.DataFrame(roots, columns=["alpha_deg", "draft"])
    frame.to_csv(out, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


def _volume(args: argparse.Namespace, out: TextIO) -> int:
    counts = sweep_voxel_volume(args.radius, args.speed, args.steps, progress=args.verbose > 0)
    if args.series:
        frame = pd.DataFrame({"step": np.arange(len(counts)), "covered_cells": counts})
    else:
        frame = pd.DataFrame([voxel_volume_summary(counts, args.radius)])
    frame.to_csv(out, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


def _run(args: argparse.Namespace, out: TextIO) -> int:
    forge = FloatForge.from_file(args.config, verbose=args.verbose > 0, audit=args.audit)
    result = forge.run(args.output_dir)
    for key, value in result.summary.items():
        out.write(f"{key} = {value}\n")
    if result.status == DIVERGED:
        return EXIT_DIVERGED
    return EXIT_OK


def _check(args: argparse.Namespace, out: TextIO) -> int:
    forge = FloatForge.from_file(args.config, verbose=args.verbose > 0)
    report = forge.check()
    out.write(str(report) + "\n")
    return EXIT_OK


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Entry point of the ``floatforge`` command.

    Returns:
        Process exit code.
    """
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet or not args.verbose else args.verbose - 1)

    try:
        if args.command == "run":
            return _run(args, out)
        if args.command == "check":
            return _check(args, out)
        if args.command == "volume":
            return _volume(args, out)
        if args.oracle == "cuboid":
            return _oracle_cuboid(args, out)
        return _oracle_heel(args, out)
    except FloatForgeError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
