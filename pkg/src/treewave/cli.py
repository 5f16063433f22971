"""Command-line interface.

Subcommands: propagate | energy | equipartition | huygens | transforms |
verify.  The default output directory is taken from --out, then the
TREEWAVE_OUT environment variable, then ./treewave-out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, TruncationError
from .experiment import (
    ExperimentConfig,
    default_output_dir,
    resolve_initial_data,
    run_experiment,
    write_energy_table,
    write_equipartition_table,
    write_huygens_table,
    _scalar_columns,
    _write_csv,
)
from .functions import RadialProfile
from .scalars import ScalarMode
from .topology import Ball
from .transforms import abel, abel_inverse, dual_abel, dual_abel_inverse
from .verify import run_verification
from .wave import solve


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=int, default=2, help="branching parameter (>= 2)")
    parser.add_argument("--steps", type=int, default=8, help="solve for |n| <= steps")
    parser.add_argument("--mode", choices=["exact", "float", "float64"], default="exact")
    parser.add_argument(
        "--solver", choices=["closed", "recurrence", "both"], default="both"
    )
    parser.add_argument("--initial", type=Path, help="JSON file with initial data")
    parser.add_argument("--radius", type=int, help="truncation ball radius")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument(
        "--schedule",
        default="sqrt",
        help="shell margin: 'sqrt' or a fixed integer",
    )


def _config_from_args(args) -> ExperimentConfig:
    initial = None
    if args.initial is not None:
        initial = json.loads(Path(args.initial).read_text(encoding="utf-8"))
    schedule = args.schedule
    if isinstance(schedule, str) and schedule != "sqrt":
        try:
            schedule = int(schedule)
        except ValueError:
            raise ConfigError(
                f"field 'schedule' must be 'sqrt' or an integer, got {schedule!r}"
            ) from None
    return ExperimentConfig(
        q=args.q,
        steps=args.steps,
        mode="float64" if args.mode == "float" else args.mode,
        solver=args.solver,
        radius=args.radius,
        seed=args.seed,
        initial=initial,
        schedule=schedule,
        out=str(args.out) if args.out else None,
    )


def _solve_single(config: ExperimentConfig):
    config = config.validated()
    f, g = resolve_initial_data(config)
    ball = Ball(config.q, config.radius) if config.radius is not None else None
    solver = "recurrence" if config.solver == "both" else config.solver
    return solve(f, g, config.steps, solver=solver, ball=ball)


def _cmd_propagate(args) -> int:
    out_dir = run_experiment(_config_from_args(args))
    print(f"experiment written to {out_dir}")
    return 0


def _cmd_energy(args) -> int:
    config = _config_from_args(args)
    trajectory = _solve_single(config)
    out_dir = default_output_dir(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "energy.csv"
    write_energy_table(trajectory, path)
    print(f"energy table written to {path}")
    return 0


def _cmd_equipartition(args) -> int:
    config = _config_from_args(args)
    trajectory = _solve_single(config)
    out_dir = default_output_dir(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "equipartition.csv"
    write_equipartition_table(trajectory, path)
    print(f"equipartition table written to {path}")
    return 0


def _cmd_huygens(args) -> int:
    config = _config_from_args(args)
    trajectory = _solve_single(config)
    out_dir = default_output_dir(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "huygens.csv"
    write_huygens_table(trajectory, config, path)
    print(f"shell concentration table written to {path}")
    return 0


def _cmd_transforms(args) -> int:
    mode = ScalarMode("float64" if args.mode == "float" else args.mode)
    if args.initial is not None:
        blob = json.loads(Path(args.initial).read_text(encoding="utf-8"))
        profile = RadialProfile.from_json(blob)
    else:
        profile = RadialProfile.delta(args.q, mode)
    out_dir = default_output_dir(str(args.out) if args.out else None)
    out_dir.mkdir(parents=True, exist_ok=True)

    forward = abel(profile)
    rows = [[str(h)] + _scalar_columns(value) for h, value in forward.items()]
    _write_csv(out_dir / "abel.csv", ["h", "exact_value_a", "exact_value_b", "float_value"], rows)

    recovered = abel_inverse(forward)
    rows = [[str(n)] + _scalar_columns(value) for n, value in recovered.items()]
    _write_csv(
        out_dir / "abel_inverse.csv",
        ["n", "exact_value_a", "exact_value_b", "float_value"],
        rows,
    )

    limit = max(profile.support_radius(), 0) + 2
    means = RadialProfile(
        profile.q, mode, [(n, dual_abel(forward, n)) for n in range(limit + 1)]
    )
    rows = [[str(n)] + _scalar_columns(means[n]) for n in range(limit + 1)]
    _write_csv(
        out_dir / "dual_abel.csv",
        ["n", "exact_value_a", "exact_value_b", "float_value"],
        rows,
    )

    reconstructed = dual_abel_inverse(means)
    rows = [[str(h)] + _scalar_columns(value) for h, value in reconstructed.items()]
    _write_csv(
        out_dir / "dual_abel_inverse.csv",
        ["h", "exact_value_a", "exact_value_b", "float_value"],
        rows,
    )
    print(f"transform tables written to {out_dir}")
    return 0


def _cmd_verify(args) -> int:
    qs = tuple(int(part) for part in str(args.q).split(","))
    report, passed = run_verification(
        qs=qs, seed=args.seed, size=args.size, negative_control=args.negative_control
    )
    sys.stdout.write(report)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treewave",
        description="Exact shifted-wave-equation solver and verifier on homogeneous trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, blurb in [
        ("propagate", _cmd_propagate, "solve and write snapshots, energies, shells, manifest"),
        ("energy", _cmd_energy, "solve and write the energy table"),
        ("equipartition", _cmd_equipartition, "solve and write the gap table with its decay bound"),
        ("huygens", _cmd_huygens, "solve and write interior shell sums"),
    ]:
        p = sub.add_parser(name, help=blurb)
        _add_common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("transforms", help="emit transform tables for a radial profile")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--mode", choices=["exact", "float", "float64"], default="exact")
    p.add_argument("--initial", type=Path, help="JSON file with a radial profile")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=_cmd_transforms)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--q", default="2,3", help="comma-separated branching parameters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", choices=["small", "standard"], default="standard")
    p.add_argument(
        "--negative-control",
        action="store_true",
        help="corrupt the recurrence weight; conservation must then fail",
    )
    p.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as error:
        print(f"configuration error: {error}", file=sys.stderr)
        return 2
    except TruncationError as error:
        print(f"truncation error: {error}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
