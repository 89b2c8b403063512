"""Command-line front end.

Exit codes: 0 success, 1 failed check or empty result, 2 usage or
configuration error, 3 internal solver error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import bound, figures, oracle, scattering
from .core import CouplingCase, DeltaConvention, DomainError, ModelParams
from .crosscheck import DEFAULT_SEED, run_crosscheck

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ("transmission", "resonances", "bound", "sweep", "wavefunction", "figure", "crosscheck")

_PARAM_FLAGS = {
    "mass": "mass",
    "half_width": "half_width",
    "c_sigma": "c_sigma",
    "c_p": "c_p",
    "case": "coupling_case",
    "convention": "delta_convention",
}


@dataclass
class RunConfig:
    params: ModelParams
    command: str
    options: dict[str, Any] = field(default_factory=dict)
    out: Path | None = None


class ConfigError(Exception):
    pass


def _global_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--mass", type=float, help="fermion mass m (default 1)")
    common.add_argument("--half-width", type=float, dest="half_width", help="well half-width a (default 1)")
    common.add_argument("--c-sigma", type=float, dest="c_sigma", help="coupling C_Sigma (default 0)")
    common.add_argument("--c-p", type=float, dest="c_p", help="pseudoscalar coupling C_p (default 0)")
    common.add_argument("--case", choices=[c.value for c in CouplingCase])
    common.add_argument("--convention", choices=[c.value for c in DeltaConvention])
    common.add_argument("--config", type=Path, help="JSON file with model parameters")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="diracsquare",
        parents=[common],
        description="Dirac fermions in mixed vector-scalar-pseudoscalar square potentials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transmission", parents=[common], help="T and R on an energy grid")
    p.add_argument("--e-min", type=float, default=-10.0)
    p.add_argument("--e-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=401)

    p = sub.add_parser("resonances", parents=[common], help="unit-transmission energies")
    p.add_argument("--n-max", type=int, default=10)

    sub.add_parser("bound", parents=[common], help="bound-state spectrum")

    p = sub.add_parser("sweep", parents=[common], help="bound spectrum along a coupling")
    p.add_argument("--vary", choices=[v.value for v in bound.SweepVariable], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=41)

    p = sub.add_parser("wavefunction", parents=[common], help="spinor and currents on a grid")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--energy", type=float)
    which.add_argument("--level", type=int)
    p.add_argument("--x-min", type=float, default=-5.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=201)

    p = sub.add_parser("figure", parents=[common], help="figure-reproduction dataset")
    p.add_argument("figure_id", choices=figures.FIGURES)

    p = sub.add_parser("crosscheck", parents=[common], help="run the invariant battery")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument(
        "--perturb-lambda",
        type=float,
        default=0.0,
        help="relative fault injected into the delta strength (checker self-test)",
    )
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    values: dict[str, Any] = {}
    config = getattr(ns, "config", None)
    if config is not None:
        try:
            data = json.loads(Path(config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {config}: {exc}")
        if not isinstance(data, dict):
            parser.error(f"config {config} must hold a JSON object")
        values.update(data)
    for flag, key in _PARAM_FLAGS.items():
        if hasattr(ns, flag):
            values[key] = getattr(ns, flag)
    try:
        params = ModelParams.from_dict(values)
    except KeyError as exc:
        parser.error(exc.args[0])
    except (TypeError, ValueError) as exc:
        parser.error(f"invalid parameters: {exc}")

    options = {
        k: v
        for k, v in vars(ns).items()
        if k not in _PARAM_FLAGS and k not in ("config", "out", "command")
    }
    for key in ("steps", "points"):
        if key in options and options[key] < 2:
            parser.error(f"--{key} must be >= 2")
    if ns.command == "resonances" and options["n_max"] < 0:
        parser.error("--n-max must be >= 0")
    if ns.command == "wavefunction" and options["x_max"] <= options["x_min"]:
        parser.error("--x-max must exceed --x-min")
    return RunConfig(params=params, command=ns.command, options=options, out=getattr(ns, "out", None))


def execute(cfg: RunConfig) -> tuple[str, int]:
    p, opt = cfg.params, cfg.options
    if cfg.command == "transmission":
        grid = np.linspace(opt["e_min"], opt["e_max"], opt["steps"])
        rows = scattering.transmission_scan(p, grid)
        code = EXIT_OK if any(r.T is not None for r in rows) else EXIT_FAIL
        return scattering.scan_csv(rows), code
    if cfg.command == "resonances":
        table = scattering.resonance_energies(p, opt["n_max"])
        code = EXIT_OK if table.kept_energies(1) or table.kept_energies(-1) else EXIT_FAIL
        return scattering.resonance_csv(table), code
    if cfg.command == "bound":
        return bound.spectrum_csv(bound.find_bound_states(p)), EXIT_OK
    if cfg.command == "sweep":
        grid = np.linspace(opt["start"], opt["stop"], opt["steps"])
        return bound.sweep_csv(bound.spectrum_sweep(p, opt["vary"], grid)), EXIT_OK
    if cfg.command == "wavefunction":
        grid = np.linspace(opt["x_min"], opt["x_max"], opt["points"])
        sample = oracle.spinor_eval(p, grid, energy=opt.get("energy"), level=opt.get("level"))
        return oracle.spinor_csv(sample), EXIT_OK
    if cfg.command == "figure":
        return figures.run_figure(opt["figure_id"], p.delta_convention), EXIT_OK
    if cfg.command == "crosscheck":
        report = run_crosscheck(seed=opt["seed"], lam_perturbation=opt["perturb_lambda"])
        return report.to_json() + "\n", EXIT_OK if report.passed else EXIT_FAIL
    raise ConfigError(f"unknown command {cfg.command}")


def main(argv: list[str] | None = None) -> int:
    cfg = parse_config(argv)
    try:
        text, code = execute(cfg)
    except figures.EmptyDatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DomainError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # solver failure, not a usage problem
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
