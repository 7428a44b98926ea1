"""Command-line front end: ``purcell-pl spectrum|sweep|preset|check``."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .acceptance import AcceptanceSuite
from .exceptions import ConfigError, DomainError, OutputError, PurcellPLError
from .logging import configure_logging, get_logger, reset_context, run_context
from .physics.spectrum import Channel
from .scenarios.models import Scenario, validate_scenario
from .scenarios.runner import ScenarioRunner


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

logger = get_logger(__name__)


def _add_scenario_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path, help="Scenario YAML file")
    source.add_argument("--preset", help="Start from a packaged preset")
    parser.add_argument(
        "--collection", help="Collection efficiencies, e.g. A=1,B=0.1"
    )
    parser.add_argument("--seed", type=int, help="Monte-Carlo seed")
    parser.add_argument("--out", type=Path, help="Output directory")
    parser.add_argument(
        "--plot", action="store_true", default=None, help="Also write SVG plots"
    )
    parser.add_argument(
        "--no-plot", dest="plot", action="store_false", default=None, help="Skip SVG plots"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="purcell-pl",
        description="CW photoluminescence of quantum-dot ensembles in Purcell micropillars",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="Logging level (DEBUG, INFO, WARNING, ...)")
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", help="Write spectrum CSVs")
    _add_scenario_options(spectrum)
    spectrum.add_argument("--power", type=float, help="Single pump rate (units of Γ0)")
    spectrum.add_argument(
        "--normalized",
        action="store_true",
        help="Also write peak-normalised CSVs",
    )

    sweep = commands.add_parser("sweep", help="Measured Q against pump rate")
    _add_scenario_options(sweep)
    sweep.add_argument("--powers", help="Power grid start:stop:log|lin:count")
    sweep.add_argument(
        "--channel",
        choices=[channel.value for channel in Channel],
        help="Channel the measured Q is extracted from (default: mode)",
    )

    preset = commands.add_parser("preset", help="Emit a figure preset bundle")
    preset.add_argument("name", nargs="?", help="Preset name")
    preset.add_argument("--list", action="store_true", help="List preset names")
    preset.add_argument("--power", type=float, help="Restrict spectra to one pump rate")
    preset.add_argument("--powers", help="Power grid for the sweep summary")
    preset.add_argument("--collection", help="Collection efficiencies, e.g. A=1,B=1")
    preset.add_argument("--seed", type=int, help="Monte-Carlo seed")
    preset.add_argument("--out", type=Path, help="Output directory")
    preset.add_argument(
        "--plot", action="store_true", default=None, help="Also write SVG plots"
    )
    preset.add_argument(
        "--no-plot", dest="plot", action="store_false", default=None, help="Skip SVG plots"
    )

    commands.add_parser("check", help="Run the acceptance suite")
    return parser


def _scenario(args: argparse.Namespace, runner: ScenarioRunner) -> Scenario:
    if args.config is not None:
        scenario = runner.load(args.config)
    elif args.preset:
        scenario = runner.load_preset(args.preset)
    else:
        scenario = validate_scenario({})
    return scenario.with_overrides(
        power=getattr(args, "power", None),
        powers=getattr(args, "powers", None),
        collection=args.collection,
        seed=args.seed,
        out=args.out,
        plot=args.plot,
        channel=getattr(args, "channel", None),
    )


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False, default=str))


def _run_spectrum(args: argparse.Namespace, runner: ScenarioRunner) -> int:
    scenario = _scenario(args, runner)
    summary = runner.run_spectrum(scenario, normalized=args.normalized)
    _emit(summary.as_dict())
    return EXIT_OK


def _run_sweep(args: argparse.Namespace, runner: ScenarioRunner) -> int:
    scenario = _scenario(args, runner)
    summary = runner.run_sweep(scenario)
    _emit(summary.as_dict())
    return EXIT_OK


def _run_preset(args: argparse.Namespace, runner: ScenarioRunner) -> int:
    if args.list:
        print("\n".join(runner.list_presets()))
        return EXIT_OK
    if not args.name:
        raise ConfigError(
            "A preset name is required. Valid presets: " + ", ".join(runner.list_presets())
        )
    overrides = {
        "power": args.power,
        "powers": args.powers,
        "collection": args.collection,
        "seed": args.seed,
        "plot": args.plot,
    }
    summary = runner.run_preset(
        args.name,
        out_dir=args.out,
        overrides={key: value for key, value in overrides.items() if value is not None},
    )
    _emit(summary.as_dict())
    logger.info("cli.preset.completed", preset=args.name, files=len(summary.files))
    return EXIT_OK


def _run_check(args: argparse.Namespace, runner: ScenarioRunner) -> int:
    results = AcceptanceSuite(runner).run()
    width = max(len(result.title) for result in results)
    for result in results:
        print(
            f"{result.number:>2}  {result.status:<9}  {result.title:<{width}}  "
            f"{result.describe()}"
        )
        if result.deviation:
            print(f"{'':>2}  {'':<9}  note: {result.deviation}")
    failed = [result.number for result in results if not result.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_CONFIG


HANDLERS = {
    "spectrum": _run_spectrum,
    "sweep": _run_sweep,
    "preset": _run_preset,
    "check": _run_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        configure_logging(args.log_level, force=True)
    reset_context()
    runner = ScenarioRunner()

    with run_context(command=args.command):
        try:
            return HANDLERS[args.command](args, runner)
        except (ConfigError, DomainError) as exc:
            logger.error("cli.config_error", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (OutputError, OSError) as exc:
            logger.error("cli.io_error", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        except PurcellPLError as exc:
            logger.error("cli.run_failed", error=str(exc))
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG


__all__ = ["EXIT_CONFIG", "EXIT_IO", "EXIT_OK", "build_parser", "main"]
