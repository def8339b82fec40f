"""
Command-line interface.

Every subcommand writes one document to standard output. Diagnostics go to standard
error; failures end with a single ``error:<kind>:<message>`` line and a nonzero exit code.
"""
import argparse
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, List, NoReturn, Optional, Sequence, Tuple

from loguru import logger

from mvrisk.config.config import config
from mvrisk.core.errors import MvriskError, OracleMismatchError, OutputError, UsageError
from mvrisk.core.laws import run_laws
from mvrisk.core.models import ConfidenceLevel, Law, ScalarizationWeights, ScenarioSet
from mvrisk.core.quantile import enumerate_mvar, enumerate_mvar_oracle
from mvrisk.core.risk import full_report, vmcvar
from mvrisk.services.files import read_scenarios
from mvrisk.services.mip import export_mip
from mvrisk.services.region import region_rows, render_region_csv
from mvrisk.services.reports import (
    first_failure,
    law_document,
    mvar_document,
    mvar_rows,
    render_json,
    render_law_csv,
    render_vector_csv,
    report_document,
    report_rows,
    vmcvar_document,
    vmcvar_rows,
)
from mvrisk.utils.vectors import contains

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ORACLE = 3
EXIT_LAW = 4

SUBCOMMANDS = ("mvar", "vmcvar", "compare", "laws", "region", "export-mip")
DECIMAL = re.compile(r"^[0-9]*\.?[0-9]+$")


@dataclass(frozen=True)
class CliConfig:
    """
    Parsed command line.

    :param subcommand: One of SUBCOMMANDS.
    :param input: Scenario file path.
    :param level: Confidence level.
    :param weights: Scalarization weights, if given.
    :param fmt: Output format, json or csv.
    :param seed: Base seed for laws.
    :param trials: Random instances per law.
    :param law: Single law to check.
    :param oracle: Cross-check enumeration against the subset scan.
    :param strict_exceedance: Use > in the VMCVaR-bar exceedance test.
    :param relaxed: Allow VMCVaR-bar with several efficient points.
    :param out: Output file instead of standard output.
    """
    subcommand: str
    input: Optional[str] = None
    level: Optional[ConfidenceLevel] = None
    weights: Optional[ScalarizationWeights] = None
    fmt: str = "json"
    seed: int = 0
    trials: int = 0
    law: Optional[Law] = None
    oracle: bool = False
    strict_exceedance: bool = False
    relaxed: bool = False
    out: Optional[str] = None


@dataclass(frozen=True)
class CommandResult:
    """Output document of a subcommand with its exit code."""

    text: str
    code: int = EXIT_OK
    failure: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="scenario file, .json or CSV")
    common.add_argument("--level", required=True, help="confidence level p as a decimal, e.g. 0.6")

    formatted = _Parser(add_help=False)
    formatted.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    parser = _Parser(prog="mvrisk", description="Multivariate VaR and CVaR of finite discrete distributions.")
    commands = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    mvar = commands.add_parser("mvar", parents=[common, formatted], help="enumerate p-level efficient points")
    mvar.add_argument("--oracle", action="store_true", help="cross-check against the subset scan")

    commands.add_parser("vmcvar", parents=[common, formatted], help="vector-valued multivariate CVaR")

    compare = commands.add_parser("compare", parents=[common, formatted], help="all measures side by side")
    compare.add_argument("--weights", help="scalarization weights c1,c2,...")
    compare.add_argument("--strict-exceedance", action="store_true")
    compare.add_argument("--relaxed", action="store_true")

    laws = commands.add_parser("laws", parents=[formatted], help="check risk-measure laws on seeded instances")
    laws.add_argument("--seed", type=int, default=config.laws_seed)
    laws.add_argument("--trials", type=int, default=config.laws_trials)
    laws.add_argument("--law", choices=[law.value for law in Law])

    region = commands.add_parser("region", parents=[common], help="plot data of the desirable region")
    region.add_argument("--out", help="CSV file to write")

    mip = commands.add_parser("export-mip", parents=[common], help="scalarized MIP in CPLEX LP format")
    mip.add_argument("--weights", required=True, help="scalarization weights c1,c2,...")
    mip.add_argument("--out", help="LP file to write")
    return parser


def _parse_level(text: str) -> ConfidenceLevel:
    if not DECIMAL.match(text.strip()):
        raise UsageError(f"--level must be a decimal literal, got {text!r}")
    return ConfidenceLevel(float(text))


def _parse_weights(text: Optional[str]) -> Optional[ScalarizationWeights]:
    if text is None:
        return None
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--weights must be comma-separated numbers, got {text!r}")
    return ScalarizationWeights(values)


def parse_args(argv: Sequence[str]) -> CliConfig:
    """
    Interpret a command line.

    :param argv: Arguments without the program name.
    :return: Parsed configuration.
    :raises UsageError: If the arguments are malformed.
    :raises InvalidLevelError: If the level is outside (0, 1).
    :raises InvalidWeightsError: If the weights are not convex.
    """
    args = build_parser().parse_args(list(argv))
    if args.subcommand is None:
        raise UsageError(f"expected a subcommand: {', '.join(SUBCOMMANDS)}")

    if args.subcommand == "laws":
        if args.trials < 0:
            raise UsageError("--trials must be nonnegative")
        return CliConfig(
            subcommand="laws",
            fmt=args.fmt,
            seed=args.seed,
            trials=args.trials,
            law=Law(args.law) if args.law else None,
        )

    return CliConfig(
        subcommand=args.subcommand,
        input=args.input,
        level=_parse_level(args.level),
        weights=_parse_weights(getattr(args, "weights", None)),
        fmt=getattr(args, "fmt", "json"),
        oracle=getattr(args, "oracle", False),
        strict_exceedance=getattr(args, "strict_exceedance", False),
        relaxed=getattr(args, "relaxed", False),
        out=getattr(args, "out", None),
    )


def _check_oracle(scenarios: ScenarioSet, level: ConfidenceLevel, etas: List[Tuple[float, ...]]) -> None:
    expected = enumerate_mvar_oracle(scenarios, level).etas
    if len(expected) != len(etas) or not all(contains(etas, eta, config.pareto_tol) for eta in expected):
        raise OracleMismatchError(f"Grid enumeration gave {etas}, subset scan gave {expected}")
    logger.debug(f"Subset scan confirmed {len(etas)} efficient points")


def execute(cli: CliConfig) -> CommandResult:
    """
    Run one subcommand.

    :param cli: Parsed configuration.
    :return: Output document, exit code and failure note.
    :raises MvriskError: On invalid data or an oracle mismatch.
    """
    if cli.subcommand == "laws":
        reports = run_laws(cli.seed, cli.trials, cli.law)
        text = render_law_csv(reports) if cli.fmt == "csv" else render_json(law_document(reports))
        failed = first_failure(reports)
        if failed is None:
            return CommandResult(text)
        return CommandResult(text, EXIT_LAW, f"{failed.law.value} does not hold")

    scenarios = read_scenarios(cli.input)
    level = cli.level

    if cli.subcommand == "mvar":
        mvar = enumerate_mvar(scenarios, level)
        if cli.oracle:
            _check_oracle(scenarios, level, mvar.etas)
        text = (render_vector_csv(mvar_rows(mvar), scenarios.dim) if cli.fmt == "csv"
                else render_json(mvar_document(mvar)))
    elif cli.subcommand == "vmcvar":
        risk_set = vmcvar(scenarios, level)
        text = (render_vector_csv(vmcvar_rows(risk_set), scenarios.dim) if cli.fmt == "csv"
                else render_json(vmcvar_document(risk_set)))
    elif cli.subcommand == "compare":
        report = full_report(scenarios, level, cli.weights, cli.strict_exceedance, cli.relaxed)
        text = (render_vector_csv(report_rows(report), scenarios.dim) if cli.fmt == "csv"
                else render_json(report_document(report)))
    elif cli.subcommand == "region":
        text = render_region_csv(region_rows(scenarios, level))
    else:
        text = export_mip(scenarios, level, cli.weights)

    if cli.out:
        try:
            Path(cli.out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise OutputError(f"Cannot write {cli.out}: {e.strerror or e}")
        logger.info(f"Wrote {cli.subcommand} output to {cli.out}")
        text = ""
    return CommandResult(text)


def configure_logging(stream: IO[str]) -> None:
    """Replace the default loguru sink with one on the given stream."""
    logger.remove()
    logger.add(stream, level=os.environ.get("LOGURU_LEVEL", config.log_level))


def run(argv: Optional[Sequence[str]] = None,
        stdout: Optional[IO[str]] = None,
        stderr: Optional[IO[str]] = None) -> int:
    """
    Entry point of the command line.

    :param argv: Arguments without the program name; sys.argv[1:] if None.
    :param stdout: Stream for the output document.
    :param stderr: Stream for diagnostics.
    :return: Exit code: 0 ok, 1 usage, 2 data error, 3 oracle mismatch, 4 law violation.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    configure_logging(stderr)

    if not argv:
        build_parser().print_usage(stderr)
        return EXIT_USAGE

    try:
        cli = parse_args(argv)
        result = execute(cli)
    except UsageError as e:
        build_parser().print_usage(stderr)
        stderr.write(f"error:{e.kind}:{e}\n")
        return EXIT_USAGE
    except OracleMismatchError as e:
        stderr.write(f"error:{e.kind}:{e}\n")
        return EXIT_ORACLE
    except MvriskError as e:
        stderr.write(f"error:{e.kind}:{e}\n")
        return EXIT_DATA

    stdout.write(result.text)
    if result.failure:
        stderr.write(f"error:law_violation:{result.failure}\n")
    else:
        logger.success(f"{cli.subcommand} finished")
    return result.code
