import argparse
import functools
import logging
import sys
from typing import Callable, Dict, List, Optional

from .monogamy_toolkit.classify import classify_state
from .monogamy_toolkit.local_ops import local_ranks
from .monogamy_toolkit.measures import full_report
from .monogamy_toolkit.save_data.save_on_disk import SaveStateOnDisk, SaveTableOnDisk
from .monogamy_toolkit.sweep import (FREE_PARAMETERS, Family, SweepError, SweepSpec,
                                     parse_axis, parse_fixed, sweep_rows)
from .monogamy_toolkit.utils.format_str import FormatStr
from .monogamy_toolkit.verify.results import TrialConfig
from .monogamy_toolkit.verify.suites import (DEFAULT_DECOMPS_PER_STATE,
                                             DEFAULT_K_RANGE, SUITES, all_passed,
                                             run_suite)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

MEASURE_FORMATS = {
    "json": FormatStr.report_json,
    "csv": FormatStr.report_csv,
    "table": FormatStr.report_table,
}


def input_error(func: Callable[[argparse.Namespace], int]
                ) -> Callable[[argparse.Namespace], int]:
    """
    Decorator that wraps a command to turn input errors into exit code 2.
    :param func: Command that should be wrapped.
    :return: Wrapped command.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except KeyError as err:
            print(f"There is no such key {err}.", file=sys.stderr)
        except (ValueError, OSError) as err:
            print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INPUT

    return wrapper


@input_error
def cmd_measure(args: argparse.Namespace) -> int:
    """
    Prints the seven measures and the local ranks of a state file.
    """
    state = SaveStateOnDisk(args.path).read_state()
    print(MEASURE_FORMATS[args.format](full_report(state), local_ranks(state)))
    return EXIT_OK


def _named(pairs: List[tuple], flag: str) -> Dict:
    names = [name for name, _ in pairs]
    repeated = sorted({name for name in names if names.count(name) > 1})
    if repeated:
        raise SweepError(f"{flag} given more than once for {repeated}")
    return dict(pairs)


@input_error
def cmd_sweep(args: argparse.Namespace) -> int:
    """
    Writes one CSV row of parameters and measures per grid point.
    """
    spec = SweepSpec.build(
        family=args.family,
        grid=_named([parse_axis(text) for text in args.param], "--param"),
        fixed=_named([parse_fixed(text) for text in args.fix], "--fix"),
    )
    rows = [FormatStr.csv_cells(row) for row in sweep_rows(spec)]
    SaveTableOnDisk(args.out).save_table(spec.header(), rows)
    return EXIT_OK


@input_error
def cmd_verify(args: argparse.Namespace) -> int:
    """
    Runs the verification suites and streams one JSON line per property.
    """
    cfg = TrialConfig(seed=args.seed, trials=args.trials, tol=args.tol,
                      n_values=tuple(args.n))
    results = run_suite(cfg, args.suite or SUITES, k_range=tuple(args.k),
                        decomps_per_state=args.decomps, explore_ab=args.explore_ab)
    for result in results:
        print(result.to_json_line(), flush=True)
    if all_passed(results):
        return EXIT_OK
    logger.warning("property violations in %s",
                   [r.name for r in results if not r.passed])
    return EXIT_VIOLATION


@input_error
def cmd_classify(args: argparse.Namespace) -> int:
    """
    Prints the local-rank class label with its thresholds and raw numbers.
    """
    state = SaveStateOnDisk(args.path).read_state()
    print(FormatStr.classification(classify_state(state)))
    return EXIT_OK


COMMANDS = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monogamy",
        description="Monogamy measures of (2 x 2 x n) pure states.")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="logging level on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    measure = sub.add_parser("measure", help="measure a state JSON file")
    measure.add_argument("path")
    measure.add_argument("--format", choices=sorted(MEASURE_FORMATS), default="json")

    sweep = sub.add_parser("sweep", help="sweep a GHZ or W parameter grid into CSV")
    sweep.add_argument("--family", choices=[f.value for f in Family], required=True)
    sweep.add_argument("--param", action="append", required=True,
                       metavar="NAME=START:STOP:STEPS",
                       help="swept parameter; ghz: %s, w: %s" % (
                           ", ".join(FREE_PARAMETERS[Family.GHZ]),
                           ", ".join(FREE_PARAMETERS[Family.W])))
    sweep.add_argument("--fix", action="append", default=[], metavar="NAME=VAL")
    sweep.add_argument("--out", required=True)

    verify = sub.add_parser("verify", help="run the verification suites")
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--trials", type=int, default=1000)
    verify.add_argument("--tol", type=float, default=1e-8)
    verify.add_argument("--suite", action="append", choices=SUITES)
    verify.add_argument("--n", type=int, nargs="+", default=[2, 3],
                        help="dimensions of subsystem C")
    verify.add_argument("--k", type=int, nargs="+", default=list(DEFAULT_K_RANGE),
                        help="numbers of Kraus operators")
    verify.add_argument("--decomps", type=int, default=DEFAULT_DECOMPS_PER_STATE,
                        help="decompositions per state in coa_bound")
    verify.add_argument("--explore-ab", action="store_true",
                        help="also record (never assert) channels on A or B")

    classify = sub.add_parser("classify", help="classify a state JSON file")
    classify.add_argument("path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
