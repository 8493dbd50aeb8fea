# Standard imports
import argparse
import math
import sys

# Custom imports
from columnar import columnar

from qpfmaps.core import command
from qpfmaps.core.config import load_config
from qpfmaps.core.errors import AnalysisError, ConfigurationError
from qpfmaps.commons import log_level
import qpfmaps.commons as cm

LOGGER = cm.logger()

EXIT_SUCCESS = 0
EXIT_ANALYSIS = 1
EXIT_CONFIGURATION = 2


def display_results(data, headers, *args, **kwargs):
    """Display results in the console in tabulated format"""
    data = [[_cell(value) for value in row] for row in data]
    if not data:
        print("Nothing to display")
        return
    print(
        columnar(
            data,
            headers=headers,
            no_borders=True,
            **kwargs,
        )
    )


def _cell(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.6g}"
    if value is None:
        return "-"
    return value


def display_files(result):
    for path in result.get("files", []):
        print("Written:", path)


def display_verify(result):
    report = result["report"]
    display_results(
        (
            [
                check.name,
                "info" if check.informational else ("ok" if check.passed else "FAILED"),
                check.margin,
                check.detail,
            ]
            for check in report.checks
        ),
        ["assumption", "status", "margin", "detail"],
    )
    if report.failed:
        print("Failed:", ", ".join(report.failed))


def display_graphs(result):
    rows = []
    for graph in (result["attractor"], result["repeller"]):
        s = graph.summary()
        rows.append([s["direction"], s["iterations"], s["G"], s["escaped"], s["min"], s["max"], s["lyapunov"]])
    display_results(rows, ["graph", "N", "G", "escaped", "min", "max", "lyapunov"])
    pinch = result["pinch"]
    if pinch:
        display_results(
            [[pinch.min_gap, pinch.mean_gap, pinch.max_gap, pinch.argmin_theta]],
            ["min_gap", "mean_gap", "max_gap", "argmin_theta"],
        )


def display_bisect(result):
    result = result["result"]
    evidence = result.evidence
    display_results(
        [
            [
                result.beta_c,
                result.classification,
                evidence.get("lyap_attractor_near_bc"),
                evidence.get("lyap_repeller_near_bc"),
                evidence.get("pinch", {}).get("min_gap"),
            ]
        ],
        ["beta_c", "classification", "lyap_attractor", "lyap_repeller", "min_gap"],
    )


def display_regions(result):
    display_results(
        (
            [
                level["n"],
                level["beta_minus"],
                level["beta_plus"],
                level[f"I_{level['n']}"]["length"],
                level["M_n"],
                level["F"]["all_hold"] if "F" in level else level.get("error"),
            ]
            for level in result["levels"]
        ),
        ["n", "beta_minus", "beta_plus", "|I_n|", "M_n", "F"],
    )


def display_sweep(result):
    display_results(
        ([row[key] for key in cm.SWEEP_HEADER] for row in result["rows"]),
        cm.SWEEP_HEADER,
    )


def main():
    # noinspection PyTypeChecker
    parser = argparse.ArgumentParser(
        formatter_class=lambda prog: argparse.RawDescriptionHelpFormatter(prog),
        description="""
qpfmaps cli runs the numerical analyses of quasi-periodically forced
monotone interval maps and writes their results as CSV/JSON files.\n
A run is described by a JSON configuration; the packaged ones are listed by
the "configs" subcommand and can be used by name.""",
        epilog="""Examples:

    $ qpfmaps-cli bisect --config figure1 --out results/
    or
    $ qpfmaps-cli verify --config my_family.json --no-timestamp""",
    )
    # Default log level: error
    parser.add_argument(
        "-vv",
        "--verbose",
        nargs="?",
        default="error",
        choices=["debug", "info", "critical", "error", "warning"],
    )

    sub_parser = parser.add_subparsers(dest="subparser")

    # Common parser: run configuration #########################################
    parent_parser = argparse.ArgumentParser(add_help=False)
    parent_parser.add_argument(
        "--config",
        help="JSON configuration file or packaged configuration name (default: figure1).",
    )
    parent_parser.add_argument("--beta", type=float, help="Override the parameter beta.")
    parent_parser.add_argument("--out", help="Output directory (default: current directory).")
    parent_parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="Worker threads; 0 uses every core.",
    )
    parent_parser.add_argument(
        "--no-timestamp",
        action="store_true",
        help="Omit the timestamp field of JSON outputs.",
    )

    # Verify parser ############################################################
    sub_parser.add_parser(
        "verify",
        help="Check the standing assumptions on grids",
        parents=[parent_parser],
        epilog="""Examples:

        $ qpfmaps-cli verify --config quarter_pi
        """,
    )

    # Graphs parser ############################################################
    sub_parser.add_parser(
        "graphs",
        help="Compute the attracting and repelling graphs at one beta",
        parents=[parent_parser],
        epilog="""Examples:

        $ qpfmaps-cli graphs --beta 0.7769 --out graphs/
        """,
    )

    # Bisect parser ############################################################
    sub_parser.add_parser(
        "bisect",
        help="Locate the critical parameter and classify the bifurcation",
        parents=[parent_parser],
    )

    # Regions parser ###########################################################
    regions_parser = sub_parser.add_parser(
        "regions",
        help="Run the critical region induction and audit its bounds",
        parents=[parent_parser],
    )
    regions_parser.add_argument("-n", "--n-max", type=int, help="Deepest level computed.")

    # Sweep parser #############################################################
    sweep_parser = sub_parser.add_parser(
        "sweep",
        help="Tabulate Lyapunov exponents and gaps over a range of beta",
        parents=[parent_parser],
        epilog="""Examples:

        $ qpfmaps-cli sweep --start 0 --stop 0.78 --num 40 --threads 0
        """,
    )
    sweep_parser.add_argument("--start", type=float, help="First beta.")
    sweep_parser.add_argument("--stop", type=float, help="Last beta.")
    sweep_parser.add_argument("--num", type=int, help="Number of values.")

    # Figure parser ############################################################
    figure_parser = sub_parser.add_parser(
        "figure",
        help="Write graph tables, binary graphs and pinch statistics",
        parents=[parent_parser],
    )
    figure_parser.add_argument("--png", action="store_true", help="Also draw a PNG.")

    # Configs parser ###########################################################
    sub_parser.add_parser("configs", help="List the packaged configurations")

    # Workaround for sphinx-argparse module that require the object parser
    # before the call of parse_args()
    if "html" in sys.argv:
        return parser

    args = parser.parse_args()

    if len(sys.argv) == 1 or args.subparser is None:
        parser.print_help(sys.stderr)
        sys.exit(EXIT_ANALYSIS)

    # Set log level
    log_level(args.verbose)

    # Configs parser ###########################################################
    if args.subparser == "configs":
        result = command.configs_cmd()
        display_results(
            ([c["name"], c["kind"], c["alpha"], c["description"]] for c in result["configs"]),
            ["name", "kind", "alpha", "description"],
        )
        sys.exit(EXIT_SUCCESS)

    n_jobs = -1 if args.threads == 0 else args.threads
    try:
        config = load_config(
            args.config,
            beta=args.beta,
            out=args.out,
            timestamp=False if args.no_timestamp else None,
        )

        if args.subparser == "verify":
            result = command.verify_cmd(config)
            display_verify(result)

        if args.subparser == "graphs":
            result = command.graphs_cmd(config, n_jobs=n_jobs)
            display_graphs(result)

        if args.subparser == "figure":
            result = command.figure_cmd(config, n_jobs=n_jobs, png=args.png or None)
            display_graphs(result)

        if args.subparser == "bisect":
            result = command.bisect_cmd(config, n_jobs=n_jobs, progress=True)
            display_bisect(result)

        if args.subparser == "regions":
            result = command.regions_cmd(config, n_max=args.n_max)
            display_regions(result)

        if args.subparser == "sweep":
            result = command.sweep_cmd(
                config,
                start=args.start,
                stop=args.stop,
                num=args.num,
                n_jobs=n_jobs,
                progress=True,
            )
            display_sweep(result)

    except ConfigurationError as e:
        print("%s: %s" % (e.__class__.__name__, e), file=sys.stderr)
        sys.exit(EXIT_CONFIGURATION)
    except AnalysisError as e:
        LOGGER.debug("analysis failed", exc_info=True)
        print("%s: %s" % (e.__class__.__name__, e), file=sys.stderr)
        sys.exit(EXIT_ANALYSIS)

    display_files(result)
    sys.exit(result["exit_code"])


if __name__ == "__main__":
    main()
