"""
Command-line interface of the segcertify package.

The function :func:`main` gets wired up as "console_scripts" entry point
``segcertify`` in the ``setup.py``. It provides several subcommands:

certify
    Certify all components of a counts file and write the per-component
    decisions, together with a summary on stdout.

toy
    Run one of the synthetic sweeps with an oracle base classifier and write
    the rates of certified components, raw and smoothed, as CSV.

kfwer
    Run the error budget sweeps and write the rates as CSV.

metrics
    Compute accuracy, mIoU and abstain rate of label files.

sample
    Write a counts file drawn from an oracle base classifier.

Every output file is accompanied by a run manifest
(``<output>.manifest.json``) with all parameters of the run.


Exit codes
==========

0
    Success

1
    Usage or configuration error

2
    Data or format error, including files that cannot be read

3
    Internal error


Environment
===========

``SEGCERT_THREADS``
    Number of worker threads if ``--threads`` is not given


Module documentation
====================

"""

import argparse
import logging
import sys
import time

import pandas as pd

from segcertify import io, metrics, smoothing, stats, synthetic, utils
from segcertify.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    FormatError,
    InvalidArgumentError,
    UndefinedMetricError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _config_from_args(args, n0=1, n=1):
    return smoothing.CertConfig(
        sigma=args.sigma,
        tau=args.tau,
        alpha=args.alpha,
        n0=n0,
        n=n,
        correction=args.correction,
        budget=args.budget,
    )


def _write_table(frame, output):
    if output == "-":
        io.write_csv(frame, sys.stdout)
    else:
        io.write_csv(frame, output)


def _write_manifest(manifest, output):
    manifest.finish()
    if output == "-":
        return
    manifest.outputs.append(output)
    manifest.write(io.manifest_path(output))
    logger.info("Manifest written to %s", io.manifest_path(output))


def cmd_certify(args, manifest):
    """
    Certify all components of a counts file.

    Parameters
    ----------
    args : :class:`argparse.Namespace`
        Parsed command-line arguments

    manifest : :class:`segcertify.io.RunManifest`
        Manifest of the run

    Returns
    -------
    exit_code : :class:`int`
        0 on success

    """
    config = _config_from_args(args)
    counts0, counts = io.parse_counts_file(args.counts)
    config = config.copy(n0=counts0.draws, n=counts.draws)
    start = time.perf_counter()
    if args.algorithm == "indiv_class":
        result = smoothing.indiv_class_certify(
            counts0, counts, config.sigma, config.alpha
        )
    else:
        result = smoothing.seg_certify(counts0, counts, config)
    duration = time.perf_counter() - start
    output = args.out or f"{args.counts}.decisions.csv"
    io.write_decisions_file(output, result)
    summary = {
        "components": len(result),
        "certified": result.certified_fraction,
        "abstain_rate": 1.0 - result.certified_fraction,
        "R": result.radius,
        "t": duration,
    }
    prediction = metrics.LabelMap(
        result.labels, num_classes=counts.num_classes, ignore=args.ignore
    )
    if args.labels_out:
        io.write_label_file(args.labels_out, prediction)
        manifest.outputs.append(args.labels_out)
    if args.truth:
        truth = io.parse_label_file(
            args.truth, counts.num_classes, ignore=args.ignore
        )
        summary.update(metrics.summarize([prediction], [truth]))
    print(f"components = {summary['components']}")
    print(f"certified = {summary['certified']:.4f}")
    print(f"R = {summary['R']:.4f}")
    print(f"t = {summary['t']:.4f} s")
    for key in ("accuracy", "mean_iou", "abstain_rate"):
        if key in summary:
            print(f"{key} = {summary[key]:.4f}")
    if result.may_contain_errors:
        print(
            f"note: up to {result.error_budget} certified components may be "
            f"wrong"
        )
    manifest.config = result.config.to_dict()
    manifest.results = summary
    _write_manifest(manifest, output)
    return EXIT_OK


def _overrides(args, names):
    return {
        name: getattr(args, name)
        for name in names
        if getattr(args, name, None) is not None
    }


def cmd_toy(args, manifest):
    """
    Run a synthetic sweep and write raw and smoothed rates.

    Parameters
    ----------
    args : :class:`argparse.Namespace`
        Parsed command-line arguments

    manifest : :class:`segcertify.io.RunManifest`
        Manifest of the run

    Returns
    -------
    exit_code : :class:`int`
        0 on success

    """
    grid = None
    if args.gamma:
        grid = utils.parse_grid(args.gamma)
    if args.n_grid:
        grid = utils.parse_grid(args.n_grid)
    preset = synthetic.PRESET_ALIASES.get(args.preset, args.preset)
    if args.include_million and preset == "fig3c" and grid is None:
        grid = synthetic.log_grid(1, 6)
    algorithms = None
    if args.algorithms:
        algorithms = [name.strip() for name in args.algorithms.split(",")]
    spec = synthetic.SweepSpec.from_preset(
        args.preset,
        reps=args.reps,
        seed=args.seed,
        grid=grid,
        desk=args.desk,
        oracle=_overrides(args, ["num_components", "num_noisy"]),
        config=_overrides(args, ["sigma", "tau", "alpha", "n0", "n"]),
        algorithms=algorithms,
        threads=args.threads,
    )
    if (spec.axis == "N" and args.gamma) or (
        spec.axis == "gamma" and args.n_grid
    ):
        raise ConfigurationError(
            f"Preset '{args.preset}' does not vary this quantity"
        )
    result = synthetic.run_sweep(spec)
    frame = result.smoothed(window=args.window)
    _write_table(frame, args.out)
    manifest.sweep = spec.to_dict()
    manifest.config = spec.config.to_dict()
    manifest.seeds = [spec.oracle.seed]
    _write_manifest(manifest, args.out)
    return EXIT_OK


def cmd_kfwer(args, manifest):
    """
    Run error budget sweeps and write the rates.

    Parameters
    ----------
    args : :class:`argparse.Namespace`
        Parsed command-line arguments

    manifest : :class:`segcertify.io.RunManifest`
        Manifest of the run

    Returns
    -------
    exit_code : :class:`int`
        0 on success

    """
    budgets = utils.parse_list(args.budgets)
    alphas = utils.parse_list(args.alpha)
    grid = utils.parse_grid(args.n_grid)
    frames = []
    sweeps = []
    for alpha in alphas:
        spec = synthetic.SweepSpec.from_preset(
            "fig7",
            reps=args.reps,
            seed=args.seed,
            grid=grid,
            desk=args.desk,
            oracle=_overrides(args, ["gamma", "num_noisy"]),
            config={
                "alpha": alpha,
                **_overrides(args, ["sigma", "tau", "n0", "n"]),
            },
            threads=args.threads,
        )
        logger.info("Error budgets %s at alpha=%s", budgets, alpha)
        result = synthetic.run_budget_sweep(spec, budgets)
        frames.append(result.frame)
        sweeps.append(spec.to_dict())
    frame = pd.concat(frames, ignore_index=True).rename(columns={"axis": "N"})
    _write_table(frame[["N", "budget", "alpha", "rate"]], args.out)
    manifest.sweep = {"budgets": budgets, "sweeps": sweeps}
    manifest.seeds = [args.seed or 0]
    _write_manifest(manifest, args.out)
    return EXIT_OK


def cmd_metrics(args, manifest):
    """
    Print accuracy, mIoU and abstain rate of label files as CSV row.

    Parameters
    ----------
    args : :class:`argparse.Namespace`
        Parsed command-line arguments

    manifest : :class:`segcertify.io.RunManifest`
        Manifest of the run, not written

    Returns
    -------
    exit_code : :class:`int`
        0 on success

    """
    if len(args.pred) != len(args.truth):
        raise DimensionMismatchError(
            f"{len(args.pred)} prediction files, but {len(args.truth)} "
            f"ground-truth files"
        )
    preds = [
        io.parse_label_file(path, args.num_classes, ignore=args.ignore)
        for path in args.pred
    ]
    truths = [
        io.parse_label_file(path, args.num_classes, ignore=args.ignore)
        for path in args.truth
    ]
    summary = metrics.summarize(
        preds, truths, per_input_first=args.per_input_first
    )
    print(
        ",".join(
            utils.format_number(summary[key])
            for key in ("accuracy", "mean_iou", "abstain_rate")
        )
    )
    manifest.results = summary
    return EXIT_OK


def cmd_sample(args, manifest):
    """
    Write a counts file drawn from an oracle base classifier.

    Parameters
    ----------
    args : :class:`argparse.Namespace`
        Parsed command-line arguments

    manifest : :class:`segcertify.io.RunManifest`
        Manifest of the run

    Returns
    -------
    exit_code : :class:`int`
        0 on success

    """
    oracle = synthetic.OracleSpec(
        num_components=args.num_components,
        num_noisy=args.num_noisy,
        gamma=args.gamma,
        num_classes=args.num_classes,
        seed=args.seed,
    )
    counts0 = synthetic.oracle_sample(
        oracle, args.n0, synthetic.component_rng(args.seed, 0, 0, "counts0")
    )
    counts = synthetic.oracle_sample(
        oracle, args.n, synthetic.component_rng(args.seed, 0, 0, "counts")
    )
    io.write_counts_file(args.out, counts0, counts)
    if args.truth_out:
        io.write_label_file(
            args.truth_out,
            metrics.LabelMap(
                oracle.true_labels, num_classes=args.num_classes
            ),
        )
        manifest.outputs.append(args.truth_out)
    manifest.sweep = {"oracle": oracle.to_dict(), "n0": args.n0, "n": args.n}
    manifest.seeds = [args.seed]
    _write_manifest(manifest, args.out)
    return EXIT_OK


def _add_certification_arguments(parser):
    parser.add_argument(
        "--sigma",
        type=float,
        help="standard deviation of the Gaussian noise",
    )
    parser.add_argument(
        "--tau",
        type=float,
        help="threshold of the top-class probability, in [0.5, 1)",
    )
    parser.add_argument(
        "--n0", type=int, help="number of draws for guessing the top class"
    )
    parser.add_argument("--n", type=int, help="number of draws for testing")


def _add_sweep_arguments(parser):
    parser.add_argument("--reps", type=int, help="repetitions per grid point")
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument(
        "--desk",
        action="store_true",
        help="coarsen grid and repetitions to desk scale",
    )
    parser.add_argument(
        "--threads",
        type=int,
        help="number of worker threads (default: $SEGCERT_THREADS or 1)",
    )
    parser.add_argument(
        "--out", default="-", help="output CSV file (default: stdout)"
    )


def build_parser():
    """
    Create the parser for the command-line arguments.

    Returns
    -------
    parser : :class:`argparse.ArgumentParser`
        Parser with one subparser per command

    """
    parser = argparse.ArgumentParser(
        prog="segcertify",
        description="Certify segmentations via randomized smoothing.",
    )
    parser.add_argument(
        "--version", action="version", version=utils.package_version()
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log more details (-vv for debug output)",
    )
    commands = parser.add_subparsers(dest="command_name", required=True)

    certify = commands.add_parser(
        "certify", help="certify all components of a counts file"
    )
    certify.set_defaults(command=cmd_certify)
    certify.add_argument("--counts", required=True, help="counts file")
    certify.add_argument("--sigma", type=float, default=0.25)
    certify.add_argument("--tau", type=float, default=0.75)
    certify.add_argument("--alpha", type=float, default=0.001)
    certify.add_argument(
        "--correction",
        default="holm",
        help=f"one of {', '.join(stats.METHODS)}",
    )
    certify.add_argument(
        "--budget",
        type=int,
        default=0,
        help="tolerated erroneous certifications (correction kfwer)",
    )
    certify.add_argument(
        "--algorithm",
        choices=["seg_certify", "indiv_class"],
        default="seg_certify",
    )
    certify.add_argument("--truth", help="ground-truth label file")
    certify.add_argument("--ignore", type=int, default=metrics.IGNORE)
    certify.add_argument(
        "--out", help="decisions file (default: <counts>.decisions.csv)"
    )
    certify.add_argument("--labels-out", help="label file of the decisions")

    toy = commands.add_parser("toy", help="run a synthetic sweep")
    toy.set_defaults(command=cmd_toy)
    toy.add_argument(
        "--preset",
        required=True,
        choices=[
            name
            for name in [*synthetic.PRESETS, *synthetic.PRESET_ALIASES]
            if name not in ("fig7", "error-budget")
        ],
    )
    toy.add_argument("--gamma", help="grid of error rates")
    toy.add_argument("--N-grid", dest="n_grid", help="grid of components")
    toy.add_argument(
        "--include-million",
        action="store_true",
        help="extend the grid of preset fig3c to one million components",
    )
    toy.add_argument("--num-components", type=int)
    toy.add_argument("--num-noisy", type=int)
    toy.add_argument("--alpha", type=float)
    _add_certification_arguments(toy)
    toy.add_argument(
        "--algorithms",
        help=f"comma-separated, of {', '.join(synthetic.ALGORITHMS)}",
    )
    toy.add_argument(
        "--window", type=int, default=11, help="smoothing window length"
    )
    _add_sweep_arguments(toy)

    kfwer = commands.add_parser("kfwer", help="run error budget sweeps")
    kfwer.set_defaults(command=cmd_kfwer)
    kfwer.add_argument(
        "--budgets",
        required=True,
        help="comma-separated budgets, integers or fractions of N",
    )
    kfwer.add_argument("--alpha", default="0.1,0.001")
    kfwer.add_argument("--N-grid", dest="n_grid", default="1e2:1e6")
    kfwer.add_argument("--gamma", type=float)
    kfwer.add_argument("--num-noisy", type=int)
    _add_certification_arguments(kfwer)
    _add_sweep_arguments(kfwer)

    metrics_parser = commands.add_parser(
        "metrics", help="compute metrics of label files"
    )
    metrics_parser.set_defaults(command=cmd_metrics)
    metrics_parser.add_argument("--pred", required=True, nargs="+")
    metrics_parser.add_argument("--truth", required=True, nargs="+")
    metrics_parser.add_argument("--num-classes", type=int, required=True)
    metrics_parser.add_argument("--ignore", type=int, default=metrics.IGNORE)
    metrics_parser.add_argument("--per-input-first", action="store_true")

    sample = commands.add_parser(
        "sample", help="write counts drawn from an oracle"
    )
    sample.set_defaults(command=cmd_sample)
    sample.add_argument("--out", required=True, help="counts file")
    sample.add_argument("--truth-out", help="label file of the true classes")
    sample.add_argument("--num-components", type=int, default=100)
    sample.add_argument("--num-classes", type=int, default=2)
    sample.add_argument("--num-noisy", type=int, default=0)
    sample.add_argument("--gamma", type=float, default=0.0)
    sample.add_argument("--n0", type=int, default=100)
    sample.add_argument("--n", type=int, default=100)
    sample.add_argument("--seed", type=int, default=0)
    return parser


def _configure_logging(verbosity):
    levels = {0: logging.WARNING, 1: logging.INFO}
    level = levels.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv=None):
    """
    Entry point for the command-line interface.

    Parameters
    ----------
    argv : :class:`list`
        Command-line arguments without the program name

        If ``None``, the arguments of the current process are used.

    Returns
    -------
    exit_code : :class:`int`
        Exit code, see the module documentation

    """
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return EXIT_OK if not error.code else EXIT_USAGE
    _configure_logging(args.verbose)
    manifest = io.RunManifest(command=args.command_name, arguments=argv)
    try:
        return args.command(args, manifest)
    except (ConfigurationError, InvalidArgumentError) as error:
        logger.error("%s", error)
        return EXIT_USAGE
    except (
        FormatError,
        DimensionMismatchError,
        UndefinedMetricError,
        OSError,
    ) as error:
        logger.error("%s", error)
        return EXIT_DATA
    except Exception as error:  # pylint: disable=broad-except
        logger.error("Internal error: %s", error)
        logger.debug("Traceback", exc_info=True)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
