"""Command-line front end: ``init``, ``train`` and ``align`` subcommands.

Exit codes are a stable contract:

==== =======================================================
0    success
1    file I/O failure
2    invalid input (model validation, file format, dimensions)
3    fewer frames than emitting states
4    dead trellis (no surviving path)
5    training did not converge (model and report still written)
64   command-line usage error
==== =======================================================

Tables and scores go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    DataFormatError,
    DeadTrellisError,
    DimensionMismatchError,
    InvalidVarianceError,
    ModelValidationError,
    TooFewFramesError,
)
from .formats import format_report_lines, read_model, read_observations, write_alignment, write_model, write_report
from .training import TrainingConfig, initialize, train
from .viterbi import align

EX_OK = 0
EX_IO = 1
EX_INVALID = 2
EX_TOO_FEW_FRAMES = 3
EX_DEAD_TRELLIS = 4
EX_NO_CONVERGENCE = 5
EX_USAGE = 64


class _Parser(argparse.ArgumentParser):
    # usage problems exit 64, not argparse's default 2 (taken by validation)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="viterbihmm", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True)

    init = commands.add_parser("init", help="bootstrap a proto's Gaussians from the uniform segmentation")
    init.add_argument("--obs", required=True, help="observation file")
    init.add_argument("--proto", required=True, help="proto model file (transition matrix is kept)")
    init.add_argument("--out", required=True, help="output model file")
    init.add_argument("--variance-floor", type=_positive_float, default=1e-4)
    init.set_defaults(run=_run_init)

    tr = commands.add_parser("train", help="bootstrap, then iterate align / re-estimate until convergence")
    tr.add_argument("--obs", required=True)
    tr.add_argument("--proto", required=True)
    tr.add_argument("--out", required=True, help="output model file; the report goes to <out>.report")
    tr.add_argument("--epsilon", type=_positive_float, default=1e-4)
    tr.add_argument("--max-iter", type=_positive_int, default=20)
    tr.add_argument("--variance-floor", type=_positive_float, default=1e-4)
    tr.add_argument("--trace", action="store_true", help="dump trellis columns and per-iteration scores")
    tr.set_defaults(run=_run_train)

    al = commands.add_parser("align", help="Viterbi-align observations against a model")
    al.add_argument("--obs", required=True)
    al.add_argument("--model", required=True)
    al.add_argument("--out", required=True, help="output alignment file")
    al.add_argument("--variance-floor", type=_positive_float, default=1e-4)
    al.add_argument("--trace", action="store_true", help="dump trellis columns")
    al.set_defaults(run=_run_align)

    return parser


def _run_init(args) -> int:
    obs = read_observations(args.obs)
    proto = read_model(args.proto, variance_floor=args.variance_floor)
    config = TrainingConfig(variance_floor=args.variance_floor)
    model = initialize(obs, proto, config)
    write_model(model, args.out)
    return EX_OK


def _run_train(args) -> int:
    obs = read_observations(args.obs)
    proto = read_model(args.proto, variance_floor=args.variance_floor)
    config = TrainingConfig(
        epsilon=args.epsilon,
        max_iterations=args.max_iter,
        variance_floor=args.variance_floor,
    )
    trace = print if args.trace else None
    model, report = train(obs, proto, config, trace=trace)
    write_model(model, args.out)
    write_report(report, str(args.out) + ".report")
    for line in format_report_lines(report):
        print(line)
    if not report.converged:
        print("training did not converge", file=sys.stderr)
        return EX_NO_CONVERGENCE
    return EX_OK


def _run_align(args) -> int:
    obs = read_observations(args.obs)
    model = read_model(args.model, variance_floor=args.variance_floor)
    trace = print if args.trace else None
    result = align(model, obs, trace=trace)
    write_alignment(result, args.out)
    print(f"LOGPROB {result.log_score!r}")
    return EX_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EX_IO
    except (DataFormatError, ModelValidationError, DimensionMismatchError, InvalidVarianceError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EX_INVALID
    except TooFewFramesError as err:
        print(f"error: {err}", file=sys.stderr)
        return EX_TOO_FEW_FRAMES
    except DeadTrellisError as err:
        print(f"error: {err}", file=sys.stderr)
        return EX_DEAD_TRELLIS


if __name__ == "__main__":
    sys.exit(main())
