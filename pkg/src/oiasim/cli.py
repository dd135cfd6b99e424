"""
Command line front end.

    oiasim sumrate-vs-snr --K 3 --M 3 --users 30 --snr-range 0:30:5
    oiasim sumrate-vs-users --K 4 --M 6 --users 20,40,80 --snr 10
    oiasim sumrate-vs-antennas --K 4 --M 2,4,6 --users 100 --snr 10
    oiasim complexity --K 3 --M 3 --users 15,30,60
    oiasim validate

Exit codes: 0 success, 1 usage error, 2 runtime or unsupported
combination, 3 validation failures.
"""

import argparse
import logging
import sys

import numpy as np

from .channels import Framework
from .errors import InvalidSpec, OIAError, UnsupportedCombination, UsageError
from .harness import ExperimentSpec, SweepKind, emit_csv, run_sweep
from .schemes import Scheme, SchemeId
from .validation import run_validation

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_VALIDATION = 0, 1, 2, 3

_SPEC_FLAGS = {"K": "--K", "M": "--M", "users": "--users", "snr_db": "--snr",
               "trials": "--trials", "schemes": "--scheme"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        flag = None
        for token in message.replace(",", " ").replace("/", " ").split():
            if token.startswith("--"):
                flag = token.rstrip(":")
                break
        raise UsageError(message, flag)


def _int_list(flag):
    def parse(text):
        try:
            return tuple(int(x) for x in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects comma-separated integers, got {text!r}")
    return parse


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expects comma-separated numbers, got {text!r}")


def parse_snr_range(text):
    """``a:b:step`` -> ``(a, a+step, ..., b)`` with ``b`` included when on the grid."""
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--snr-range expects a:b:step, got {text!r}")
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"--snr-range needs step > 0 and b >= a, got {text!r}")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return tuple(float(a + i * step) for i in range(count))


def _build_parser():
    parser = _Parser(prog="oiasim", description="Opportunistic interference alignment simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for kind in (SweepKind.SNR, SweepKind.USERS, SweepKind.ANTENNAS, SweepKind.COMPLEXITY):
        p = sub.add_parser(kind.value)
        p.add_argument("--K", type=int, required=True, help="number of transmitters")
        p.add_argument("--M", type=_int_list("--M"), required=True,
                       help="transmit antennas (comma list for antenna sweeps)")
        p.add_argument("--users", type=_int_list("--users"), help="total users N (comma list)")
        p.add_argument("--group-size", type=_int_list("--group-size"),
                       help="users per cell S; sets N = K*S")
        p.add_argument("--snr", type=_float_list, help="SNR in dB (comma list)")
        p.add_argument("--snr-range", type=parse_snr_range, help="SNR grid a:b:step in dB")
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--scheme", choices=["oia", "min-inr", "max-snr", "all"], default="all")
        p.add_argument("--framework", choices=["us", "up", "both"], default="both")
        p.add_argument("--out", help="CSV destination (default stdout)")
    p = sub.add_parser(SweepKind.VALIDATE.value)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    return parser


def _schemes(args, sweep):
    names = [s.value for s in Scheme] if args.scheme == "all" else [args.scheme]
    fws = [f.value for f in Framework] if args.framework == "both" else [args.framework]
    wildcard = args.scheme == "all" or args.framework == "both"
    out = []
    for fw in fws:
        for name in names:
            sid = SchemeId.parse(name, fw)
            # only explicit requests for unmodelled flop counts reach run time
            if (sweep is SweepKind.COMPLEXITY and wildcard and fw == "us"
                    and sid.scheme is not Scheme.OIA):
                continue
            out.append(sid)
    return tuple(out)


def parse_cli(argv):
    """
    Turn command-line arguments into an ``(ExperimentSpec, options)`` pair.

    ``options`` carries ``out`` (CSV path or None). For ``validate`` the
    spec is None and options hold ``trials`` and ``seed``.

    Raises
    ------
    UsageError
        With ``flag`` naming the offending option.
    """
    args = _build_parser().parse_args(argv)
    sweep = SweepKind(args.command)
    if sweep is SweepKind.VALIDATE:
        if args.trials < 1:
            raise UsageError("--trials must be >= 1", "--trials")
        return None, args

    users = args.users
    if args.group_size is not None:
        derived = tuple(args.K * s for s in args.group_size)
        if users is not None and users != derived:
            raise UsageError("--users and --group-size disagree", "--group-size")
        users = derived
    if users is None:
        raise UsageError("one of --users or --group-size is required", "--users")

    if args.snr is not None and args.snr_range is not None:
        raise UsageError("give either --snr or --snr-range, not both", "--snr-range")
    snr = args.snr if args.snr is not None else args.snr_range
    if sweep is SweepKind.COMPLEXITY:
        snr = snr or (0.0,)
    elif snr is None:
        raise UsageError("one of --snr or --snr-range is required", "--snr")

    if len(args.M) > 1 and sweep is not SweepKind.ANTENNAS:
        raise UsageError("several --M values only make sense for sumrate-vs-antennas", "--M")

    try:
        spec = ExperimentSpec(sweep=sweep, K=args.K, M=args.M, users=users, snr_db=snr,
                              schemes=_schemes(args, sweep), trials=args.trials, seed=args.seed)
    except InvalidSpec as exc:
        raise UsageError(str(exc), _SPEC_FLAGS.get(exc.field)) from exc
    return spec, args


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    try:
        spec, opts = parse_cli(argv)
    except UsageError as exc:
        print(f"oiasim: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if spec is None:
        report = run_validation(seed=opts.seed, trials=opts.trials)
        for line in report.lines():
            print(line)
        print(f"{'OK' if report.ok else 'FAILED'}: {report.failures} failure(s)")
        return EXIT_OK if report.ok else EXIT_VALIDATION

    try:
        rows = run_sweep(spec)
        emit_csv(rows, opts.out if opts.out else sys.stdout)
    except UnsupportedCombination as exc:
        print(f"oiasim: unsupported: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (OIAError, OSError) as exc:
        print(f"oiasim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
