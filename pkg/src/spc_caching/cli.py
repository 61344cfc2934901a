"""Command-line front end: ``spc-caching construct | simulate | schedule | compare``."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, schemefile
from .delivery import build_schedule, verify_schedule
from .design import SchemeParams
from .errors import InconsistentInputError, InvalidParamsError, SchemeFileError
from .schemes import MN, PROPOSED, CachingScheme, build_mn_scheme, build_proposed_scheme
from .simulator import (
    MAX_SWEEP_RUNS,
    exhaustive_demands,
    make_corpus,
    random_demands,
    run_simulation,
    sweep,
)

EXIT_OK = 0
EXIT_INVALID_PARAMS = 2
EXIT_VERIFICATION_FAILED = 3
EXIT_IO_ERROR = 4

OUTPUT_DIR_ENV = "SPC_CACHING_OUTPUT_DIR"


def _output_path(path: str | None, default_name: str) -> Path:
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    p = Path(path) if path else Path(default_name)
    return p if p.is_absolute() else base / p


def _ratio(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def summary_line(scheme: CachingScheme) -> str:
    rate = build_schedule(scheme).rate
    return (
        f"K={scheme.K} F_s={scheme.F_s} M/N={scheme.cache_ratio} "
        f"R={analysis.format_rate(rate)}"
    )


def cmd_construct(args) -> int:
    if args.kind == PROPOSED:
        if args.q is None or args.k is None:
            raise InvalidParamsError("--kind proposed needs --q and --k")
        params = SchemeParams(args.q, args.k)
        scheme = build_proposed_scheme(params, args.N or params.K)
        default = f"proposed_q{params.q}_k{params.k}.json"
    else:
        if args.K is None or args.ratio is None:
            raise InvalidParamsError("--kind mn needs --K and --ratio")
        scheme = build_mn_scheme(args.K, args.ratio, args.N or args.K)
        default = f"mn_K{args.K}_t{scheme.t}.json"
    path = _output_path(args.output, default)
    schemefile.save(scheme, path)
    print(summary_line(scheme))
    print(f"wrote {path}")
    if args.show_schedule:
        print(build_schedule(scheme).listing())
    return EXIT_OK


def _parse_demands(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise InvalidParamsError(f"demands must be integers, got {text!r}")


def _demand_vectors(args, scheme: CachingScheme):
    if args.exhaustive:
        return exhaustive_demands(scheme.K, scheme.N, limit=MAX_SWEEP_RUNS)
    if args.demands is not None:
        return [_parse_demands(args.demands)]
    if args.demands_file is not None:
        lines = Path(args.demands_file).read_text().splitlines()
        return [_parse_demands(line) for line in lines if line.strip() and not line.startswith("#")]
    return list(random_demands(scheme.K, scheme.N, args.random, args.seed))


def cmd_simulate(args) -> int:
    scheme = schemefile.load(args.scheme)
    if args.N is not None:
        scheme = scheme.with_files(args.N)
    schedule = build_schedule(scheme)
    report = verify_schedule(scheme, schedule)
    corpus = make_corpus(scheme.N, args.F or scheme.F_s, args.seed, scheme.F_s)
    vectors = _demand_vectors(args, scheme)

    if args.hex and not args.exhaustive:
        for demands in vectors:
            run = run_simulation(scheme, None, corpus, demands, schedule=schedule)
            print(f"# demands={','.join(map(str, run.demands))}")
            print(run.hex_dump())

    summary = sweep(scheme, corpus, vectors, schedule=schedule)
    rates = ",".join(analysis.format_rate(r) for r in sorted(summary.rates))
    sent = ",".join(str(b) for b in sorted(summary.transmitted_bytes))
    print(
        f"runs={summary.runs} errors={summary.total_errors} rate={rates} "
        f"transmitted_bytes={sent} F={corpus.F} padded_F={corpus.padded_len} seed={args.seed}"
    )
    for demands in summary.failures[:10]:
        print(f"FAILED demands={','.join(map(str, demands))}", file=sys.stderr)
    if not report.ok:
        print("schedule coverage check failed", file=sys.stderr)
    return EXIT_OK if summary.ok and report.ok else EXIT_VERIFICATION_FAILED


def cmd_schedule(args) -> int:
    scheme = schemefile.load(args.scheme)
    schedule = build_schedule(scheme)
    print(schedule.listing())
    report = verify_schedule(scheme, schedule)
    print(
        f"equations={report.equation_count} rate={analysis.format_rate(report.rate)} "
        f"coverage={'ok' if report.ok else 'FAILED'}"
    )
    return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED


def cmd_compare(args) -> int:
    if args.q < 2:
        raise InvalidParamsError(f"q must be ≥ 2 (got q={args.q})")
    if args.memshare and args.q != 2:
        raise InvalidParamsError("the memory-sharing comparison is defined for q = 2 only")
    k_min = args.k_min if args.k_min is not None else min(2, args.k_max)
    rows = analysis.comparison_table(args.q, range(k_min, args.k_max + 1))
    if args.csv:
        sys.stdout.write(analysis.to_csv(rows, memshare=args.memshare))
    else:
        print(analysis.render_table(rows, memshare=args.memshare))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spc-caching", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a scheme and write its scheme file")
    p.add_argument("--kind", choices=[PROPOSED, MN], default=PROPOSED)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--ratio", type=_ratio, help="M/N, e.g. 1/2")
    p.add_argument("--N", type=int, help="number of files (default: K)")
    p.add_argument("--output", "-o", help=f"scheme file path (relative to ${OUTPUT_DIR_ENV} if set)")
    p.add_argument("--show-schedule", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="run placement and delivery for demand vectors")
    p.add_argument("scheme")
    p.add_argument("--N", type=int, help="override the number of files")
    p.add_argument("--F", type=int, help="file size in bytes (default: F_s)")
    p.add_argument("--seed", type=int, default=0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--demands", help="comma-separated 0-based file indices, one per user")
    group.add_argument("--demands-file", help="one demand vector per line")
    group.add_argument("--exhaustive", action="store_true", help="all N^K demand vectors")
    group.add_argument("--random", type=int, default=1, help="number of seeded random demand vectors")
    p.add_argument("--hex", action="store_true", help="dump transmissions as hex")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("schedule", help="print the delivery schedule of a scheme file")
    p.add_argument("scheme")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("compare", help="rate/subpacketization comparison with the MN scheme")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--k-min", type=int)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--table", action="store_true")
    p.add_argument("--memshare", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParamsError, InconsistentInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_PARAMS
    except (SchemeFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
