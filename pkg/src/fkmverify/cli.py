"""Command-line entry point: ``verify <suite> [flags]``."""

import argparse
import os
import sys
import time

from .report import VerificationReport, format_matrix
from .suites import SUITES, SuiteOptions, run_suite

SUITE_NAMES = list(SUITES) + ["full"]


def _unsigned(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be an unsigned integer")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("count must be at least 1")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="verify", description="Run FKM (7,8) verification suites.")
    p.add_argument("suite", choices=SUITE_NAMES, help="suite to run")
    p.add_argument("--seed", type=_unsigned, default=0)
    p.add_argument("--scalar", choices=["exact", "float64"], default="float64")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--samples", type=_positive)
    p.add_argument("--points", type=_positive)
    p.add_argument("--trials", type=_positive)
    p.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")
    p.add_argument("--dump", metavar="DIR", help="write matrices attached to checks as text files")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON")
    p.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    opt = SuiteOptions(seed=args.seed, scalar=args.scalar, tol=args.tol, side=args.side,
                       samples=args.samples, points=args.points, trials=args.trials)
    report = VerificationReport(args.suite, args.seed, args.scalar, args.tol, args.side,
                                params={k: getattr(args, k) for k in ("samples", "points", "trials")
                                        if getattr(args, k) is not None})
    start = time.perf_counter()
    try:
        report.checks = run_suite(args.suite, opt)
    except Exception as exc:   # internal inconsistency: name it and exit 1
        print(f"verify {args.suite}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report.wall_time = round(time.perf_counter() - start, 3)
    text = report.to_json(pretty=args.pretty)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.dump:
        os.makedirs(args.dump, exist_ok=True)
        for c in report.checks:
            for key, m in c.matrices.items():
                with open(os.path.join(args.dump, f"{c.name}.{key}.txt"), "w") as fh:
                    fh.write(format_matrix(m))
    if not args.quiet:
        for line in report.summary_lines():
            print(line, file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
