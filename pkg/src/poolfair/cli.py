"""Command-line front end.

Usage:
    poolfair fairness --la 10 --lb 1 --pa 0.9 --pb 0.9 --fa 1 --fb 10
    poolfair sweep --figure 2c --out f2c.csv
    poolfair verify --max-l 50
    poolfair simulate --la 1 --lb 1 --pa 0.5 --pb 0.5 --fa 1 --fb 2 --reps 1000000 --seed 42

Any subcommand also accepts ``--config FILE`` with ``key = value`` lines
named after the long flags (``la = 10``); flags given on the command line
win over the file.

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 enumeration refused as too large.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .hetero import HeterogeneousFund
from .model import DomainError
from .oracle import (
    EnumerationTooLarge,
    SimConfig,
    count_state_space,
    enumerate_expected_consumption,
    gain_report,
    monte_carlo_expected_consumption,
    monte_carlo_run,
)
from .sweep import FIGURE_IDS, SweepPoint, SweepRow, figure_points, format_number, rows_to_csv, sweep
from .verify import run_suites, suite_names

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2
EXIT_TOO_LARGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _add_fund_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("fund")
    g.add_argument("--la", type=int, required=required, help="members in group A")
    g.add_argument("--lb", type=int, required=required, help="members in group B (Bob's group)")
    g.add_argument("--pa", type=float, required=required, help="group A survival probability")
    g.add_argument("--pb", type=float, required=required, help="group B survival probability")
    g.add_argument("--fa", type=float, default=1.0, help="group A contribution (default 1)")
    g.add_argument("--fb", type=float, default=1.0, help="group B contribution (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poolfair", description="Actuarial fairness of pooled annuity funds.")
    parser.add_argument("--config", help="key = value file; command-line flags override it")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fairness", help="expected consumption and gains of a group B member")
    _add_fund_flags(p)
    p.add_argument("--method", choices=("exact", "enumerate", "mc"), default="exact")
    p.add_argument("--reps", type=_positive_int)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--threads", type=_positive_int, default=1)

    p = sub.add_parser("sweep", help="write figure data as CSV")
    p.add_argument("--figure", help=f"one of {', '.join(FIGURE_IDS)}")
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.add_argument("--method", choices=("exact", "enumerate"), default="exact")
    p.add_argument("--threads", type=_positive_int, default=1)
    grid = p.add_argument_group("explicit grid (instead of --figure)")
    _add_fund_flags(grid, required=False)
    grid.add_argument("--vary", choices=("pb", "fb"), help="parameter swept along x")
    grid.add_argument("--values", help="comma separated x values")
    grid.add_argument("--metric", choices=("gain", "conditional"), default="gain")

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--max-l", type=_positive_int, default=200, help="largest group size in the grids")
    p.add_argument("--suite", action="append", choices=suite_names(), help="run only this suite (repeatable)")
    p.add_argument("--expect-fail", action="store_true", help="append a deliberately failing suite")

    p = sub.add_parser("simulate", help="Monte Carlo estimate of Bob's expected consumption")
    _add_fund_flags(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--out", help="CSV of per-batch means")

    for sp in sub.choices.values():
        sp.add_argument("--config", help=argparse.SUPPRESS)
    return parser


def read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub_action.choices.values():
        dests = {a.dest: a for a in sp._actions}
        defaults = {}
        for key, value in values.items():
            action = dests.get(key)
            if action is None:
                continue
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                # argparse runs string defaults through the option's type
                defaults[key] = value
            action.required = False
        sp.set_defaults(**defaults)
    known_keys = {a.dest for sp in sub_action.choices.values() for a in sp._actions}
    unknown = sorted(set(values) - known_keys)
    if unknown:
        raise UsageError(f"{known.config}: unknown keys {', '.join(unknown)}")


def _fund(args) -> HeterogeneousFund:
    return HeterogeneousFund.two_group(args.la, args.pa, args.fa, args.lb, args.pb, args.fb)


def _print_fields(fields: list[tuple[str, object]]) -> None:
    for key, value in fields:
        text = format_number(value) if isinstance(value, float) else str(value)
        print(f"{key} = {text}")


def cmd_fairness(args) -> int:
    fund = _fund(args)
    if args.method == "mc":
        if args.reps is None or args.seed is None:
            raise UsageError("--method mc requires --reps and --seed")
        report = monte_carlo_expected_consumption(SimConfig(fund, args.reps, args.seed), threads=args.threads)
    else:
        report = gain_report(fund, 1, args.method)
    _print_fields(
        [
            ("g", report.expected_consumption),
            ("f", report.conditional_consumption),
            ("gain_per_unit", report.gain_per_unit),
            ("conditional_relative_gain_per_unit", report.conditional_relative_gain_per_unit),
            ("method", report.method),
            ("std_error", float(report.std_error)),
        ]
    )
    return EXIT_OK


def _explicit_points(args) -> list[SweepPoint]:
    missing = [f for f in ("la", "lb", "pa", "vary", "values") if getattr(args, f) is None]
    if args.vary == "fb" and args.pb is None:
        missing.append("pb")
    if missing:
        raise UsageError("explicit sweep needs " + ", ".join("--" + m for m in missing))
    xs = [float(v) for v in args.values.split(",") if v.strip()]
    points = []
    for x in xs:
        pb = x if args.vary == "pb" else args.pb
        fb = x if args.vary == "fb" else args.fb
        fund = HeterogeneousFund.two_group(args.la, args.pa, args.fa, args.lb, pb, fb)
        series = f"pA={args.pa:g}" if args.vary == "pb" else f"pA={args.pa:g}/pB={args.pb:g}"
        points.append(SweepPoint(x, series, fund))
    return points


def cmd_sweep(args) -> int:
    if args.figure is not None:
        if args.figure not in FIGURE_IDS:
            print(f"unknown figure {args.figure!r}; valid ids: {', '.join(FIGURE_IDS)}", file=sys.stderr)
            return EXIT_INVALID
        metric, points = figure_points(args.figure)
    else:
        metric, points = args.metric, _explicit_points(args)
    rows = sweep(points, metric, args.method, args.threads)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return _sweep_status(rows)


def _sweep_status(rows: list[SweepRow]) -> int:
    bad = [r for r in rows if r.error]
    for r in bad:
        print(f"x={format_number(r.x)} {r.series}: {r.error}", file=sys.stderr)
    if any(r.error.startswith("EnumerationTooLarge") for r in bad):
        return EXIT_TOO_LARGE
    return EXIT_INVALID if bad else EXIT_OK


def cmd_verify(args) -> int:
    results = run_suites(args.max_l, args.suite, inject_fault=args.expect_fail)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_simulate(args) -> int:
    if args.reps < 1:
        raise UsageError(f"--reps must be >= 1, got {args.reps}")
    fund = _fund(args)
    run = monte_carlo_run(SimConfig(fund, args.reps, args.seed), threads=args.threads)
    fields: list[tuple[str, object]] = [
        ("replications", run.replications),
        ("seed", args.seed),
        ("mean", run.mean),
        ("std_error", run.std_error),
        ("conditional_mean", run.conditional_mean),
    ]
    if count_state_space(fund) <= 10**6:
        exact = enumerate_expected_consumption(fund, 1).expectation
        z = (run.mean - exact) / run.std_error if run.std_error > 0 else float("nan")
        fields += [("exact", exact), ("z_score", z)]
    else:
        fields += [("exact", "n/a"), ("z_score", "n/a")]
    _print_fields(fields)
    if args.out:
        rows = [SweepRow(float(b), "batch_mean", m, "monte_carlo") for b, m in enumerate(run.batch_means)]
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(rows_to_csv(rows))
    return EXIT_OK


COMMANDS = {"fairness": cmd_fairness, "sweep": cmd_sweep, "verify": cmd_verify, "simulate": cmd_simulate}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except EnumerationTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
