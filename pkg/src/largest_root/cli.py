"""Command-line front end.

    largest-root tw --quantile 0.95
    largest-root test-cca --z z.csv --y y.csv --alpha 0.05
    largest-root test-manova --groups g1.csv g2.csv g3.csv
    largest-root test-lm --y y.csv --x x.csv --c c.csv [--d d.csv] [--gamma gamma.csv]
    largest-root simulate --preset table1 --dist normal --mag 1 --reps 2000 --seed 7

Data files are comma-separated, observations in rows, with an optional
header row. Exit status is 0 on success, 2 on usage errors and 1 on
numerical failures.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import tw
from .cca import cca_independence_test
from .errors import InvalidDimensionError
from .linmodel import intra_subject_test, linear_hypothesis_test
from .manova import manova_test
from .simulation import PRESET_DIMS, default_workers, preset_configs, run_scenarios


class UsageError(Exception):
    pass


def _probability(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number in (0, 1), got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {text}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an unsigned 64-bit integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2^64), got {text}")
    return value


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and "".join(row).strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise UsageError(f"{path} is empty")
    return rows


def _is_numeric_row(row):
    try:
        [float(v) for v in row]
    except ValueError:
        return False
    return True


def read_matrix(path):
    """Numeric CSV as a 2-d float array; a non-numeric first row is treated as a header."""
    rows = _read_rows(path)
    if not _is_numeric_row(rows[0]):
        rows = rows[1:]
    if not rows:
        raise UsageError(f"{path} has a header but no data")
    width = len(rows[0])
    out = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise UsageError(f"{path}: row {i + 1} has {len(row)} fields, expected {width}")
        try:
            out.append([float(v) for v in row])
        except ValueError:
            raise UsageError(f"{path}: row {i + 1} contains a non-numeric value") from None
    arr = np.array(out)
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{path} contains NaN or infinite values")
    return arr


def read_labeled_groups(path, label_col):
    """Split a CSV with a group-label column into per-group arrays (first-appearance order)."""
    rows = _read_rows(path)
    header = None if _is_numeric_row(rows[0]) else rows[0]
    data = rows[1:] if header else rows
    if label_col.lstrip("-").isdigit():
        idx = int(label_col)
    elif header and label_col in header:
        idx = header.index(label_col)
    else:
        raise UsageError(f"label column {label_col!r} not found in {path}")
    groups = {}
    for i, row in enumerate(data):
        if not -len(row) <= idx < len(row):
            raise UsageError(f"{path}: row {i + 1} has no column {idx}")
        k = idx % len(row)
        label = row[k]
        values = row[:k] + row[k + 1 :]
        try:
            groups.setdefault(label, []).append([float(v) for v in values])
        except ValueError:
            raise UsageError(f"{path}: row {i + 1} contains a non-numeric value") from None
    try:
        return [np.array(g) for g in groups.values()]
    except ValueError:
        raise UsageError(f"{path}: rows have differing lengths") from None


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload, out):
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _cmd_tw(args):
    if args.quantile is not None:
        query, arg, value = "quantile", args.quantile, tw.tw1_quantile(args.quantile)
    elif args.cdf is not None:
        query, arg, value = "cdf", args.cdf, tw.tw1_cdf(args.cdf)
    else:
        query, arg, value = "pvalue", args.pvalue, tw.tw1_pvalue(args.pvalue)
    _emit_json({"query": query, "argument": arg, "value": value, "table": args.tw_table or "embedded"}, args.out)


def _report_payload(report, config):
    payload = report.to_dict()
    payload["config"] = config
    return payload


def _cmd_test_cca(args):
    report = cca_independence_test(read_matrix(args.z), read_matrix(args.y), alpha=args.alpha)
    _emit_json(_report_payload(report, {"z": args.z, "y": args.y, "alpha": args.alpha}), args.out)


def _cmd_test_manova(args):
    if args.groups:
        groups = [read_matrix(p) for p in args.groups]
        source = {"groups": args.groups}
    else:
        groups = read_labeled_groups(args.data, args.label_col)
        source = {"data": args.data, "label_col": args.label_col}
    report = manova_test(groups, alpha=args.alpha)
    _emit_json(_report_payload(report, {**source, "alpha": args.alpha}), args.out)


def _cmd_test_lm(args):
    y, x, c = read_matrix(args.y), read_matrix(args.x), read_matrix(args.c)
    gamma = read_matrix(args.gamma) if args.gamma else None
    if args.d:
        report = intra_subject_test(y, x, c, read_matrix(args.d), gamma=gamma, alpha=args.alpha)
    else:
        report = linear_hypothesis_test(y, x, c, gamma=gamma, alpha=args.alpha)
    config = {"y": args.y, "x": args.x, "c": args.c, "d": args.d, "gamma": args.gamma, "alpha": args.alpha}
    _emit_json(_report_payload(report, config), args.out)


def _cmd_simulate(args):
    configs = preset_configs(
        args.preset,
        magnification=args.mag,
        replications=args.reps,
        seed=args.seed,
        distribution=args.dist,
        dims=args.dims,
        taus=args.tau,
    )
    table = run_scenarios(configs, workers=args.workers)
    _emit(table.to_csv() if args.format == "csv" else table.to_json(), args.out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="largest-root",
        description="Largest-eigenvalue tests calibrated by the Tracy-Widom law.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--tw-table", metavar="CSV", help="replacement Tracy-Widom table (abscissa,cdf)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here instead of standard output")
    common.add_argument("--tw-table", metavar="CSV", default=argparse.SUPPRESS, help="replacement Tracy-Widom table")
    testing = argparse.ArgumentParser(add_help=False)
    testing.add_argument("--alpha", type=_probability, default=0.05, help="significance level in (0, 1)")

    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = sub.add_parser("tw", parents=[common], formatter_class=fmt, help="Tracy-Widom CDF, quantile and p-value")
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--cdf", type=float, metavar="S", help="P(TW1 <= S)")
    q.add_argument("--quantile", type=_probability, metavar="P", help="quantile at probability P")
    q.add_argument("--pvalue", type=float, metavar="S", help="P(TW1 > S)")
    p.set_defaults(func=_cmd_tw)

    p = sub.add_parser("test-cca", parents=[common, testing], formatter_class=fmt, help="independence test via CCA")
    p.add_argument("--z", required=True, metavar="CSV", help="first sample, N x M1")
    p.add_argument("--y", required=True, metavar="CSV", help="second sample, N x M2")
    p.set_defaults(func=_cmd_test_cca)

    p = sub.add_parser("test-manova", parents=[common, testing], formatter_class=fmt, help="equality of group means")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--groups", nargs="+", metavar="CSV", help="one CSV per group")
    src.add_argument("--data", metavar="CSV", help="single CSV holding a group-label column")
    p.add_argument("--label-col", default="group", help="label column name or 0-based index (with --data)")
    p.set_defaults(func=_cmd_test_manova)

    p = sub.add_parser("test-lm", parents=[common, testing], formatter_class=fmt, help="linear-model hypothesis C B D = Gamma")
    p.add_argument("--y", required=True, metavar="CSV", help="responses, N x p2")
    p.add_argument("--x", required=True, metavar="CSV", help="design, N x p1")
    p.add_argument("--c", required=True, metavar="CSV", help="hypothesis matrix, g1 x p1")
    p.add_argument("--d", metavar="CSV", help="response contrasts, p2 x g2 (intra-subject test)")
    p.add_argument("--gamma", metavar="CSV", help="hypothesised value (default zero)")
    p.set_defaults(func=_cmd_test_lm)

    p = sub.add_parser("simulate", parents=[common], formatter_class=fmt, help="Monte-Carlo table presets")
    p.add_argument("--preset", required=True, choices=sorted(PRESET_DIMS), help="which table to reproduce")
    p.add_argument("--dist", choices=["normal", "discrete", "gamma"], default=None,
                   help="data distribution; None means the preset's own (normal, discrete, gamma and gamma for table1 to table4)")
    p.add_argument("--mag", type=_positive_int, default=1, help="magnification factor for the dimensions")
    p.add_argument("--reps", type=_positive_int, default=2000, help="replications per cell")
    p.add_argument("--seed", type=_seed, default=0, help="master seed")
    p.add_argument("--workers", type=_positive_int, default=default_workers(), help="worker processes")
    p.add_argument("--format", choices=["json", "csv"], default="json", help="output format")
    p.add_argument("--dims", type=_int_list, default=None, help="override the preset's base dimensions, e.g. 5,8,10,30")
    p.add_argument("--tau", type=_float_list, default=None, help="table2 dependence levels, e.g. 0,0.1,0.2")
    p.set_defaults(func=_cmd_simulate)
    return parser


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    previous = tw._active
    try:
        if args.tw_table:
            try:
                tw.use_table(tw.TW1Table.from_csv(args.tw_table))
            except (OSError, ValueError, IndexError) as exc:
                raise UsageError(f"cannot load Tracy-Widom table {args.tw_table}: {exc}") from None
        args.func(args)
    except (UsageError, InvalidDimensionError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, np.linalg.LinAlgError, ValueError, RuntimeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    finally:
        tw.use_table(previous)
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
