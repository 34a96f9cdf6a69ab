"""Command-line front end: evaluate closed forms, run experiments, and write
CSV/JSON rows consumed by the tests and the plotting scripts.

Exit codes: 0 success / all statistical checks pass, 1 statistical failure,
2 usage error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import analytic, experiments, geometry
from .analytic import DomainError, Ellipsoid
from .geometry import GeometryError
from .sampling import ProcessSpec

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip decimal
    return str(value)


def write_rows(path, command, config, columns, rows, fmt="csv"):
    """Write tabular output; CSV is UTF-8, LF, header row, round-trip floats."""
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        payload = {"schema_version": SCHEMA_VERSION, "command": command,
                   "config": config, "columns": list(columns), "rows": rows}
        text = json.dumps(payload, indent=2, default=_fmt) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


class UsageError(Exception):
    """A subcommand was invoked without a parameter it needs."""


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for "
                             f"this model/statistic")


def _parse_axes(text: str) -> Ellipsoid:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise DomainError("--axes expects p,q,r")
    return Ellipsoid(*parts)


def _process_from_args(args) -> ProcessSpec:
    model = args.model
    if model == "uniform":
        _require(args, "n")
        return ProcessSpec("uniform", n=args.n)
    if model == "symmetric":
        _require(args, "n")
        return ProcessSpec("symmetric", n=args.n)
    if model == "poisson":
        _require(args, "rho")
        return ProcessSpec("poisson", intensity=args.rho)
    if model == "ellipsoid":
        _require(args, "n", "axes")
        return ProcessSpec("homeoid", n=args.n, ellipsoid=_parse_axes(args.axes))
    raise DomainError(f"unknown model {model}")


def _config_echo(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# -- subcommand implementations ----------------------------------------------

def cmd_expect(args) -> int:
    stat = args.stat
    if stat == "min-dist":
        if args.model != "uniform":
            raise UsageError("min-dist is defined for the uniform model")
        _require(args, "n")
        value = analytic.expected_min_distance(args.n)
    elif stat == "edge-length":
        if args.model == "uniform":
            _require(args, "n")
            value = analytic.expected_edge_length_uniform(args.n)
        elif args.model == "poisson":
            _require(args, "rho")
            value = analytic.expected_edge_length_poisson(args.rho)
        elif args.model == "ellipsoid":
            _require(args, "n", "axes")
            value = analytic.expected_edge_length_ellipsoid_asymptotic(
                args.n, _parse_axes(args.axes))
        else:
            raise UsageError("edge-length: uniform, poisson or ellipsoid")
    else:
        k = {"width": 1, "area": 2, "volume": 3}[stat]
        if args.model == "uniform":
            _require(args, "n")
            value = analytic.expected_iv_uniform(k, args.n)
        elif args.model == "symmetric":
            _require(args, "n")
            value = analytic.expected_iv_symmetric(k, args.n)
        elif args.model == "poisson":
            _require(args, "rho")
            value = analytic.expected_iv_poisson(k, args.rho)
        else:
            _require(args, "n", "axes")
            value = analytic.expected_iv_ellipsoid(k, args.n,
                                                   _parse_axes(args.axes))
    print(_fmt(float(value)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _process_from_args(args)
    stats = tuple(args.stats.split(","))
    config = experiments.ExperimentConfig(
        spec, args.trials, args.seed, statistics=stats,
        histogram_bins=args.bins, workers=args.workers)
    results = experiments.run(config)
    columns = ("statistic", "count", "mean", "variance", "stderr", "min",
               "max", "skewness", "analytic", "z", "passed")
    rows = []
    all_pass = True
    for name in stats:
        summary, report = results[name]
        rows.append({
            "statistic": name, "count": summary.count, "mean": summary.mean,
            "variance": summary.variance, "stderr": summary.stderr,
            "min": summary.minimum, "max": summary.maximum,
            "skewness": summary.skewness,
            "analytic": report.analytic_value if report else "",
            "z": report.z if report else "",
            "passed": report.passed if report else True,
        })
        if report and not report.passed:
            all_pass = False
    write_rows(args.out, "simulate",
               _config_echo(args, ("model", "n", "rho", "axes", "trials",
                                   "seed", "stats", "workers")),
               columns, rows, args.format)
    return EXIT_OK if all_pass else EXIT_STAT_FAIL


def cmd_hist(args) -> int:
    spec = _process_from_args(args)
    stats = tuple(args.stats.split(","))
    config = experiments.ExperimentConfig(
        spec, args.trials, args.seed, statistics=stats,
        histogram_bins=args.bins, workers=args.workers)
    results = experiments.run(config)
    ball = {"width": 2.0, "area": 4.0 * math.pi,
            "volume": 4.0 * math.pi / 3.0, "edge_length": 1.0,
            "acute_fraction": 1.0, "min_distance": 1.0}
    columns = ("statistic", "bin_left", "bin_right", "count", "mean")
    rows = []
    for name in stats:
        summary, _ = results[name]
        edges, counts = summary.histogram
        scale = ball[name]
        for j, c in enumerate(counts):
            rows.append({"statistic": name, "bin_left": float(edges[j]) / scale,
                         "bin_right": float(edges[j + 1]) / scale,
                         "count": int(c), "mean": summary.mean / scale})
    write_rows(args.out, "hist",
               _config_echo(args, ("model", "n", "rho", "trials", "seed",
                                   "stats", "bins")),
               columns, rows, args.format)
    return EXIT_OK


def cmd_curve(args) -> int:
    n_list = [int(x) for x in args.n_list.split(",")]
    rows = []
    for n, trial, w, a, v in experiments.moment_scatter(
            n_list, args.trials_each, args.seed):
        rows.append({"kind": "sample", "t": float(n), "trial": trial,
                     "width": w, "area": a, "volume": v})
    t_grid = [3.0 + 0.25 * i for i in range(int((4 * max(n_list) - 12)) + 1)]
    for t, w, a, v in experiments.gamma_samples(t_grid):
        rows.append({"kind": "gamma", "t": t, "trial": -1,
                     "width": w, "area": a, "volume": v})
    write_rows(args.out, "curve",
               _config_echo(args, ("n_list", "trials_each", "seed")),
               ("kind", "t", "trial", "width", "area", "volume"),
               rows, args.format)
    return EXIT_OK


def cmd_deficiency(args) -> int:
    n_list = [int(x) for x in args.n_list.split(",")]
    columns = ("n", "width_random", "width_model", "width_ratio",
               "area_random", "area_model", "area_ratio",
               "volume_random", "volume_model", "volume_ratio",
               "length_random_per_sqrt_n", "length_model_per_sqrt_n")
    rows = [dict(zip(columns, (
        r.n, r.width_random, r.width_model, r.width_ratio,
        r.area_random, r.area_model, r.area_ratio,
        r.volume_random, r.volume_model, r.volume_ratio,
        r.length_random_per_sqrt_n, r.length_model_per_sqrt_n)))
        for r in experiments.deficiency_table(n_list)]
    write_rows(args.out, "deficiency", _config_echo(args, ("n_list",)),
               columns, rows, args.format)
    return EXIT_OK


def cmd_chords(args) -> int:
    result = experiments.chord_cdf_test(args.trials, args.seed)
    rows = [{"trials": result.trials, "ks": result.ks_statistic,
             "bound": result.ks_bound, "passed": result.passed}]
    write_rows(args.out, "chords", _config_echo(args, ("trials", "seed")),
               ("trials", "ks", "bound", "passed"), rows, args.format)
    return EXIT_OK if result.passed else EXIT_STAT_FAIL


def cmd_mindist(args) -> int:
    results = experiments.min_distance_experiment(args.n, args.trials,
                                                  args.seed)
    columns = ("statistic", "mean", "analytic", "stderr", "z", "passed")
    rows = []
    all_pass = True
    for name, (summary, report) in results.items():
        rows.append({"statistic": name, "mean": summary.mean,
                     "analytic": report.analytic_value,
                     "stderr": report.stderr, "z": report.z,
                     "passed": report.passed})
        all_pass &= report.passed
    write_rows(args.out, "mindist", _config_echo(args, ("n", "trials", "seed")),
               columns, rows, args.format)
    return EXIT_OK if all_pass else EXIT_STAT_FAIL


def cmd_acute(args) -> int:
    if args.planar:
        summary, report = experiments.planar_acute_fraction(args.trials,
                                                            args.seed)
    else:
        summary, report = experiments.acute_fraction(args.n, args.trials,
                                                     args.seed, args.workers)
    rows = [{"statistic": report.statistic_name, "mean": summary.mean,
             "analytic": report.analytic_value, "stderr": report.stderr,
             "z": report.z, "passed": report.passed}]
    write_rows(args.out, "acute",
               _config_echo(args, ("n", "trials", "seed", "planar")),
               ("statistic", "mean", "analytic", "stderr", "z", "passed"),
               rows, args.format)
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def _bucket_table_cmd(args, table, command) -> int:
    columns = ("bucket", "lo", "hi", "count", "observed", "expected", "z",
               "passed")
    rows = [{"bucket": r.bucket, "lo": r.lo, "hi": r.hi, "count": r.count,
             "observed": r.observed, "expected": r.expected, "z": r.z,
             "passed": r.passed} for r in table.rows]
    rows.append({"bucket": "chisq", "lo": "", "hi": "", "count": "",
                 "observed": table.chi_square,
                 "expected": table.chi_square_threshold, "z": "",
                 "passed": table.chi_square <= table.chi_square_threshold})
    write_rows(args.out, command,
               _config_echo(args, ("n", "trials", "buckets", "seed")),
               columns, rows, args.format)
    return EXIT_OK if table.passed else EXIT_STAT_FAIL


def cmd_shape_size(args) -> int:
    table = experiments.shape_size_independence(args.n, args.trials,
                                                args.buckets, args.seed)
    return _bucket_table_cmd(args, table, "shape-size")


def cmd_facet_prob(args) -> int:
    table = experiments.facet_probability_check(args.n, args.trials,
                                                args.buckets, args.seed)
    return _bucket_table_cmd(args, table, "facet-prob")


def cmd_special(args) -> int:
    fn = args.fn
    vals = [float(x) for x in args.args.split(",")]
    if fn == "bessel-i":
        value = analytic.bessel_i(*vals)
    elif fn == "beta":
        value = analytic.beta(*vals)
    elif fn == "ellip-f":
        value = analytic.incomplete_elliptic_f(*vals)
    elif fn == "ellip-e":
        value = analytic.incomplete_elliptic_e(*vals)
    else:
        raise DomainError(f"unknown function {fn}")
    print(_fmt(float(value)))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_common(p, trials_default=None, needs_seed=True):
    p.add_argument("--trials", type=int, default=trials_default,
                   required=trials_default is None)
    p.add_argument("--seed", type=int, required=needs_seed)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _default_workers() -> int:
    return int(os.environ.get("SPHULL_WORKERS", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphull",
        description="Random polytopes inscribed in the sphere: closed forms "
                    "and Monte Carlo verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expect", help="evaluate a closed-form expectation")
    p.add_argument("--stat", required=True,
                   choices=("width", "area", "volume", "edge-length",
                            "min-dist"))
    p.add_argument("--model", required=True,
                   choices=("uniform", "symmetric", "poisson", "ellipsoid"))
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--axes")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("simulate", help="Monte Carlo run with z-reports")
    p.add_argument("--model", required=True,
                   choices=("uniform", "symmetric", "poisson", "ellipsoid"))
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--axes")
    p.add_argument("--stats", default="width,area,volume")
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--workers", type=int, default=_default_workers())
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hist", help="normalized-statistic histograms")
    p.add_argument("--model", default="uniform",
                   choices=("uniform", "symmetric", "poisson", "ellipsoid"))
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--axes")
    p.add_argument("--stats", default="width,area,volume")
    p.add_argument("--bins", type=int, default=200)
    p.add_argument("--workers", type=int, default=_default_workers())
    _add_common(p)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("curve", help="moment-curve scatter data")
    p.add_argument("--n-list", default="10,40,100,200")
    p.add_argument("--trials-each", type=int, default=150)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("deficiency", help="virtual-model comparison table")
    p.add_argument("--n-list", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_deficiency)

    p = sub.add_parser("chords", help="chord-length CDF KS test")
    _add_common(p)
    p.set_defaults(func=cmd_chords)

    p = sub.add_parser("mindist", help="minimum-distance moments")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_mindist)

    p = sub.add_parser("acute", help="acute-facet fraction")
    p.add_argument("--n", type=int)
    p.add_argument("--planar", action="store_true")
    p.add_argument("--workers", type=int, default=_default_workers())
    _add_common(p)
    p.set_defaults(func=cmd_acute)

    p = sub.add_parser("shape-size", help="shape vs size independence buckets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--buckets", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_shape_size)

    p = sub.add_parser("facet-prob", help="circumcap avoidance probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--buckets", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_facet_prob)

    p = sub.add_parser("special", help="evaluate a special function")
    p.add_argument("--fn", required=True,
                   choices=("bessel-i", "beta", "ellip-f", "ellip-e"))
    p.add_argument("--args", required=True)
    p.set_defaults(func=cmd_special)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, GeometryError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
