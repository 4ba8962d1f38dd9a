"""Command-line front-end: CSV ingestion and preprocessing, detection runs,
fixture simulation, and benchmark execution.

Usage sketches::

    scaleshift detect --input series.csv --method ols --estimator qcv
    scaleshift simulate stable --alpha 1.9 --gamma2 3 --n 1000 --cp 500 --seed 7
    scaleshift bench mae --preset stable-desk --output-csv mae.csv

A flat key-value config file (``key = value`` per line, ``#`` comments) can
seed any subcommand's flags via ``--config``; explicit flags win.  The
environment variable ``SCALESHIFT_SEED`` provides the default seed/base-seed.
"""
from __future__ import annotations

import argparse
import csv as csv_mod
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import bench as bench_mod
from .css import CssTrace, ScaleEstimatorSpec, classical_css, robust_css
from .detect import (
    METHOD_ICSS,
    METHOD_OLS,
    DetectionResult,
    detect_with_orientation,
    icss_detect,
    ols_detect,
)
from .errors import (
    ConfigError,
    EmptyColumn,
    NonPositiveForLog,
    ParseError,
    ScaleShiftError,
    TooShortAfterPreprocess,
)
from .simulate import MixtureSpec, StableSpec, gen_mixture_series, gen_stable_series

__all__ = [
    "TimeSeries",
    "PreprocessSpec",
    "ingest_csv",
    "preprocess",
    "parse_preprocess_spec",
    "main",
]

SEED_ENV_VAR = "SCALESHIFT_SEED"
MIN_SERIES_LEN = 8


@dataclass(frozen=True)
class TimeSeries:
    """A real-valued series with provenance metadata."""

    values: np.ndarray
    source: str
    preprocessing: tuple[str, ...] = ()


@dataclass(frozen=True)
class PreprocessSpec:
    """Ordered preprocessing steps.

    Each step is one of ``("log-returns",)``, ``("difference", k)``, or
    ``("aggregate", b, reducer)`` with reducer ``mean`` or ``median``.
    """

    steps: tuple[tuple, ...] = ()


def parse_preprocess_spec(text: str) -> PreprocessSpec:
    """Parse a comma-separated step list, e.g. ``log-returns,diff:2,agg:60:mean``.

    Accepted step forms: ``log-returns``; ``difference:K`` (alias ``diff``);
    ``aggregate:B[:mean|median]`` (alias ``agg``, default reducer mean).
    """
    steps = []
    for raw in text.split(","):
        token = raw.strip()
        if not token:
            continue
        parts = token.split(":")
        name = parts[0].lower()
        if name == "log-returns":
            if len(parts) != 1:
                raise ConfigError(f"log-returns takes no arguments: {token!r}")
            steps.append(("log-returns",))
        elif name in ("difference", "diff"):
            if len(parts) != 2:
                raise ConfigError(f"difference needs an order: {token!r}")
            k = int(parts[1])
            if k < 1:
                raise ConfigError(f"difference order must be >= 1, got {k}")
            steps.append(("difference", k))
        elif name in ("aggregate", "agg"):
            if len(parts) not in (2, 3):
                raise ConfigError(f"aggregate needs a block size: {token!r}")
            b = int(parts[1])
            if b < 1:
                raise ConfigError(f"aggregate block must be >= 1, got {b}")
            reducer = parts[2].lower() if len(parts) == 3 else "mean"
            if reducer not in ("mean", "median"):
                raise ConfigError(f"unknown reducer {reducer!r}")
            steps.append(("aggregate", b, reducer))
        else:
            raise ConfigError(f"unknown preprocessing step {token!r}")
    return PreprocessSpec(steps=tuple(steps))


def ingest_csv(path, column=1) -> TimeSeries:
    """Read one column of a CSV file as a series of finite reals.

    ``column`` is a 1-based index or a header name.  A non-numeric first row
    is treated as a header.  Any unparseable or non-finite cell in the data
    is a hard :class:`ParseError` carrying its line number.
    """
    values = []
    with open(path, newline="") as fh:
        reader = csv_mod.reader(fh)
        col_idx = None if isinstance(column, str) else int(column) - 1
        if col_idx is not None and col_idx < 0:
            raise ConfigError(f"column index must be >= 1, got {column}")
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if isinstance(column, str) and col_idx is None:
                try:
                    col_idx = [c.strip() for c in row].index(column)
                except ValueError:
                    raise ParseError(
                        f"no column named {column!r} in header", line=lineno
                    ) from None
                continue
            if col_idx >= len(row):
                if lineno == 1 and not values:
                    continue  # header row narrower than the requested column
                raise ParseError(
                    f"row has {len(row)} columns, need column {col_idx + 1}",
                    line=lineno,
                )
            cell = row[col_idx].strip()
            try:
                v = float(cell)
            except ValueError:
                if lineno == 1 and not values:
                    continue  # header row
                raise ParseError(f"cannot parse {cell!r} as a real", line=lineno) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {cell!r}", line=lineno)
            values.append(v)
    if not values:
        raise EmptyColumn(f"no data rows found in {path!r} (column {column!r})")
    return TimeSeries(values=np.asarray(values), source=str(path))


def preprocess(ts: TimeSeries, spec: PreprocessSpec) -> TimeSeries:
    """Apply the steps in order: log-returns (requires positive input),
    k-fold differencing, or non-overlapping block aggregation with the tail
    remainder dropped.  The result must keep at least 8 points."""
    x = ts.values
    applied = list(ts.preprocessing)
    for step in spec.steps:
        name = step[0]
        if name == "log-returns":
            if x.size < 2:
                raise TooShortAfterPreprocess("log-returns needs >= 2 points")
            if np.any(x <= 0.0):
                raise NonPositiveForLog(
                    "log-returns require strictly positive values"
                )
            x = np.log(x[1:] / x[:-1])
            applied.append("log-returns")
        elif name == "difference":
            k = step[1]
            if x.size <= k:
                raise TooShortAfterPreprocess(
                    f"difference order {k} leaves no data from {x.size} points"
                )
            x = np.diff(x, n=k)
            applied.append(f"difference:{k}")
        else:
            b, reducer = step[1], step[2]
            nblocks = x.size // b
            if nblocks == 0:
                raise TooShortAfterPreprocess(
                    f"aggregate block {b} leaves no data from {x.size} points"
                )
            blocks = x[: nblocks * b].reshape(nblocks, b)
            x = np.mean(blocks, axis=1) if reducer == "mean" else np.median(blocks, axis=1)
            applied.append(f"aggregate:{b}:{reducer}")
    if x.size < MIN_SERIES_LEN:
        raise TooShortAfterPreprocess(
            f"{x.size} points remain after preprocessing; need >= {MIN_SERIES_LEN}"
        )
    return TimeSeries(values=x, source=ts.source, preprocessing=tuple(applied))


# --------------------------------------------------------------------------
# presets

def _stable_grid(alphas, gamma2s, trials):
    grid = tuple(
        StableSpec(alpha=a, gamma2=g, N=1000) for a in alphas for g in gamma2s
    )
    return grid, trials


def build_preset(name: str, base_seed: int) -> bench_mod.BenchConfig:
    """Named benchmark configurations ('-desk' are CI-scale reductions)."""
    methods = bench_mod.default_methods()
    if name == "stable-desk":
        grid, trials = _stable_grid((1.1, 2.0), (0.2, 3.0, 5.0), 50)
    elif name == "stable-full":
        grid, trials = _stable_grid(
            (1.1, 1.9, 2.0), (0.2, 0.25, 0.33, 0.5, 2.0, 3.0, 4.0, 5.0), 100
        )
    elif name == "mixture-desk":
        grid = tuple(
            MixtureSpec(omega2=w, nu=r * w, p=0.05, N=1000)
            for r, w in ((5.0, 2.0), (5.0, 5.0), (1.5, 0.5))
        )
        trials = 50
    elif name == "mixture-full":
        grid = tuple(
            MixtureSpec(omega2=w, nu=r * w, p=0.05, N=1000)
            for r in (1.5, 5.0)
            for w in (0.2, 0.25, 0.33, 0.5, 2.0, 3.0, 4.0, 5.0)
        )
        trials = 100
    elif name == "timing-desk":
        return bench_mod.BenchConfig(
            grid=(MixtureSpec(omega2=5.0, nu=15.0, p=0.05, N=1000),),
            methods=tuple(m for m in methods if m.estimator.is_robust),
            trials=6,
            base_seed=base_seed,
            n_list=(100, 200, 400, 800, 1600, 3200, 5000),
        )
    elif name == "timing-full":
        return bench_mod.BenchConfig(
            grid=(MixtureSpec(omega2=5.0, nu=15.0, p=0.05, N=1000),),
            methods=tuple(m for m in methods if m.estimator.is_robust),
            trials=20,
            base_seed=base_seed,
            n_list=(
                40, 50, 60, 70, 100, 200, 250, 300, 350, 400, 450, 500, 550,
                600, 650, 700, 750, 800, 850, 900, 950, 1000, 1500, 2000, 5000,
            ),
        )
    else:
        raise ConfigError(f"unknown preset {name!r}")
    return bench_mod.BenchConfig(
        grid=grid, methods=methods, trials=trials, base_seed=base_seed
    )


# --------------------------------------------------------------------------
# argument plumbing

def _load_config_args(path) -> list[str]:
    """Flat key = value file -> argv fragment (prepended, so real flags win)."""
    args: list[str] = []
    try:
        fh = open(path)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip().lstrip("-")
            value = value.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if value.lower() in ("true", "yes", "on"):
                args.append(f"--{key}")
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                args.extend([f"--{key}", value])
    return args


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_ready(obj):
    if isinstance(obj, float):
        return float(format(obj, ".17g"))
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def _estimator_from_args(args) -> ScaleEstimatorSpec:
    if args.estimator == "classical":
        return ScaleEstimatorSpec.classical()
    if args.estimator == "bmid":
        return ScaleEstimatorSpec.bmid(args.bmid_c)
    return ScaleEstimatorSpec.qcv(args.qcv_a, args.qcv_b)


# --------------------------------------------------------------------------
# subcommands

def _cmd_detect(args) -> int:
    ts = ingest_csv(args.input, _parse_column(args.column))
    if args.preprocess:
        ts = preprocess(ts, parse_preprocess_spec(args.preprocess))
    spec = _estimator_from_args(args)
    use_orientation = (
        spec.is_robust if args.orientation == "auto" else args.orientation == "on"
    )
    if use_orientation:
        result = detect_with_orientation(
            ts.values,
            args.method,
            spec,
            head_len=args.head_len,
            threshold=args.prefix_threshold,
            exact_naive=args.exact_naive,
        )
        trace = _trace_for_result(ts.values, spec, result, args.exact_naive)
    else:
        trace = (
            classical_css(ts.values)
            if not spec.is_robust
            else robust_css(ts.values, spec, exact_naive=args.exact_naive)
        )
        det = icss_detect(trace) if args.method == METHOD_ICSS else ols_detect(trace)
        result = det
    payload = {
        "change_point": result.change_point,
        "method": result.method,
        "estimator": spec.describe(),
        "reversed_applied": result.reversed_applied,
        "constant_prefix_fallback": result.constant_prefix_fallback,
        "statistic_at_cp": result.statistic_at_cp,
        "n": int(ts.values.size),
        "source": ts.source,
        "preprocessing": list(ts.preprocessing),
    }
    text = json.dumps(_json_ready(payload), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.trace_csv:
        _write_trace_csv(args.trace_csv, trace, result)
    return 0


def _trace_for_result(values, spec, result: DetectionResult, exact_naive) -> CssTrace:
    """Rebuild the trace the detector scanned (reversed when it did)."""
    from .css import reverse_sample

    data = reverse_sample(values) if result.reversed_applied else values
    return robust_css(
        data, spec, exact_naive=exact_naive, mark_reversed=result.reversed_applied
    )


def _write_trace_csv(path, trace: CssTrace, result: DetectionResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv_mod.writer(fh)
        w.writerow(["n", "css", "statistic"])
        for i, (cv, sv) in enumerate(zip(trace.values, result.statistic_trace), 1):
            w.writerow([i, _fmt(cv), "" if math.isnan(sv) else _fmt(sv)])


def _parse_column(raw: str):
    try:
        return int(raw)
    except ValueError:
        return raw


def _cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.model == "stable":
        spec = StableSpec(
            alpha=args.alpha,
            gamma1=args.gamma1,
            gamma2=args.gamma2,
            N=args.n,
            cp=args.cp,
            seed=seed,
        )
        series, cp = gen_stable_series(spec)
    else:
        spec = MixtureSpec(
            omega2=args.omega2, nu=args.nu, p=args.p, N=args.n, cp=args.cp, seed=seed
        )
        series, cp = gen_mixture_series(spec)
    rows = [
        (i, _fmt(v), 1 if i < cp else 2) for i, v in enumerate(series, start=1)
    ]
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv_mod.writer(fh)
            w.writerow(["index", "value", "regime"])
            w.writerows(rows)
    else:
        w = csv_mod.writer(sys.stdout)
        w.writerow(["index", "value", "regime"])
        w.writerows(rows)
    return 0


def _cmd_bench(args) -> int:
    base_seed = args.base_seed if args.base_seed is not None else _default_seed()
    if args.preset:
        cfg = build_preset(args.preset, base_seed)
        if args.trials is not None:
            cfg = dataclasses.replace(cfg, trials=args.trials)
    else:
        cfg = _explicit_bench_config(args, base_seed)
    if args.kind == "mae":
        report = bench_mod.run_mae_study(cfg)
        if args.output_csv:
            bench_mod.write_mae_csv(report, args.output_csv)
        if args.output_json:
            bench_mod.write_mae_json(report, args.output_json)
        if args.detections_csv:
            bench_mod.write_detections_csv(report, args.detections_csv)
        if not (args.output_csv or args.output_json):
            for row in report.rows:
                print(
                    f"{row.grid_label} {row.method}: mae={_fmt(row.mae)} "
                    f"failures={len(row.failures)}"
                )
    else:
        if args.n_list:
            cfg = dataclasses.replace(
                cfg, n_list=tuple(int(v) for v in args.n_list.split(","))
            )
        report = bench_mod.run_timing_study(cfg)
        if args.output_csv:
            bench_mod.write_timing_csv(report, args.output_csv)
        if args.output_json:
            bench_mod.write_timing_json(report, args.output_json)
        if not (args.output_csv or args.output_json):
            for label, beta in report.exponents:
                print(f"{label}: beta={_fmt(beta)}")
    return 0


def _explicit_bench_config(args, base_seed) -> bench_mod.BenchConfig:
    if not args.model:
        raise ConfigError("either --preset or --model is required")
    if args.model == "stable":
        if args.alpha is None or args.gamma2 is None:
            raise ConfigError("stable bench needs --alpha and --gamma2")
        grid = (
            StableSpec(
                alpha=args.alpha,
                gamma1=args.gamma1,
                gamma2=args.gamma2,
                N=args.n,
                cp=args.cp,
            ),
        )
    else:
        if args.omega2 is None or args.nu is None or args.p is None:
            raise ConfigError("mixture bench needs --omega2, --nu and --p")
        grid = (
            MixtureSpec(omega2=args.omega2, nu=args.nu, p=args.p, N=args.n, cp=args.cp),
        )
    return bench_mod.BenchConfig(
        grid=grid,
        methods=bench_mod.default_methods(),
        trials=args.trials if args.trials is not None else 50,
        base_seed=base_seed,
    )


# --------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scaleshift",
        description="Offline scale change-point detection for heavy-tailed series",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_det = sub.add_parser("detect", help="detect a scale change in a CSV series")
    p_det.add_argument("--config", help="flat key=value config file")
    p_det.add_argument("--input", required=True, help="input CSV path")
    p_det.add_argument("--column", default="1", help="1-based index or header name")
    p_det.add_argument("--preprocess", default="", help="e.g. log-returns,diff:1,agg:10:mean")
    p_det.add_argument("--method", choices=(METHOD_ICSS, METHOD_OLS), default=METHOD_ICSS)
    p_det.add_argument(
        "--estimator", choices=("classical", "bmid", "qcv"), default="bmid"
    )
    p_det.add_argument("--bmid-c", type=float, default=9.0)
    p_det.add_argument("--qcv-a", type=float, default=0.1)
    p_det.add_argument("--qcv-b", type=float, default=0.9)
    p_det.add_argument(
        "--orientation",
        choices=("auto", "on", "off"),
        default="auto",
        help="orientation correction; auto = on for robust estimators",
    )
    p_det.add_argument("--head-len", type=int, default=6)
    p_det.add_argument("--prefix-threshold", type=float, default=0.05)
    p_det.add_argument("--exact-naive", action="store_true",
                       help="per-prefix oracle scan instead of the incremental one")
    p_det.add_argument("--output", help="write result JSON here (default stdout)")
    p_det.add_argument("--trace-csv", help="write n,css,statistic rows here")
    p_det.set_defaults(func=_cmd_detect)

    p_sim = sub.add_parser("simulate", help="write a synthetic fixture CSV")
    p_sim.add_argument("model", choices=("stable", "mixture"))
    p_sim.add_argument("--config", help="flat key=value config file")
    p_sim.add_argument("--n", type=int, default=1000)
    p_sim.add_argument("--cp", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None,
                       help=f"defaults to ${SEED_ENV_VAR} or 0")
    p_sim.add_argument("--alpha", type=float, default=1.5)
    p_sim.add_argument("--gamma1", type=float, default=1.0)
    p_sim.add_argument("--gamma2", type=float, default=3.0)
    p_sim.add_argument("--omega2", type=float, default=3.0)
    p_sim.add_argument("--nu", type=float, default=15.0)
    p_sim.add_argument("--p", type=float, default=0.05)
    p_sim.add_argument("--output", help="fixture CSV path (default stdout)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser("bench", help="run a Monte Carlo study")
    p_bench.add_argument("kind", choices=("mae", "timing"))
    p_bench.add_argument("--config", help="flat key=value config file")
    p_bench.add_argument("--preset", help="stable-desk|stable-full|mixture-desk|"
                                          "mixture-full|timing-desk|timing-full")
    p_bench.add_argument("--model", choices=("stable", "mixture"))
    p_bench.add_argument("--alpha", type=float)
    p_bench.add_argument("--gamma1", type=float, default=1.0)
    p_bench.add_argument("--gamma2", type=float)
    p_bench.add_argument("--omega2", type=float)
    p_bench.add_argument("--nu", type=float)
    p_bench.add_argument("--p", type=float)
    p_bench.add_argument("--n", type=int, default=1000)
    p_bench.add_argument("--cp", type=int, default=None)
    p_bench.add_argument("--trials", type=int, default=None)
    p_bench.add_argument("--base-seed", type=int, default=None,
                         help=f"defaults to ${SEED_ENV_VAR} or 0")
    p_bench.add_argument("--n-list", help="comma list of lengths (timing)")
    p_bench.add_argument("--output-csv")
    p_bench.add_argument("--output-json")
    p_bench.add_argument("--detections-csv")
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into its flags, placed before explicit flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ConfigError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    # keep the subcommand words in front, then config args, then user flags
    head = []
    j = 0
    while j < len(rest) and not rest[j].startswith("-"):
        head.append(rest[j])
        j += 1
    return head + _load_config_args(path) + rest[j:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
        parser = _build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except ScaleShiftError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError) and exc.line is not None:
            payload["line"] = exc.line
        print(json.dumps(payload), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(
            json.dumps({"error": "FileNotFound", "message": str(exc)}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
