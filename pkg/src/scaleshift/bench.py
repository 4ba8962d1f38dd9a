"""Monte Carlo benchmark harness: MAE studies over parameter grids, boxplot
summaries, normalized errors, and timing studies with a fitted complexity
exponent.

Per-trial seeds derive from (base_seed, grid-point-id, trial), where the
grid-point id hashes the generator parameters (seed excluded).  Reordering
the grid therefore never changes any individual trial's data.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .css import ScaleEstimatorSpec, classical_css
from .detect import (
    METHOD_ICSS,
    METHOD_OLS,
    detect_with_orientation,
    icss_detect,
    ols_detect,
)
from .errors import ConfigError, EmptyInput, IndexOutOfRange, ScaleShiftError
from .simulate import MixtureSpec, StableSpec, gen_mixture_series, gen_stable_series

__all__ = [
    "Method",
    "BenchConfig",
    "BoxplotSummary",
    "MaeRow",
    "MaeReport",
    "TimingRow",
    "TimingReport",
    "default_methods",
    "run_mae_study",
    "run_timing_study",
    "normalized_error",
    "summarize_boxplot",
    "write_mae_csv",
    "write_mae_json",
    "write_detections_csv",
    "write_timing_csv",
    "write_timing_json",
]


@dataclass(frozen=True)
class Method:
    """A (detector, estimator) pairing, e.g. ICSS with the BMID scale."""

    detector: str
    estimator: ScaleEstimatorSpec

    def __post_init__(self):
        if self.detector not in (METHOD_ICSS, METHOD_OLS):
            raise ConfigError(f"unknown detector {self.detector!r}")

    @property
    def label(self) -> str:
        base = self.detector.upper()
        if self.estimator.is_robust:
            return f"{base}[{self.estimator.kind.upper()}]"
        return base

    @property
    def column(self) -> str:
        if self.estimator.is_robust:
            return f"{self.detector}_{self.estimator.kind}"
        return self.detector


def default_methods(
    c: float = 9.0, a: float = 0.1, b: float = 0.9
) -> tuple[Method, ...]:
    """The six standard methods: each detector with the classical, BMID, and
    QCV scale estimators."""
    out = []
    for det in (METHOD_ICSS, METHOD_OLS):
        out.append(Method(det, ScaleEstimatorSpec.classical()))
        out.append(Method(det, ScaleEstimatorSpec.bmid(c)))
        out.append(Method(det, ScaleEstimatorSpec.qcv(a, b)))
    return tuple(out)


@dataclass(frozen=True)
class BenchConfig:
    grid: tuple
    methods: tuple[Method, ...]
    trials: int = 50
    base_seed: int = 0
    n_list: tuple[int, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.grid:
            raise ConfigError("benchmark grid is empty")
        if not self.methods:
            raise ConfigError("no methods selected")


@dataclass(frozen=True)
class BoxplotSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    outliers: tuple[float, ...] = ()


def summarize_boxplot(detections) -> BoxplotSummary:
    """Five-number summary with linear-interpolation quantiles and the
    1.5*IQR outlier rule."""
    arr = np.asarray(list(detections), dtype=float)
    if arr.size == 0:
        raise EmptyInput("no detections to summarize")
    q1, med, q3 = (float(q) for q in np.quantile(arr, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    out_mask = (arr < q1 - 1.5 * iqr) | (arr > q3 + 1.5 * iqr)
    return BoxplotSummary(
        minimum=float(arr.min()),
        q1=q1,
        median=med,
        q3=q3,
        maximum=float(arr.max()),
        outliers=tuple(float(v) for v in arr[out_mask]),
    )


def normalized_error(detected: int, truth: int, n: int) -> float:
    """|truth - detected| / N, the length-normalized index error."""
    if not (1 <= detected <= n) or not (1 <= truth <= n):
        raise IndexOutOfRange(
            f"indices must lie in 1..{n}, got detected={detected}, truth={truth}"
        )
    return abs(truth - detected) / n


def grid_point_id(spec) -> int:
    """Stable 64-bit id of a generator spec, independent of its seed field."""
    fields = dataclasses.asdict(spec)
    fields.pop("seed", None)
    kind = type(spec).__name__
    canon = kind + "|" + "|".join(f"{k}={fields[k]!r}" for k in sorted(fields))
    return int.from_bytes(hashlib.sha256(canon.encode()).digest()[:8], "big")


def trial_seed(base_seed: int, gp_id: int, trial: int) -> int:
    """Per-trial 64-bit seed derived via SeedSequence spawning keys."""
    ss = np.random.SeedSequence((base_seed, gp_id, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def _generate(spec):
    if isinstance(spec, StableSpec):
        return gen_stable_series(spec)
    if isinstance(spec, MixtureSpec):
        return gen_mixture_series(spec)
    raise ConfigError(f"unsupported generator spec {type(spec).__name__}")


def run_detection(method: Method, values) -> int:
    """Detect with the given method; classical methods run the plain
    detector, robust ones the orientation-corrected pipeline."""
    if method.estimator.is_robust:
        return detect_with_orientation(
            values, method.detector, method.estimator
        ).change_point
    trace = classical_css(values)
    det = icss_detect(trace) if method.detector == METHOD_ICSS else ols_detect(trace)
    return det.change_point


@dataclass(frozen=True)
class MaeRow:
    grid_label: str
    grid_params: tuple[tuple[str, object], ...]
    method: str
    truth: int
    mae: float
    summary: BoxplotSummary
    detections: tuple[int, ...]
    failures: tuple[tuple[int, str], ...]
    seeds: tuple[int, ...]


@dataclass(frozen=True)
class MaeReport:
    trials: int
    base_seed: int
    rows: tuple[MaeRow, ...]


def _grid_fields(spec) -> tuple[tuple[str, object], ...]:
    d = dataclasses.asdict(spec)
    d.pop("seed", None)
    d["model"] = "stable" if isinstance(spec, StableSpec) else "mixture"
    order = ["model"] + [k for k in d if k != "model"]
    return tuple((k, d[k]) for k in order)


def _grid_label(spec) -> str:
    parts = [f"{k}={v}" for k, v in _grid_fields(spec)]
    return " ".join(parts)


def run_mae_study(cfg: BenchConfig, _detect_fn=None) -> MaeReport:
    """MAE per (grid point, method) over seeded trials.

    Ground truth is cp - 1 (the detectors' raw index lands on the last point
    of the first regime).  Trials whose detection raises are recorded as
    failures and excluded from the mean, never imputed.

    ``_detect_fn(method, values, truth)`` is a test hook replacing the real
    detection; the default runs :func:`run_detection`.
    """
    detect_fn = _detect_fn or (lambda method, values, truth: run_detection(method, values))
    rows = []
    for spec in cfg.grid:
        gp = grid_point_id(spec)
        truth = spec.cp - 1
        seeds = tuple(
            trial_seed(cfg.base_seed, gp, t) for t in range(cfg.trials)
        )
        series = []
        for s in seeds:
            x, _ = _generate(dataclasses.replace(spec, seed=s))
            series.append(x)
        for method in cfg.methods:
            detections: list[int] = []
            failures: list[tuple[int, str]] = []
            for t, x in enumerate(series):
                try:
                    detections.append(int(detect_fn(method, x, truth)))
                except ScaleShiftError as exc:
                    failures.append((t, type(exc).__name__))
            errors = [abs(d - truth) for d in detections]
            mae = float(np.mean(errors)) if errors else math.nan
            rows.append(
                MaeRow(
                    grid_label=_grid_label(spec),
                    grid_params=_grid_fields(spec),
                    method=method.label,
                    truth=truth,
                    mae=mae,
                    summary=summarize_boxplot(detections)
                    if detections
                    else BoxplotSummary(*(math.nan,) * 5),
                    detections=tuple(detections),
                    failures=tuple(failures),
                    seeds=seeds,
                )
            )
    return MaeReport(trials=cfg.trials, base_seed=cfg.base_seed, rows=tuple(rows))


@dataclass(frozen=True)
class TimingRow:
    n: int
    method: str
    median_seconds: float
    ci_low: float
    ci_high: float
    times: tuple[float, ...]


@dataclass(frozen=True)
class TimingReport:
    trials: int
    base_seed: int
    rows: tuple[TimingRow, ...]
    exponents: tuple[tuple[str, float], ...]

    def exponent(self, method_label: str) -> float:
        for label, beta in self.exponents:
            if label == method_label:
                return beta
        raise KeyError(method_label)


def median_ci_ranks(n: int, level: float = 0.95) -> tuple[int, int] | None:
    """1-based order-statistic ranks bracketing the median at >= ``level``
    coverage (binomial argument); None when unattainable at this n."""
    tail = (1.0 - level) / 2.0
    cdf = 0.0
    best = 0
    for k in range(n + 1):
        cdf += math.comb(n, k) * 0.5 ** n
        if cdf <= tail:
            best = k + 1
        else:
            break
    if best == 0:
        return None
    return best, n + 1 - best


def run_timing_study(cfg: BenchConfig) -> TimingReport:
    """Median detection-only wall time per (N, method) plus a log-log fitted
    exponent per method.

    The grid's first spec is the template; N (and a midpoint change point)
    is substituted from ``cfg.n_list``.  One warm-up trial per (N, method) is
    run and discarded.  Confidence bounds are nonparametric order-statistic
    ranks at 95%; when the trial count cannot support that level the full
    observed range is reported.
    """
    ns = sorted(set(int(n) for n in cfg.n_list))
    if len(ns) < 5:
        raise ConfigError("timing study needs >= 5 distinct lengths")
    if max(ns) < 10 * min(ns):
        raise ConfigError("timing lengths must span at least one decade")
    template = cfg.grid[0]
    rows = []
    per_method: dict[str, list[tuple[int, float]]] = {
        m.label: [] for m in cfg.methods
    }
    for n in ns:
        spec_n = dataclasses.replace(template, N=n, cp=n // 2)
        gp = grid_point_id(spec_n)
        series = []
        for t in range(cfg.trials + 1):  # slot 0 is the warm-up
            x, _ = _generate(
                dataclasses.replace(spec_n, seed=trial_seed(cfg.base_seed, gp, t))
            )
            series.append(x)
        for method in cfg.methods:
            times = []
            for t, x in enumerate(series):
                t0 = time.perf_counter()
                run_detection(method, x)
                elapsed = time.perf_counter() - t0
                if t > 0:
                    times.append(elapsed)
            times_sorted = sorted(times)
            med = float(np.median(times_sorted))
            ranks = median_ci_ranks(len(times_sorted))
            lo, hi = ranks if ranks else (1, len(times_sorted))
            rows.append(
                TimingRow(
                    n=n,
                    method=method.label,
                    median_seconds=med,
                    ci_low=times_sorted[lo - 1],
                    ci_high=times_sorted[hi - 1],
                    times=tuple(times),
                )
            )
            per_method[method.label].append((n, med))
    exponents = []
    for label, points in per_method.items():
        logn = np.log([p[0] for p in points])
        logt = np.log([p[1] for p in points])
        beta = float(np.polyfit(logn, logt, 1)[0])
        exponents.append((label, beta))
    return TimingReport(
        trials=cfg.trials,
        base_seed=cfg.base_seed,
        rows=tuple(rows),
        exponents=tuple(exponents),
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_mae_csv(report: MaeReport, path) -> None:
    """Wide MAE table: one row per grid point, one column per method."""
    grid_order: list[str] = []
    grid_params: dict[str, tuple] = {}
    methods: list[str] = []
    cells: dict[tuple[str, str], MaeRow] = {}
    for row in report.rows:
        if row.grid_label not in grid_order:
            grid_order.append(row.grid_label)
            grid_params[row.grid_label] = row.grid_params
        if row.method not in methods:
            methods.append(row.method)
        cells[(row.grid_label, row.method)] = row
    param_names = [k for k, _ in grid_params[grid_order[0]]]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(param_names + [f"mae_{m}" for m in methods] + [f"failures_{m}" for m in methods])
        for label in grid_order:
            params = dict(grid_params[label])
            line = [_fmt(params[k]) for k in param_names]
            line += [_fmt(cells[(label, m)].mae) for m in methods]
            line += [str(len(cells[(label, m)].failures)) for m in methods]
            w.writerow(line)


def _round17(obj):
    if isinstance(obj, float):
        return float(format(obj, ".17g"))
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    return obj


def write_mae_json(report: MaeReport, path) -> None:
    payload = {
        "trials": report.trials,
        "base_seed": report.base_seed,
        "rows": [
            {
                "grid": dict(r.grid_params),
                "method": r.method,
                "truth": r.truth,
                "mae": r.mae,
                "summary": dataclasses.asdict(r.summary),
                "detections": list(r.detections),
                "failures": [{"trial": t, "error": e} for t, e in r.failures],
                "seeds": list(r.seeds),
            }
            for r in report.rows
        ],
    }
    with open(path, "w") as fh:
        json.dump(_round17(payload), fh, indent=2)


def write_detections_csv(report: MaeReport, path) -> None:
    """Tidy per-trial detections for boxplot tooling."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["grid", "method", "trial", "detection"])
        for row in report.rows:
            for t, d in enumerate(row.detections):
                w.writerow([row.grid_label, row.method, t, d])


def write_timing_csv(report: TimingReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "method", "median_seconds", "ci_low", "ci_high"])
        for row in report.rows:
            w.writerow(
                [
                    row.n,
                    row.method,
                    _fmt(row.median_seconds),
                    _fmt(row.ci_low),
                    _fmt(row.ci_high),
                ]
            )


def write_timing_json(report: TimingReport, path) -> None:
    payload = {
        "trials": report.trials,
        "base_seed": report.base_seed,
        "exponents": {label: beta for label, beta in report.exponents},
        "rows": [dataclasses.asdict(r) for r in report.rows],
    }
    with open(path, "w") as fh:
        json.dump(_round17(payload), fh, indent=2)
