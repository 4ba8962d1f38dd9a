"""Change-point detectors on CSS traces and the orientation-corrected
pipeline.

Two detectors are provided.  ICSS locates the argmax of the centered,
normalized statistic |C_n/C_N - n/N|.  The OLS quantile method fits straight
lines to (j, C_j) on both sides of each candidate split and minimizes the
combined sum of squared residuals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .css import (
    CssTrace,
    Orientation,
    ScaleEstimatorSpec,
    constant_prefix_check,
    detect_orientation,
    reverse_sample,
    robust_css,
)
from .errors import InsufficientLength, InvalidParameter, ZeroTotalSumOfSquares
from .estimators import _as_sample

__all__ = [
    "METHOD_ICSS",
    "METHOD_OLS",
    "DetectionResult",
    "icss_detect",
    "ols_detect",
    "detect_with_orientation",
]

METHOD_ICSS = "icss"
METHOD_OLS = "ols"


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """Outcome of one detection run.

    ``change_point`` is the raw argmax/argmin index of the detector (1-based;
    for a series with a regime switch at n* it typically lands on n* - 1, the
    last index of the first regime).  When ``reversed_applied`` is set the
    index has already been mapped back to original-order indexing, while
    ``statistic_trace`` remains in the order the detector actually scanned.
    """

    change_point: int
    method: str
    estimator: ScaleEstimatorSpec
    statistic_trace: np.ndarray
    reversed_applied: bool
    constant_prefix_fallback: bool
    statistic_at_cp: float

    def __post_init__(self):
        n = self.statistic_trace.shape[0]
        if not (2 <= self.change_point <= n - 1):
            raise InvalidParameter(
                f"change point {self.change_point} outside 2..{n - 1}"
            )


def icss_detect(trace: CssTrace) -> DetectionResult:
    """Argmax of |S_n| with S_n = C_n/C_N - n/N over n in {2..N-1}.

    Ties break to the smallest index.  A constant nonzero series yields an
    exactly linear trace, S_n = 0 everywhere, and therefore index 2 with
    statistic 0 — the "no change detected" signal.
    """
    n_total = trace.source_length
    if n_total < 4:
        raise InsufficientLength("ICSS needs at least 4 points")
    c_total = float(trace.values[-1])
    if c_total == 0.0:
        raise ZeroTotalSumOfSquares("C_N = 0; ICSS statistic undefined")
    s = trace.values / c_total - np.arange(1, n_total + 1) / n_total
    interior = np.abs(s[1 : n_total - 1])
    cp = 2 + int(np.argmax(interior))
    return DetectionResult(
        change_point=cp,
        method=METHOD_ICSS,
        estimator=trace.estimator,
        statistic_trace=s,
        reversed_applied=False,
        constant_prefix_fallback=False,
        statistic_at_cp=float(s[cp - 1]),
    )


def _exact_ints(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Prefix sums of j and j^2 for j = 1..n, exact in float64."""
    j = np.arange(1, n + 1, dtype=np.int64)
    return (j * (j + 1) // 2).astype(float), (j * (j + 1) * (2 * j + 1) // 6).astype(
        float
    )


def _ssr_from_stats(m, sx, sy, sxx, sxy, syy):
    """Residual sum of squares of a least-squares line through m points."""
    dxx = sxx - sx * sx / m
    dxy = sxy - sx * sy / m
    dyy = syy - sy * sy / m
    ssr = dyy - dxy * dxy / dxx
    return np.maximum(ssr, 0.0)


def ols_detect(trace: CssTrace, *, exact_refit: bool = False) -> DetectionResult:
    """Argmin over candidates n in {2..N-2} of the combined SSR of two line
    fits to (j, C_j), j = 1..n and j = n+1..N.

    The scan is O(N) via prefix sufficient statistics after subtracting the
    end-point chord from the trace (residuals are invariant under subtracting
    any fixed line, and the conditioning improves enormously).  With
    ``exact_refit=True`` every candidate is refit from scratch — the oracle
    for the fast path.  Entries of ``statistic_trace`` outside the candidate
    range are NaN.
    """
    n_total = trace.source_length
    if n_total < 6:
        raise InsufficientLength("OLS split fitting needs at least 6 points")
    c = trace.values
    j = np.arange(1, n_total + 1, dtype=float)
    s = np.full(n_total, np.nan)
    if exact_refit:
        for n in range(2, n_total - 1):
            s[n - 1] = _refit_ssr(j[:n], c[:n]) + _refit_ssr(j[n:], c[n:])
    else:
        chord = c[0] + (c[-1] - c[0]) * (j - 1.0) / (n_total - 1.0)
        d = c - chord
        p1 = np.cumsum(d)
        pj = np.cumsum(j * d)
        p2 = np.cumsum(d * d)
        sj, sjj = _exact_ints(n_total)
        n_arr = np.arange(2, n_total - 1)
        i = n_arr - 1
        left = _ssr_from_stats(
            n_arr.astype(float), sj[i], p1[i], sjj[i], pj[i], p2[i]
        )
        m_r = (n_total - n_arr).astype(float)
        right = _ssr_from_stats(
            m_r,
            sj[-1] - sj[i],
            p1[-1] - p1[i],
            sjj[-1] - sjj[i],
            pj[-1] - pj[i],
            p2[-1] - p2[i],
        )
        s[1 : n_total - 2] = left + right
    valid = s[1 : n_total - 2]
    cp = 2 + int(np.argmin(valid))
    return DetectionResult(
        change_point=cp,
        method=METHOD_OLS,
        estimator=trace.estimator,
        statistic_trace=s,
        reversed_applied=False,
        constant_prefix_fallback=False,
        statistic_at_cp=float(s[cp - 1]),
    )


def _refit_ssr(x: np.ndarray, y: np.ndarray) -> float:
    """SSR of a straight-line fit computed independently of the fast path."""
    coeffs = np.polyfit(x, y, 1)
    resid = y - np.polyval(coeffs, x)
    return float(np.sum(resid * resid))


def detect_with_orientation(
    values,
    method: str,
    spec: ScaleEstimatorSpec | None = None,
    *,
    head_len: int = 6,
    threshold: float = 0.05,
    exact_naive: bool = False,
) -> DetectionResult:
    """Full robust pipeline: build the robust trace, reverse the sample when
    the trace is convex (scale increases make the robust trace bend below its
    chord), fall back to the original order when the reversed trace has the
    constant-head signature, run the detector, and map the index back.

    The reversal mapping is n -> N - n + 1; it is applied only when the
    detection actually ran on the reversed trace.
    """
    if method not in (METHOD_ICSS, METHOD_OLS):
        raise InvalidParameter(f"unknown method {method!r}")
    spec = spec if spec is not None else ScaleEstimatorSpec.bmid()
    arr = _as_sample(values, min_len=8, what="series")
    trace = robust_css(arr, spec, exact_naive=exact_naive)
    reversed_applied = False
    fallback = False
    if detect_orientation(trace) is Orientation.CONVEX:
        rev = robust_css(
            reverse_sample(arr), spec, exact_naive=exact_naive, mark_reversed=True
        )
        if constant_prefix_check(rev, head_len=head_len, threshold=threshold):
            fallback = True
        else:
            trace = rev
            reversed_applied = True
    detector = icss_detect if method == METHOD_ICSS else ols_detect
    raw = detector(trace)
    cp = raw.change_point
    if reversed_applied:
        cp = arr.size - cp + 1
    return DetectionResult(
        change_point=cp,
        method=method,
        estimator=spec,
        statistic_trace=raw.statistic_trace,
        reversed_applied=reversed_applied,
        constant_prefix_fallback=fallback,
        statistic_at_cp=raw.statistic_at_cp,
    )
