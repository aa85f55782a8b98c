"""Aggregated-variance Hurst estimator."""

from __future__ import annotations

import numpy as np

from .errors import ConstantSeries, SeriesTooShort

MIN_LENGTH = 32
MIN_BLOCKS = 8


def aggregation_levels(n: int) -> list[int]:
    """Powers of two up to ``n // 4`` that still leave ``MIN_BLOCKS`` blocks."""
    levels = []
    m = 1
    while m <= n // 4:
        if n // m >= MIN_BLOCKS:
            levels.append(m)
        m *= 2
    return levels


def aggregated_variances(series, levels) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    out = []
    for m in levels:
        blocks = len(x) // m
        means = x[: blocks * m].reshape(blocks, m).mean(axis=1)
        out.append(means.var(ddof=1))
    return np.array(out)


def hurst_aggregated_variance(series) -> float:
    """Estimate H = 1 + beta/2 from the log-log slope of block-mean variance.

    ``beta`` is the least-squares slope of ``log10 Var(X^(m))`` against
    ``log10 m`` where ``X^(m)`` are non-overlapping block means of size m.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or len(x) < MIN_LENGTH:
        raise SeriesTooShort(f"need at least {MIN_LENGTH} samples, got {x.size}")
    # Centre and scale first so that affine transforms of the input give the
    # same numbers downstream.
    spread = x.std()
    if spread == 0 or not np.isfinite(spread):
        raise ConstantSeries("series has zero variance")
    z = (x - x.mean()) / spread
    levels = aggregation_levels(len(z))
    variances = aggregated_variances(z, levels)
    keep = variances > 0
    if not keep[0]:
        raise ConstantSeries("series has zero variance")
    if keep.sum() < 2:
        raise ConstantSeries("aggregated variance vanishes at every level above 1")
    log_m = np.log10(np.array(levels, dtype=float)[keep])
    log_v = np.log10(variances[keep])
    beta = np.polyfit(log_m, log_v, 1)[0]
    return float(1.0 + beta / 2.0)
