"""Rank/linear correlation, bootstrap confidence intervals, histogram bins."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class CorrelationResult:
    point: float
    ci_low: float
    ci_high: float
    resamples: int
    degenerate_resamples: int = 0

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "resamples": self.resamples,
            "degenerate_resamples": self.degenerate_resamples,
        }


def _as_pair(xs: Sequence[float], ys: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"inputs must be equal-length vectors, got {x.shape}, {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    return x, y


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the average of their positions."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=float)
    sv = v[order]
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation. Raises ValueError on constant input."""
    x, y = _as_pair(xs, ys)
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.sqrt(np.dot(xc, xc)))
    sy = float(np.sqrt(np.dot(yc, yc)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for a constant vector")
    # Exact +/-1 for exactly proportional inputs (sqrt rounding would
    # otherwise leave perfect agreement at 1 - ulp).
    if np.array_equal(xc * sy, yc * sx):
        return 1.0
    if np.array_equal(xc * sy, -yc * sx):
        return -1.0
    r = float(np.dot(xc, yc) / (sx * sy))
    return min(1.0, max(-1.0, r))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Rank correlation: Pearson on average ranks."""
    x, y = _as_pair(xs, ys)
    return pearson(average_ranks(x), average_ranks(y))


def bootstrap_ci(
    pairs: Sequence[tuple[float, float]],
    statistic: Callable[[Sequence[float], Sequence[float]], float],
    resamples: int = 100,
    level: float = 0.95,
    rng_seed: int = 0,
) -> CorrelationResult:
    """Percentile bootstrap interval for a paired statistic.

    Resamples the pairs with replacement; resamples on which the statistic
    is degenerate (constant vector) are skipped and counted. The interval
    is widened, if necessary, to include the full-sample point estimate.
    Deterministic for a fixed seed.
    """
    if len(pairs) < 2:
        raise ValueError("need at least 2 pairs")
    if not (0.0 < level < 1.0):
        raise ValueError(f"level must be in (0, 1), got {level}")
    x = np.asarray([p[0] for p in pairs], dtype=float)
    y = np.asarray([p[1] for p in pairs], dtype=float)
    point = statistic(x, y)

    rng = np.random.default_rng(rng_seed)
    values: list[float] = []
    degenerate = 0
    for _ in range(resamples):
        idx = rng.integers(0, x.size, size=x.size)
        try:
            values.append(statistic(x[idx], y[idx]))
        except ValueError:
            degenerate += 1
    if values:
        tail = 100.0 * (1.0 - level) / 2.0
        lo, hi = np.percentile(values, [tail, 100.0 - tail])
    else:
        lo, hi = point, point
    lo, hi = min(float(lo), point), max(float(hi), point)
    return CorrelationResult(point, lo, hi, resamples, degenerate)


def bin_histogram(values: Sequence[float], bins: int = 5) -> list[int]:
    """Counts over equal-width bins of [0, 1]; the last bin includes 1.0."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts = [0] * bins
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"value out of [0, 1]: {v}")
        counts[min(int(v * bins), bins - 1)] += 1
    return counts


def total_variation(counts_a: Sequence[int], counts_b: Sequence[int]) -> float:
    """TV distance between two histograms after normalizing to proportions."""
    if len(counts_a) != len(counts_b):
        raise ValueError("histograms must have the same number of bins")
    a = np.asarray(counts_a, dtype=float)
    b = np.asarray(counts_b, dtype=float)
    if a.sum() == 0 or b.sum() == 0:
        raise ValueError("empty histogram")
    return 0.5 * float(np.abs(a / a.sum() - b / b.sum()).sum())
