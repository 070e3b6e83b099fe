"""Streaming cumulants, histograms, and empirical-vs-theory comparison.

Summaries and histograms are mergeable values: each worker owns its
accumulator and the pieces are combined at the end, so no shared mutable
state is needed.  Merging in a fixed order reproduces results
bit-for-bit regardless of how many workers ran.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class CumulantSummary:
    """One-pass count/mean/M2/min/max accumulator (Welford update)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf

    def push(self, x: float) -> None:
        if not math.isfinite(x):
            raise ValueError(f"refusing to accumulate non-finite value {x!r}")
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        if x < self.min:
            self.min = x
        if x > self.max:
            self.max = x

    def variance(self, ddof: int = 1) -> float:
        """Sample variance by default; ddof=0 for full-population data."""
        if self.count <= ddof:
            return 0.0
        return self.m2 / (self.count - ddof)

    def stderr(self) -> float:
        if self.count < 2:
            return math.inf
        return math.sqrt(self.variance() / self.count)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "m2": self.m2,
            "min": self.min if self.count else None,
            "max": self.max if self.count else None,
        }


def accumulate(summary: CumulantSummary, x: float) -> CumulantSummary:
    """Welford update; returns the (mutated) summary for chaining."""
    summary.push(x)
    return summary


def merge(a: CumulantSummary, b: CumulantSummary) -> CumulantSummary:
    """Combine two summaries as if their streams were concatenated."""
    if a.count == 0:
        return CumulantSummary(b.count, b.mean, b.m2, b.min, b.max)
    if b.count == 0:
        return CumulantSummary(a.count, a.mean, a.m2, a.min, a.max)
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / count
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / count
    return CumulantSummary(count, mean, m2, min(a.min, b.min), max(a.max, b.max))


def from_values(values) -> CumulantSummary:
    """Summary of a whole array at once (two-pass within the block)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return CumulantSummary()
    if not np.all(np.isfinite(v)):
        raise ValueError("refusing to accumulate non-finite values")
    mean = float(np.mean(v))
    m2 = float(np.sum((v - mean) ** 2))
    return CumulantSummary(int(v.size), mean, m2, float(v.min()), float(v.max()))


@dataclass
class Histogram:
    """Fixed-range histogram with left-closed right-open bins.

    Values below ``lo`` land in ``underflow``; values at or above ``hi``
    (including exactly ``hi``) land in ``overflow``.
    """

    lo: float
    hi: float
    bins: int
    counts: np.ndarray | None = None
    underflow: int = 0
    overflow: int = 0

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi})")
        if self.bins < 1:
            raise ValueError(f"need at least one bin, got {self.bins}")
        if self.counts is None:
            self.counts = np.zeros(self.bins, dtype=np.int64)

    def add_values(self, values) -> None:
        v = np.asarray(values, dtype=np.float64)
        idx = np.floor((v - self.lo) / (self.hi - self.lo) * self.bins).astype(np.int64)
        self.underflow += int(np.sum(idx < 0))
        self.overflow += int(np.sum(idx >= self.bins))
        inside = idx[(idx >= 0) & (idx < self.bins)]
        self.counts += np.bincount(inside, minlength=self.bins)

    def total(self) -> int:
        return int(self.counts.sum()) + self.underflow + self.overflow

    def edges(self) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * np.arange(self.bins + 1) / self.bins

    def occupied(self) -> int:
        return int(np.count_nonzero(self.counts))


def histogram_build(values, lo: float, hi: float, bins: int) -> Histogram:
    """Histogram a stream (any iterable of reals) over [lo, hi)."""
    h = Histogram(lo, hi, bins)
    if hasattr(values, "__len__"):
        h.add_values(np.asarray(values, dtype=np.float64))
    else:
        h.add_values(np.fromiter(values, dtype=np.float64))
    return h


def merge_histograms(a: Histogram, b: Histogram) -> Histogram:
    if (a.lo, a.hi, a.bins) != (b.lo, b.hi, b.bins):
        raise ValueError("histograms cover different ranges")
    return Histogram(a.lo, a.hi, a.bins, a.counts + b.counts,
                     a.underflow + b.underflow, a.overflow + b.overflow)


def zscore_report(summary: CumulantSummary, theory_mean: float, theory_var: float,
                  ddof: int = 1) -> dict:
    """Mean z-score and variance ratio of a summary against theory."""
    if summary.count < 2:
        raise ValueError("need at least two observations for a z report")
    var = summary.variance(ddof)
    stderr = math.sqrt(var / summary.count)
    z = 0.0 if summary.mean == theory_mean else (summary.mean - theory_mean) / stderr
    return {
        "count": summary.count,
        "mean": summary.mean,
        "variance": var,
        "theory_mean": theory_mean,
        "theory_variance": theory_var,
        "stderr": stderr,
        "z": z,
        "variance_ratio": var / theory_var if theory_var else math.inf,
    }
