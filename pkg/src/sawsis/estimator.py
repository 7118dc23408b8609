"""Importance-sampling estimator of walk counts.

Weights 1/p are products of 2s and 3s, so they are accumulated as exact
Python ints; k=10 crossing weights reach 1e24, far past float mantissas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .samplers import ProbTrace


class EmptyAccumulatorError(ValueError):
    pass


@dataclass(frozen=True)
class MomentAccumulator:
    n: int = 0
    sum_w: int = 0
    sum_w2: int = 0
    log_max: float = float("-inf")  # log10 of the largest weight seen

    def __post_init__(self):
        if self.n < 0 or self.sum_w < 0 or self.sum_w2 < 0:
            raise ValueError("accumulator fields must be non-negative")

    def add(self, weight: int) -> MomentAccumulator:
        if weight <= 0:
            raise ValueError("weights are positive")
        return MomentAccumulator(self.n + 1, self.sum_w + weight, self.sum_w2 + weight * weight,
                                 max(self.log_max, math.log10(weight)))

    def merge(self, other: MomentAccumulator) -> MomentAccumulator:
        return MomentAccumulator(self.n + other.n, self.sum_w + other.sum_w,
                                 self.sum_w2 + other.sum_w2, max(self.log_max, other.log_max))

    __add__ = merge

    @classmethod
    def from_weights(cls, weights: Iterable[int]) -> MomentAccumulator:
        n = s1 = s2 = 0
        top = 0
        for w in weights:
            if w <= 0:
                raise ValueError("weights are positive")
            n += 1
            s1 += w
            s2 += w * w
            top = max(top, w)
        return cls(n, s1, s2, math.log10(top) if n else float("-inf"))


def add_sample(acc: MomentAccumulator, trace: ProbTrace) -> MomentAccumulator:
    return acc.add(trace.weight)


@dataclass(frozen=True)
class Estimate:
    n: int
    mean: Fraction
    std_error: float
    relative_variance_estimate: float

    @property
    def mean_float(self) -> float:
        return float(self.mean)

    def interval(self, z: float = 1.96) -> tuple[float, float]:
        """Normal-approximation interval mean +- z standard errors."""
        m = self.mean_float
        return m - z * self.std_error, m + z * self.std_error


def estimate(acc: MomentAccumulator) -> Estimate:
    """Sample mean of 1/p, its standard error and the relative variance.

    The standard error uses the unbiased sample variance and is NaN for a
    single sample. The relative variance estimate is n*sum(w^2)/sum(w)^2 - 1.
    """
    if acc.n == 0:
        raise EmptyAccumulatorError("no samples accumulated")
    n = acc.n
    mean = Fraction(acc.sum_w, n)
    if n >= 2:
        # n*sum_w2 - sum_w^2 is exact; only the final scaling goes through float
        var = Fraction(n * acc.sum_w2 - acc.sum_w ** 2, n * (n - 1))
        se = math.sqrt(float(var / n))
    else:
        se = float("nan")
    rel = float(Fraction(n * acc.sum_w2, acc.sum_w ** 2) - 1)
    return Estimate(n, mean, se, rel)


def relative_variance_exact(m1, m2) -> Fraction:
    """Var(X / E X) = m2 / m1^2 - 1, exactly."""
    m1, m2 = Fraction(m1), Fraction(m2)
    if m1 == 0:
        raise ZeroDivisionError("first moment is zero")
    return m2 / (m1 * m1) - 1
