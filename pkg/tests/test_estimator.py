import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sawsis.estimator import (EmptyAccumulatorError, MomentAccumulator, add_sample, estimate,
                              relative_variance_exact)
from sawsis.samplers import ProbTrace, sample_crossing_saw


def test_exact_sums_survive_huge_weights():
    w = 3 ** 60  # far beyond 2^53
    acc = MomentAccumulator().add(w).add(w + 1)
    assert acc.sum_w == 2 * w + 1
    assert acc.sum_w2 == w * w + (w + 1) ** 2
    assert estimate(acc).mean == Fraction(2 * w + 1, 2)


def test_estimate_known_values():
    acc = MomentAccumulator.from_weights([8, 12, 16])
    est = estimate(acc)
    assert est.mean == 12
    # sample variance 16, SE sqrt(16/3)
    assert est.std_error == pytest.approx(math.sqrt(16 / 3))
    assert est.relative_variance_estimate == pytest.approx(3 * (64 + 144 + 256) / 36 ** 2 - 1)
    lo, hi = est.interval(3)
    assert lo == pytest.approx(12 - 3 * math.sqrt(16 / 3))
    assert hi > 12


def test_single_sample_has_nan_error():
    est = estimate(MomentAccumulator().add(5))
    assert math.isnan(est.std_error)
    assert est.relative_variance_estimate == 0


def test_empty_and_invalid():
    with pytest.raises(EmptyAccumulatorError):
        estimate(MomentAccumulator())
    with pytest.raises(ValueError):
        MomentAccumulator().add(0)
    with pytest.raises(ValueError):
        MomentAccumulator(n=-1)
    with pytest.raises(ValueError):
        MomentAccumulator.from_weights([1, -2])


@given(st.lists(st.integers(1, 10 ** 30), min_size=1, max_size=40), st.integers(0, 40))
def test_merge_equals_sequential(ws, cut):
    cut = min(cut, len(ws))
    whole = MomentAccumulator.from_weights(ws)
    left = MomentAccumulator.from_weights(ws[:cut])
    right = MomentAccumulator.from_weights(ws[cut:])
    merged = left + right
    assert (merged.n, merged.sum_w, merged.sum_w2) == (whole.n, whole.sum_w, whole.sum_w2)
    seq = MomentAccumulator()
    for w in ws:
        seq = seq.add(w)
    assert seq == whole


def test_add_sample_uses_trace_weight():
    acc = add_sample(MomentAccumulator(), ProbTrace((2, 3, 1)))
    assert acc.sum_w == 6


def test_relative_variance_exact():
    # crossing k=2: E X = 12, E X^2 = 152
    assert relative_variance_exact(12, 152) == Fraction(152, 144) - 1
    with pytest.raises(ZeroDivisionError):
        relative_variance_exact(0, 1)


def test_k2_mean_is_close():
    rng = random.Random(2)
    acc = MomentAccumulator.from_weights(sample_crossing_saw(2, rng).weight for _ in range(4000))
    est = estimate(acc)
    assert abs(est.mean_float - 12) < 4 * est.std_error
