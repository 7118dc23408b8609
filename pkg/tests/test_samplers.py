import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sawsis.lattice import DIRECTIONS, Direction, Rect, Walk, enclosed, is_self_avoiding
from sawsis.samplers import (NesStats, ProbTrace, UntrappedWalk, as_rng, eligible_steps_crossing,
                             eligible_steps_directed, eligible_steps_nes, eligible_steps_untrapped,
                             end_to_end, is_trapping_step, nes_walk_stats, recompute_trace, sample,
                             sample_crossing_saw, sample_directed, sample_nes, sample_untrapped)

N, E, S, W = Direction.N, Direction.E, Direction.S, Direction.W


def _reachable(walk: Walk, k: int) -> bool:
    """Naive oracle: is (k, k) reachable from the head avoiding the walk?"""
    target = (k, k)
    head = walk.end
    if head == target:
        return True
    used = set(walk.vertices)
    seen = {head}
    stack = [head]
    while stack:
        p = stack.pop()
        for d in DIRECTIONS:
            q = p.step(d)
            if q == target:
                return True
            if 0 <= q.x <= k and 0 <= q.y <= k and q not in used and q not in seen:
                seen.add(q)
                stack.append(q)
    return False


def _naive_eligible(walk: Walk, k: int) -> list[Direction]:
    out = []
    for d in DIRECTIONS:
        w = walk.extend(d)
        q = w.end
        if 0 <= q.x <= k and 0 <= q.y <= k and q not in walk.vertices and _reachable(w, k):
            out.append(d)
    return out


def test_prob_trace():
    t = ProbTrace((4, 3, 2, 1, 3))
    assert (t.a, t.b, t.weight) == (3, 2, 72)
    assert t.probability == Fraction(1, 72)
    assert len(t) == 5
    with pytest.raises(ValueError):
        ProbTrace((5,))
    with pytest.raises(ValueError):
        ProbTrace((0,))


def test_as_rng():
    r = random.Random(3)
    assert as_rng(r) is r
    assert as_rng(3).random() == random.Random(3).random()


# -- crossing -------------------------------------------------------------------------------

def test_crossing_first_steps():
    assert eligible_steps_crossing(Walk(), 2) == [N, E]
    assert eligible_steps_crossing(Walk.from_string("NN"), 2) == [E]


def test_crossing_dead_end_pruned():
    # head at (0,1): S revisits the origin, N is the only way on
    assert eligible_steps_crossing(Walk.from_string("ENW"), 2) == [N]
    # head at (1,0) with (0,0..2) used: W would be a dead end
    assert eligible_steps_crossing(Walk.from_string("NNEESSW"), 3) == []  # head is walled in
    assert eligible_steps_crossing(Walk.from_string("NNESS"), 3) == [E]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10 ** 9))
def test_crossing_matches_naive_oracle(k, seed):
    rng = random.Random(seed)
    w = Walk()
    while w.end != (k, k):
        elig = eligible_steps_crossing(w, k)
        assert elig == _naive_eligible(w, k)
        w = w.extend(rng.choice(elig))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10 ** 9))
def test_crossing_sample_valid(k, seed):
    s = sample_crossing_saw(k, seed)
    assert s.walk.end == (k, k)
    assert is_self_avoiding(s.walk)
    assert s.walk.confined_to(Rect(k, k))
    assert recompute_trace(s.walk, "crossing", k=k) == s.trace


def test_crossing_k2_distribution():
    # the 12 crossing walks at k=2 have weights 8 (x2), 12 (x6), 16 (x4)
    rng = random.Random(11)
    hits = Counter(str(sample_crossing_saw(2, rng).walk) for _ in range(24000))
    assert len(hits) == 12
    s = sample_crossing_saw(2, 0)
    assert s.weight in (8, 12, 16)
    for walk, c in hits.items():
        p = 1 / recompute_trace(Walk.from_string(walk), "crossing", k=2).weight
        assert abs(c / 24000 - p) < 5 * (p * (1 - p) / 24000) ** 0.5


def test_sampler_determinism():
    a = [str(sample_crossing_saw(6, random.Random(42)).walk) for _ in range(3)]
    assert len(set(a)) == 1


# -- directed -----------------------------------------------------------------------------

def test_directed_rule():
    assert eligible_steps_directed(Walk(), 3) == [N, E]
    assert eligible_steps_directed(Walk.from_string("NNN"), 3) == [E]
    assert eligible_steps_directed(Walk.from_string("EEE"), 3) == [N]
    s = sample_directed(5, 1)
    assert s.walk.end == (5, 5)
    assert set(str(s.walk)) <= {"N", "E"}
    assert s.trace.b == 0
    assert s.weight == 2 ** s.trace.a


# -- partially directed -------------------------------------------------------------------------

def test_nes_rule():
    # first column: at height 0 we may go N or E
    assert set(eligible_steps_nes(Walk(), 2, 3)) == {N, E}
    # last column: only N remains
    assert eligible_steps_nes(Walk.from_string("EEE"), 2, 3) == [N]
    # no immediate reversal
    assert S not in eligible_steps_nes(Walk.from_string("N"), 2, 3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.integers(0, 10 ** 9))
def test_nes_contact_formula(k, l, seed):
    s = sample_nes(k, l, seed)
    assert s.walk.end == (l, k)
    stats, w = nes_walk_stats(s.walk, k)
    assert w == s.weight
    assert recompute_trace(s.walk, "nes", k=k, l=l) == s.trace


def test_nes_stats_examples():
    # EN at k=1, l=1: nothing before the last E
    assert nes_walk_stats(Walk.from_string("EN"), 1) == (NesStats(0, 0, 0, 0), 2)
    assert nes_walk_stats(Walk.from_string("NESEN"), 1) == (NesStats(0, 1, 0, 2), 4)
    stats, w = nes_walk_stats(Walk.from_string("NENE"), 2)
    assert stats == NesStats(h=1, h_c=0, v=1, v_c=1)
    assert w == 2 * 3 * 2
    assert recompute_trace(Walk.from_string("NENE"), "nes", k=2, l=2).weight == 12
    with pytest.raises(ValueError):
        nes_walk_stats(Walk.from_string("NSEN"), 2)
    with pytest.raises(ValueError):
        nes_walk_stats(Walk.from_string("NN"), 2)
    with pytest.raises(ValueError):
        nes_walk_stats(Walk.from_string("ENN"), 1)


# -- untrapped --------------------------------------------------------------------------------

def test_untrapped_first_step_has_four_options():
    assert eligible_steps_untrapped(Walk()) == list(DIRECTIONS)
    s = sample_untrapped(1, 0)
    assert s.trace.per_step == (4,)
    assert s.trace.a == 2


def test_trap_example():
    # head at (1,0) below the empty site (1,1), which is walled in on three sides
    w = Walk.from_string("NNEESSW")
    assert is_trapping_step(w, N)
    assert not is_trapping_step(w, S)
    for d in DIRECTIONS:
        u = w.end.step(d)
        if u in w.vertices:
            with pytest.raises(ValueError):
                is_trapping_step(w, d)
            continue
        assert is_trapping_step(w, d) == enclosed(set(w.vertices) | {u}, u)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 150), st.integers(0, 10 ** 9))
def test_trap_detection_matches_flood_fill(n, seed):
    s = sample_untrapped(n, seed)
    state = UntrappedWalk()
    for step in s.walk.steps:
        occ = set(state.index)
        for d in DIRECTIONS:
            u = state.head.step(d)
            if u not in occ:
                assert state.is_trapping(d) == enclosed(occ | {u}, u)
        state.push(step)


def test_untrapped_never_stuck_and_replays():
    rng = random.Random(9)
    for _ in range(50):
        s = sample_untrapped(120, rng)
        assert len(s.walk) == 120
        assert is_self_avoiding(s.walk)
        assert recompute_trace(s.walk, "untrapped") == s.trace


def test_push_rejects_revisit():
    state = UntrappedWalk()
    state.push(N)
    with pytest.raises(ValueError):
        state.push(S)


# -- dispatch -------------------------------------------------------------------------------

def test_sample_dispatch_errors():
    with pytest.raises(ValueError):
        sample("nes", k=2)
    with pytest.raises(ValueError):
        sample("bogus", k=2)
    with pytest.raises(ValueError):
        sample_untrapped(0)
    with pytest.raises(ValueError):
        recompute_trace(Walk.from_string("NNN"), "crossing", k=2)


def test_end_to_end():
    samples = [sample("untrapped", n=10, rng=i) for i in range(20)]
    mean, se = end_to_end(samples)
    assert 0 < mean <= 10
    assert se > 0
    assert end_to_end(samples[:1])[1] != end_to_end(samples[:1])[1]  # NaN
