"""Sequential importance samplers with exact per-walk probability traces.

Four models share one shape: grow a walk one step at a time, choosing
uniformly among the *eligible* steps, and record how many were eligible at
each step. The reciprocal probability of the finished walk is then the
product of those sizes, an exact integer.

* ``crossing``  -- self-avoiding walks crossing the k x k square corner to corner
* ``directed``  -- N/E walks crossing the k x k square
* ``nes``       -- N/E/S walks crossing a rectangle of height k and width l
* ``untrapped`` -- unconfined self-avoiding walks that never trap themselves
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Literal, Sequence

from .lattice import DIRECTIONS, ORIGIN, Direction, Point, Walk, turn

Model = Literal["crossing", "directed", "nes", "untrapped"]
MODELS: tuple[str, ...] = ("crossing", "directed", "nes", "untrapped")

N, E, S, W = Direction.N, Direction.E, Direction.S, Direction.W


def as_rng(rng: random.Random | int | None) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


@dataclass(frozen=True)
class ProbTrace:
    """Eligible-set size at every step of a sampled walk.

    ``weight`` is 1/p. ``a`` and ``b`` are the exponents in 1/p = 2^a 3^b;
    a size-4 step (first step of an unconfined walk) contributes 2 to ``a``.
    """

    per_step: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.per_step, tuple):
            object.__setattr__(self, "per_step", tuple(self.per_step))
        for s in self.per_step:
            if s not in (1, 2, 3, 4):
                raise ValueError(f"eligible-set size must be 1..4, got {s}")

    @cached_property
    def a(self) -> int:
        return self.per_step.count(2) + 2 * self.per_step.count(4)

    @cached_property
    def b(self) -> int:
        return self.per_step.count(3)

    @cached_property
    def weight(self) -> int:
        return 2 ** self.a * 3 ** self.b

    @property
    def probability(self) -> Fraction:
        return Fraction(1, self.weight)

    def __len__(self) -> int:
        return len(self.per_step)


@dataclass(frozen=True)
class Sample:
    walk: Walk
    trace: ProbTrace
    model: str

    @property
    def weight(self) -> int:
        return self.trace.weight


# -- crossing walks -------------------------------------------------------------
#
# Sites of the (k+1) x (k+1) vertex grid are bits of a Python int, row-major
# with stride k+2. The extra column is never free, so horizontal shifts
# cannot wrap from one row to the next.

@lru_cache(maxsize=64)
def _grid(k: int) -> tuple[int, int, int]:
    stride = k + 2
    row = (1 << (k + 1)) - 1
    full = 0
    for y in range(k + 1):
        full |= row << (y * stride)
    return stride, full, (k + 1) * stride


def _offsets(stride: int) -> tuple[tuple[Direction, int], ...]:
    return ((N, stride), (E, 1), (S, -stride), (W, -1))


def _crossing_candidates(k: int, visited: int, head: int) -> list[tuple[Direction, int]]:
    stride, full, size = _grid(k)
    free = full & ~visited
    out = []
    for d, off in _offsets(stride):
        u = head + off
        if 0 <= u < size and (free >> u) & 1:
            out.append((d, u))
    return out


def _crossing_eligible(k: int, visited: int, head: int,
                       trust_extendable: bool = False) -> tuple[tuple[Direction, int], ...]:
    """Steps from ``head`` that keep the target corner reachable.

    A candidate site is eligible iff it lies in the component of free sites
    containing the target, which one flood fill from the target decides for
    all candidates at once.
    """
    stride, full, _ = _grid(k)
    target = k * stride + k
    cands = _crossing_candidates(k, visited, head)
    if trust_extendable and len(cands) <= 1:
        return tuple(cands)
    free = full & ~visited
    if not (free >> target) & 1:
        return ()
    want = 0
    for _, u in cands:
        want |= 1 << u
    reach = 1 << target
    while reach & want != want:
        grown = reach | (((reach << 1) | (reach >> 1) | (reach << stride) | (reach >> stride)) & free)
        if grown == reach:
            break
        reach = grown
    return tuple((d, u) for d, u in cands if (reach >> u) & 1)


@lru_cache(maxsize=1 << 18)
def _crossing_eligible_cached(k: int, visited: int, head: int):
    return _crossing_eligible(k, visited, head, trust_extendable=True)


def _encode_crossing(walk: Walk, k: int) -> tuple[int, int]:
    stride, _, _ = _grid(k)
    visited = 0
    for p in walk.vertices:
        if not (0 <= p.x <= k and 0 <= p.y <= k):
            raise ValueError(f"walk leaves the {k}x{k} square at {tuple(p)}")
        bit = 1 << (p.y * stride + p.x)
        if visited & bit:
            raise ValueError("walk is not self-avoiding")
        visited |= bit
    end = walk.end
    return visited, end.y * stride + end.x


def eligible_steps_crossing(walk: Walk, k: int) -> list[Direction]:
    if walk.start != ORIGIN:
        raise ValueError("crossing walks start at the South-West corner")
    visited, head = _encode_crossing(walk, k)
    if walk.end == Point(k, k):
        return []
    return [d for d, _ in _crossing_eligible(k, visited, head)]


def sample_crossing_saw(k: int, rng: random.Random | int | None = None) -> Sample:
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = as_rng(rng)
    stride, _, _ = _grid(k)
    target = k * stride + k
    head, visited = 0, 1
    steps: list[Direction] = []
    sizes: list[int] = []
    while head != target:
        elig = _crossing_eligible_cached(k, visited, head)
        m = len(elig)
        if m == 0:
            raise RuntimeError("crossing sampler reached a dead end")
        d, head = elig[rng.randrange(m)] if m > 1 else elig[0]
        visited |= 1 << head
        steps.append(d)
        sizes.append(m)
    return Sample(Walk(ORIGIN, tuple(steps)), ProbTrace(tuple(sizes)), "crossing")


# -- directed walks ---------------------------------------------------------------

def eligible_steps_directed(walk: Walk, k: int) -> list[Direction]:
    x, y = walk.end
    out = []
    if y < k:
        out.append(N)
    if x < k:
        out.append(E)
    return out


def sample_directed(k: int, rng: random.Random | int | None = None) -> Sample:
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = as_rng(rng)
    x = y = 0
    steps, sizes = [], []
    while (x, y) != (k, k):
        if x < k and y < k:
            d = N if rng.randrange(2) == 0 else E
            sizes.append(2)
        else:
            d = N if x == k else E
            sizes.append(1)
        x += d.dx
        y += d.dy
        steps.append(d)
    return Sample(Walk(ORIGIN, tuple(steps)), ProbTrace(tuple(sizes)), "directed")


# -- partially directed (N/E/S) walks -------------------------------------------------

def _nes_options(x: int, y: int, last: Direction | None, k: int, l: int) -> list[Direction]:
    if x == l:
        return [N] if y < k else []
    out = []
    if y < k and last is not S:
        out.append(N)
    out.append(E)
    if y > 0 and last is not N:
        out.append(S)
    return out


def eligible_steps_nes(walk: Walk, k: int, l: int) -> list[Direction]:
    x, y = walk.end
    last = walk.steps[-1] if walk.steps else None
    return _nes_options(x, y, last, k, l)


def sample_nes(k: int, l: int, rng: random.Random | int | None = None) -> Sample:
    if k < 1 or l < 1:
        raise ValueError("k and l must be >= 1")
    rng = as_rng(rng)
    x = y = 0
    last = None
    steps, sizes = [], []
    while (x, y) != (l, k):
        opts = _nes_options(x, y, last, k, l)
        m = len(opts)
        d = opts[rng.randrange(m)] if m > 1 else opts[0]
        x += d.dx
        y += d.dy
        last = d
        steps.append(d)
        sizes.append(m)
    return Sample(Walk(ORIGIN, tuple(steps)), ProbTrace(tuple(sizes)), "nes")


@dataclass(frozen=True)
class NesStats:
    h: int
    h_c: int
    v: int
    v_c: int

    @property
    def weight(self) -> int:
        return 2 * 3 ** self.h * 2 ** self.h_c * 2 ** self.v


def nes_walk_stats(walk: Walk, k: int) -> tuple[NesStats, int]:
    """Contact statistics of the prefix before the last E step, and 1/p.

    Horizontal steps at height 0 or k and vertical steps ending there are
    contacts. 1/p = 2 * 3^h * 2^h_c * 2^v.
    """
    if walk.start != ORIGIN:
        raise ValueError("NES walks start at the origin")
    steps = walk.steps
    if E not in steps:
        raise ValueError("an NES crossing walk has at least one E step")
    y = 0
    prev = None
    for d in steps:
        if d is W or (prev is not None and d is prev.reverse()):
            raise ValueError(f"not an NES walk: {walk}")
        y += d.dy
        if not 0 <= y <= k:
            raise ValueError(f"NES walk leaves the strip of height {k}")
        prev = d
    if y != k:
        raise ValueError("NES crossing walk must end at height k")
    last_e = len(steps) - 1 - steps[::-1].index(E)
    if any(d is not N for d in steps[last_e + 1:]):
        raise ValueError("NES crossing walk must end with E followed by N steps")

    h = h_c = v = v_c = 0
    y = 0
    for d in steps[:last_e]:
        if d is E:
            if y in (0, k):
                h_c += 1
            else:
                h += 1
        else:
            y += d.dy
            if y in (0, k):
                v_c += 1
            else:
                v += 1
    stats = NesStats(h, h_c, v, v_c)
    return stats, stats.weight


# -- unconfined untrapped walks -----------------------------------------------------

class UntrappedWalk:
    """Growing unconfined SAW with O(1) trap detection per candidate step.

    Keeps the vertex -> index map and prefix sums of turns, so the winding
    number of any tail of the walk is a difference of two prefix sums.
    """

    def __init__(self, start: Point = ORIGIN):
        self.start = Point(*start)
        self.head = self.start
        self.steps: list[Direction] = []
        self.index = {self.start: 0}
        self._cum = [0]  # _cum[j] = sum of turns between steps[s], steps[s+1], s < j

    def __len__(self) -> int:
        return len(self.steps)

    def push(self, d: Direction) -> None:
        u = self.head.step(d)
        if u in self.index:
            raise ValueError(f"step {d.name} revisits {tuple(u)}")
        if self.steps:
            self._cum.append(self._cum[-1] + turn(self.steps[-1], d))
        self.steps.append(d)
        self.index[u] = len(self.steps)
        self.head = u

    def winding_from(self, m: int, side: int) -> int:
        """Winding from vertex ``m`` to the head, entering ``m`` along the last step.

        ``side`` (+1 right, -1 left, 0 straight ahead) says where ``m`` sits
        relative to the site in front of the head; it fixes the sign of the
        U-turn when the walk leaves ``m`` against the virtual half-edge.
        """
        last = self.steps[-1]
        first = self.steps[m]
        t = turn(last, first)
        if first is last.reverse():
            t = -2 if side > 0 else 2
        return t + self._cum[-1] - self._cum[m]

    def is_trapping(self, d: Direction) -> bool:
        if not self.steps:
            return False
        last = self.steps[-1]
        ahead = self.head.step(last)
        right, left = last.right(), last.left()
        m = self.index.get(ahead)
        if m is not None:
            w = self.winding_from(m, 0)
            if (d is right and w == -4) or (d is left and w == 4):
                return True
        m = self.index.get(ahead.step(right))
        if m is not None:
            w = self.winding_from(m, 1)
            if (d is right and w == -4) or (d in (last, left) and w == 4):
                return True
        m = self.index.get(ahead.step(left))
        if m is not None:
            w = self.winding_from(m, -1)
            if (d is left and w == 4) or (d in (last, right) and w == -4):
                return True
        return False

    def eligible(self) -> list[Direction]:
        return [d for d in DIRECTIONS
                if self.head.step(d) not in self.index and not self.is_trapping(d)]

    def walk(self) -> Walk:
        return Walk(self.start, tuple(self.steps))


def _build_untrapped(walk: Walk) -> UntrappedWalk:
    state = UntrappedWalk(walk.start)
    for d in walk.steps:
        state.push(d)
    return state


def is_trapping_step(walk: Walk, d: Direction) -> bool:
    """Would appending ``d`` leave the head with no way out to infinity?

    Relative to the last step, only three configurations around the new
    head can close a trap (plus their mirror images); each one is decided
    by the winding number of the loop through a nearby earlier vertex.
    """
    state = _build_untrapped(walk)
    if state.head.step(d) in state.index:
        raise ValueError("appending the step breaks self-avoidance")
    return state.is_trapping(d)


def eligible_steps_untrapped(walk: Walk) -> list[Direction]:
    return _build_untrapped(walk).eligible()


def sample_untrapped(n: int, rng: random.Random | int | None = None) -> Sample:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_rng(rng)
    state = UntrappedWalk()
    sizes = []
    for _ in range(n):
        elig = state.eligible()
        m = len(elig)
        if m == 0:
            raise RuntimeError("untrapped sampler got stuck")
        state.push(elig[rng.randrange(m)] if m > 1 else elig[0])
        sizes.append(m)
    return Sample(state.walk(), ProbTrace(tuple(sizes)), "untrapped")


# -- dispatch -------------------------------------------------------------------------

def sample(model: str, *, k: int | None = None, l: int | None = None,
           n: int | None = None, rng: random.Random | int | None = None) -> Sample:
    if model == "crossing":
        return sample_crossing_saw(_need(k, "k"), rng)
    if model == "directed":
        return sample_directed(_need(k, "k"), rng)
    if model == "nes":
        return sample_nes(_need(k, "k"), _need(l, "l"), rng)
    if model == "untrapped":
        return sample_untrapped(_need(n, "n"), rng)
    raise ValueError(f"unknown model {model!r}")


def _need(v, name):
    if v is None:
        raise ValueError(f"model needs parameter {name}")
    return v


def recompute_trace(walk: Walk, model: str, *, k: int | None = None,
                    l: int | None = None) -> ProbTrace:
    """Replay ``walk`` through the model's eligibility rule.

    Raises ValueError if some step of the walk was not eligible.
    """
    sizes = []
    if model == "untrapped":
        state = UntrappedWalk(walk.start)
        for d in walk.steps:
            elig = state.eligible()
            if d not in elig:
                raise ValueError(f"step {d.name} at position {len(state)} is not eligible")
            sizes.append(len(elig))
            state.push(d)
        return ProbTrace(tuple(sizes))
    prefix = Walk(walk.start, ())
    for d in walk.steps:
        if model == "crossing":
            elig = eligible_steps_crossing(prefix, _need(k, "k"))
        elif model == "directed":
            elig = eligible_steps_directed(prefix, _need(k, "k"))
        elif model == "nes":
            elig = eligible_steps_nes(prefix, _need(k, "k"), _need(l, "l"))
        else:
            raise ValueError(f"unknown model {model!r}")
        if d not in elig:
            raise ValueError(f"step {d.name} at position {len(prefix)} is not eligible")
        sizes.append(len(elig))
        prefix = prefix.extend(d)
    return ProbTrace(tuple(sizes))


def end_to_end(samples: Sequence[Sample]) -> tuple[float, float]:
    """Mean Euclidean end-to-end distance and its standard error."""
    ds = [((s.walk.end.x - s.walk.start.x) ** 2 + (s.walk.end.y - s.walk.start.y) ** 2) ** 0.5
          for s in samples]
    n = len(ds)
    mean = sum(ds) / n
    if n < 2:
        return mean, float("nan")
    var = sum((d - mean) ** 2 for d in ds) / (n - 1)
    return mean, (var / n) ** 0.5
