"""Exhaustive enumeration: the ground truth the other modules are checked against.

Each enumerator walks the full tree of the corresponding sampler, so the
weight 1/p of every walk comes from the same eligibility rule the sampler
uses, independent of any closed formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .genfunc import directed_second_moment_closed
from .lattice import ORIGIN, Direction, Walk
from .polynomials import MultiPolynomial
from .samplers import ProbTrace, _crossing_eligible, _grid, _nes_options, nes_walk_stats

N, E, S, W = Direction.N, Direction.E, Direction.S, Direction.W


class LimitExceeded(ValueError):
    """The requested enumeration is larger than the configured limit."""


@dataclass(frozen=True)
class EnumReport:
    model: str
    params: dict
    count: int
    weighted_sum: int                 # sum of 1/p, i.e. E(X^2)
    weighted_sq_sum: int | None = None  # sum of 1/p^2
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {"model": self.model, **self.params, "count": str(self.count),
             "weighted_sum": str(self.weighted_sum)}
        if self.weighted_sq_sum is not None:
            d["weighted_sq_sum"] = str(self.weighted_sq_sum)
        d.update({key: str(v) if isinstance(v, int) else v for key, v in self.extra.items()})
        return d


# -- crossing SAWs --------------------------------------------------------------------

def crossing_walks(k: int, max_k: int = 5) -> Iterator[tuple[Walk, ProbTrace]]:
    """Every SAW crossing the k x k square, in N, E, S, W depth-first order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise LimitExceeded(f"crossing enumeration limited to k <= {max_k}")
    stride, _, _ = _grid(k)
    target = k * stride + k
    steps: list[Direction] = []
    sizes: list[int] = []

    def rec(visited: int, head: int):
        if head == target:
            yield Walk(ORIGIN, tuple(steps)), ProbTrace(tuple(sizes))
            return
        elig = _crossing_eligible(k, visited, head)
        m = len(elig)
        for d, u in elig:
            steps.append(d)
            sizes.append(m)
            yield from rec(visited | (1 << u), u)
            steps.pop()
            sizes.pop()

    yield from rec(1, 0)


def enumerate_crossing(k: int, max_k: int = 5) -> EnumReport:
    """c(k) = number of crossing SAWs and d(k) = sum of their 1/p.

    Only totals are kept, so this avoids building Walk objects.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise LimitExceeded(f"crossing enumeration limited to k <= {max_k}")
    stride, _, _ = _grid(k)
    target = k * stride + k
    count = s1 = s2 = 0

    stack = [(1, 0, 1)]  # visited, head, 1/p so far
    while stack:
        visited, head, w = stack.pop()
        if head == target:
            count += 1
            s1 += w
            s2 += w * w
            continue
        elig = _crossing_eligible(k, visited, head)
        m = len(elig)
        if m == 0:
            raise RuntimeError("dead end during crossing enumeration")
        for _, u in elig:
            stack.append((visited | (1 << u), u, w * m))
    return EnumReport("crossing", {"k": k}, count, s1, s2)


# -- directed walks ----------------------------------------------------------------------

def enumerate_directed(k: int, max_k: int = 12) -> EnumReport:
    """All C(2k, k) N/E walks, with weights from the sampler's rule.

    Once a walk touches the north or east side its remaining steps are
    forced, so each leaf of the search is exactly one walk.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise LimitExceeded(f"directed enumeration limited to k <= {max_k}")
    count = s1 = s2 = 0
    stack = [(0, 0, 1)]
    while stack:
        x, y, w = stack.pop()
        if x == k or y == k:
            count += 1
            s1 += w
            s2 += w * w
            continue
        stack.append((x, y + 1, 2 * w))
        stack.append((x + 1, y, 2 * w))
    closed = directed_second_moment_closed(k)
    if closed != s1:
        raise ArithmeticError(f"closed form {closed} != enumeration {s1} at k={k}")
    return EnumReport("directed", {"k": k}, count, s1, s2, {"closed_form": closed})


# -- partially directed walks -----------------------------------------------------------------

def nes_walks(k: int, l: int, limit: int = 10 ** 7) -> Iterator[tuple[Walk, ProbTrace]]:
    if k < 1 or l < 1:
        raise ValueError("k and l must be >= 1")
    if (k + 1) ** l > limit:
        raise LimitExceeded(f"(k+1)^l = {(k + 1) ** l} exceeds the limit {limit}")
    steps: list[Direction] = []
    sizes: list[int] = []

    def rec(x: int, y: int, last):
        if (x, y) == (l, k):
            yield Walk(ORIGIN, tuple(steps)), ProbTrace(tuple(sizes))
            return
        opts = _nes_options(x, y, last, k, l)
        for d in opts:
            steps.append(d)
            sizes.append(len(opts))
            yield from rec(x + d.dx, y + d.dy, d)
            steps.pop()
            sizes.pop()

    yield from rec(0, 0, None)


def enumerate_nes(k: int, l: int, limit: int = 10 ** 7, check_stats: bool = True) -> EnumReport:
    """Enumerate N/E/S crossing walks of the height-k, width-l rectangle.

    With ``check_stats`` every walk's 1/p from the step rule is compared with
    the contact-statistics formula of :func:`nes_walk_stats`.
    """
    count = s1 = s2 = 0
    for walk, trace in nes_walks(k, l, limit):
        w = trace.weight
        if check_stats:
            _, w_stats = nes_walk_stats(walk, k)
            if w_stats != w:
                raise ArithmeticError(f"contact formula gives {w_stats}, step rule {w} for {walk}")
        count += 1
        s1 += w
        s2 += w * w
    if count != (k + 1) ** l:
        raise ArithmeticError(f"found {count} walks, expected (k+1)^l = {(k + 1) ** l}")
    return EnumReport("nes", {"k": k, "l": l}, count, s1, s2)


# -- strip walks by step type ---------------------------------------------------------------

def enumerate_strip(k: int, max_length: int, end_height: int | None = None) -> MultiPolynomial:
    """Truncated strip series: sum of x^h y^v a^h_c b^v_c over N/E/S walks.

    Walks start at height 0, stay in 0 <= y <= k and have at most
    ``max_length`` steps; this is the series T_k(1) (or T_{k,i} if
    ``end_height`` is given) up to total degree ``max_length``.
    """
    terms: dict[tuple, int] = {}

    def rec(y: int, last, e: tuple, length: int):
        if end_height is None or y == end_height:
            terms[e] = terms.get(e, 0) + 1
        if length == max_length:
            return
        h, v, hc, vc = e
        if y in (0, k):
            rec(y, E, (h, v, hc + 1, vc), length + 1)
        else:
            rec(y, E, (h + 1, v, hc, vc), length + 1)
        for d, ny in ((N, y + 1), (S, y - 1)):
            if 0 <= ny <= k and last is not d.reverse():
                if ny in (0, k):
                    rec(ny, d, (h, v, hc, vc + 1), length + 1)
                else:
                    rec(ny, d, (h, v + 1, hc, vc), length + 1)

    rec(0, None, (0, 0, 0, 0), 0)
    # internal key order (h, v, hc, vc) matches variables (x, y, a, b)
    return MultiPolynomial(terms)
