"""Square-lattice geometry: directions, walks, winding numbers and SVG export."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence
from xml.sax.saxutils import escape


class Direction(Enum):
    N = (0, 1)
    E = (1, 0)
    S = (0, -1)
    W = (-1, 0)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    def reverse(self) -> Direction:
        return _REVERSE[self]

    def left(self) -> Direction:
        """Quarter turn counterclockwise."""
        return _LEFT[self]

    def right(self) -> Direction:
        return _RIGHT[self]

    @classmethod
    def parse(cls, letters: str) -> tuple[Direction, ...]:
        """``"NNE"`` -> ``(N, N, E)``. Whitespace and commas are ignored."""
        out = []
        for ch in letters.upper():
            if ch in " ,":
                continue
            try:
                out.append(cls[ch])
            except KeyError:
                raise ValueError(f"not a step letter: {ch!r}") from None
        return tuple(out)


# fixed enumeration order used everywhere for determinism
DIRECTIONS: tuple[Direction, ...] = (Direction.N, Direction.E, Direction.S, Direction.W)

_REVERSE = {Direction.N: Direction.S, Direction.S: Direction.N,
            Direction.E: Direction.W, Direction.W: Direction.E}
_LEFT = {Direction.N: Direction.W, Direction.W: Direction.S,
         Direction.S: Direction.E, Direction.E: Direction.N}
_RIGHT = {v: k for k, v in _LEFT.items()}


def turn(a: Direction, b: Direction) -> int:
    """Signed quarter turns taking heading ``a`` to heading ``b``.

    Left is +1, right is -1, straight is 0. A reversal has no sign of its
    own; it is counted as a right U-turn (-2).
    """
    if a is b:
        return 0
    if _LEFT[a] is b:
        return 1
    if _RIGHT[a] is b:
        return -1
    return -2


class Point(NamedTuple):
    x: int
    y: int

    def step(self, d: Direction) -> Point:
        return Point(self.x + d.dx, self.y + d.dy)


ORIGIN = Point(0, 0)


@dataclass(frozen=True)
class Rect:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError("rectangle sides must be non-negative")

    def contains(self, p: Point) -> bool:
        return 0 <= p.x <= self.width and 0 <= p.y <= self.height


@dataclass(frozen=True)
class Walk:
    start: Point = ORIGIN
    steps: tuple[Direction, ...] = ()

    def __post_init__(self):
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple(self.steps))
        if not isinstance(self.start, Point):
            object.__setattr__(self, "start", Point(*self.start))

    @classmethod
    def from_string(cls, letters: str, start: Point = ORIGIN) -> Walk:
        return cls(Point(*start), Direction.parse(letters))

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "".join(d.name for d in self.steps)

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(vertices(self))

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def extend(self, d: Direction) -> Walk:
        return Walk(self.start, self.steps + (d,))

    def confined_to(self, rect: Rect) -> bool:
        return all(rect.contains(p) for p in self.vertices)


def vertices(walk: Walk) -> list[Point]:
    x, y = walk.start
    out = [Point(x, y)]
    for d in walk.steps:
        x += d.dx
        y += d.dy
        out.append(Point(x, y))
    return out


def is_self_avoiding(walk: Walk) -> bool:
    vs = walk.vertices
    return len(set(vs)) == len(vs)


def winding_number(walk: Walk, from_index: int = 0,
                   incoming: Direction = Direction.W) -> int:
    """Winding of the portion of ``walk`` after vertex ``from_index``.

    A virtual half-edge arriving at that vertex with heading ``incoming``
    (pointing from the East by default) is prepended, and the result is
    the number of left turns minus right turns along the headings, in
    quarter turns. Multiply by pi/2 for radians.
    """
    n = len(walk.steps)
    if not 0 <= from_index <= n:
        raise IndexError(f"vertex index {from_index} out of range for a walk of {n} steps")
    total = 0
    prev = incoming
    for d in walk.steps[from_index:]:
        total += turn(prev, d)
        prev = d
    return total


# -- flood fill ---------------------------------------------------------------

def enclosed(occupied: set, head: Point, box: tuple[int, int, int, int] | None = None) -> bool:
    """True if ``head`` cannot reach infinity through unoccupied sites.

    The search is confined to the bounding box of ``occupied`` inflated by
    one: every site on that outer ring is free, so touching it means escape.
    ``box`` = (xmin, ymin, xmax, ymax) may be passed when the caller tracks
    it; any box containing ``occupied`` works.
    """
    if box is None:
        xs = [p[0] for p in occupied]
        ys = [p[1] for p in occupied]
        box = min(xs), min(ys), max(xs), max(ys)
    x0, x1 = box[0] - 1, box[2] + 1
    y0, y1 = box[1] - 1, box[3] + 1
    seen = {head}
    stack = [head]
    while stack:
        x, y = stack.pop()
        for dx, dy in ((0, 1), (1, 0), (0, -1), (-1, 0)):
            q = (x + dx, y + dy)
            if q in seen or q in occupied:
                continue
            if not (x0 < q[0] < x1 and y0 < q[1] < y1):
                return False
            seen.add(q)
            stack.append(q)
    return True


# -- SVG ----------------------------------------------------------------------

@dataclass
class SvgOptions:
    cell: float = 20.0
    stroke: float = 2.0
    thick: float = 5.0
    margin: float = 10.0
    columns: int = 4
    highlight_forced: bool = True
    color: str = "black"
    grid: bool = True
    # one entry per walk: eligible-set size per step (1 marks a forced step)
    per_step: Sequence[Sequence[int]] | None = field(default=None, repr=False)


def render_svg(walks: Sequence[Walk], options: SvgOptions | None = None) -> str:
    """Draw walks as SVG polylines, laid out in a grid with north up.

    Forced steps (eligible-set size 1) are overdrawn thick when
    ``options.per_step`` is given and highlighting is on.
    """
    if not walks:
        raise ValueError("nothing to render")
    opt = options or SvgOptions()
    if opt.per_step is not None and len(opt.per_step) != len(walks):
        raise ValueError("per_step must have one entry per walk")

    boxes = []
    for w in walks:
        vs = w.vertices
        xs = [p.x for p in vs]
        ys = [p.y for p in vs]
        boxes.append((min(xs), min(ys), max(xs), max(ys)))
    span_x = max(b[2] - b[0] for b in boxes)
    span_y = max(b[3] - b[1] for b in boxes)
    cw = span_x * opt.cell + 2 * opt.margin
    ch = span_y * opt.cell + 2 * opt.margin
    cols = max(1, min(opt.columns, len(walks)))
    rows = (len(walks) + cols - 1) // cols
    width, height = cols * cw, rows * ch

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
    ]
    for idx, (w, box) in enumerate(zip(walks, boxes)):
        ox = (idx % cols) * cw + opt.margin
        oy = (idx // cols) * ch + opt.margin

        def xy(p: Point) -> tuple[float, float]:
            # y flipped so north is up
            return ox + (p.x - box[0]) * opt.cell, oy + (span_y - (p.y - box[1])) * opt.cell

        parts.append(f'<g id="walk{idx}"><title>{escape(str(w) or "(empty)")}</title>')
        if opt.grid:
            for gx in range(box[0], box[0] + span_x + 1):
                (ax, ay), (bx, by) = xy(Point(gx, box[1])), xy(Point(gx, box[1] + span_y))
                parts.append(f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
                             f'stroke="#ddd" stroke-width="0.5"/>')
            for gy in range(box[1], box[1] + span_y + 1):
                (ax, ay), (bx, by) = xy(Point(box[0], gy)), xy(Point(box[0] + span_x, gy))
                parts.append(f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
                             f'stroke="#ddd" stroke-width="0.5"/>')
        pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in map(xy, w.vertices))
        parts.append(f'<polyline class="walk" points="{pts}" fill="none" stroke="{opt.color}" '
                     f'stroke-width="{_f(opt.stroke)}" stroke-linejoin="round"/>')
        if opt.highlight_forced and opt.per_step is not None:
            sizes = opt.per_step[idx]
            if len(sizes) != len(w.steps):
                raise ValueError("per_step length does not match walk length")
            vs = w.vertices
            for i, size in enumerate(sizes):
                if size == 1:
                    (ax, ay), (bx, by) = xy(vs[i]), xy(vs[i + 1])
                    parts.append(f'<line class="forced" x1="{_f(ax)}" y1="{_f(ay)}" '
                                 f'x2="{_f(bx)}" y2="{_f(by)}" stroke="{opt.color}" '
                                 f'stroke-width="{_f(opt.thick)}" stroke-linecap="round"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _f(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def walks_from_strings(items: Iterable[str]) -> list[Walk]:
    return [Walk.from_string(s) for s in items]
