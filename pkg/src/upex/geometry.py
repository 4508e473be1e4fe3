"""Exact rational points and segment predicates.

Every predicate here works on :class:`fractions.Fraction` coordinates and
returns exact answers; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Sequence


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def point(x, y) -> Point:
    """Build a point, coercing ints/strings/Fractions to Fraction."""
    return Point(Fraction(x), Fraction(y))


# ---------------------------------------------------------------------------
# orientation and intersection
# ---------------------------------------------------------------------------

def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b - a) x (c - a)."""
    cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (cross > 0) - (cross < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True when p lies on the closed segment ab."""
    if orientation(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when the closed segments ab and cd share at least one point."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def x_at(a: Point, b: Point, y: Fraction) -> Fraction:
    """x-coordinate of the non-horizontal line through a and b at height y."""
    if a.y == b.y:
        raise ValueError("horizontal segment has no unique x at a height")
    return a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y)


def polyline_x_at(route: Sequence[Point], y: Fraction) -> Fraction | None:
    """x-coordinate where a y-monotone polyline crosses height y, if it does."""
    if not route or y < route[0].y or y > route[-1].y:
        return None
    for a, b in zip(route, route[1:]):
        if a.y <= y <= b.y:
            if a.y == y:
                return a.x
            if b.y == y:
                return b.x
            return x_at(a, b, y)
    return None


def slope_key(a: Point, b: Point) -> Fraction:
    """dx/dy of a segment going strictly upward; orders directions left to right."""
    return (b.x - a.x) / (b.y - a.y)


# ---------------------------------------------------------------------------
# fast exact sorting keys
# ---------------------------------------------------------------------------

_LCM_LIMIT = 1 << 62


def integer_keys(values: Iterable[Fraction]) -> list:
    """Order-preserving keys for a batch of rationals.

    When all denominators share a modest common multiple the keys are plain
    ints (much faster to compare); otherwise the fractions themselves.
    """
    values = list(values)
    common = 1
    for v in values:
        common = lcm(common, v.denominator)
        if common > _LCM_LIMIT:
            return values
    return [v.numerator * (common // v.denominator) for v in values]
