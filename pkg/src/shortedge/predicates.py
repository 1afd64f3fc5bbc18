"""Exact geometric predicates on integer points.

Every function here works on 2-tuples of Python ints and decides signs
with exact integer arithmetic; there is no floating point and therefore
no robustness gap. These predicates are the only geometry shared between
the main drawing machinery and the brute-force oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

Point = tuple[int, int]

__all__ = [
    "orient",
    "cross",
    "dot",
    "on_segment",
    "segments_properly_cross",
    "segment_contact",
    "proper_intersection_point",
    "same_direction",
    "ccw_direction_cmp",
    "ray_hits_segment",
    "escape_directions",
]


def cross(d1, d2) -> int:
    return d1[0] * d2[1] - d1[1] * d2[0]


def dot(d1, d2) -> int:
    return d1[0] * d2[0] + d1[1] * d2[1]


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of (a, b, c): +1 left turn, -1 right, 0 collinear."""
    return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def on_segment(a: Point, b: Point, p: Point) -> bool:
    """True iff p lies on the closed segment [a, b]."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff the open segments (a,b) and (c,d) cross at a single interior
    point of both (strict sign test; any contact at an endpoint fails)."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 == 0 or o2 == 0 or o1 == o2:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 != 0 and o4 != 0 and o3 != o4


def proper_intersection_point(a: Point, b: Point, c: Point, d: Point):
    """Exact rational crossing point of two properly crossing segments."""
    denom = cross((b[0] - a[0], b[1] - a[1]), (d[0] - c[0], d[1] - c[1]))
    t = Fraction(cross((c[0] - a[0], c[1] - a[1]), (d[0] - c[0], d[1] - c[1])), denom)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def segment_contact(a: Point, b: Point, c: Point, d: Point):
    """Classify the contact between closed segments [a,b] and [c,d].

    Returns one of
      ("none",)
      ("overlap",)                          collinear with a shared sub-segment
      ("point", (px, py), proper)           exact rational point; proper=True
                                            only for an interior-interior
                                            transversal crossing
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 and o2 == 0:
        # All four points collinear: compare 1-d intervals on the dominant axis.
        axis = 0 if a[0] != b[0] or c[0] != d[0] else 1
        lo1, hi1 = sorted((a[axis], b[axis]))
        lo2, hi2 = sorted((c[axis], d[axis]))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return ("none",)
        if lo == hi:
            pt = a if a[axis] == lo else (b if b[axis] == lo else (c if c[axis] == lo else d))
            return ("point", (Fraction(pt[0]), Fraction(pt[1])), False)
        return ("overlap",)
    if o1 != o2 and o1 != 0 and o2 != 0 and o3 != o4 and o3 != 0 and o4 != 0:
        px, py = proper_intersection_point(a, b, c, d)
        return ("point", (px, py), True)
    for o, seg, pt in ((o1, (a, b), c), (o2, (a, b), d), (o3, (c, d), a), (o4, (c, d), b)):
        if o == 0 and on_segment(seg[0], seg[1], pt):
            return ("point", (Fraction(pt[0]), Fraction(pt[1])), False)
    return ("none",)


def same_direction(d1, d2) -> bool:
    """True iff d1 and d2 point along the same ray (positive multiples)."""
    return cross(d1, d2) == 0 and dot(d1, d2) > 0


def _half(d) -> int:
    # 0 for angles in [0, pi) measured from +x, 1 for [pi, 2*pi).
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def ccw_direction_cmp(d1, d2) -> int:
    """Compare directions by counterclockwise angle from the +x axis.

    Returns -1/0/+1; 0 only for directions along the same ray.
    """
    if d1[0] == 0 and d1[1] == 0 or d2[0] == 0 and d2[1] == 0:
        raise ValueError("zero direction")
    h1, h2 = _half(d1), _half(d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    c = cross(d1, d2)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def ray_hits_segment(p: Point, d, a: Point, b: Point) -> bool:
    """True iff the open ray {p + t*d : t > 0} meets the closed segment
    [a, b] anywhere (endpoint touches and collinear overlaps count)."""
    ra = (a[0] - p[0], a[1] - p[1])
    rb = (b[0] - p[0], b[1] - p[1])
    ca = cross(d, ra)
    cb = cross(d, rb)
    if ca == 0 and cb == 0:
        # Segment lies on the ray's line; hit iff any part is strictly ahead.
        return dot(d, ra) > 0 or dot(d, rb) > 0
    if ca == 0:
        return dot(d, ra) > 0
    if cb == 0:
        return dot(d, rb) > 0
    if (ca > 0) == (cb > 0):
        return False
    # Proper crossing of the supporting line; ahead-of-p test without division:
    # the hit point q satisfies dot(d, q - p) * (ca - cb) = T. T == 0 means the
    # segment passes through p itself; treat that conservatively as a hit.
    t_num = dot(d, ra) * (ca - cb) + ca * dot(d, (b[0] - a[0], b[1] - a[1]))
    return t_num == 0 or ((t_num > 0) == (ca - cb > 0))


def escape_directions() -> Iterator[tuple[int, int]]:
    """Primitive integer directions in order of growing coordinate size.

    Used to pick ray directions that avoid finitely many bad directions;
    the stream is infinite so the search always terminates.
    """
    from math import gcd

    yield from ((1, 0), (0, 1), (-1, 0), (0, -1))
    size = 1
    while True:
        size += 1
        for a in range(1, size + 1):
            for b in range(1, size + 1):
                if max(a, b) == size and gcd(a, b) == 1:
                    yield from ((a, b), (-a, b), (a, -b), (-a, -b))
