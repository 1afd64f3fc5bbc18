"""Complete simple topological graphs as exact integer polyline drawings.

A drawing holds vertices at integer coordinates and one polyline per
vertex pair. Straight-line drawings are the common case and get
vectorized int64 code paths (safe up to |coordinate| <= 1e8, checked);
everything falls back to exact big-int arithmetic otherwise, so every
predicate in this module is exact.

Simplicity here means: every two edges share at most one point, which is
either their common endpoint or one transversal crossing in the interior
of both; no edge passes through a vertex; no edge self-intersects. The
validator additionally requires contacts to avoid polyline joints, a
general-position condition all fixtures and generators satisfy.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    CurveBoundaryError,
    DegenerateRotationError,
    DrawingFormatError,
    GenerationError,
    InvalidDrawingError,
    NoOuterVertexError,
)
from .predicates import (
    ccw_direction_cmp,
    cross,
    dot,
    escape_directions,
    on_segment,
    orient,
    ray_hits_segment,
    same_direction,
    segment_contact,
    segments_properly_cross,
)
from .set_system import GroundSet, SetFamily

__all__ = [
    "Drawing",
    "Violation",
    "RotationLabeling",
    "CrossingMatrix",
    "validate_simple",
    "crossing_matrix",
    "outer_face_vertex",
    "relabel_ccw",
    "point_in_triangle_region",
    "triangle_family",
    "edges_cross",
    "convex_complete",
    "random_geometric_complete",
    "drawing_to_json",
    "drawing_from_json",
    "load_drawing",
    "save_drawing",
]

# int64 is safe for orientation determinants up to this coordinate size.
_NP_COORD_LIMIT = 10**8


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    where: tuple = ()

    def __str__(self):
        return f"[{self.rule}] {self.detail}"


class Drawing:
    """Vertices at integer points plus one polyline per vertex pair.

    The constructor checks structure (types, distinct ids, known
    endpoints, no duplicate edges); geometric validity is the job of
    :func:`validate_simple`. Instances are treated as immutable.
    """

    __slots__ = ("_pos", "_ids", "_edges", "_violations")

    def __init__(self, vertices, edges=None):
        pos: dict[int, tuple[int, int]] = {}
        for entry in vertices:
            v, x, y = entry
            if not isinstance(v, int) or not isinstance(x, int) or not isinstance(y, int):
                raise DrawingFormatError(f"vertex entries must be int triples, got {entry!r}")
            if v in pos:
                raise DrawingFormatError(f"duplicate vertex id {v}")
            pos[v] = (x, y)
        if len(pos) < 3:
            raise DrawingFormatError("need at least 3 vertices")
        self._pos = pos
        self._ids = tuple(sorted(pos))

        edge_map: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        if edges is None:
            for u, v in itertools.combinations(self._ids, 2):
                edge_map[(u, v)] = (pos[u], pos[v])
        else:
            for (u, v), polyline in edges:
                if u == v:
                    raise DrawingFormatError(f"self-loop at vertex {u}")
                if u not in pos or v not in pos:
                    raise DrawingFormatError(f"edge ({u},{v}) references unknown vertex")
                key = (u, v) if u < v else (v, u)
                if key in edge_map:
                    raise DrawingFormatError(f"duplicate edge {key}")
                pts = tuple((int(px), int(py)) for px, py in polyline)
                if len(pts) < 2:
                    raise DrawingFormatError(f"edge {key} polyline needs >= 2 points")
                # Store oriented from the smaller id when endpoints identify it.
                if pts[0] == pos[key[1]] and pts[-1] == pos[key[0]]:
                    pts = pts[::-1]
                edge_map[key] = pts
        self._edges = edge_map
        self._violations = None

    # -- basic accessors ------------------------------------------------

    @property
    def ids(self) -> tuple[int, ...]:
        return self._ids

    @property
    def n_vertices(self) -> int:
        return len(self._ids)

    def pos(self, v: int) -> tuple[int, int]:
        return self._pos[v]

    @property
    def edge_keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self._edges))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def polyline(self, u: int, v: int) -> tuple[tuple[int, int], ...]:
        """Polyline of edge {u, v}, oriented to start at u."""
        key = (min(u, v), max(u, v))
        pts = self._edges[key]
        if pts[0] == self._pos[u]:
            return pts
        if pts[-1] == self._pos[u]:
            return pts[::-1]
        raise DrawingFormatError(f"edge {key} polyline does not end at its vertices")

    @property
    def is_straight(self) -> bool:
        return all(len(p) == 2 for p in self._edges.values())

    def coord_bound(self) -> int:
        b = 0
        for pts in self._edges.values():
            for x, y in pts:
                b = max(b, abs(x), abs(y))
        return b

    # -- serialization ---------------------------------------------------


def drawing_to_json(drawing: Drawing) -> dict:
    """Wire schema: vertices with int coords, edges with optional polyline
    (omitted for straight segments)."""
    verts = [{"id": v, "x": drawing.pos(v)[0], "y": drawing.pos(v)[1]} for v in drawing.ids]
    edges = []
    for (u, v) in drawing.edge_keys:
        pts = drawing._edges[(u, v)]
        entry = {"u": u, "v": v}
        if len(pts) > 2 or pts[0] != drawing.pos(u) or pts[-1] != drawing.pos(v):
            entry["polyline"] = [[x, y] for x, y in pts]
        edges.append(entry)
    return {"vertices": verts, "edges": edges}


def drawing_from_json(obj: dict) -> Drawing:
    if not isinstance(obj, dict):
        raise DrawingFormatError("drawing JSON must be an object")
    try:
        vertices = [(int(e["id"]), int(e["x"]), int(e["y"])) for e in obj["vertices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DrawingFormatError(f"bad vertices array: {exc}") from exc
    pos = {v: (x, y) for v, x, y in vertices}
    edges = []
    try:
        for e in obj["edges"]:
            u, v = int(e["u"]), int(e["v"])
            if "polyline" in e:
                pts = [(int(p[0]), int(p[1])) for p in e["polyline"]]
            else:
                pts = [pos[u], pos[v]]
            edges.append(((u, v), pts))
    except (KeyError, TypeError, ValueError) as exc:
        raise DrawingFormatError(f"bad edges array: {exc}") from exc
    return Drawing(vertices, edges)


def load_drawing(path) -> Drawing:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DrawingFormatError(f"{path}: {exc}") from exc
    return drawing_from_json(obj)


def save_drawing(drawing: Drawing, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(drawing_to_json(drawing), fh, indent=None, separators=(",", ":"))
        fh.write("\n")


# -- simplicity validation ------------------------------------------------


def _segments(pts) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
    for i in range(len(pts) - 1):
        yield pts[i], pts[i + 1]


def _np_int_safe(drawing: Drawing) -> bool:
    return drawing.coord_bound() <= _NP_COORD_LIMIT


def _cross_table(points: np.ndarray) -> np.ndarray:
    # C[a, b] = x_a*y_b - y_a*x_b; orient(a,b,c) = C[a,b] + C[b,c] - C[a,c].
    x = points[:, 0]
    y = points[:, 1]
    return np.multiply.outer(x, y) - np.multiply.outer(y, x)


def _collinear_violations_straight(drawing: Drawing) -> list[Violation]:
    """No three vertices may be collinear in a complete straight-line
    drawing: the middle one would lie on the edge of the outer two."""
    ids = drawing.ids
    m = len(ids)
    pts = np.array([drawing.pos(v) for v in ids], dtype=np.int64)
    C = _cross_table(pts)
    out = []
    for ai in range(m):
        for bi in range(ai + 1, m):
            o = C[ai, bi] + C[bi, :] - C[ai, :]
            bad = np.nonzero(o == 0)[0]
            for ci in bad:
                if ci == ai or ci == bi:
                    continue
                if ci < bi:
                    continue  # report each triple once
                trio = sorted((ids[ai], ids[bi], ids[ci]),
                              key=lambda v: (drawing.pos(v), v))
                out.append(Violation(
                    "edge-through-vertex",
                    f"vertices {trio[0]}, {trio[1]}, {trio[2]} are collinear; "
                    f"edge ({trio[0]},{trio[2]}) passes through {trio[1]}",
                    tuple(trio)))
    return out


def _collinear_violations_slow(drawing: Drawing) -> list[Violation]:
    ids = drawing.ids
    out = []
    for a, b, c in itertools.combinations(ids, 3):
        if orient(drawing.pos(a), drawing.pos(b), drawing.pos(c)) == 0:
            trio = sorted((a, b, c), key=lambda v: (drawing.pos(v), v))
            out.append(Violation(
                "edge-through-vertex",
                f"vertices {trio[0]}, {trio[1]}, {trio[2]} are collinear",
                tuple(trio)))
    return out


def _pair_violations(drawing: Drawing, e: tuple[int, int], f: tuple[int, int]) -> list[Violation]:
    """Contact analysis for one edge pair of a polyline drawing."""
    pe = drawing._edges[e]
    pf = drawing._edges[f]
    shared_ids = set(e) & set(f)
    shared_pts = {drawing.pos(v) for v in shared_ids}
    joints_e = set(pe[1:-1])
    joints_f = set(pf[1:-1])

    contacts = {}  # exact point -> proper flag
    for sa, sb in _segments(pe):
        for sc, sd in _segments(pf):
            res = segment_contact(sa, sb, sc, sd)
            if res[0] == "overlap":
                return [Violation("overlap", f"edges {e} and {f} overlap along a segment", (e, f))]
            if res[0] == "point":
                pt, proper = res[1], res[2]
                contacts[pt] = contacts.get(pt, False) or proper

    if not contacts:
        return []
    out = []
    # Points at shared endpoints are the legal meeting of adjacent edges.
    extra = {}
    for pt, proper in contacts.items():
        as_int = (int(pt[0]), int(pt[1])) if pt[0].denominator == 1 and pt[1].denominator == 1 else None
        if as_int is not None and as_int in shared_pts:
            continue
        extra[pt] = (proper, as_int)

    if shared_ids:
        for pt, (proper, as_int) in extra.items():
            out.append(Violation(
                "adjacent-recontact",
                f"adjacent edges {e} and {f} meet again away from their shared vertex",
                (e, f)))
            break
        return out

    if len(extra) >= 2:
        out.append(Violation(
            "double-intersection",
            f"edges {e} and {f} intersect {len(extra)} times", (e, f)))
        return out
    if len(extra) == 1:
        (pt, (proper, as_int)), = extra.items()
        if not proper:
            out.append(Violation(
                "tangency", f"edges {e} and {f} touch without crossing", (e, f)))
        elif as_int is not None and (as_int in joints_e or as_int in joints_f):
            out.append(Violation(
                "joint-contact",
                f"edges {e} and {f} meet at a polyline joint (general position required)",
                (e, f)))
    return out


def _self_intersection_violations(drawing: Drawing, e: tuple[int, int]) -> list[Violation]:
    pts = drawing._edges[e]
    segs = list(_segments(pts))
    out = []
    for i, (a, b) in enumerate(segs):
        if a == b:
            out.append(Violation("degenerate-segment", f"edge {e} has a zero-length segment", (e,)))
            return out
    for i in range(len(segs)):
        a, b = segs[i]
        for j in range(i + 1, len(segs)):
            c, d = segs[j]
            res = segment_contact(a, b, c, d)
            if res[0] == "none":
                continue
            if j == i + 1:
                # Consecutive segments legally share the joint; anything
                # more (overlap from a backtrack, a second point) is bad.
                if res[0] == "overlap":
                    out.append(Violation("self-intersection",
                                         f"edge {e} backtracks at a joint", (e,)))
                    return out
                pt = res[1]
                if (pt[0], pt[1]) != (b[0], b[1]):
                    out.append(Violation("self-intersection",
                                         f"edge {e} touches itself", (e,)))
                    return out
            else:
                closing = (i == 0 and j == len(segs) - 1 and pts[0] == pts[-1])
                if not closing:
                    out.append(Violation("self-intersection",
                                         f"edge {e} intersects itself", (e,)))
                    return out
    return out


def validate_simple(drawing: Drawing) -> list[Violation]:
    """Check every drawing invariant; an empty list means valid.

    Violations are data, not errors: each names the broken rule and the
    vertices or edges involved. Structure (completeness, endpoint
    agreement) is checked first, then geometry with exact predicates.
    """
    if drawing._violations is not None:
        return list(drawing._violations)

    out: list[Violation] = []
    ids = drawing.ids
    pos = drawing._pos

    seen_pts: dict[tuple[int, int], int] = {}
    for v in ids:
        p = pos[v]
        if p in seen_pts:
            out.append(Violation("duplicate-vertex-point",
                                 f"vertices {seen_pts[p]} and {v} share the point {p}",
                                 (seen_pts[p], v)))
        else:
            seen_pts[p] = v

    for u, v in itertools.combinations(ids, 2):
        if (u, v) not in drawing._edges:
            out.append(Violation("missing-edge", f"no edge between {u} and {v}", (u, v)))

    endpoint_ok = True
    for (u, v), pts in drawing._edges.items():
        if pts[0] != pos[u] or pts[-1] != pos[v]:
            out.append(Violation("endpoint-mismatch",
                                 f"edge ({u},{v}) polyline does not join its vertices", (u, v)))
            endpoint_ok = False

    if out and not endpoint_ok:
        drawing._violations = tuple(out)
        return list(out)

    if drawing.is_straight:
        if _np_int_safe(drawing):
            out.extend(_collinear_violations_straight(drawing))
        else:
            out.extend(_collinear_violations_slow(drawing))
        drawing._violations = tuple(out)
        return list(out)

    # General polyline path.
    for e in drawing._edges:
        out.extend(_self_intersection_violations(drawing, e))
    for (u, v), pts in drawing._edges.items():
        own = {pos[u], pos[v]}
        for w in ids:
            p = pos[w]
            if p in own:
                continue
            for a, b in _segments(pts):
                if on_segment(a, b, p):
                    out.append(Violation("edge-through-vertex",
                                         f"edge ({u},{v}) passes through vertex {w}", (u, v, w)))
                    break
    edge_list = sorted(drawing._edges)
    for i in range(len(edge_list)):
        for j in range(i + 1, len(edge_list)):
            out.extend(_pair_violations(drawing, edge_list[i], edge_list[j]))

    drawing._violations = tuple(out)
    return list(out)


def _require_valid(drawing: Drawing) -> None:
    violations = validate_simple(drawing)
    if violations:
        raise InvalidDrawingError(violations)


# -- crossing matrix -------------------------------------------------------


class CrossingMatrix:
    """Symmetric crossing relation over edges plus per-edge totals."""

    __slots__ = ("edges", "_index", "_rows", "totals")

    def __init__(self, edges, rows, totals):
        self.edges = tuple(edges)
        self._index = {e: i for i, e in enumerate(self.edges)}
        self._rows = tuple(rows)
        self.totals = tuple(totals)

    def _idx(self, e) -> int:
        u, v = e
        return self._index[(min(u, v), max(u, v))]

    def crosses(self, e, f) -> bool:
        return bool((self._rows[self._idx(e)] >> self._idx(f)) & 1)

    def count(self, e) -> int:
        return self.totals[self._idx(e)]

    def crossing_edges(self, e) -> tuple[tuple[int, int], ...]:
        row = self._rows[self._idx(e)]
        out = []
        while row:
            low = row & -row
            out.append(self.edges[low.bit_length() - 1])
            row ^= low
        return tuple(out)

    @property
    def total_crossings(self) -> int:
        return sum(self.totals) // 2

    def min_edge(self) -> tuple[tuple[int, int], int]:
        best = min(range(len(self.edges)), key=lambda i: (self.totals[i], self.edges[i]))
        return self.edges[best], self.totals[best]


def _crossing_matrix_straight(drawing: Drawing) -> CrossingMatrix:
    ids = drawing.ids
    row_of = {v: i for i, v in enumerate(ids)}
    pts = np.array([drawing.pos(v) for v in ids], dtype=np.int64)
    C = _cross_table(pts)
    edges = drawing.edge_keys
    ue = np.array([row_of[u] for u, _ in edges])
    ve = np.array([row_of[v] for _, v in edges])
    CD = C[ue, ve]
    n_edges = len(edges)
    rows = []
    totals = []
    for k in range(n_edges):
        a, b = ue[k], ve[k]
        o1 = C[a, b] + C[b, ue] - C[a, ue]
        o2 = C[a, b] + C[b, ve] - C[a, ve]
        o3 = CD + C[ve, a] - C[ue, a]
        o4 = CD + C[ve, b] - C[ue, b]
        proper = (((o1 > 0) != (o2 > 0)) & (o1 != 0) & (o2 != 0)
                  & ((o3 > 0) != (o4 > 0)) & (o3 != 0) & (o4 != 0))
        totals.append(int(np.count_nonzero(proper)))
        packed = np.packbits(proper, bitorder="little")
        rows.append(int.from_bytes(packed.tobytes(), "little"))
    return CrossingMatrix(edges, rows, totals)


def _polylines_properly_cross(pe, pf) -> bool:
    for a, b in _segments(pe):
        for c, d in _segments(pf):
            if segments_properly_cross(a, b, c, d):
                return True
    return False


def _crossing_matrix_generic(drawing: Drawing) -> CrossingMatrix:
    edges = drawing.edge_keys
    n_edges = len(edges)
    rows = [0] * n_edges
    totals = [0] * n_edges
    for i in range(n_edges):
        for j in range(i + 1, n_edges):
            e, f = edges[i], edges[j]
            if set(e) & set(f):
                continue
            if _polylines_properly_cross(drawing._edges[e], drawing._edges[f]):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
                totals[i] += 1
                totals[j] += 1
    return CrossingMatrix(edges, rows, totals)


def crossing_matrix(drawing: Drawing, *, _force_generic: bool = False) -> CrossingMatrix:
    """Exact crossing relation of a validated drawing."""
    _require_valid(drawing)
    if drawing.is_straight and _np_int_safe(drawing) and not _force_generic:
        return _crossing_matrix_straight(drawing)
    return _crossing_matrix_generic(drawing)


def edges_cross(drawing: Drawing, e, f) -> bool:
    """Exact pairwise crossing test without building the full matrix."""
    eu, ev = e
    fu, fv = f
    if {eu, ev} & {fu, fv}:
        return False
    return _polylines_properly_cross(drawing.polyline(eu, ev), drawing.polyline(fu, fv))


# -- outer face and rotation -----------------------------------------------


def _hull_ids(drawing: Drawing) -> list[int]:
    pts = sorted(drawing.ids, key=lambda v: (drawing.pos(v), v))

    def half(points):
        chain = []
        for v in points:
            while len(chain) >= 2 and orient(drawing.pos(chain[-2]), drawing.pos(chain[-1]),
                                             drawing.pos(v)) <= 0:
                chain.pop()
            chain.append(v)
        return chain

    lower = half(pts)
    upper = half(pts[::-1])
    return lower[:-1] + upper[:-1]


def outer_face_vertex(drawing: Drawing, hint: int | None = None) -> int:
    """A vertex on the boundary of the unbounded cell.

    Straight-line drawings: the hull vertex of smallest id, always.
    Curved drawings: the hint is returned once a ray-escape certificate
    is verified (some ray from the hint meets no polyline segment);
    candidate rays bisect the angular gaps of all segment endpoints seen
    from the hint, with small primitive directions tried first.
    """
    _require_valid(drawing)
    if drawing.is_straight:
        return min(_hull_ids(drawing))
    if hint is None or hint not in drawing._pos:
        raise NoOuterVertexError("curved drawing needs an outer-face hint vertex")
    p = drawing.pos(hint)
    all_segments = []
    dirs = set()
    for pts in drawing._edges.values():
        for a, b in _segments(pts):
            all_segments.append((a, b))
        for q in pts:
            if q != p:
                dirs.add((q[0] - p[0], q[1] - p[1]))

    def certified(d) -> bool:
        return not any(ray_hits_segment(p, d, a, b) for a, b in all_segments)

    sorted_dirs = sorted(dirs, key=functools.cmp_to_key(ccw_direction_cmp))
    candidates: list[tuple[int, int]] = []
    for d1, d2 in zip(sorted_dirs, sorted_dirs[1:] + sorted_dirs[:1]):
        # Approximate bisector of the gap after d1; verification is exact.
        n1 = math.hypot(*d1)
        n2 = math.hypot(*d2)
        bx = d1[0] * n2 + d2[0] * n1
        by = d1[1] * n2 + d2[1] * n1
        if abs(bx) + abs(by) > 0:
            scale = 10**6 / max(abs(bx), abs(by))
            candidates.append((round(-bx * scale), round(-by * scale)))
            candidates.append((round(bx * scale), round(by * scale)))
    gen = escape_directions()
    candidates.extend(next(gen) for _ in range(64))
    for d in candidates:
        if d != (0, 0) and certified(d):
            return hint
    raise NoOuterVertexError(f"no escape ray found from hint vertex {hint}")


@dataclass(frozen=True)
class RotationLabeling:
    """Counterclockwise labeling of the non-root vertices.

    ``to_id[k-1]`` is the drawing id of the vertex labeled k; labels run
    1..n in counterclockwise order of the initial edge directions at the
    root, starting from the +x axis.
    """

    v0: int
    to_id: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.to_id)

    def id_of(self, label: int) -> int:
        return self.to_id[label - 1]

    @functools.cached_property
    def label_of(self) -> dict[int, int]:
        return {v: k + 1 for k, v in enumerate(self.to_id)}


def relabel_ccw(drawing: Drawing, v0: int) -> RotationLabeling:
    """Sort the root's neighbors by the initial tangent direction of each
    edge polyline at the root, counterclockwise from +x."""
    if v0 not in drawing._pos:
        raise DrawingFormatError(f"unknown vertex {v0}")
    p0 = drawing.pos(v0)
    dirs = {}
    for u in drawing.ids:
        if u == v0:
            continue
        pts = drawing.polyline(v0, u)
        d = (pts[1][0] - p0[0], pts[1][1] - p0[1])
        if d == (0, 0):
            raise DegenerateRotationError(f"edge ({v0},{u}) starts with a zero segment")
        dirs[u] = d
    order = sorted(dirs, key=functools.cmp_to_key(
        lambda a, b: ccw_direction_cmp(dirs[a], dirs[b])))
    for a, b in zip(order, order[1:]):
        if same_direction(dirs[a], dirs[b]):
            raise DegenerateRotationError(
                f"edges ({v0},{a}) and ({v0},{b}) leave the root in the same direction")
    return RotationLabeling(v0=v0, to_id=tuple(order))


# -- triangle regions ------------------------------------------------------


def _cycle_points(drawing: Drawing, labeling: RotationLabeling, i: int, j: int) -> list[tuple[int, int]]:
    """Closed curve of the 3-cycle through the root and labels i < j."""
    v0 = labeling.v0
    vi = labeling.id_of(i)
    vj = labeling.id_of(j)
    pts = list(drawing.polyline(v0, vi))
    pts.extend(drawing.polyline(vi, vj)[1:])
    pts.extend(drawing.polyline(vj, v0)[1:])
    return pts


def _region_contains(curve: Sequence[tuple[int, int]], p: tuple[int, int],
                     ray_attempt: int = 0) -> bool:
    """Ray-parity containment for a closed integer polyline.

    The ray direction is the first primitive direction that passes
    strictly by every curve vertex ahead of p and is parallel to no
    curve segment, so every met segment contributes one exact transversal
    crossing. ``ray_attempt`` skips that many valid directions (used to
    confirm the result is direction-independent).
    """
    verts = curve[:-1] if curve[0] == curve[-1] else list(curve)
    segs = [(curve[k], curve[k + 1]) for k in range(len(curve) - 1)]
    for a, b in segs:
        if on_segment(a, b, p):
            raise CurveBoundaryError(f"point {p} lies on the curve")
    remaining = ray_attempt
    for d in escape_directions():
        ok = True
        for q in verts:
            rel = (q[0] - p[0], q[1] - p[1])
            if cross(d, rel) == 0 and dot(d, rel) > 0:
                ok = False
                break
        if ok:
            for a, b in segs:
                if cross(d, (b[0] - a[0], b[1] - a[1])) == 0:
                    ok = False
                    break
        if not ok:
            continue
        if remaining > 0:
            remaining -= 1
            continue
        hits = 0
        for a, b in segs:
            ca = cross(d, (a[0] - p[0], a[1] - p[1]))
            cb = cross(d, (b[0] - p[0], b[1] - p[1]))
            if ca == 0 or cb == 0 or (ca > 0) == (cb > 0):
                continue
            t_num = (dot(d, (a[0] - p[0], a[1] - p[1])) * (ca - cb)
                     + ca * dot(d, (b[0] - a[0], b[1] - a[1])))
            if (t_num > 0) == (ca - cb > 0):
                hits += 1
        return hits % 2 == 1
    raise RuntimeError("unreachable: ran out of escape directions")


def point_in_triangle_region(drawing: Drawing, labeling: RotationLabeling,
                             i: int, j: int, p: tuple[int, int],
                             ray_attempt: int = 0) -> bool:
    """True iff p lies in the bounded region enclosed by the 3-cycle
    through the root and the vertices labeled i < j."""
    if not 1 <= i < j <= labeling.n:
        raise ValueError(f"need 1 <= i < j <= {labeling.n}, got ({i},{j})")
    curve = _cycle_points(drawing, labeling, i, j)
    return _region_contains(curve, p, ray_attempt=ray_attempt)


def _triangle_family_straight(drawing: Drawing, labeling: RotationLabeling) -> SetFamily:
    from .set_system import Member

    n = labeling.n
    p0 = drawing.pos(labeling.v0)
    pts = np.array([drawing.pos(labeling.id_of(k)) for k in range(1, n + 1)], dtype=np.int64)
    pts = pts - np.array(p0, dtype=np.int64)
    x = pts[:, 0]
    y = pts[:, 1]
    # With the root at the origin, orient(root, k, x) is just cross(k, x).
    C = np.multiply.outer(x, y) - np.multiply.outer(y, x)
    ground = GroundSet(n, labels=labeling.to_id)
    members = []
    sign = np.sign
    for i in range(1, n + 1):
        Ci = C[i - 1]
        for j in range(i + 1, n + 1):
            Cj = C[j - 1]
            o = int(sign(C[i - 1, j - 1]))
            if o == 0:
                raise InvalidDrawingError([Violation(
                    "edge-through-vertex",
                    f"labels {i}, {j} collinear with the root", (i, j))])
            inside = (sign(Ci) == o) & (sign(Cj) == -o) & (sign(C[i - 1, j - 1] + Cj - Ci) == o)
            packed = np.packbits(inside, bitorder="little")
            mask = int.from_bytes(packed.tobytes(), "little") << 1
            members.append(Member(key=(i, j), mask=mask, logw=0))
    return SetFamily(ground=ground, members=tuple(members))


def _triangle_family_generic(drawing: Drawing, labeling: RotationLabeling) -> SetFamily:
    from .set_system import Member
    n = labeling.n
    ground = GroundSet(n, labels=labeling.to_id)
    members = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            curve = _cycle_points(drawing, labeling, i, j)
            mask = 0
            for k in range(1, n + 1):
                if k == i or k == j:
                    continue
                if _region_contains(curve, drawing.pos(labeling.id_of(k))):
                    mask |= 1 << k
            members.append(Member(key=(i, j), mask=mask, logw=0))
    return SetFamily(ground=ground, members=tuple(members))


def triangle_family(drawing: Drawing, labeling: RotationLabeling) -> SetFamily:
    """The family of triangle sets: member (i, j) holds the labels of the
    vertices lying inside the 3-cycle region of (root, i, j). Unweighted,
    one member per label pair, n*(n-1)/2 members total."""
    _require_valid(drawing)
    if drawing.is_straight and _np_int_safe(drawing):
        return _triangle_family_straight(drawing, labeling)
    return _triangle_family_generic(drawing, labeling)


# -- generators ------------------------------------------------------------


def convex_complete(m: int) -> Drawing:
    """Complete straight-line drawing of m points in strictly convex
    position on an integer approximation of a circle."""
    if m < 3:
        raise GenerationError("need at least 3 vertices")
    radius = max(1000, 8 * m * m)
    for _ in range(40):
        pts = []
        for k in range(m):
            theta = 2 * math.pi * k / m + 0.5 / m
            pts.append((round(radius * math.cos(theta)), round(radius * math.sin(theta))))
        drawing = Drawing([(k, x, y) for k, (x, y) in enumerate(pts)])
        ok = len(set(pts)) == m
        if ok:
            for a in range(m):
                if orient(pts[a], pts[(a + 1) % m], pts[(a + 2) % m]) <= 0:
                    ok = False
                    break
        if ok and not validate_simple(drawing):
            return drawing
        radius *= 2
    raise GenerationError(f"could not place {m} convex points in general position")


def random_geometric_complete(m: int, seed: int = 0,
                              bbox: tuple[int, int] = (0, 1_000_000)) -> Drawing:
    """Complete straight-line drawing on m random integer points in
    general position (no duplicates, no three collinear); deterministic
    for a fixed seed."""
    if m < 3:
        raise GenerationError("need at least 3 vertices")
    lo, hi = bbox
    if hi - lo < 4 * m:
        raise GenerationError("bounding box too small for general position sampling")
    rng = random.Random(seed)
    pts: list[tuple[int, int]] = []
    arr = np.zeros((m, 2), dtype=np.int64)
    tries = 0
    budget = 1000 * m
    while len(pts) < m:
        tries += 1
        if tries > budget:
            raise GenerationError(f"rejection sampling exceeded {budget} tries")
        cand = (rng.randrange(lo, hi), rng.randrange(lo, hi))
        k = len(pts)
        if k and any(cand == q for q in pts):
            continue
        if k >= 2:
            ax = arr[:k, 0]
            ay = arr[:k, 1]
            # orient(p_a, p_b, cand) == 0 for some pair (a, b)?
            dx = ax - cand[0]
            dy = ay - cand[1]
            colls = np.multiply.outer(dx, dy) - np.multiply.outer(dy, dx)
            np.fill_diagonal(colls, 1)
            if np.any(colls == 0):
                continue
        arr[k] = cand
        pts.append(cand)
    drawing = Drawing([(k, x, y) for k, (x, y) in enumerate(pts)])
    violations = validate_simple(drawing)
    if violations:
        raise GenerationError(f"sampled drawing invalid: {violations[0]}")
    return drawing
