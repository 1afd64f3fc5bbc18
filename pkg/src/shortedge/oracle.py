"""Brute-force ground truth for small instances.

Everything here is recomputed straight from the definitions with plain
loops over Python sets and the shared exact predicates; no bitmask
bookkeeping, no vectorization, no code shared with the incremental
implementations above the predicate layer. Differential tests compare
these results exactly against the fast paths.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import OracleGuardError
from .predicates import segment_contact, segments_properly_cross

STAB_GUARD = 200
PHI_GUARD = 64

__all__ = [
    "OracleReport",
    "brute_min_crossing_edge",
    "brute_edge_crossings",
    "brute_stab_counts",
    "brute_phi",
    "brute_kappa",
    "brute_stab_digraph_arcs",
    "brute_max_cells",
    "brute_classify",
    "oracle_report",
]


def _member_sets(family) -> dict:
    return {m.key: frozenset(m.indices) for m in family.members}


def _polyline_crossings(pe, pf) -> int:
    count = 0
    for i in range(len(pe) - 1):
        for j in range(len(pf) - 1):
            if segments_properly_cross(pe[i], pe[i + 1], pf[j], pf[j + 1]):
                count += 1
    return count


def brute_edge_crossings(drawing) -> dict:
    """Per-edge crossing totals by direct enumeration of edge pairs."""
    edges = drawing.edge_keys
    totals = {e: 0 for e in edges}
    for e, f in itertools.combinations(edges, 2):
        if set(e) & set(f):
            continue
        if _polyline_crossings(drawing.polyline(*e), drawing.polyline(*f)):
            totals[e] += 1
            totals[f] += 1
    return totals


def brute_min_crossing_edge(drawing) -> tuple[tuple[int, int], int]:
    """Edge with the fewest crossings (ties: lexicographically smallest)."""
    totals = brute_edge_crossings(drawing)
    best = min(totals, key=lambda e: (totals[e], e))
    return best, totals[best]


def brute_stab_counts(family) -> dict:
    """Exact weighted stab count for every vertex pair, from the definition."""
    n = family.ground.n
    if n > STAB_GUARD:
        raise OracleGuardError(f"stab oracle guarded at n <= {STAB_GUARD}, got {n}")
    sets = [(frozenset(m.indices), 1 << m.logw) for m in family.members]
    table = {}
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            total = 0
            for s, w in sets:
                if (u in s) != (v in s):
                    total += w
            table[(u, v)] = total
    return table


def brute_kappa(family, matching) -> dict:
    """Per member, the number of matched pairs it stabs."""
    out = {}
    for m in family.members:
        s = frozenset(m.indices)
        out[m.key] = sum(1 for a, b in matching.pairs if (a in s) != (b in s))
    return out


def _curve_points(drawing, labeling, i, j) -> list:
    v0 = labeling.v0
    vi = labeling.id_of(i)
    vj = labeling.id_of(j)
    pts = list(drawing.polyline(v0, vi))
    pts.extend(drawing.polyline(vi, vj)[1:])
    pts.extend(drawing.polyline(vj, v0)[1:])
    return pts


_ORACLE_DIRECTIONS = [(2, 1), (1, 2), (-2, 1), (1, -2), (3, 1), (1, 3), (-3, 2),
                      (2, -3), (5, 2), (2, 5), (-5, 3), (3, -5), (7, 3), (3, 7)]


def _contains_far_segment(curve, p) -> bool:
    """Parity containment via a long probe segment instead of a ray.

    The probe runs from p to a point far outside the curve's bounding
    box; a direction is accepted only if every contact along it is a
    transversal interior crossing, so the parity is unambiguous.
    """
    span = 0
    for q in curve:
        span = max(span, abs(q[0] - p[0]), abs(q[1] - p[1]))
    reach = 4 * span + 4
    segs = [(curve[k], curve[k + 1]) for k in range(len(curve) - 1)]
    for dx, dy in _ORACLE_DIRECTIONS:
        far = (p[0] + reach * dx, p[1] + reach * dy)
        hits = 0
        ok = True
        for a, b in segs:
            res = segment_contact(p, far, a, b)
            if res[0] == "none":
                continue
            if res[0] == "overlap" or not res[2]:
                ok = False
                break
            hits += 1
        if ok:
            return hits % 2 == 1
    raise RuntimeError("oracle containment ran out of probe directions")


def brute_phi(drawing, labeling, triangles, matched_pairs) -> dict:
    """phi value per triangle: matched pairs with both endpoints strictly
    inside the triangle's region, each endpoint decided independently."""
    n = labeling.n
    if n > PHI_GUARD:
        raise OracleGuardError(f"phi oracle guarded at n <= {PHI_GUARD}, got {n}")
    out = {}
    for (i, j) in triangles:
        curve = _curve_points(drawing, labeling, i, j)
        inside = set()
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            if _contains_far_segment(curve, drawing.pos(labeling.id_of(k))):
                inside.add(k)
        out[(i, j)] = sum(1 for a, b in matched_pairs if a in inside and b in inside)
    return out


def brute_stab_digraph_arcs(family, pairs) -> set:
    """Arcs (a, b) between matched pairs: the triangle set keyed by a
    contains exactly one endpoint of b."""
    sets = _member_sets(family)
    arcs = set()
    for a in pairs:
        ta = sets[a]
        for b in pairs:
            if a == b:
                continue
            if (b[0] in ta) != (b[1] in ta):
                arcs.add((a, b))
    return arcs


def brute_max_cells(family, m, budget=None, seed=0) -> int:
    """Max Venn cells over m-subsets by direct signature counting."""
    import random as _random

    members = [frozenset(mm.indices) for mm in family.members]
    universe = list(family.ground.indices)
    if budget is None or budget >= math.comb(len(members), m):
        combos = itertools.combinations(members, m)
    else:
        rng = _random.Random(seed)
        combos = (rng.sample(members, m) for _ in range(budget))
    best = 0
    for combo in combos:
        signatures = {tuple(v in s for s in combo) for v in universe}
        best = max(best, len(signatures))
    return best


def brute_classify(drawing, labeling, family, x, y, leftover) -> dict:
    """First-match crossing classes of the chosen pair, from scratch.

    Classes in order: root-incident, leftover endpoint, endpoint between
    x and y, triangle set stabs {x, y}, remainder.
    """
    v0 = labeling.v0
    label_of = labeling.label_of
    chosen_poly = drawing.polyline(labeling.id_of(x), labeling.id_of(y))
    sets = _member_sets(family)
    leftover = set(leftover)
    interval = set(range(x + 1, y))
    classes = {"e0": [], "e1": [], "e2": [], "e3": [], "e4": []}
    chosen_ids = {labeling.id_of(x), labeling.id_of(y)}
    for (u, v) in drawing.edge_keys:
        if {u, v} & chosen_ids:
            continue
        if not _polyline_crossings(drawing.polyline(u, v), chosen_poly):
            continue
        if v0 in (u, v):
            classes["e0"].append((0, label_of[u] if v0 == v else label_of[v]))
            continue
        li, lj = sorted((label_of[u], label_of[v]))
        if li in leftover or lj in leftover:
            classes["e1"].append((li, lj))
        elif li in interval or lj in interval:
            classes["e2"].append((li, lj))
        elif (x in sets[(li, lj)]) != (y in sets[(li, lj)]):
            classes["e3"].append((li, lj))
        else:
            classes["e4"].append((li, lj))
    return classes


@dataclass
class OracleReport:
    """Frozen ground truth for one instance, JSON-serializable."""

    min_crossing_edge: tuple
    min_crossing_count: int
    per_edge_crossings: dict
    stab_table: dict | None = None
    cell_counts: dict = field(default_factory=dict)
    phi_table: dict | None = None

    def to_json(self) -> dict:
        return {
            "min_crossing_edge": list(self.min_crossing_edge),
            "min_crossing_count": self.min_crossing_count,
            "per_edge_crossings": {f"{u},{v}": c for (u, v), c in self.per_edge_crossings.items()},
            "stab_table": None if self.stab_table is None else
                {f"{u},{v}": c for (u, v), c in self.stab_table.items()},
            "cell_counts": {str(m): c for m, c in self.cell_counts.items()},
            "phi_table": None if self.phi_table is None else
                {f"{i},{j}": c for (i, j), c in self.phi_table.items()},
        }


def oracle_report(drawing, labeling=None, family=None, matched_pairs=(),
                  cell_ms=(1, 2)) -> OracleReport:
    """Assemble the pieces that fit this instance's size guards."""
    totals = brute_edge_crossings(drawing)
    best = min(totals, key=lambda e: (totals[e], e))
    report = OracleReport(min_crossing_edge=best, min_crossing_count=totals[best],
                          per_edge_crossings=totals)
    if family is not None and family.ground.n <= STAB_GUARD:
        report.stab_table = brute_stab_counts(family)
        for m in cell_ms:
            if 1 <= m <= len(family.members):
                report.cell_counts[m] = brute_max_cells(family, m, budget=2000)
    if family is not None and labeling is not None and matched_pairs and labeling.n <= PHI_GUARD:
        report.phi_table = brute_phi(drawing, labeling, list(matched_pairs), list(matched_pairs))
    return report
