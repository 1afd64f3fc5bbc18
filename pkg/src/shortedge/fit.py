"""Pre-registered calibration harness for the bound constants.

``python -m shortedge.fit`` runs the frozen instance grid (convex plus
20 random-geometric seeds at n in {32, 64, 128}), measures the maxima
that the constants c1, c3, c4 must dominate, and prints suggested frozen
values. The acceptance suite replays the exact same grid through the
same helpers, so the frozen constants cannot drift from what was fitted.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .constants import DEFAULT_CONSTANTS, Constants
from .drawing import Drawing, convex_complete, outer_face_vertex, random_geometric_complete, relabel_ccw, triangle_family
from .packing import MatchConfig, build_low_stab_matching, greedy_net
from .pipeline import PipelineReport, select_short_edge

GRID_NS = (32, 64, 128)
GRID_SEEDS = tuple(range(20))
DELTA_GRID_STEPS = 8  # delta = W / 2**k for k in 0..7, two orders of magnitude

__all__ = ["GRID_NS", "GRID_SEEDS", "DELTA_GRID_STEPS", "grid_instances",
           "make_drawing", "InstanceBundle", "build_bundle", "net_ratios", "main"]


def grid_instances():
    """The frozen grid: (generator, n, seed-or-None), in fixed order."""
    for n in GRID_NS:
        yield ("convex", n, None)
        for seed in GRID_SEEDS:
            yield ("random-geometric", n, seed)


def make_drawing(generator: str, n: int, seed) -> Drawing:
    """Drawing with n + 1 vertices (ground set size n)."""
    if generator == "convex":
        return convex_complete(n + 1)
    if generator == "random-geometric":
        return random_geometric_complete(n + 1, seed=seed)
    raise ValueError(f"unknown generator {generator!r}")


@dataclass
class InstanceBundle:
    generator: str
    n: int
    seed: object
    drawing: Drawing
    labeling: object
    family: object
    matching: object
    report: PipelineReport


def build_bundle(generator: str, n: int, seed, cfg: MatchConfig | None = None,
                 constants: Constants | None = None) -> InstanceBundle:
    """Run one grid instance end to end and keep the intermediates."""
    drawing = make_drawing(generator, n, seed)
    v0 = outer_face_vertex(drawing)
    labeling = relabel_ccw(drawing, v0)
    family = triangle_family(drawing, labeling)
    matching = build_low_stab_matching(family, cfg) if cfg else None
    report = select_short_edge(drawing, cfg, constants=constants,
                               generator=generator, seed=seed)
    return InstanceBundle(generator=generator, n=n, seed=seed, drawing=drawing,
                          labeling=labeling, family=family, matching=matching,
                          report=report)


def net_ratios(family, d: int = 2):
    """|net| * (delta/W)^d over the delta grid; c1 must dominate these."""
    W = family.total_weight
    out = []
    for k in range(DELTA_GRID_STEPS):
        delta = W / 2 ** k
        net = greedy_net(family, delta)
        out.append((delta, len(net), len(net) * (delta / W) ** d))
    return out


def main(argv=None) -> int:
    # Measurement config: huge c3 so no bound can trip while we measure.
    cfg_template = dict(d=2, c2=DEFAULT_CONSTANTS.c2, min_n=DEFAULT_CONSTANTS.min_n)
    measure_cons = Constants(c1=1e18, c2=DEFAULT_CONSTANTS.c2, c3=1e18, c4=1e18,
                             min_n=DEFAULT_CONSTANTS.min_n)
    cfg = MatchConfig(c3=1e18, **cfg_template)

    max_c1 = 0.0
    max_kappa_ratio = 0.0
    max_pair_ratio = 0.0
    max_c4 = {n: 0.0 for n in GRID_NS}
    rows = []
    for generator, n, seed in grid_instances():
        bundle = build_bundle(generator, n, seed, cfg=cfg, constants=measure_cons)
        fam = bundle.family
        W = fam.total_weight
        for delta, size, ratio in net_ratios(fam):
            max_c1 = max(max_c1, ratio)
        diag = bundle.matching.diagnostics
        kappa_ratio = diag.max_kappa / n ** 0.5
        pair_ratio = diag.max_pair_stab * n ** 0.25 / W
        max_kappa_ratio = max(max_kappa_ratio, kappa_ratio)
        max_pair_ratio = max(max_pair_ratio, pair_ratio)
        r = bundle.report
        c4_ratio = r.crossing_count / n ** 1.75
        max_c4[n] = max(max_c4[n], c4_ratio)
        rows.append((generator, n, seed, r.crossing_count, f"{c4_ratio:.4f}",
                     diag.max_kappa, diag.max_pair_stab, diag.step_bound_misses))
        print(f"{generator:>17} n={n:<4} seed={str(seed):<4} "
              f"crossings={r.crossing_count:<6} c4r={c4_ratio:.4f} "
              f"kappa={diag.max_kappa:<3} pair_stab={diag.max_pair_stab:<6} "
              f"misses={diag.step_bound_misses}")

    print()
    print(f"observed max c1 ratio        : {max_c1:.4f}")
    print(f"observed max kappa / sqrt(n) : {max_kappa_ratio:.4f}")
    print(f"observed max pairstab ratio  : {max_pair_ratio:.4f}  (2*c2 = {2 * cfg.c2})")
    for n in GRID_NS:
        print(f"observed max c4 ratio n={n:<4}: {max_c4[n]:.4f}")
    ratios = [max_c4[n] for n in GRID_NS]
    for a, b in zip(ratios, ratios[1:]):
        print(f"growth step {a:.4f} -> {b:.4f}  ({'ok' if b <= 1.2 * a else 'INCREASING'})")

    c1 = math.ceil(max_c1 * 20) / 10  # x2 headroom, one decimal
    c3 = max(2 * cfg.c2, math.ceil(max(max_kappa_ratio, max_pair_ratio / 2) * 12) / 10)
    c4 = math.ceil(max(ratios) * 12) / 10
    print()
    print(f"suggested frozen constants: c1={c1}, c2={cfg.c2}, c3={c3}, c4={c4}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
