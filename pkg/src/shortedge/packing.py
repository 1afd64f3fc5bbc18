"""Separated nets, low-stabbing partitions, and the reweighting matcher.

Everything here is driven by the stabbing pseudometric of a set family:
``greedy_net`` packs vertices that are pairwise far apart,
``partition_low_stab`` groups everyone around the net (so same-part
pairs are near), ``refine_by_index`` additionally caps the index span of
each part, and ``build_low_stab_matching`` repeatedly pairs the two
cheapest same-part vertices while doubling the weight of every member
that stabs the new pair, which is what keeps any single member from
stabbing too many chosen pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import DEFAULT_CONSTANTS
from .errors import (
    FamilyTooSmallError,
    InfeasiblePartitionError,
    MatchingBoundError,
)
from .set_system import SetFamily, stab_count

__all__ = [
    "MatchConfig",
    "StabPartition",
    "LowStabMatching",
    "MatchDiagnostics",
    "MatchingReport",
    "greedy_net",
    "partition_low_stab",
    "pigeon_subset",
    "refine_by_index",
    "build_low_stab_matching",
    "verify_matching",
    "matching_to_json",
    "matching_from_json",
]


@dataclass(frozen=True)
class MatchConfig:
    """Knobs for the matching builder.

    d is the dual-shatter exponent of the family class (>= 2), c2 scales
    the partition separation, c3 caps the verified bounds (must be at
    least 2*c2 so the partition guarantee implies the pairwise bound),
    min_n is the smallest ground set the builder accepts, and seed is
    reserved for sampled diagnostics (the build itself is deterministic).
    """

    d: int = 2
    c2: float = DEFAULT_CONSTANTS.c2
    c3: float = DEFAULT_CONSTANTS.c3
    min_n: int = DEFAULT_CONSTANTS.min_n
    seed: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.c2 < 1:
            raise ValueError("c2 must be >= 1")
        if self.c3 < 2 * self.c2:
            raise ValueError("c3 must be >= 2*c2")

    def to_json(self) -> dict:
        return {"d": self.d, "c2": self.c2, "c3": self.c3,
                "min_n": self.min_n, "seed": self.seed}

    @staticmethod
    def from_json(obj: dict) -> "MatchConfig":
        return MatchConfig(d=int(obj["d"]), c2=float(obj["c2"]), c3=float(obj["c3"]),
                           min_n=int(obj["min_n"]), seed=int(obj.get("seed", 0)))


@dataclass(frozen=True)
class StabPartition:
    """Disjoint cover of the ground set; same-part pairs are stab-near.

    Parts are sorted index tuples in net order; every pair inside one
    part has stab count at most 2*delta (checked exactly at build time).
    """

    parts: tuple[tuple[int, ...], ...]
    delta: float

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)


def greedy_net(family: SetFamily, delta: float) -> tuple[int, ...]:
    """Maximal strictly delta-separated vertex set, greedy in index order.

    Every returned pair has stab count > delta, and every vertex outside
    the net is within stab distance <= delta of some net vertex.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    net: list[int] = []
    for v in family.ground.indices:
        if all(stab_count(family, u, v) > delta for u in net):
            net.append(v)
    return tuple(net)


def partition_low_stab(family: SetFamily, delta: float) -> StabPartition:
    """Partition into at most |net| parts with same-part stabs <= 2*delta.

    Each vertex joins the first net vertex (in net order) within stab
    distance delta; the 2*delta bound then follows from the triangle
    inequality and is re-checked exactly.
    """
    net = greedy_net(family, delta)
    groups: dict[int, list[int]] = {u: [u] for u in net}
    for v in family.ground.indices:
        if v in groups:
            continue
        for u in net:
            if stab_count(family, u, v) <= delta:
                groups[u].append(v)
                break
        else:  # unreachable: the net is maximal
            raise AssertionError(f"vertex {v} has no net vertex within {delta}")
    parts = tuple(tuple(sorted(groups[u])) for u in net)
    for part in parts:
        for a_pos in range(len(part)):
            for b_pos in range(a_pos + 1, len(part)):
                s = stab_count(family, part[a_pos], part[b_pos])
                if s > 2 * delta:
                    raise AssertionError(
                        f"pair ({part[a_pos]},{part[b_pos]}) stabbed {s} > 2*{delta}")
    return StabPartition(parts=parts, delta=delta)


def pigeon_subset(family: SetFamily, delta: float) -> tuple[int, ...]:
    """Largest part of the low-stab partition (ties: smallest min index);
    its size is at least n divided by the number of parts."""
    partition = partition_low_stab(family, delta)
    return max(partition.parts, key=lambda p: (len(p), -p[0]))


def refine_by_index(partition: StabPartition, width: float) -> StabPartition:
    """Split each part into maximal chunks of index span <= width.

    Greedy cut along the sorted index sequence; the same-part stab bound
    is inherited because chunks are subsets.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    parts: list[tuple[int, ...]] = []
    for part in partition.parts:
        start = 0
        for k in range(1, len(part) + 1):
            if k == len(part) or part[k] - part[start] > width:
                parts.append(part[start:k])
                start = k
    return StabPartition(parts=tuple(parts), delta=partition.delta)


@dataclass(frozen=True)
class MatchDiagnostics:
    delta0: float
    width: float
    steps: int
    max_span: int
    max_pair_stab: int
    max_kappa: int
    step_bound_misses: int
    final_weight_bits: int
    weight_trace_consistent: bool


@dataclass(frozen=True)
class LowStabMatching:
    """A matching on the ground set plus the leftover vertices.

    ``pairs`` are in selection order; ``kappa`` maps each member key to
    the number of chosen pairs that member stabs (its final log weight).
    """

    pairs: tuple[tuple[int, int], ...]
    leftover: tuple[int, ...]
    kappa: dict
    config: MatchConfig
    diagnostics: MatchDiagnostics | None = None

    @property
    def max_kappa(self) -> int:
        return max(self.kappa.values(), default=0)


def _pair_key(key) -> str:
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def _pair_key_back(s: str):
    parts = s.split(",")
    if len(parts) > 1:
        return tuple(int(p) for p in parts)
    try:
        return int(s)
    except ValueError:
        return s


def matching_to_json(matching: LowStabMatching) -> dict:
    return {
        "pairs": [[a, b] for a, b in matching.pairs],
        "X": list(matching.leftover),
        "kappa": {_pair_key(k): v for k, v in matching.kappa.items()},
        "config": matching.config.to_json(),
    }


def matching_from_json(obj: dict) -> LowStabMatching:
    return LowStabMatching(
        pairs=tuple((int(a), int(b)) for a, b in obj["pairs"]),
        leftover=tuple(int(v) for v in obj["X"]),
        kappa={_pair_key_back(k): int(v) for k, v in obj["kappa"].items()},
        config=MatchConfig.from_json(obj["config"]),
    )


def build_low_stab_matching(family: SetFamily, cfg: MatchConfig | None = None) -> LowStabMatching:
    """Build the matching by iterative doubling.

    Partition once at delta0 = c2*W/n^(1/(2d)), refine to index span
    n^(1-1/(2d)), then repeatedly take the same-part unmatched pair with
    the smallest current weighted stab count (ties: lexicographic) and
    double the weight of every member stabbing it. Stops after
    ceil(n/2 - n^(1/2+1/(2d))) pairs so the leftover stays within
    2*n^(1/2+1/(2d)).

    The returned matching is checked against all its bounds: index span,
    pairwise stabs (<= 2*delta0 and <= c3*W/n^(1/(2d))), per-member
    stabbed pairs (<= c3*n^(1-1/d)), and the leftover size. All weighted
    bookkeeping is exact integer arithmetic.
    """
    cfg = cfg or MatchConfig()
    n = family.ground.n
    if n < cfg.min_n:
        raise FamilyTooSmallError(f"ground set has {n} < min_n={cfg.min_n} vertices")
    if not family.is_unweighted:
        raise ValueError("matching builder needs an unweighted family")

    d = cfg.d
    W = family.total_weight
    delta0 = cfg.c2 * W / n ** (1 / (2 * d))
    width = n ** (1 - 1 / (2 * d))
    goal = math.ceil(n / 2 - n ** (0.5 + 1 / (2 * d)))
    if goal < 1:
        raise FamilyTooSmallError(
            f"target matching size {goal} < 1 for n={n}; use the brute-force oracle")

    partition = refine_by_index(partition_low_stab(family, delta0), width)

    inc = family.vertex_incidence
    all_members = (1 << len(family.members)) - 1
    levels: dict[int, int] = {0: all_members}  # log weight -> member positions
    total_weight = W
    unmatched = set(family.ground.indices)
    pairs: list[tuple[int, int]] = []
    step_bound_misses = 0
    weight_checksum = W

    def weighted_stabs(stab_mask: int) -> int:
        total = 0
        for logw, bucket in levels.items():
            c = (stab_mask & bucket).bit_count()
            if c:
                total += c << logw
        return total

    for step in range(goal):
        best = None  # (weight, u, v, stab_mask)
        for part in partition.parts:
            live = [v for v in part if v in unmatched]
            for a_pos in range(len(live)):
                u = live[a_pos]
                inc_u = inc[u]
                for b_pos in range(a_pos + 1, len(live)):
                    v = live[b_pos]
                    stab_mask = inc_u ^ inc[v]
                    wt = weighted_stabs(stab_mask)
                    if best is None or (wt, u, v) < best[:3]:
                        best = (wt, u, v, stab_mask)
        if best is None:
            raise InfeasiblePartitionError(
                f"no same-part pair left at step {step} of {goal} "
                f"(constants too small for this family)")
        wt, u, v, stab_mask = best
        # Per-step diagnostic: the averaged bound the selection should beat.
        remaining = n - 2 * step
        if wt > 2 * cfg.c2 * total_weight / remaining ** (1 / d):
            step_bound_misses += 1
        pairs.append((u, v))
        unmatched.discard(u)
        unmatched.discard(v)
        weight_checksum += wt
        for logw in sorted(levels, reverse=True):
            moved = levels[logw] & stab_mask
            if moved:
                levels[logw + 1] = levels.get(logw + 1, 0) | moved
                levels[logw] &= ~moved
                if not levels[logw]:
                    del levels[logw]
        total_weight += wt

    kappa = {}
    max_kappa = 0
    for logw, bucket in levels.items():
        max_kappa = max(max_kappa, logw if bucket else 0)
        while bucket:
            low = bucket & -bucket
            kappa[family.members[low.bit_length() - 1].key] = logw
            bucket ^= low

    leftover = tuple(sorted(unmatched))
    diagnostics = MatchDiagnostics(
        delta0=delta0,
        width=width,
        steps=goal,
        max_span=max((b - a for a, b in pairs), default=0),
        max_pair_stab=max((stab_count(family, a, b) for a, b in pairs), default=0),
        max_kappa=max_kappa,
        step_bound_misses=step_bound_misses,
        final_weight_bits=total_weight.bit_length(),
        weight_trace_consistent=(weight_checksum == total_weight),
    )
    matching = LowStabMatching(pairs=tuple(pairs), leftover=leftover,
                               kappa=kappa, config=cfg, diagnostics=diagnostics)
    _check_bounds(family, matching, cfg, delta0, width)
    return matching


def _check_bounds(family: SetFamily, matching: LowStabMatching, cfg: MatchConfig,
                  delta0: float, width: float) -> None:
    n = family.ground.n
    d = cfg.d
    W = family.total_weight
    diag = matching.diagnostics
    checks = [
        ("index-span", diag.max_span, width),
        ("pair-stab-2delta", diag.max_pair_stab, 2 * delta0),
        ("pair-stab-c3", diag.max_pair_stab, cfg.c3 * W / n ** (1 / (2 * d))),
        ("member-kappa", diag.max_kappa, cfg.c3 * n ** (1 - 1 / d)),
        ("leftover", len(matching.leftover), 2 * n ** (0.5 + 1 / (2 * d))),
    ]
    for name, achieved, limit in checks:
        if achieved > limit:
            raise MatchingBoundError(f"{name}: achieved {achieved} > limit {limit}")
    # The largest weight is a summand of the total, so kappa is capped by
    # the total's bit length; both sides are exact integers.
    if diag.max_kappa > diag.final_weight_bits - 1:
        raise MatchingBoundError("kappa exceeds log2 of the final total weight")
    if not diag.weight_trace_consistent:
        raise MatchingBoundError("weight trace does not reproduce the final total")


@dataclass(frozen=True)
class CheckResult:
    name: str
    achieved: float
    limit: float
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "achieved": self.achieved,
                "limit": self.limit, "passed": self.passed}


@dataclass(frozen=True)
class MatchingReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def verify_matching(family: SetFamily, matching: LowStabMatching,
                    cfg: MatchConfig | None = None) -> MatchingReport:
    """Recompute every matching bound by brute force and report each.

    Checks: pairs plus leftover partition the ground set, the index-span
    bound, the pairwise stab bound at c3, the per-member stabbed-pairs
    bound at c3, kappa consistency against a direct recount, and the
    leftover size bound.
    """
    cfg = cfg or matching.config
    n = family.ground.n
    d = cfg.d
    W = family.total_weight

    used = [v for pair in matching.pairs for v in pair] + list(matching.leftover)
    covers = (len(used) == n and set(used) == set(family.ground.indices))

    max_span = max((b - a for a, b in matching.pairs), default=0)

    max_pair_stab = 0
    for a, b in matching.pairs:
        s = 0
        for m in family.members:
            if ((m.mask >> a) & 1) != ((m.mask >> b) & 1):
                s += 1 << m.logw
        max_pair_stab = max(max_pair_stab, s)

    recount: dict = {}
    for m in family.members:
        c = 0
        for a, b in matching.pairs:
            if ((m.mask >> a) & 1) != ((m.mask >> b) & 1):
                c += 1
        recount[m.key] = c
    kappa_consistent = (recount == dict(matching.kappa))
    max_kappa = max(recount.values(), default=0)

    checks = (
        CheckResult("partition-cover", float(len(used)), float(n), covers),
        CheckResult("index-span", float(max_span), n ** (1 - 1 / (2 * d)),
                    max_span <= n ** (1 - 1 / (2 * d))),
        CheckResult("pair-stab", float(max_pair_stab), cfg.c3 * W / n ** (1 / (2 * d)),
                    max_pair_stab <= cfg.c3 * W / n ** (1 / (2 * d))),
        CheckResult("member-kappa", float(max_kappa), cfg.c3 * n ** (1 - 1 / d),
                    max_kappa <= cfg.c3 * n ** (1 - 1 / d)),
        CheckResult("kappa-consistency", float(max_kappa), float(max_kappa), kappa_consistent),
        CheckResult("leftover", float(len(matching.leftover)), 2 * n ** (0.5 + 1 / (2 * d)),
                    len(matching.leftover) <= 2 * n ** (0.5 + 1 / (2 * d))),
    )
    return MatchingReport(checks=checks)
