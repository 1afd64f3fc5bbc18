"""Weighted set systems over an indexed ground set.

Ground-set elements are the integers 1..n (optionally carrying external
labels). A family member is a subset, stored as a bitmask over indices,
together with an identity key and a non-negative integer log2 weight: a
member with log_weight k counts as 2**k identical copies. Storing the
exponent instead of the multiplicity keeps repeated doubling cheap, and
every weighted tally below is computed in exact integer arithmetic, so
results never overflow and never round.

The stabbing count of a vertex pair (the weighted number of members
containing exactly one endpoint) is a pseudometric on the ground set and
is the distance underlying the packing and matching machinery in
:mod:`shortedge.packing`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidPairError

__all__ = [
    "GroundSet",
    "Member",
    "SetFamily",
    "ShatterEstimate",
    "stabs",
    "stab_count",
    "venn_cells",
    "dual_shatter_estimate",
    "sauer_shelah_bound",
    "is_delta_separated",
    "family_to_json",
    "family_from_json",
]

# A stabbing distance is an exact non-negative integer (sum of powers of two).
StabDistance = int


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class GroundSet:
    """Ordered ground set v_1 .. v_n, indexed 1..n.

    ``labels`` optionally attaches one external identifier per index
    (``labels[k-1]`` belongs to index k); they must be distinct.
    """

    n: int
    labels: tuple[Any, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ground set size must be a positive int, got {self.n!r}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.n:
                raise ValueError("labels length must equal n")
            if len(set(labels)) != self.n:
                raise ValueError("labels must be distinct")

    @property
    def indices(self) -> range:
        return range(1, self.n + 1)

    @property
    def full_mask(self) -> int:
        """Bitmask with bits 1..n set (bit 0 is never used)."""
        return ((1 << self.n) - 1) << 1

    def check_index(self, v: int) -> None:
        if not isinstance(v, int) or not 1 <= v <= self.n:
            raise InvalidPairError(f"vertex index {v!r} outside 1..{self.n}")

    def mask_of(self, indices: Iterable[int]) -> int:
        mask = 0
        for v in indices:
            self.check_index(v)
            mask |= 1 << v
        return mask


@dataclass(frozen=True)
class Member:
    """One family member: an identity key, a subset bitmask, a log2 weight."""

    key: Any
    mask: int
    logw: int = 0

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(_iter_bits(self.mask))

    @property
    def weight(self) -> int:
        return 1 << self.logw


def _as_mask(subset, ground: GroundSet | None = None) -> int:
    if isinstance(subset, Member):
        return subset.mask
    if isinstance(subset, int):
        return subset
    if ground is not None:
        return ground.mask_of(subset)
    mask = 0
    for v in subset:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class SetFamily:
    """Immutable weighted multiset of subsets of a ground set.

    Members keep insertion order; keys must be unique (two members may
    hold equal subsets under different keys, which is how unweighted
    multiset duplicates are represented).
    """

    ground: GroundSet
    members: tuple[Member, ...]

    def __post_init__(self):
        full = self.ground.full_mask
        seen = set()
        for m in self.members:
            if m.mask & ~full:
                raise ValueError(f"member {m.key!r} is not a subset of the ground set")
            if not isinstance(m.logw, int) or m.logw < 0:
                raise ValueError(f"member {m.key!r} has invalid log weight {m.logw!r}")
            if m.key in seen:
                raise ValueError(f"duplicate member key {m.key!r}")
            seen.add(m.key)

    @staticmethod
    def of(ground: GroundSet, items: Iterable[tuple]) -> "SetFamily":
        """Build from (key, indices) or (key, indices, logw) tuples."""
        members = []
        for item in items:
            key, indices = item[0], item[1]
            logw = item[2] if len(item) > 2 else 0
            members.append(Member(key=key, mask=ground.mask_of(indices), logw=logw))
        return SetFamily(ground=ground, members=tuple(members))

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def _key_to_pos(self) -> dict:
        return {m.key: p for p, m in enumerate(self.members)}

    def member(self, key) -> Member:
        return self.members[self._key_to_pos[key]]

    def __contains__(self, key) -> bool:
        return key in self._key_to_pos

    @cached_property
    def total_weight(self) -> int:
        """W = sum of 2**logw over members, exact."""
        return sum(1 << m.logw for m in self.members)

    @property
    def is_unweighted(self) -> bool:
        return all(m.logw == 0 for m in self.members)

    @cached_property
    def vertex_incidence(self) -> tuple[int, ...]:
        """Per-vertex bitmask over member positions (entry 0 unused)."""
        inc = [0] * (self.ground.n + 1)
        for pos, m in enumerate(self.members):
            bit = 1 << pos
            for v in _iter_bits(m.mask):
                inc[v] |= bit
        return tuple(inc)

    @cached_property
    def logw_buckets(self) -> dict[int, int]:
        """Map log weight -> bitmask of member positions holding it."""
        buckets: dict[int, int] = {}
        for pos, m in enumerate(self.members):
            buckets[m.logw] = buckets.get(m.logw, 0) | (1 << pos)
        return buckets

    @cached_property
    def distinct_masks(self) -> tuple[int, ...]:
        """Distinct member subsets, largest first (deterministic order)."""
        return tuple(sorted(set(m.mask for m in self.members),
                            key=lambda m: (-m.bit_count(), m)))


def stabs(subset, u: int, v: int, ground: GroundSet | None = None) -> bool:
    """True iff the subset contains exactly one of u, v."""
    if u == v:
        raise InvalidPairError(f"stabbing needs two distinct vertices, got {u} twice")
    mask = _as_mask(subset, ground)
    return ((mask >> u) & 1) != ((mask >> v) & 1)


def stab_count(family: SetFamily, u: int, v: int) -> StabDistance:
    """Weighted number of members stabbing the pair {u, v}, exact.

    Computed per log-weight bucket: the members stabbing {u, v} are the
    set bits of inc[u] XOR inc[v], and each bucket contributes
    popcount * 2**logw.
    """
    if u == v:
        raise InvalidPairError(f"stab count needs two distinct vertices, got {u} twice")
    family.ground.check_index(u)
    family.ground.check_index(v)
    inc = family.vertex_incidence
    stabbing = inc[u] ^ inc[v]
    total = 0
    for logw, bucket in family.logw_buckets.items():
        c = (stabbing & bucket).bit_count()
        if c:
            total += c << logw
    return total


def _cells_of_masks(masks: Sequence[int], full: int) -> int:
    """Number of nonempty equivalence classes induced by the given subsets."""
    parts = [full]
    for m in masks:
        nxt = []
        for p in parts:
            a = p & m
            if a:
                nxt.append(a)
            b = p ^ a
            if b:
                nxt.append(b)
        parts = nxt
    return len(parts)


def venn_cells(family: SetFamily, keys: Sequence) -> int:
    """Nonempty Venn-diagram cells of the selected members.

    Cells are equivalence classes of ground-set vertices under "belongs
    to the same selected members"; the all-outside class counts when it
    is nonempty. Invariant under reordering and duplication of keys.
    """
    if len(keys) < 1:
        raise ValueError("need at least one member key")
    masks = [family.member(k).mask for k in keys]
    return _cells_of_masks(masks, family.ground.full_mask)


@dataclass(frozen=True)
class ShatterEstimate:
    """Result of a dual-shatter computation.

    ``exact`` is True when the value is the true maximum over all
    m-subsets (exhaustive scan, a scan cut short at the min(n, 2^m)
    ceiling, or a family with at most m distinct subsets); otherwise the
    value is a lower bound obtained from sampled subfamilies.
    """

    value: int
    exact: bool
    checked: int

    @property
    def sampled(self) -> bool:
        return not self.exact


def _signs_to_u64(masks: Sequence[int]) -> np.ndarray:
    return np.array(masks, dtype=np.uint64)


def _max_cells_m1(distinct: Sequence[int], full: int) -> tuple[int, int]:
    best = 1
    for a in distinct:
        cells = (1 if a else 0) + (1 if a != full else 0)
        best = max(best, max(cells, 1))
        if best == 2:
            break
    return best, len(distinct)


def _max_cells_m2_np(arr: np.ndarray, full: int, ceiling: int) -> tuple[int, int]:
    best = 0
    fullu = np.uint64(full)
    checked = 0
    for i in range(len(arr) - 1):
        a = arr[i]
        rest = arr[i + 1:]
        checked += len(rest)
        r0 = a & rest
        r1 = a & ~rest
        r2 = rest & ~a & fullu
        r3 = fullu & ~(a | rest)
        cells = ((r0 != 0).astype(np.int8) + (r1 != 0) + (r2 != 0) + (r3 != 0))
        m = int(cells.max())
        if m > best:
            best = m
            if best >= ceiling:
                return best, checked
    return best, checked


def _max_cells_m3_np(arr: np.ndarray, full: int, ceiling: int) -> tuple[int, int]:
    best = 0
    fullu = np.uint64(full)
    checked = 0
    n_masks = len(arr)
    for i in range(n_masks - 2):
        a = arr[i]
        for j in range(i + 1, n_masks - 1):
            b = arr[j]
            r0 = np.uint64(a & b)
            r1 = np.uint64(a & ~b)
            r2 = np.uint64(b & ~a & fullu)
            r3 = np.uint64(fullu & ~(a | b))
            pair_cells = int(r0 != 0) + int(r1 != 0) + int(r2 != 0) + int(r3 != 0)
            # A third set can at most double the pair's cell count.
            if 2 * pair_cells <= best:
                continue
            rest = arr[j + 1:]
            checked += len(rest)
            nrest = ~rest
            cells = ((r0 & rest != 0).astype(np.int8) + (r0 & nrest != 0)
                     + (r1 & rest != 0) + (r1 & nrest != 0)
                     + (r2 & rest != 0) + (r2 & nrest != 0)
                     + (r3 & rest != 0) + (r3 & nrest != 0))
            m = int(cells.max()) if len(cells) else 0
            if m > best:
                best = m
                if best >= ceiling:
                    return best, checked
    return best, checked


def dual_shatter_estimate(family: SetFamily, m: int,
                          budget: int | None = 100_000,
                          seed: int = 0) -> ShatterEstimate:
    """Max number of Venn cells over m-element subfamilies.

    Exhaustive (exact) whenever the number of distinct-subset
    combinations fits the budget, whenever at most m distinct subsets
    exist, or for m <= 3 on ground sets of at most 63 vertices where a
    vectorized full scan is feasible; ``budget=None`` forces an
    exhaustive scan regardless of cost. Otherwise the result is the max
    over ``budget`` seeded random m-subsets and is flagged as sampled.

    Duplicated subsets never add cells, so scanning distinct subsets
    (padding with duplicates when fewer than m exist) yields the same
    maximum as scanning all m-subsets of the multiset.
    """
    M = len(family.members)
    if not 1 <= m <= M:
        raise ValueError(f"m must be in 1..{M}, got {m}")
    full = family.ground.full_mask
    n = family.ground.n
    ceiling = min(n, 1 << m)
    distinct = family.distinct_masks
    D = len(distinct)

    if D <= m:
        return ShatterEstimate(_cells_of_masks(distinct, full), exact=True, checked=1)

    if m == 1:
        best, checked = _max_cells_m1(distinct, full)
        return ShatterEstimate(best, exact=True, checked=checked)

    use_np = n <= 63 and m in (2, 3)
    total_combos = math.comb(D, m)

    if use_np:
        arr = _signs_to_u64(distinct)
        if m == 2:
            best, checked = _max_cells_m2_np(arr, full, ceiling)
        else:
            best, checked = _max_cells_m3_np(arr, full, ceiling)
        return ShatterEstimate(best, exact=True, checked=checked)

    if budget is None or total_combos <= budget:
        best = 0
        checked = 0
        for combo in itertools.combinations(distinct, m):
            checked += 1
            c = _cells_of_masks(combo, full)
            if c > best:
                best = c
                if best >= ceiling:
                    break
        return ShatterEstimate(best, exact=True, checked=checked)

    rng = random.Random(seed)
    best = 0
    for _ in range(budget):
        combo = rng.sample(distinct, m)
        c = _cells_of_masks(combo, full)
        if c > best:
            best = c
            if best >= ceiling:
                return ShatterEstimate(best, exact=True, checked=budget)
    return ShatterEstimate(best, exact=False, checked=budget)


def sauer_shelah_bound(d_star: int, m: int) -> int:
    """sum_{i=0}^{d*} C(m, i), exact."""
    if d_star < 0 or m < 0:
        raise ValueError("arguments must be non-negative")
    return sum(math.comb(m, i) for i in range(min(d_star, m) + 1))


def is_delta_separated(family: SetFamily, vertices: Iterable[int], delta: float) -> bool:
    """True iff every distinct pair of the given vertices has
    stab_count >= delta."""
    vs = sorted(set(vertices))
    for a_pos in range(len(vs)):
        for b_pos in range(a_pos + 1, len(vs)):
            if stab_count(family, vs[a_pos], vs[b_pos]) < delta:
                return False
    return True


def _key_to_json(key):
    if isinstance(key, tuple):
        return list(key)
    return key


def _key_from_json(key):
    if isinstance(key, list):
        return tuple(key)
    return key


def family_to_json(family: SetFamily) -> dict:
    """Serialize per the wire schema
    {"n": int, "members": [{"key", "set", "logw"}]}."""
    return {
        "n": family.ground.n,
        "members": [
            {"key": _key_to_json(m.key), "set": sorted(m.indices), "logw": m.logw}
            for m in family.members
        ],
    }


def family_from_json(obj: dict) -> SetFamily:
    if not isinstance(obj, dict) or "n" not in obj or "members" not in obj:
        raise ValueError("set family JSON needs 'n' and 'members'")
    ground = GroundSet(int(obj["n"]))
    items = []
    for entry in obj["members"]:
        items.append((_key_from_json(entry["key"]), entry["set"], int(entry.get("logw", 0))))
    return SetFamily.of(ground, items)
