import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from shortedge import (
    GroundSet,
    InvalidPairError,
    SetFamily,
    dual_shatter_estimate,
    family_from_json,
    family_to_json,
    is_delta_separated,
    sauer_shelah_bound,
    stab_count,
    stabs,
    venn_cells,
)
from shortedge.oracle import brute_max_cells, brute_stab_counts

from conftest import small_family, triangle_setup


# -- hypothesis strategy: small unweighted families ------------------------

@st.composite
def families(draw, max_n=7, max_members=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    ground = GroundSet(n)
    k = draw(st.integers(min_value=1, max_value=max_members))
    items = []
    for idx in range(k):
        subset = draw(st.sets(st.integers(min_value=1, max_value=n)))
        items.append((idx, sorted(subset)))
    return SetFamily.of(ground, items)


class TestStabs:
    def test_single_endpoint_inside(self):
        g = GroundSet(2)
        f = SetFamily.of(g, [("a", [1])])
        assert stabs(f.member("a"), 1, 2) is True

    def test_both_endpoints_inside(self):
        g = GroundSet(2)
        f = SetFamily.of(g, [("a", [1, 2])])
        assert stabs(f.member("a"), 1, 2) is False

    def test_enumerated_membership(self):
        g = GroundSet(4)
        f = SetFamily.of(g, [("a", [1, 4])])
        # exactly one of {3, 4} is in {1, 4}
        assert stabs(f.member("a"), 3, 4) is True

    def test_equal_pair_rejected(self):
        g = GroundSet(3)
        f = SetFamily.of(g, [("a", [1])])
        with pytest.raises(InvalidPairError):
            stabs(f.member("a"), 2, 2)

    @given(families())
    @settings(max_examples=60, deadline=None)
    def test_matches_definition(self, fam):
        for m in fam.members:
            s = set(m.indices)
            for u, v in itertools.combinations(fam.ground.indices, 2):
                assert stabs(m, u, v) == ((u in s) != (v in s))


class TestStabCount:
    def test_two_singletons(self):
        g = GroundSet(2)
        f = SetFamily.of(g, [("a", [1]), ("b", [2])])
        assert stab_count(f, 1, 2) == 2

    def test_weighted_singleton(self):
        g = GroundSet(2)
        f = SetFamily.of(g, [("a", [1], 3)])
        assert stab_count(f, 1, 2) == 8

    def test_convex_triangle_family_matches_brute(self):
        labeling, fam = triangle_setup(__import__("shortedge").convex_complete(5))
        table = brute_stab_counts(fam)
        for (u, v), expected in table.items():
            assert stab_count(fam, u, v) == expected

    def test_equal_pair_rejected(self):
        f = small_family()
        with pytest.raises(InvalidPairError):
            stab_count(f, 1, 1)

    @given(families())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute(self, fam):
        table = brute_stab_counts(fam)
        for (u, v), expected in table.items():
            assert stab_count(fam, u, v) == expected

    @given(families())
    @settings(max_examples=60, deadline=None)
    def test_triangle_inequality_exact(self, fam):
        n = fam.ground.n
        for u, v, w in itertools.permutations(range(1, n + 1), 3):
            assert stab_count(fam, u, w) <= stab_count(fam, u, v) + stab_count(fam, v, w)


class TestVennCells:
    def test_two_singletons_over_three(self):
        g = GroundSet(3)
        f = SetFamily.of(g, [("a", [1]), ("b", [2])])
        assert venn_cells(f, ["a", "b"]) == 3

    def test_single_empty_set(self):
        g = GroundSet(5)
        f = SetFamily.of(g, [("a", [])])
        assert venn_cells(f, ["a"]) == 1

    def test_duplicates_add_no_cells(self):
        g = GroundSet(4)
        f = SetFamily.of(g, [("a", [1, 2]), ("b", [1, 2]), ("c", [1, 2])])
        assert venn_cells(f, ["a", "b", "c"]) == 2
        f_empty = SetFamily.of(g, [("a", []), ("b", [])])
        assert venn_cells(f_empty, ["a", "b"]) == 1
        f_full = SetFamily.of(g, [("a", [1, 2, 3, 4]), ("b", [1, 2, 3, 4])])
        assert venn_cells(f_full, ["a", "b"]) == 1

    def test_unknown_key(self):
        f = small_family()
        with pytest.raises(KeyError):
            venn_cells(f, ["nope"])

    @given(families(), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_ceiling_and_reordering(self, fam, rnd):
        keys = [m.key for m in fam.members]
        m = len(keys)
        cells = venn_cells(fam, keys)
        assert cells <= min(fam.ground.n, 2 ** m)
        shuffled = list(keys)
        rnd.shuffle(shuffled)
        assert venn_cells(fam, shuffled) == cells


class TestDualShatter:
    def test_pair_of_singletons(self):
        g = GroundSet(3)
        f = SetFamily.of(g, [("a", [1]), ("b", [2])])
        est = dual_shatter_estimate(f, 2, budget=None)
        assert est.value == 3 and est.exact

    def test_m1_nonempty_proper_member(self):
        f = small_family()
        est = dual_shatter_estimate(f, 1, budget=None)
        assert est.value == 2 and est.exact

    def test_triangle_k20_m3_within_quadratic_budget(self):
        from shortedge import random_geometric_complete
        labeling, fam = triangle_setup(random_geometric_complete(20, seed=3))
        est = dual_shatter_estimate(fam, 3, budget=None)
        assert est.exact
        assert est.value <= 45  # 5 * 3**2

    def test_out_of_range(self):
        f = small_family()
        with pytest.raises(ValueError):
            dual_shatter_estimate(f, 0)
        with pytest.raises(ValueError):
            dual_shatter_estimate(f, 4)

    def test_sampled_is_lower_bound_and_flagged(self):
        g = GroundSet(12)
        items = [(i, [v for v in range(1, 13) if (v * (i + 3)) % (i + 7) < 3])
                 for i in range(24)]
        f = SetFamily.of(g, items)
        full = dual_shatter_estimate(f, 4, budget=None)
        sampled = dual_shatter_estimate(f, 4, budget=50, seed=1)
        assert sampled.value <= full.value
        assert sampled.exact or sampled.sampled
        assert sampled.checked == 50 or sampled.exact

    @given(families(max_n=6, max_members=5))
    @settings(max_examples=40, deadline=None)
    def test_exhaustive_equals_brute(self, fam):
        for m in range(1, min(3, len(fam.members)) + 1):
            est = dual_shatter_estimate(fam, m, budget=None)
            assert est.exact
            assert est.value == brute_max_cells(fam, m)


class TestSauerShelah:
    def test_zero_dimension(self):
        assert sauer_shelah_bound(0, 5) == 1

    def test_d2_m4(self):
        assert sauer_shelah_bound(2, 4) == 1 + 4 + 6

    def test_full_power_set(self):
        assert sauer_shelah_bound(3, 3) == 8

    @given(st.integers(min_value=0, max_value=12), st.integers(min_value=0, max_value=12))
    def test_power_set_when_m_below_dimension(self, d_star, m):
        if m <= d_star:
            assert sauer_shelah_bound(d_star, m) == 2 ** m
        else:
            assert sauer_shelah_bound(d_star, m) == sum(math.comb(m, i) for i in range(d_star + 1))


class TestDeltaSeparated:
    def test_vacuous_small_sets(self):
        f = small_family()
        assert is_delta_separated(f, [], 99)
        assert is_delta_separated(f, [2], 99)

    def test_single_stabbing_set(self):
        g = GroundSet(2)
        f = SetFamily.of(g, [("a", [1])])
        assert is_delta_separated(f, [1, 2], 1)
        assert not is_delta_separated(f, [1, 2], 2)

    def test_zero_delta_always(self):
        f = small_family()
        assert is_delta_separated(f, [1, 2, 3, 4], 0)


class TestJson:
    def test_round_trip(self):
        g = GroundSet(4)
        f = SetFamily.of(g, [((1, 2), [1, 3], 2), ((1, 3), [], 0)])
        obj = family_to_json(f)
        assert obj["n"] == 4
        back = family_from_json(obj)
        assert [(m.key, m.indices, m.logw) for m in back.members] == \
               [(m.key, m.indices, m.logw) for m in f.members]

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            family_from_json({"members": []})
