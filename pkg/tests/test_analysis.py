import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeagg import analysis
from treeagg.analysis import (
    ResilienceParams,
    all_reps_faulty,
    committee_capture_probability,
    daily_censorship,
    economic_loss,
    ethereum_resilience,
    hypergeom_pmf,
    per_slot_inclusion,
    resilience,
    resilience_curve,
    resilience_report,
    supermajority_tail,
)


def enumerate_hypergeom(N, f, n):
    """Brute-force committee enumeration: exact PMF over k by counting."""
    marked = set(range(f))
    counts = [0] * (n + 1)
    total = 0
    for committee in itertools.combinations(range(N), n):
        counts[sum(1 for v in committee if v in marked)] += 1
        total += 1
    return [Fraction(c, total) for c in counts]


class TestHypergeom:
    def test_matches_enumeration_small(self):
        for N, f, n in [(6, 2, 3), (8, 5, 4), (10, 3, 6), (12, 6, 5)]:
            oracle = enumerate_hypergeom(N, f, n)
            for k in range(n + 1):
                assert hypergeom_pmf(N, f, n, k) == oracle[k]

    def test_impossible_draws_are_zero(self):
        assert hypergeom_pmf(20, 3, 10, 4) == 0  # k > f
        assert hypergeom_pmf(20, 18, 10, 2) == 0  # too few unmarked

    def test_exhaustive_draw(self):
        assert hypergeom_pmf(10, 5, 10, 5) == 1

    def test_pmf_sums_to_one(self):
        for N, f, n in [(25, 8, 12), (1000, 333, 128)]:
            assert sum(hypergeom_pmf(N, f, n, k) for k in range(n + 1)) == 1

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            hypergeom_pmf(10, 11, 5, 2)
        with pytest.raises(ValueError):
            hypergeom_pmf(10, 5, 11, 2)
        with pytest.raises(ValueError):
            hypergeom_pmf(10, 5, 5, 6)
        with pytest.raises(ValueError):
            hypergeom_pmf(10, 5, 5, -1)


class TestSupermajorityTail:
    def test_million_scale_value(self):
        tail = float(supermajority_tail(10**6, 10**6 // 3, 128))
        assert tail == pytest.approx(5.55e-15, rel=0.05)

    def test_all_faulty(self):
        assert supermajority_tail(100, 100, 30) == 1

    def test_matches_enumeration(self):
        N, f, n = 12, 7, 6
        oracle = enumerate_hypergeom(N, f, n)
        lo = math.ceil(2 * n / 3)
        assert supermajority_tail(N, f, n) == sum(oracle[lo:], Fraction(0))


class TestRepresentativeCensorship:
    def test_headline_value(self):
        v = float(all_reps_faulty(Fraction(1, 3), Fraction(1, 8), 128))
        assert v == pytest.approx(1.45e-5, rel=0.01)

    def test_no_corruption(self):
        assert all_reps_faulty(Fraction(0), Fraction(1, 8), 16) == Fraction(7, 8) ** 16

    def test_monte_carlo_small_committee(self):
        from treeagg.prf import Stream

        s = Stream("reps-faulty-mc")
        n, trials = 8, 200_000
        hits = 0
        for _ in range(trials):
            ok = True
            for _ in range(n):
                faulty = s.random() < 1 / 3
                selected = s.random() < 1 / 8
                if selected and not faulty:
                    ok = False
            hits += ok
        expected = float(all_reps_faulty(Fraction(1, 3), Fraction(1, 8), n))
        sigma = math.sqrt(expected * (1 - expected) / trials)
        assert abs(hits / trials - expected) < 3 * sigma + 1e-9

    def test_daily_compounding(self):
        p = float(all_reps_faulty(Fraction(1, 3), Fraction(1, 8), 128))
        daily = daily_censorship(p)
        assert daily.probability == pytest.approx(0.9987, abs=5e-4)
        assert daily.expected_events > 6
        assert daily_censorship(0.0).probability == 0
        tiny = daily_censorship(0.01, slots_per_day=10, committees_per_slot=2)
        assert tiny.probability == pytest.approx(1 - 0.99**20)


class TestEconomicLoss:
    def test_loss_factor_exact(self):
        r = economic_loss(0.03, 2465 / 0.03, N=10**6)
        assert r.loss_factor == Fraction(2, 27)

    def test_aggregate_exceeds_136m(self):
        r = economic_loss(0.03, 2465 / 0.03, N=10**6)
        assert r.annual_reward == pytest.approx(2465.0)
        assert r.aggregate_loss > 136e6

    def test_zero_reward(self):
        r = economic_loss(0.0, 80000, N=1000)
        assert r.per_validator_loss == 0 and r.aggregate_loss == 0

    def test_aggregate_consistent_with_per_validator(self):
        r = economic_loss(0.03, 2465 / 0.03, N=90, honest_fraction=Fraction(2, 3))
        assert r.aggregate_loss == pytest.approx(r.per_validator_loss * 60)


class TestCommitteeCapture:
    def test_one_third_corruption(self):
        v = float(committee_capture_probability(10**6, 10**6 // 3))
        assert v == pytest.approx(0.998, abs=1e-3)

    def test_five_percent_corruption(self):
        v = float(committee_capture_probability(10**6, 50_000))
        assert v == pytest.approx(0.548, abs=5e-3)

    def test_no_corruption(self):
        assert committee_capture_probability(10**6, 0) == 0

    def test_monotone_in_f(self):
        vals = [committee_capture_probability(2000, f) for f in (0, 50, 200, 400, 660)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


class TestInclusionBound:
    def test_depth_two(self):
        assert per_slot_inclusion(2) == Fraction(2, 3) * Fraction(32, 45)
        assert float(per_slot_inclusion(2)) == pytest.approx(0.4741, abs=1e-4)

    def test_depth_three_and_four(self):
        assert float(per_slot_inclusion(3)) == pytest.approx(0.3160, abs=1e-4)
        assert float(per_slot_inclusion(4)) == pytest.approx(0.2107, abs=1e-4)

    def test_rejects_shallow_tree(self):
        with pytest.raises(ValueError):
            per_slot_inclusion(1)


class TestWindowResilience:
    def test_headline_two_epochs(self):
        r = resilience(per_slot_inclusion(4), 64, 4096)
        assert r.no_committee_censored == pytest.approx(0.998, abs=1e-3)

    def test_certain_inclusion(self):
        r = resilience(1.0, 10, 5)
        assert r.window_loss == 0 and r.no_committee_censored == 1

    def test_single_slot_single_group(self):
        p = 0.37
        r = resilience(p, 1, 1)
        assert 1 - r.window_loss == pytest.approx(p)
        assert r.no_committee_censored == pytest.approx(p)

    @given(
        p=st.floats(0.01, 0.99),
        k=st.integers(1, 200),
        L=st.integers(1, 10_000),
    )
    @settings(max_examples=60)
    def test_monotonicity(self, p, k, L):
        base = resilience(p, k, L)
        assert resilience(p, k + 1, L).window_loss <= base.window_loss
        assert resilience(p, k, L + 1).no_committee_censored <= base.no_committee_censored
        assert 0 <= base.window_loss <= 1
        assert 0 <= base.no_committee_censored <= 1


class TestEthereumResilience:
    def test_two_epochs(self):
        assert ethereum_resilience(2) == pytest.approx(0.889, abs=1e-3)

    def test_six_epochs_crosses_tree_level(self):
        assert ethereum_resilience(6) >= 0.998

    def test_single_epoch(self):
        assert ethereum_resilience(1) == pytest.approx(2 / 3)


class TestResilienceCurve:
    def params(self):
        return ResilienceParams(N=10**6, f=10**6 // 3, m=256, depth=4, k=64, leaf_groups=4096)

    def test_tree_column_weakly_increasing(self):
        rows = resilience_curve(self.params(), range(1, 129))
        tree = [r["tree_resilience"] for r in rows]
        assert all(a <= b + 1e-15 for a, b in zip(tree, tree[1:]))

    def test_tree_dominates_flat_baseline(self):
        rows = resilience_curve(self.params(), range(1, 129))
        assert all(r["tree_resilience"] >= r["ethereum_resilience"] for r in rows)

    def test_both_approach_one(self):
        (row,) = resilience_curve(self.params(), [4096])
        assert row["tree_resilience"] > 0.999999
        assert row["ethereum_resilience"] > 0.999999


def test_report_bundles_everything():
    params = ResilienceParams(N=10**6, f=10**6 // 3, m=256, depth=4, k=64, leaf_groups=4096)
    report = resilience_report(params)
    assert report.no_committee_censored == pytest.approx(0.998, abs=1e-3)
    assert report.ethereum_window_resilience == pytest.approx(0.889, abs=1e-3)
    assert report.committee_capture == pytest.approx(0.998, abs=1e-3)
    assert report.daily.expected_events > 6
    for value in (
        report.per_slot_inclusion,
        report.window_loss,
        report.no_committee_censored,
        report.supermajority_tail,
        report.all_reps_faulty,
    ):
        assert 0 <= value <= 1
