import numpy as np
import pytest

from treeagg.topology import EpochPlan, SlotPlan, TreeParams, depth


class TestDepth:
    def test_million_scale(self):
        assert depth(10**6, 256) == 4

    def test_smallest_tree(self):
        assert depth(256, 256) == 2

    def test_structural_counts(self):
        assert depth(65536, 256) == 3  # 256 leaf groups -> 16 -> proposer
        assert depth(4096, 256) == 2

    def test_infeasible(self):
        with pytest.raises(ValueError):
            depth(100, 256)  # N < m
        with pytest.raises(ValueError):
            depth(1000, 100)  # not divisible by 16
        with pytest.raises(ValueError):
            depth(1000, 16)  # internal fanout 1


class TestTreeParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            TreeParams(N=100, m=256)
        with pytest.raises(ValueError):
            TreeParams(N=4096, m=100)
        with pytest.raises(ValueError):
            TreeParams(N=64, m=32)  # cannot fill a committee


class TestSlotPlan:
    def test_deterministic(self):
        params = TreeParams(N=2048, m=256)
        a = SlotPlan(5, 3, params)
        b = SlotPlan(5, 3, params)
        assert a.to_json() == b.to_json()

    def test_different_slots_differ(self):
        params = TreeParams(N=2048, m=256)
        assert SlotPlan(5, 0, params).to_json() != SlotPlan(5, 1, params).to_json()

    def test_structure_4096(self):
        plan = SlotPlan(0, 0, TreeParams(N=4096, m=256))
        assert plan.leaf_groups == 16
        assert plan.depth == 2
        assert plan.m_prime == 16
        assert plan.committee_count(1) == 16

    def test_million_scale_leaf_groups(self):
        # structural check only; no rosters needed for 10^6 before it's slow
        assert depth(10**6, 256) == 4
        assert 16 ** (depth(10**6, 256) - 1) == 4096

    def test_leaf_partition(self):
        for n in (2048, 3000, 4096):
            plan = SlotPlan(1, 0, TreeParams(N=n, m=256))
            assert sorted(plan.leaf_perm.tolist()) == list(range(n))
            assert plan.group_offsets[0] == 0 and plan.group_offsets[-1] == n
            sizes = np.diff(plan.group_offsets)
            assert sizes.max() - sizes.min() <= 1
            assert sizes.max() <= 256

    def test_committee_shape(self):
        plan = SlotPlan(2, 0, TreeParams(N=65536, m=256))
        assert plan.depth == 3
        assert plan.committee_count(1) == 256 and plan.committee_count(2) == 16
        for layer in (1, 2):
            rosters = plan.committees[layer]
            assert rosters.shape[1] == 128
            for row in rosters[:8]:
                assert len(set(row.tolist())) == 128
            reps = plan.representatives_of(layer, 0)
            assert len(reps) == 16
            assert set(reps.tolist()) <= set(plan.members(layer, 0).tolist())

    def test_spans_tile_position_space(self):
        plan = SlotPlan(3, 0, TreeParams(N=65536, m=256))
        for layer in (1, 2):
            spans = [plan.span(layer, i) for i in range(plan.committee_count(layer))]
            assert spans[0][0] == 0 and spans[-1][1] == 65536
            for (a, b), (c, d) in zip(spans, spans[1:]):
                assert b == c


@pytest.fixture(scope="module")
def plan():
    return SlotPlan(4, 0, TreeParams(N=4096, m=256))


class TestAdjacency:

    def test_every_validator_is_a_leaf(self, plan):
        for v in (0, 99, 4095):
            roles = plan.adjacency(v)
            leafs = [r for r in roles if r.role == "LEAF"]
            assert len(leafs) == 1
            assert leafs[0].parent == (1, plan.group_of_position(plan.position_of(v)))
            assert leafs[0].child_committees == ()

    def test_leaf_aggregator_children(self, plan):
        rep = int(plan.representatives_of(1, 3)[0])
        roles = [r for r in plan.adjacency(rep) if r.role == "LEAF_AGGREGATOR" and r.index == 3]
        assert roles
        lo, hi = roles[0].leaf_children
        assert (lo, hi) == plan.group_window(3)
        assert hi - lo <= 256

    def test_proposer_has_m_prime_children_no_parent(self, plan):
        roles = [r for r in plan.adjacency(plan.proposer) if r.role == "PROPOSER"]
        assert len(roles) == 1
        assert roles[0].parent is None
        assert len(roles[0].child_committees) == plan.m_prime

    def test_unknown_id_rejected(self, plan):
        with pytest.raises(ValueError):
            plan.adjacency(4096)

    def test_internal_aggregator_children(self):
        plan = SlotPlan(6, 0, TreeParams(N=65536, m=256))
        rep = int(plan.representatives_of(2, 5)[0])
        roles = [r for r in plan.adjacency(rep) if r.role == "INTERNAL_AGGREGATOR" and r.index == 5]
        assert roles
        kids = roles[0].child_committees
        assert kids == tuple((1, 5 * 16 + j) for j in range(16))


class TestShuffleUniformity:
    def test_representative_duty_chi_square(self):
        # Over many seeds, every validator should hold representative duty
        # equally often: chi-square against the uniform expectation.
        N = 256
        params = TreeParams(N=N, m=32)
        counts = np.zeros(N)
        seeds = 120
        for seed in range(seeds):
            plan = SlotPlan(seed, 0, params)
            for layer, rosters in plan.committees.items():
                for row in rosters[:, :16]:
                    counts[row] += 1
        expected = counts.sum() / N
        chi2 = ((counts - expected) ** 2 / expected).sum()
        # df = 255: mean 255, sd ~22.6; allow a generous deterministic margin
        assert chi2 < 255 + 6 * 22.6, f"chi2={chi2:.1f} (duty assignment skewed)"

    def test_leaf_position_uniformity(self):
        N = 128
        hits = np.zeros((N,), dtype=np.int64)
        seeds = 200
        for seed in range(seeds):
            plan = SlotPlan(seed, 0, TreeParams(N=N, m=32))
            hits[plan.leaf_perm[:N // 2]] += 1  # how often in the first half
        expected = seeds / 2
        chi2 = (((hits - expected) ** 2) / expected).sum()
        assert chi2 < 127 + 6 * 16


class TestEpochPlan:
    def test_lazy_and_deterministic(self):
        epoch = EpochPlan(seed=9, params=TreeParams(N=2048, m=256), slots=4)
        again = EpochPlan(seed=9, params=TreeParams(N=2048, m=256), slots=4)
        assert epoch.slot_plan(2).to_json() == again.slot_plan(2).to_json()
        assert epoch.proposers() == again.proposers()
        with pytest.raises(ValueError):
            epoch.slot_plan(4)
