import math

import pytest

from treeagg.costmodel import (
    CostModel,
    aggregation_delay,
    default_fanout_candidates,
    optimal_fanout,
)
from treeagg.topology import depth

# blst-class reference constants (4-core validator hardware)
REFERENCE = CostModel(pka=0.2e-6, sga=1.5e-6, sgv=1.4e-3, delta_net=0.1, cores=4, delta_execute=0.1)


def spec_formula(N, m, cm, leaf_pk=None):
    """The delay formula written out independently, straight from its text."""
    d = depth(N, m)
    mp = m // 16
    agg = 0.0
    for i in range(1, d + 2):
        agg += m * cm.sgv + mp * cm.sga + min(N, m * mp**i) * 16 * cm.pka
    agg += m * cm.sgv + m * cm.sga + (N if leaf_pk is None else leaf_pk) * cm.pka + cm.sgv
    return agg / cm.cores + cm.delta_execute + cm.delta_net * d


class TestCostModel:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            CostModel(pka=0, sga=1e-6, sgv=1e-3, delta_net=0.1, cores=4, delta_execute=0.1)
        with pytest.raises(ValueError):
            CostModel(pka=1e-6, sga=1e-6, sgv=1e-3, delta_net=0.1, cores=0, delta_execute=0.1)

    def test_json_roundtrip(self):
        assert CostModel.from_json(REFERENCE.to_json()) == REFERENCE


class TestAggregationDelay:
    def test_latency_only_when_crypto_free(self):
        tiny = 1e-30
        cm = CostModel(pka=tiny, sga=tiny, sgv=tiny, delta_net=0.1, cores=4, delta_execute=0.25)
        bd = aggregation_delay(65536, 256, cm)
        assert bd.total == pytest.approx(0.25 + 0.1 * 3, abs=1e-12)

    def test_doubling_cores_halves_compute_only(self):
        cm2 = CostModel(pka=0.2e-6, sga=1.5e-6, sgv=1.4e-3, delta_net=0.1, cores=8, delta_execute=0.1)
        a = aggregation_delay(65536, 256, REFERENCE)
        b = aggregation_delay(65536, 256, cm2)
        assert b.compute == a.compute
        assert b.total - (b.execute + b.network) == pytest.approx(
            (a.total - (a.execute + a.network)) / 2
        )

    def test_matches_independent_formula(self):
        for N, m in [(4096, 256), (65536, 256), (10**6, 256), (10**6, 128), (300000, 320)]:
            assert aggregation_delay(N, m, REFERENCE).total == pytest.approx(
                spec_formula(N, m, REFERENCE)
            )

    def test_million_scale_under_four_seconds(self):
        bd = aggregation_delay(10**6, 256, REFERENCE)
        assert bd.depth == 4
        assert bd.total < 4.0

    def test_participation_rate_shrinks_leaf_term(self):
        full = aggregation_delay(10**6, 256, REFERENCE)
        relaxed = aggregation_delay(10**6, 256, REFERENCE, participation_rate=0.99)
        assert relaxed.leaf_pk_ops == 10**4 + REFERENCE.cores - 1
        assert relaxed.total < full.total
        with pytest.raises(ValueError):
            aggregation_delay(10**6, 256, REFERENCE, participation_rate=0.0)


class TestOptimalFanout:
    def test_single_candidate(self):
        m, bd = optimal_fanout(65536, REFERENCE, [256])
        assert m == 256 and bd.m == 256

    def test_matches_bruteforce_argmin(self):
        candidates = default_fanout_candidates(65536)
        m_star, bd = optimal_fanout(65536, REFERENCE, candidates)
        oracle = min(
            ((m, spec_formula(65536, m, REFERENCE)) for m in candidates if m <= 65536),
            key=lambda t: (t[1], t[0]),
        )
        assert m_star == oracle[0]
        assert bd.total == pytest.approx(oracle[1])

    def test_million_scale_band(self):
        m_star, _ = optimal_fanout(10**6, REFERENCE, default_fanout_candidates(10**6))
        assert 256 <= m_star <= 320

    def test_empty_range_rejected(self):
        with pytest.raises(ValueError):
            optimal_fanout(65536, REFERENCE, [])

    def test_invalid_candidate_rejected(self):
        with pytest.raises(ValueError):
            optimal_fanout(65536, REFERENCE, [100])
