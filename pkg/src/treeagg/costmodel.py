"""Aggregation-latency model and optimal-fanout search.

The model prices one slot of tree aggregation from three calibrated
per-operation costs (public-key aggregation pka, signature aggregation sga,
signature verification sgv), a one-way network latency, a core count, and the
block-execution time:

    agg = sum_{i=1..d+1} [ m*sgv + m'*sga + min(N, m*m'^i)*16*pka ]
          + m*sgv + m*sga + N*pka + sgv
    delay = agg / C + delta_execute + Delta * d

The top-of-formula sum prices the internal-aggregator layers, the trailing
terms the leaf aggregator and the leaf validator.  When a participation rate
is supplied, the leaf validator's N*pka is replaced by the cached-aggregate
correction: one subtraction per missing key plus C-1 recombinations.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .topology import REPRESENTATIVES, depth


@dataclass(frozen=True)
class CostModel:
    pka: float  # seconds per public-key aggregation op
    sga: float  # seconds per signature aggregation op
    sgv: float  # seconds per signature verification
    delta_net: float  # one-way network latency (seconds)
    cores: int
    delta_execute: float  # block execution time (seconds)

    def __post_init__(self):
        for name in ("pka", "sga", "sgv", "delta_net", "delta_execute"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.cores < 1:
            raise ValueError("cores must be >= 1")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CostModel":
        data = json.loads(text)
        return cls(**{k: data[k] for k in ("pka", "sga", "sgv", "delta_net", "cores", "delta_execute")})


@dataclass(frozen=True)
class DelayBreakdown:
    total: float
    compute: float  # serial aggregation work before dividing by cores
    network: float
    execute: float
    depth: int
    m: int
    leaf_pk_ops: int
    internal_pk_ops: int


def aggregation_delay(
    N: int,
    m: int,
    cm: CostModel,
    participation_rate: float | None = None,
) -> DelayBreakdown:
    """Modelled slot latency for aggregating N signatures at fanout m."""
    d = depth(N, m)
    m_prime = m // REPRESENTATIVES
    internal_pk = 0
    internal = 0.0
    for i in range(1, d + 2):
        pk_ops = min(N, m * m_prime**i) * 16
        internal_pk += pk_ops
        internal += m * cm.sgv + m_prime * cm.sga + pk_ops * cm.pka
    if participation_rate is None:
        leaf_pk = N
    else:
        if not 0 < participation_rate <= 1:
            raise ValueError("participation rate must be in (0, 1]")
        missing = N - int(participation_rate * N)
        leaf_pk = missing + cm.cores - 1
    agg = internal + m * cm.sgv + m * cm.sga + leaf_pk * cm.pka + cm.sgv
    total = agg / cm.cores + cm.delta_execute + cm.delta_net * d
    return DelayBreakdown(
        total=total,
        compute=agg,
        network=cm.delta_net * d,
        execute=cm.delta_execute,
        depth=d,
        m=m,
        leaf_pk_ops=leaf_pk,
        internal_pk_ops=internal_pk,
    )


def optimal_fanout(
    N: int,
    cm: CostModel,
    m_range,
    participation_rate: float | None = None,
) -> tuple[int, DelayBreakdown]:
    """The fanout minimizing modelled delay; ties resolve to the smaller m."""
    best = None
    seen_any = False
    for m in m_range:
        seen_any = True
        if m % REPRESENTATIVES or m // REPRESENTATIVES < 2:
            raise ValueError(f"fanout candidate {m} not divisible by {REPRESENTATIVES}")
        if m > N:
            continue
        delay = aggregation_delay(N, m, cm, participation_rate)
        if best is None or delay.total < best[1].total or (
            delay.total == best[1].total and m < best[0]
        ):
            best = (m, delay)
    if not seen_any:
        raise ValueError("empty fanout range")
    if best is None:
        raise ValueError("no feasible fanout in range")
    return best


def default_fanout_candidates(N: int) -> list[int]:
    """Fanouts worth searching: multiples of 16 from 32 up to ~sqrt(N)*2."""
    limit = max(64, 2 * int(N**0.5))
    return [m for m in range(32, min(N, limit) + 1, 16)]
