"""Per-slot aggregation trees: leaf groups, committee layers, and a proposer.

Every slot reshuffles all N validators into leaf positions, draws aggregator
committees for each tree node, and picks one proposer.  The shape is fixed by
the fanout m: leaf groups feed committees of 128 with 16 representatives, and
every node above the leaf-aggregator layer has exactly m' = m/16 child
committees.  The leaf-group count is rounded up to a power of m' so that the
structure stays exact for any N; groups then hold ceil(N/L) or floor(N/L)
consecutive positions.

Depth d counts edge layers: leaves sit at distance d from the proposer, so
d = ceil(log_{m'}(ceil(N/m))) + 1 (at least 2: one vote hop plus one
aggregate hop).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .prf import Stream

SLOTS_PER_EPOCH = 32
COMMITTEE_SIZE = 128
REPRESENTATIVES = 16


@dataclass(frozen=True)
class TreeParams:
    N: int
    m: int
    committee_size: int = COMMITTEE_SIZE
    representatives: int = REPRESENTATIVES

    def __post_init__(self):
        if self.m % self.representatives:
            raise ValueError(f"fanout {self.m} not divisible by {self.representatives}")
        if self.m // self.representatives < 2:
            raise ValueError("internal fanout m/16 must be at least 2")
        if self.N < self.m:
            raise ValueError(f"N={self.N} smaller than fanout m={self.m}")
        if self.N < self.committee_size:
            raise ValueError(f"N={self.N} cannot fill a {self.committee_size}-member committee")
        if self.representatives > self.committee_size:
            raise ValueError("more representatives than committee members")

    @property
    def m_prime(self) -> int:
        return self.m // self.representatives


def depth(N: int, m: int, representatives: int = REPRESENTATIVES) -> int:
    """Tree depth for N validators at fanout m (leaves at depth d, proposer
    at depth 0)."""
    m_prime = m // representatives
    if m % representatives or m_prime < 2 or N < m:
        raise ValueError(f"infeasible parameters N={N}, m={m}")
    groups = -(-N // m)
    t = 1
    while m_prime**t < groups:
        t += 1
    return t + 1


@dataclass(frozen=True)
class Adjacency:
    """Connection set for one role instance of one validator."""

    role: str  # LEAF | LEAF_AGGREGATOR | INTERNAL_AGGREGATOR | PROPOSER
    layer: int
    index: int
    parent: tuple | None  # (layer, committee index) or None at the root
    child_committees: tuple  # committee (layer, index) pairs
    leaf_children: tuple  # position range (lo, hi) for leaf aggregators


class SlotPlan:
    """Everything one slot needs: the leaf permutation, group windows,
    committee rosters per layer, and the proposer."""

    def __init__(self, seed: int, slot: int, params: TreeParams):
        self.seed = seed
        self.slot = slot
        self.params = params
        N, m = params.N, params.m
        self.depth = depth(N, m, params.representatives)
        self.m_prime = params.m_prime
        self.leaf_groups = self.m_prime ** (self.depth - 1)

        perm_stream = Stream(seed, "slot", slot, "leaf-shuffle")
        self.leaf_perm = perm_stream.permutation(N)
        self._position_of = None

        base, extra = divmod(N, self.leaf_groups)
        sizes = np.full(self.leaf_groups, base, dtype=np.int64)
        sizes[:extra] += 1
        self.group_offsets = np.zeros(self.leaf_groups + 1, dtype=np.int64)
        np.cumsum(sizes, out=self.group_offsets[1:])

        # committee rosters per layer: layer 1 = leaf aggregators (one per
        # group), layers 2..depth-1 internal; each roster row is 128 members,
        # the first 16 of which act as representatives.
        self.committees: dict[int, np.ndarray] = {}
        count = self.leaf_groups
        for layer in range(1, self.depth):
            self.committees[layer] = self._draw_committees(layer, count)
            count //= self.m_prime
        self.proposer = int(Stream(seed, "slot", slot, "proposer").randbelow(N))
        self._rep_index: dict[int, list] | None = None

    def _draw_committees(self, layer: int, count: int) -> np.ndarray:
        size = self.params.committee_size
        N = self.params.N
        stream = Stream(self.seed, "slot", self.slot, "committees", layer)
        # oversample, then keep the first `size` distinct draws per committee
        oversample = size + 32 + size // 4
        rows = np.empty((count, size), dtype=np.int64)
        raw = np.frombuffer(stream.take(8 * count * oversample), dtype=">u8")
        raw = (raw % np.uint64(N)).astype(np.int64).reshape(count, oversample)
        for i in range(count):
            seen: set[int] = set()
            row = []
            for v in raw[i]:
                if v not in seen:
                    seen.add(v)
                    row.append(v)
                    if len(row) == size:
                        break
            while len(row) < size:  # rare: oversample exhausted
                v = int(stream.randbelow(N))
                if v not in seen:
                    seen.add(v)
                    row.append(v)
            rows[i] = row
        return rows

    # -- lookups -----------------------------------------------------------

    def position_of(self, validator_id: int) -> int:
        if self._position_of is None:
            inv = np.empty(self.params.N, dtype=np.int64)
            inv[self.leaf_perm] = np.arange(self.params.N, dtype=np.int64)
            self._position_of = inv
        return int(self._position_of[validator_id])

    def validator_at(self, position: int) -> int:
        return int(self.leaf_perm[position])

    def group_of_position(self, position: int) -> int:
        return int(np.searchsorted(self.group_offsets, position, side="right") - 1)

    def group_window(self, group: int) -> tuple[int, int]:
        return int(self.group_offsets[group]), int(self.group_offsets[group + 1])

    def committee_count(self, layer: int) -> int:
        return self.leaf_groups // self.m_prime ** (layer - 1)

    def members(self, layer: int, index: int) -> np.ndarray:
        return self.committees[layer][index]

    def representatives_of(self, layer: int, index: int) -> np.ndarray:
        return self.committees[layer][index][: self.params.representatives]

    def span(self, layer: int, index: int) -> tuple[int, int]:
        """Position window covered by committee (layer, index)."""
        groups_per = self.m_prime ** (layer - 1)
        lo_group = index * groups_per
        hi_group = min((index + 1) * groups_per, self.leaf_groups)
        return int(self.group_offsets[lo_group]), int(self.group_offsets[hi_group])

    def child_committees(self, layer: int, index: int) -> list[tuple[int, int]]:
        if layer <= 1:
            return []
        return [(layer - 1, index * self.m_prime + j) for j in range(self.m_prime)]

    def parent_of(self, layer: int, index: int) -> tuple[int, int] | None:
        """Parent committee of committee (layer, index); None when the parent
        is the proposer."""
        if layer >= self.depth - 1:
            return None
        return (layer + 1, index // self.m_prime)

    # -- adjacency ------------------------------------------------------------

    def _build_rep_index(self):
        idx: dict[int, list] = {}
        for layer, rosters in self.committees.items():
            reps = rosters[:, : self.params.representatives]
            for committee_index, row in enumerate(reps):
                for v in row:
                    idx.setdefault(int(v), []).append((layer, committee_index))
        self._rep_index = idx

    def adjacency(self, validator_id: int) -> list[Adjacency]:
        if not 0 <= validator_id < self.params.N:
            raise ValueError(f"unknown validator id {validator_id}")
        if self._rep_index is None:
            self._build_rep_index()
        roles = []
        pos = self.position_of(validator_id)
        group = self.group_of_position(pos)
        roles.append(
            Adjacency(
                role="LEAF",
                layer=0,
                index=pos,
                parent=(1, group),
                child_committees=(),
                leaf_children=(),
            )
        )
        for layer, committee_index in self._rep_index.get(validator_id, ()):
            if layer == 1:
                roles.append(
                    Adjacency(
                        role="LEAF_AGGREGATOR",
                        layer=layer,
                        index=committee_index,
                        parent=self.parent_of(layer, committee_index) or ("proposer", 0),
                        child_committees=(),
                        leaf_children=self.group_window(committee_index),
                    )
                )
            else:
                roles.append(
                    Adjacency(
                        role="INTERNAL_AGGREGATOR",
                        layer=layer,
                        index=committee_index,
                        parent=self.parent_of(layer, committee_index) or ("proposer", 0),
                        child_committees=tuple(self.child_committees(layer, committee_index)),
                        leaf_children=(),
                    )
                )
        if validator_id == self.proposer:
            top = self.depth - 1
            roles.append(
                Adjacency(
                    role="PROPOSER",
                    layer=self.depth,
                    index=0,
                    parent=None,
                    child_committees=tuple((top, j) for j in range(self.committee_count(top))),
                    leaf_children=(),
                )
            )
        return roles

    # -- export -----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "slot": self.slot,
            "N": self.params.N,
            "m": self.params.m,
            "committee_size": self.params.committee_size,
            "representatives": self.params.representatives,
            "depth": self.depth,
            "leaf_groups": self.leaf_groups,
            "proposer": self.proposer,
            "group_offsets": self.group_offsets.tolist(),
            "leaf_perm": self.leaf_perm.tolist(),
            "committees": {str(k): v.tolist() for k, v in self.committees.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def matches_dict(cls, seed: int, slot: int, params: TreeParams, data: dict) -> bool:
        return cls(seed, slot, params).to_dict() == data


@dataclass
class EpochPlan:
    """Lazily built plans for every slot of one epoch."""

    seed: int
    params: TreeParams
    slots: int = SLOTS_PER_EPOCH
    _plans: dict = field(default_factory=dict, repr=False)

    def slot_plan(self, slot: int) -> SlotPlan:
        if not 0 <= slot < self.slots:
            raise ValueError(f"slot {slot} outside epoch of {self.slots}")
        if slot not in self._plans:
            self._plans[slot] = SlotPlan(self.seed, slot, self.params)
        return self._plans[slot]

    def proposers(self) -> list[int]:
        return [self.slot_plan(s).proposer for s in range(self.slots)]
