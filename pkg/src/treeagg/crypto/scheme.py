"""Aggregatable signatures over BLS12-381 with participation bitmaps.

Public keys are G1 elements (48-byte compressed), signatures G2 (96 bytes).
All signatures in one slot cover the same message, so aggregation is plain
group addition on both sides, and a cached full-set public-key aggregate can
be corrected by *subtracting* absent keys: adding the inverse of a point
costs the same as adding the point, so fixing up a cached aggregate costs
one group operation per missing validator instead of one per present one.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import bls12381 as curve
from .bitmap import ParticipationBitmap
from ..prf import Stream


@dataclass(frozen=True)
class PublicKey:
    point: tuple

    def __eq__(self, other):
        return isinstance(other, PublicKey) and curve.g1_eq(self.point, other.point)

    def __hash__(self):
        return hash(self.to_bytes())

    def to_bytes(self) -> bytes:
        return curve.g1_to_bytes(self.point)

    @classmethod
    def from_bytes(cls, data: bytes, check_subgroup: bool = True) -> "PublicKey":
        return cls(curve.g1_from_bytes(data, check_subgroup))


@dataclass(frozen=True)
class AggregatePublicKey:
    point: tuple
    source_bitmap: ParticipationBitmap

    def __eq__(self, other):
        return (
            isinstance(other, AggregatePublicKey)
            and curve.g1_eq(self.point, other.point)
            and self.source_bitmap == other.source_bitmap
        )

    def __hash__(self):
        return hash((curve.g1_to_bytes(self.point), self.source_bitmap))

    def to_bytes(self) -> bytes:
        return curve.g1_to_bytes(self.point) + self.source_bitmap.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes, check_subgroup: bool = True) -> "AggregatePublicKey":
        return cls(
            curve.g1_from_bytes(data[:48], check_subgroup),
            ParticipationBitmap.from_bytes(data[48:]),
        )


@dataclass(frozen=True)
class Signature:
    point: tuple

    def __eq__(self, other):
        return isinstance(other, (Signature, AggregateSignature)) and curve.g2_eq(
            self.point, other.point
        )

    def __hash__(self):
        return hash(self.to_bytes())

    def to_bytes(self) -> bytes:
        return curve.g2_to_bytes(self.point)

    @classmethod
    def from_bytes(cls, data: bytes, check_subgroup: bool = True) -> "Signature":
        return cls(curve.g2_from_bytes(data, check_subgroup))


class AggregateSignature(Signature):
    @classmethod
    def from_bytes(cls, data: bytes, check_subgroup: bool = True) -> "AggregateSignature":
        return cls(curve.g2_from_bytes(data, check_subgroup))


@dataclass(frozen=True)
class KeyPair:
    validator_id: int
    secret_key: int
    public_key: PublicKey


@functools.lru_cache(maxsize=1)
def _g1_fixed_base() -> curve.FixedBaseG1:
    return curve.FixedBaseG1(curve.G1_GEN)


def secret_scalar(seed: int, validator_id: int) -> int:
    """Deterministic nonzero scalar for (seed, id)."""
    raw = Stream("keygen", seed, validator_id).take(48)
    return 1 + int.from_bytes(raw, "big") % (int(curve.R) - 1)


def keygen(seed: int, validator_id: int) -> KeyPair:
    sk = secret_scalar(seed, validator_id)
    pk = curve.g1_normalize(_g1_fixed_base().mul(sk))
    return KeyPair(validator_id=validator_id, secret_key=sk, public_key=PublicKey(pk))


@functools.lru_cache(maxsize=64)
def message_point(msg: bytes) -> tuple:
    """Hash a message onto G2 (cached: one slot signs one block hash)."""
    return curve.hash_to_g2(msg)


def sign(kp: KeyPair, msg: bytes) -> Signature:
    return Signature(curve.g2_normalize(curve.g2_mul(message_point(msg), kp.secret_key)))


def sign_hashed(secret_key: int, hashed: tuple) -> Signature:
    return Signature(curve.g2_mul(hashed, secret_key))


def verify(pk: PublicKey, msg: bytes, sig: Signature) -> bool:
    if curve.g2_is_inf(sig.point) or curve.g1_is_inf(pk.point):
        return False
    return curve.pairings_are_one(
        [(curve.g1_neg(curve.G1_GEN), sig.point), (pk.point, message_point(msg))]
    )


def aggregate_signatures(sigs) -> AggregateSignature:
    sigs = list(sigs)
    if not sigs:
        raise ValueError("empty aggregation")
    return AggregateSignature(curve.g2_sum([s.point for s in sigs]))


def aggregate_public_keys(pks, bitmap: ParticipationBitmap) -> AggregatePublicKey:
    pks = list(pks)
    if not pks:
        raise ValueError("empty aggregation")
    if len(pks) != bitmap.popcount:
        raise ValueError(
            f"{len(pks)} keys supplied for a bitmap with {bitmap.popcount} set bits"
        )
    return AggregatePublicKey(curve.g1_sum([pk.point for pk in pks]), bitmap)


def subtract_public_keys(
    full: AggregatePublicKey, missing_pks, missing_bitmap: ParticipationBitmap
) -> AggregatePublicKey:
    """Aggregate of (full minus missing), via addition of group inverses."""
    missing_pks = list(missing_pks)
    if len(missing_pks) != missing_bitmap.popcount:
        raise ValueError(
            f"{len(missing_pks)} keys supplied for a bitmap with "
            f"{missing_bitmap.popcount} set bits"
        )
    if not missing_bitmap.is_subset_of(full.source_bitmap):
        raise ValueError("not a subset")
    acc = full.point
    for pk in missing_pks:
        neg = curve.g1_neg(pk.point)
        acc = curve.g1_add_mixed(acc, neg) if neg[2] == 1 else curve.g1_add(acc, neg)
    return AggregatePublicKey(acc, full.source_bitmap.difference(missing_bitmap))


def chunked_subtract(
    full_chunks, missing_pks, missing_bitmap: ParticipationBitmap
) -> AggregatePublicKey:
    """subtract_public_keys over a chunked cache: each chunk is corrected
    independently (parallelizable), then the corrected chunks are combined."""
    chunks = sorted(full_chunks, key=lambda c: c.source_bitmap.offset)
    if not chunks:
        raise ValueError("empty aggregation")
    pos = 0
    for chunk in chunks:
        if chunk.source_bitmap.offset != pos:
            raise ValueError("chunks do not partition the index space")
        pos = chunk.source_bitmap.end
    missing = sorted(
        zip(missing_bitmap.global_indices(), missing_pks), key=lambda t: t[0]
    )
    if len(missing) != missing_bitmap.popcount:
        raise ValueError("missing keys and bitmap disagree")
    corrected = []
    i = 0
    for chunk in chunks:
        span = chunk.source_bitmap
        sub_idx, sub_pks = [], []
        while i < len(missing) and missing[i][0] < span.end:
            if missing[i][0] < span.offset:
                raise ValueError("not a subset")
            sub_idx.append(missing[i][0])
            sub_pks.append(missing[i][1])
            i += 1
        sub_map = ParticipationBitmap.from_indices(span.offset, span.length, sub_idx)
        corrected.append(subtract_public_keys(chunk, sub_pks, sub_map))
    if i != len(missing):
        raise ValueError("not a subset")
    acc = corrected[0]
    for nxt in corrected[1:]:
        acc = AggregatePublicKey(
            curve.g1_add(acc.point, nxt.point), acc.source_bitmap.union(nxt.source_bitmap)
        )
    return acc


def verify_aggregate(agg_sig: AggregateSignature, agg_pub: AggregatePublicKey, msg: bytes) -> bool:
    """True iff agg_sig aggregates signatures on msg by exactly the keys in
    agg_pub.  Degenerate empty aggregates never verify."""
    if agg_pub.source_bitmap.popcount == 0 or curve.g1_is_inf(agg_pub.point):
        return False
    if curve.g2_is_inf(agg_sig.point):
        return False
    return curve.pairings_are_one(
        [(curve.g1_neg(curve.G1_GEN), agg_sig.point), (agg_pub.point, message_point(msg))]
    )


class KeyRegistry:
    """Deterministic PKI for a validator set: index -> key material.

    Secret keys are always materialized (cheap scalars); public keys are
    built on demand since each costs a fixed-base multiplication.
    """

    def __init__(self, seed: int, size: int):
        self.seed = seed
        self.size = size
        self._r = int(curve.R)
        self.secret_keys = [secret_scalar(seed, i) for i in range(size)]
        self._points: list = [None] * size
        self._full_cache = None

    def secret_key(self, i: int) -> int:
        return self.secret_keys[i]

    def public_point(self, i: int) -> tuple:
        pt = self._points[i]
        if pt is None:
            pt = curve.g1_normalize(_g1_fixed_base().mul(self.secret_keys[i]))
            self._points[i] = pt
        return pt

    def public_key(self, i: int) -> PublicKey:
        return PublicKey(self.public_point(i))

    def keypair(self, i: int) -> KeyPair:
        return KeyPair(i, self.secret_keys[i], self.public_key(i))

    def materialize(self, indices=None) -> None:
        for i in indices if indices is not None else range(self.size):
            self.public_point(i)

    def sum_secret(self, indices) -> int:
        acc = 0
        for i in indices:
            acc += self.secret_keys[i]
        return acc % self._r

    def aggregate_point(self, indices) -> tuple:
        """True aggregate public key of a subset, via one fixed-base mul of
        the summed secret (simulation shortcut, identical group element)."""
        return curve.g1_normalize(_g1_fixed_base().mul(self.sum_secret(indices)))

    def full_aggregate(self) -> AggregatePublicKey:
        if self._full_cache is None:
            self._full_cache = AggregatePublicKey(
                self.aggregate_point(range(self.size)),
                ParticipationBitmap.full(0, self.size),
            )
        return self._full_cache

    def full_aggregate_chunks(self, chunk_count: int) -> list[AggregatePublicKey]:
        """The cached full aggregate as `chunk_count` contiguous chunks."""
        if chunk_count < 1 or chunk_count > self.size:
            raise ValueError("chunk_count out of range")
        bounds = [self.size * c // chunk_count for c in range(chunk_count + 1)]
        return [
            AggregatePublicKey(
                self.aggregate_point(range(lo, hi)),
                ParticipationBitmap.full(lo, hi - lo),
            )
            for lo, hi in zip(bounds, bounds[1:])
        ]
