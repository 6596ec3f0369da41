"""Aggregatable signature scheme, participation bitmaps, and key registry."""

from .bitmap import ParticipationBitmap
from .scheme import (
    AggregatePublicKey,
    AggregateSignature,
    KeyPair,
    KeyRegistry,
    PublicKey,
    Signature,
    aggregate_public_keys,
    aggregate_signatures,
    chunked_subtract,
    keygen,
    message_point,
    secret_scalar,
    sign,
    sign_hashed,
    subtract_public_keys,
    verify,
    verify_aggregate,
)

__all__ = [
    "AggregatePublicKey",
    "AggregateSignature",
    "KeyPair",
    "KeyRegistry",
    "ParticipationBitmap",
    "PublicKey",
    "Signature",
    "aggregate_public_keys",
    "aggregate_signatures",
    "chunked_subtract",
    "keygen",
    "message_point",
    "secret_scalar",
    "sign",
    "sign_hashed",
    "subtract_public_keys",
    "verify",
    "verify_aggregate",
]
