"""Deterministic randomness derived from labelled seeds.

Every random decision in plan construction and simulation is drawn from a
SHAKE-256 keystream keyed by a seed plus domain labels, so identical
(seed, labels) always reproduce identical draws on any platform.
"""

from __future__ import annotations

import hashlib

import numpy as np

_BLOCK = 1 << 16


def _encode_labels(labels: tuple) -> bytes:
    # Length-prefixed encoding so ("ab", "c") and ("a", "bc") never collide.
    parts = []
    for label in labels:
        if isinstance(label, bytes):
            raw = label
        elif isinstance(label, str):
            raw = label.encode()
        elif isinstance(label, int):
            raw = label.to_bytes(16, "big", signed=True)
        else:
            raise TypeError(f"unsupported label type: {type(label)!r}")
        parts.append(len(raw).to_bytes(4, "big"))
        parts.append(raw)
    return b"".join(parts)


class Stream:
    """Deterministic byte/integer stream for one labelled domain."""

    def __init__(self, *labels):
        self._key = hashlib.sha256(_encode_labels(labels)).digest()
        self._block_index = 0
        self._buf = b""
        self._pos = 0

    def take(self, n: int) -> bytes:
        out = bytearray()
        while n > 0:
            if self._pos == len(self._buf):
                counter = self._block_index.to_bytes(8, "big")
                self._buf = hashlib.shake_256(self._key + counter).digest(_BLOCK)
                self._block_index += 1
                self._pos = 0
            chunk = self._buf[self._pos : self._pos + n]
            out += chunk
            self._pos += len(chunk)
            n -= len(chunk)
        return bytes(out)

    def u64(self) -> int:
        return int.from_bytes(self.take(8), "big")

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("randbelow requires n > 0")
        # Rejection sampling to avoid modulo bias.
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.u64()
            if v < limit:
                return v % n

    def random(self) -> float:
        return self.u64() / (1 << 64)

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randbelow(len(seq))]

    def permutation(self, n: int) -> np.ndarray:
        """Uniform permutation of range(n) via sorting 64-bit keys.

        Stable argsort makes ties (collision probability ~n^2/2^64)
        deterministic rather than biased in any data-dependent way.
        """
        keys = np.frombuffer(self.take(8 * n), dtype=">u8")
        return np.argsort(keys, kind="stable").astype(np.int64)

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct values from range(n), order as drawn."""
        if k > n:
            raise ValueError(f"cannot sample {k} distinct values from {n}")
        picked: list[int] = []
        seen: set[int] = set()
        while len(picked) < k:
            v = self.randbelow(n)
            if v not in seen:
                seen.add(v)
                picked.append(v)
        return picked

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
