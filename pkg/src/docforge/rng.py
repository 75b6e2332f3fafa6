"""Seeded, stream-addressable randomness.

Every artifact draws from its own stream derived from (master seed,
artifact id), so generation order and worker count never affect content.
"""

from __future__ import annotations

import hashlib
import random

_MASK64 = (1 << 64) - 1


def _derive_key(seed: int, stream_id: int) -> int:
    h = hashlib.blake2b(digest_size=16)
    h.update((seed & _MASK64).to_bytes(8, "big"))
    h.update((stream_id & _MASK64).to_bytes(8, "big"))
    return int.from_bytes(h.digest(), "big")


class SeededRng(random.Random):
    """A random.Random keyed by (seed, stream_id).

    Identical (seed, stream_id) pairs yield identical draw sequences,
    independent of platform and process.
    """

    def __new__(cls, seed: int = 0, stream_id: int = 0):
        # random.Random.__new__ forwards its argument to the C seeder;
        # bypass it so our two-part key reaches __init__ intact.
        return super().__new__(cls)

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed_value = seed & _MASK64
        self.stream_id = stream_id & _MASK64
        super().__init__(_derive_key(self.seed_value, self.stream_id))

    def fork(self, label: str) -> "SeededRng":
        """Child stream for a named sub-task; stable under the same label."""
        h = hashlib.blake2b(digest_size=8)
        h.update(self.stream_id.to_bytes(8, "big"))
        h.update(label.encode("utf-8"))
        return SeededRng(self.seed_value, int.from_bytes(h.digest(), "big"))

    def __repr__(self):  # pragma: no cover
        return "SeededRng(seed=%d, stream_id=%d)" % (self.seed_value, self.stream_id)


def stream_id_for(master_seed: int, artifact_id: str) -> int:
    """Stable 64-bit stream id for one artifact."""
    h = hashlib.blake2b(digest_size=8)
    h.update((master_seed & _MASK64).to_bytes(8, "big"))
    h.update(artifact_id.encode("utf-8"))
    return int.from_bytes(h.digest(), "big")


def derive_stream(master_seed: int, artifact_id: str) -> SeededRng:
    """Per-artifact RNG; distinct ids give independent streams."""
    return SeededRng(master_seed, stream_id_for(master_seed, artifact_id))
