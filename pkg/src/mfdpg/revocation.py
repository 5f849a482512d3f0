"""Private revocation on top of the cuckoo filter.

The filter's cardinality never changes: setup fills it with N fictitious
entries derived from the master key, and each real revocation inserts the
revoked preimage and deletes one fictitious entry. Real and fictitious
fingerprints are both hash outputs, so a snapshot of the filter reveals
neither the number of revocations performed nor the services involved.
"""
from __future__ import annotations

import functools
import hashlib
import struct
from dataclasses import dataclass

from .cuckoo import CuckooFilter, bucket_count_for
from .errors import RevocationCapacityExhausted

DEFAULT_MAX_REVOCATIONS = 4096
DEFAULT_TARGET_FPR = 1e-4


@dataclass(frozen=True)
class RevocationConfig:
    n: int = DEFAULT_MAX_REVOCATIONS
    target_fpr: float = DEFAULT_TARGET_FPR

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("revocation capacity must be at least 1")


def fictitious_item(master_key: bytes, index: int) -> bytes:
    return hashlib.sha256(master_key + b"mfdpg/fict" + struct.pack("<Q", index)).digest()


@functools.lru_cache(maxsize=8)
def _fictitious_probes(master_key: bytes, n: int, bucket_count: int):
    """Precomputed (fp, i1, i2) for every fictitious entry; the scan in
    revoke() touches up to all N of them, so hashing each once per process
    matters. In-memory only — persisting these would let an adversary tell
    fictitious entries apart from real ones."""
    filt = CuckooFilter(bucket_count)
    return tuple(filt.probe(fictitious_item(master_key, i)) for i in range(n))


def setup_filter(master_key: bytes, n: int) -> CuckooFilter:
    """Fresh filter holding exactly n fictitious entries."""
    filt = CuckooFilter(bucket_count_for(n))
    for fp, i1, i2 in _fictitious_probes(master_key, n, filt.bucket_count):
        filt.add_probe(fp, i1, i2)
    return filt


def revoke(filt: CuckooFilter, master_key: bytes, preimage: bytes, n: int) -> None:
    """Record `preimage` as revoked, consuming one fictitious entry.

    Scans fictitious indices 0..n-1 and deletes the first one still
    present, then inserts the preimage, keeping the entry count at n. A
    colliding fingerprint may stand in for the scanned entry; by design the
    two are indistinguishable, so the swap is still sound.
    """
    for fp, i1, i2 in _fictitious_probes(master_key, n, filt.bucket_count):
        if filt.has_probe(fp, i1, i2):
            filt.remove_probe(fp, i1, i2)
            break
    else:
        raise RevocationCapacityExhausted(f"all {n} revocations consumed")
    filt.add(preimage)


def check(filt: CuckooFilter, preimage: bytes) -> bool:
    return filt.has(preimage)
