"""Cuckoo filter: 4 slots per bucket, 20-bit fingerprints, partial-key
cuckoo hashing (alt bucket = bucket XOR H(fingerprint)).

Everything is deterministic: slot scan order is fixed, and eviction
"randomness" is a SHA-256 stream seeded from the inserted fingerprint, so a
given insertion sequence always produces identical filter bytes.
"""
from __future__ import annotations

import hashlib
import struct

from .errors import CorruptLength, InsertionFailure, VersionMismatch

FINGERPRINT_BITS = 20
SLOTS_PER_BUCKET = 4
MAX_KICKS = 500
MAX_LOAD = 0.95

_MAGIC = b"MFCF"
_VERSION = 1
_FP_MOD = (1 << FINGERPRINT_BITS) - 1  # fingerprints live in [1, 2^20-1]; 0 = empty


def bucket_count_for(n: int) -> int:
    """Smallest power-of-two bucket count keeping load <= MAX_LOAD at n entries."""
    if n < 1:
        raise ValueError("capacity must be at least 1")
    count = 1
    while n > count * SLOTS_PER_BUCKET * MAX_LOAD:
        count *= 2
    return count


class CuckooFilter:
    def __init__(self, bucket_count: int):
        if bucket_count < 1 or bucket_count & (bucket_count - 1):
            raise ValueError("bucket count must be a power of two")
        self.bucket_count = bucket_count
        self.slots = [0] * (bucket_count * SLOTS_PER_BUCKET)
        self.count = 0

    # --- probe derivation -------------------------------------------------

    def probe(self, item: bytes) -> tuple[int, int, int]:
        """(fingerprint, bucket, alt bucket) for an item."""
        h = hashlib.sha256(b"mfdpg/cuckoo/item" + item).digest()
        fp = struct.unpack("<Q", h[:8])[0] % _FP_MOD + 1
        i1 = struct.unpack("<Q", h[8:16])[0] & (self.bucket_count - 1)
        return fp, i1, self.alt_bucket(i1, fp)

    def alt_bucket(self, bucket: int, fp: int) -> int:
        h = hashlib.sha256(b"mfdpg/cuckoo/alt" + struct.pack("<I", fp)).digest()
        return bucket ^ (struct.unpack("<Q", h[:8])[0] & (self.bucket_count - 1))

    # --- core operations ---------------------------------------------------

    def add(self, item: bytes) -> None:
        fp, i1, i2 = self.probe(item)
        self.add_probe(fp, i1, i2)

    def add_probe(self, fp: int, i1: int, i2: int) -> None:
        for bucket in (i1, i2):
            if self._place(bucket, fp):
                return
        self._evict_insert(fp, i1, i2)

    def has(self, item: bytes) -> bool:
        fp, i1, i2 = self.probe(item)
        return self.has_probe(fp, i1, i2)

    def has_probe(self, fp: int, i1: int, i2: int) -> bool:
        slots = self.slots
        base1 = i1 * SLOTS_PER_BUCKET
        base2 = i2 * SLOTS_PER_BUCKET
        return (
            fp == slots[base1] or fp == slots[base1 + 1]
            or fp == slots[base1 + 2] or fp == slots[base1 + 3]
            or fp == slots[base2] or fp == slots[base2 + 1]
            or fp == slots[base2 + 2] or fp == slots[base2 + 3]
        )

    def remove(self, item: bytes) -> bool:
        fp, i1, i2 = self.probe(item)
        return self.remove_probe(fp, i1, i2)

    def remove_probe(self, fp: int, i1: int, i2: int) -> bool:
        """Delete one stored copy of fp; first match in slot-scan order wins."""
        for bucket in (i1, i2):
            base = bucket * SLOTS_PER_BUCKET
            for s in range(base, base + SLOTS_PER_BUCKET):
                if self.slots[s] == fp:
                    self.slots[s] = 0
                    self.count -= 1
                    return True
        return False

    def occupied_slots(self) -> int:
        """Recount from storage; must always equal self.count."""
        return sum(1 for fp in self.slots if fp)

    def copy(self) -> "CuckooFilter":
        dup = CuckooFilter(self.bucket_count)
        dup.slots = list(self.slots)
        dup.count = self.count
        return dup

    def _place(self, bucket: int, fp: int) -> bool:
        base = bucket * SLOTS_PER_BUCKET
        for s in range(base, base + SLOTS_PER_BUCKET):
            if self.slots[s] == 0:
                self.slots[s] = fp
                self.count += 1
                return True
        return False

    def _evict_insert(self, fp: int, i1: int, i2: int) -> None:
        stream = _kick_stream(fp)
        bucket = i2 if next(stream) & 1 else i1
        for _ in range(MAX_KICKS):
            slot = bucket * SLOTS_PER_BUCKET + (next(stream) % SLOTS_PER_BUCKET)
            self.slots[slot], fp = fp, self.slots[slot]
            bucket = self.alt_bucket(bucket, fp)
            if self._place(bucket, fp):
                return
        raise InsertionFailure(f"no room after {MAX_KICKS} evictions")

    # --- serialization -----------------------------------------------------
    # magic "MFCF", version u8, fingerprint_bits u8, slots-per-bucket u8,
    # bucket-count u32 LE, then the slot array bit-packed little-endian
    # (two 20-bit fingerprints per 5 bytes), zero = empty slot.

    def to_bytes(self) -> bytes:
        out = bytearray()
        out += _MAGIC
        out += struct.pack("<BBBI", _VERSION, FINGERPRINT_BITS, SLOTS_PER_BUCKET,
                           self.bucket_count)
        for j in range(0, len(self.slots), 2):
            pair = self.slots[j] | (self.slots[j + 1] << FINGERPRINT_BITS)
            out += pair.to_bytes(5, "little")
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CuckooFilter":
        if len(data) < 11 or data[:4] != _MAGIC:
            raise VersionMismatch("not a cuckoo filter blob")
        version, fp_bits, slots, bucket_count = struct.unpack("<BBBI", data[4:11])
        if version != _VERSION or fp_bits != FINGERPRINT_BITS or slots != SLOTS_PER_BUCKET:
            raise VersionMismatch(
                f"unsupported filter layout v{version}/{fp_bits}b/{slots}s")
        if bucket_count < 1 or bucket_count & (bucket_count - 1):
            raise CorruptLength(f"bucket count {bucket_count} not a power of two")
        body = data[11:]
        expected = bucket_count * SLOTS_PER_BUCKET // 2 * 5
        if len(body) != expected:
            raise CorruptLength(f"expected {expected} body bytes, got {len(body)}")
        filt = cls(bucket_count)
        for j in range(0, len(filt.slots), 2):
            pair = int.from_bytes(body[j // 2 * 5:j // 2 * 5 + 5], "little")
            filt.slots[j] = pair & _FP_MOD
            filt.slots[j + 1] = pair >> FINGERPRINT_BITS
        filt.count = filt.occupied_slots()
        return filt

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CuckooFilter)
            and self.bucket_count == other.bucket_count
            and self.slots == other.slots
        )


def _kick_stream(seed_fp: int):
    """Deterministic byte stream driving eviction choices."""
    counter = 0
    while True:
        block = hashlib.sha256(
            b"mfdpg/cuckoo/kick" + struct.pack("<II", seed_fp, counter)).digest()
        yield from block
        counter += 1
