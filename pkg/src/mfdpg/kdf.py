"""Adaptive KDF and small keyed-hash helpers.

The memory-hard KDF is Argon2id (as provided by the ``cryptography``
package's OpenSSL backend). Cost parameters travel with the vault so that
derivations are reproducible on any machine holding the same public state.
"""
from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

from cryptography.hazmat.primitives.kdf.argon2 import Argon2id

# Defaults: p=1, t=2, m=24576 KiB.
DEFAULT_TIME_COST = 2
DEFAULT_MEMORY_COST = 24576
DEFAULT_PARALLELISM = 1


@dataclass(frozen=True)
class KdfParams:
    """Argon2id cost parameters (t = passes, m = KiB of memory, p = lanes)."""

    t: int = DEFAULT_TIME_COST
    m: int = DEFAULT_MEMORY_COST
    p: int = DEFAULT_PARALLELISM

    def __post_init__(self):
        if self.t < 1 or self.p < 1 or self.m < 8 * self.p:
            raise ValueError(f"invalid Argon2 parameters: {self}")


def adaptive_kdf(secret: bytes, salt: bytes, params: KdfParams, length: int = 32) -> bytes:
    """Argon2id(secret, salt) -> `length` bytes."""
    kdf = Argon2id(
        salt=salt,
        length=length,
        iterations=params.t,
        lanes=params.p,
        memory_cost=params.m,
    )
    return kdf.derive(secret)


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def hmac_sha256(key: bytes, data: bytes) -> bytes:
    return hmac.digest(key, data, hashlib.sha256)


def subkey(master_key: bytes, label: bytes) -> bytes:
    """Derive an independent 32-byte subkey from the master key for `label`."""
    return hmac_sha256(master_key, label)


def verifier_tag(master_key: bytes) -> bytes:
    """16-byte tag letting a derivation detect wrong factors without
    identifying which factor was wrong."""
    return hmac_sha256(master_key, b"mfdpg/verify")[:16]


def constant_time_equal(a: bytes, b: bytes) -> bool:
    return hmac.compare_digest(a, b)
