"""Site-specific derivation: master key -> preimage -> password.

The preimage for a service is the adaptive KDF applied to the master key
with a salt binding the service name and a revocation counter. Generation
walks the counter upward past revoked preimages; revocation re-finds the
active preimage and records it in the filter.
"""
from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from . import revocation
from .errors import CounterExhausted
from .factors import FactorWitness
from .kdf import KdfParams, adaptive_kdf
from .mfkdf import derive_master_key
from .policy import PasswordPolicy, compile_policy, generate
from .state import VaultState, seal

MAX_COUNTER = 1 << 20  # more revocations than the filter could ever hold
MAX_SERVICE_BYTES = 256


@dataclass(frozen=True)
class Preimage:
    bytes: bytes
    counter: int


def canonical_service(name: str) -> str:
    """Lowercase and trim; registrable-domain extraction is the caller's
    business."""
    service = name.strip().lower()
    if not service:
        raise ValueError("service name must be non-empty")
    if len(service.encode("utf-8")) > MAX_SERVICE_BYTES:
        raise ValueError(f"service name exceeds {MAX_SERVICE_BYTES} bytes")
    return service


def _preimage_salt(service: str, counter: int) -> bytes:
    # Length-prefixed encoding: ("ab", 1) and ("a", 11) cannot collide.
    encoded = service.encode("utf-8")
    return hashlib.sha256(
        b"mfdpg/preimage" + struct.pack("<Q", len(encoded)) + encoded
        + struct.pack("<Q", counter)
    ).digest()[:16]


def derive_preimage(master_key: bytes, service: str, counter: int,
                    params: KdfParams) -> Preimage:
    if counter < 1:
        raise ValueError("counter starts at 1")
    digest = adaptive_kdf(master_key, _preimage_salt(service, counter), params)
    return Preimage(digest, counter)


def _active_preimage(vault: VaultState, master_key: bytes, service: str) -> Preimage:
    """First non-revoked preimage, counting up from 1 (one adaptive-KDF
    call per revoked predecessor)."""
    counter = 0
    while True:
        counter += 1
        if counter > MAX_COUNTER:
            raise CounterExhausted(
                f"counter passed {MAX_COUNTER}; revocation filter is corrupt")
        preimage = derive_preimage(master_key, service, counter, vault.kdf)
        if not revocation.check(vault.filter, preimage.bytes):
            return preimage


def mfdpg_generate(
    vault: VaultState,
    witnesses: Sequence[FactorWitness],
    service: str,
    policy: PasswordPolicy,
    now: int,
    *,
    rng: Callable[[int], bytes] = os.urandom,
) -> tuple[str, Preimage, VaultState]:
    """Derive the current password for a service.

    Returns the password, the preimage that produced it (revocation needs
    it), and the vault updated by factor roll-forward.
    """
    compile_policy(policy)  # fail fast on empty/oversized policies
    service = canonical_service(service)
    master_key, vault = derive_master_key(vault, witnesses, now, rng=rng)
    preimage = _active_preimage(vault, master_key, service)
    return generate(preimage.bytes, policy), preimage, vault


def revoke_current(
    vault: VaultState,
    witnesses: Sequence[FactorWitness],
    service: str,
    now: int,
    *,
    rng: Callable[[int], bytes] = os.urandom,
) -> VaultState:
    """Retire the service's current password; the next generate call moves
    to the following counter."""
    service = canonical_service(service)
    master_key, vault = derive_master_key(vault, witnesses, now, rng=rng)
    preimage = _active_preimage(vault, master_key, service)
    new_filter = vault.filter.copy()
    revocation.revoke(new_filter, master_key, preimage.bytes, vault.revocation.n)
    return seal(replace(vault, filter=new_filter), master_key)
