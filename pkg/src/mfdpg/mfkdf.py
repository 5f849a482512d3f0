"""Minimal multi-factor key derivation: k-of-n Shamir over the master key,
each share XOR-encrypted under one factor's material.

Any k correct witnesses reconstruct the master key; a single wrong witness
anywhere poisons the reconstruction and fails the verifier tag, with no
signal as to which factor was wrong.
"""
from __future__ import annotations

import os
from dataclasses import replace
from typing import Callable, Sequence

from . import factors as fx
from .errors import ThresholdNotMet, UnknownFactorId, VerifierMismatch, IntegrityMismatch
from .kdf import KdfParams, constant_time_equal, verifier_tag
from .revocation import RevocationConfig, setup_filter
from .shamir import shamir_combine, shamir_split
from .state import VaultState, VERSION, seal, verify_integrity


def _xor32(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b, strict=True))


def setup_vault(
    factor_specs: Sequence[fx.FactorSpec],
    threshold: int,
    *,
    kdf: KdfParams | None = None,
    revocation: RevocationConfig | None = None,
    rng: Callable[[int], bytes] = os.urandom,
    now: int = 0,
) -> tuple[VaultState, bytes]:
    """Create a fresh vault; returns it with the new random master key."""
    if not 1 <= threshold <= len(factor_specs) <= fx.MAX_FACTORS:
        raise ValueError(
            f"need 1 <= threshold <= factors <= {fx.MAX_FACTORS}, "
            f"got threshold={threshold}, factors={len(factor_specs)}")
    ids = [spec.id for spec in factor_specs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate factor ids")
    kdf = kdf or KdfParams()
    revocation = revocation or RevocationConfig()

    master_key = rng(32)
    configs = []
    materials = []
    for spec in factor_specs:
        config, material = fx.setup_factor(spec, kdf, master_key, rng, now)
        configs.append(config)
        materials.append(material)
    shares = shamir_split(master_key, threshold, len(configs), rng)
    enc_shares = tuple(
        (config.id, _xor32(share, material))
        for config, share, material in zip(configs, shares, materials)
    )
    vault = VaultState(
        version=VERSION,
        kdf=kdf,
        threshold=threshold,
        factors=tuple(configs),
        shares=enc_shares,
        verifier=verifier_tag(master_key),
        filter=setup_filter(master_key, revocation.n),
        revocation=revocation,
        integrity=b"\x00" * 32,
    )
    return seal(vault, master_key), master_key


def derive_master_key(
    vault: VaultState,
    witnesses: Sequence[fx.FactorWitness],
    now: int,
    *,
    rng: Callable[[int], bytes] = os.urandom,
) -> tuple[bytes, VaultState]:
    """Reconstruct the master key from live witnesses.

    All supplied witnesses participate; every one of them must be correct.
    On success the dynamic factors used are rolled forward and TOTP windows
    are slid up to the current step, so the returned vault replaces the old
    one.
    """
    if len(witnesses) < vault.threshold:
        raise ThresholdNotMet(
            f"{len(witnesses)} witnesses for threshold {vault.threshold}")
    seen = set()
    for w in witnesses:
        if w.id in seen:
            raise ValueError(f"duplicate witness for factor {w.id!r}")
        seen.add(w.id)

    positions = {config.id: i for i, config in enumerate(vault.factors)}
    enc_shares = dict(vault.shares)
    points = []
    for witness in witnesses:
        if witness.id not in positions:
            raise UnknownFactorId(witness.id)
        config = vault.factors[positions[witness.id]]
        material = fx.witness_material(config, witness, vault.kdf, now)
        share = _xor32(enc_shares[witness.id], material)
        points.append((positions[witness.id] + 1, share))

    candidate = shamir_combine(points, vault.threshold)
    if not constant_time_equal(verifier_tag(candidate), vault.verifier):
        raise VerifierMismatch("wrong factor witness(es)")
    if not verify_integrity(vault, candidate):
        raise IntegrityMismatch("vault public parameters were modified")

    used = {w.id for w in witnesses}
    rolled = tuple(
        fx.roll_forward(config, candidate, rng, now)
        if config.kind == fx.KIND_TOTP or (config.id in used and config.kind in
                                           (fx.KIND_HOTP, fx.KIND_HMAC))
        else config
        for config in vault.factors
    )
    new_vault = seal(replace(vault, factors=rolled), candidate)
    return candidate, new_vault
