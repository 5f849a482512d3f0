"""Vault state: every persisted value, all of it trustless.

The vault never contains the master key, factor materials, preimages, or
generated passwords; it holds only public parameters (salts, pads,
encrypted factor secrets), the share set, the revocation filter, and two
tags. Serialization is canonical JSON (sorted keys, no whitespace, base64
binary fields) wrapped as ``mfdpg1:<base64>``, so equal vaults export to
identical strings and the integrity tag is reproducible everywhere.
"""
from __future__ import annotations

import base64
import binascii
import fcntl
import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .cuckoo import CuckooFilter
from .errors import MalformedEncoding, VersionUnsupported
from .factors import (
    KIND_HMAC,
    KIND_HOTP,
    KIND_PASSWORD,
    KIND_TOTP,
    FactorConfig,
    HmacParams,
    HotpParams,
    PasswordParams,
    TotpParams,
)
from .kdf import KdfParams, constant_time_equal, hmac_sha256, subkey
from .revocation import RevocationConfig

VERSION = 1
_PREFIX = "mfdpg1:"
DEFAULT_STATE_PATH = "~/.mfdpg/vault.mfdpg"


@dataclass(frozen=True)
class VaultState:
    version: int
    kdf: KdfParams
    threshold: int
    factors: tuple  # FactorConfig, ...
    shares: tuple  # (factor id, share XOR material), ...
    verifier: bytes  # 16 bytes
    filter: CuckooFilter
    revocation: RevocationConfig
    integrity: bytes  # 32 bytes

    def factor(self, factor_id: str) -> FactorConfig:
        for config in self.factors:
            if config.id == factor_id:
                return config
        raise KeyError(factor_id)


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _unb64(text: str) -> bytes:
    try:
        return base64.b64decode(text, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise MalformedEncoding(f"bad base64 field: {exc}") from exc


def _public_to_json(config: FactorConfig) -> dict:
    p = config.public
    if config.kind == KIND_PASSWORD:
        return {"salt": _b64(p.salt)}
    if config.kind == KIND_HOTP:
        return {"counter": p.counter, "enc_secret": _b64(p.enc_secret),
                "pad": _b64(p.pad)}
    if config.kind == KIND_TOTP:
        return {"enc_secret": _b64(p.enc_secret),
                "pad_blob": _b64(b"".join(p.pads)),
                "window_size": p.window_size,
                "window_start": p.window_start}
    if config.kind == KIND_HMAC:
        return {"challenge": _b64(p.challenge), "enc_secret": _b64(p.enc_secret),
                "pad": _b64(p.pad)}
    raise ValueError(f"unknown factor kind {config.kind!r}")


def _public_from_json(kind: str, obj: dict):
    if kind == KIND_PASSWORD:
        return PasswordParams(salt=_unb64(obj["salt"]))
    if kind == KIND_HOTP:
        return HotpParams(counter=int(obj["counter"]),
                          pad=_unb64(obj["pad"]),
                          enc_secret=_unb64(obj["enc_secret"]))
    if kind == KIND_TOTP:
        blob = _unb64(obj["pad_blob"])
        size = int(obj["window_size"])
        if len(blob) != 32 * size:
            raise MalformedEncoding("TOTP pad blob length mismatch")
        pads = tuple(blob[i * 32:(i + 1) * 32] for i in range(size))
        return TotpParams(window_start=int(obj["window_start"]), pads=pads,
                          enc_secret=_unb64(obj["enc_secret"]))
    if kind == KIND_HMAC:
        return HmacParams(challenge=_unb64(obj["challenge"]),
                          pad=_unb64(obj["pad"]),
                          enc_secret=_unb64(obj["enc_secret"]))
    raise MalformedEncoding(f"unknown factor kind {kind!r}")


def _vault_to_dict(vault: VaultState, with_integrity: bool = True) -> dict:
    obj = {
        "factors": [
            {"id": c.id, "kind": c.kind, "public": _public_to_json(c)}
            for c in vault.factors
        ],
        "kdf": {"m": vault.kdf.m, "p": vault.kdf.p, "t": vault.kdf.t},
        "revocation": {
            "filter": _b64(vault.filter.to_bytes()),
            "n": vault.revocation.n,
            "target_fpr": vault.revocation.target_fpr,
        },
        "shares": [[fid, _b64(share)] for fid, share in vault.shares],
        "threshold": vault.threshold,
        "verifier": _b64(vault.verifier),
        "version": vault.version,
    }
    if with_integrity:
        obj["integrity"] = _b64(vault.integrity)
    return obj


def _canonical(obj: dict) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def compute_integrity_tag(vault: VaultState, master_key: bytes) -> bytes:
    payload = _canonical(_vault_to_dict(vault, with_integrity=False))
    return hmac_sha256(subkey(master_key, b"mfdpg/integrity"), payload)


def seal(vault: VaultState, master_key: bytes) -> VaultState:
    """Recompute the integrity tag; call after any state change."""
    return replace(vault, integrity=compute_integrity_tag(vault, master_key))


def verify_integrity(vault: VaultState, master_key: bytes) -> bool:
    return constant_time_equal(vault.integrity,
                               compute_integrity_tag(vault, master_key))


def export(vault: VaultState) -> str:
    return _PREFIX + base64.b64encode(_canonical(_vault_to_dict(vault))).decode("ascii")


def import_vault(text: str) -> VaultState:
    text = text.strip()
    if not text.startswith(_PREFIX):
        raise MalformedEncoding(f"missing {_PREFIX!r} prefix")
    try:
        payload = base64.b64decode(text[len(_PREFIX):], validate=True)
        obj = json.loads(payload.decode("utf-8"))
    except (binascii.Error, ValueError, UnicodeDecodeError) as exc:
        raise MalformedEncoding(f"undecodable vault payload: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedEncoding("vault payload is not an object")
    version = obj.get("version")
    if version != VERSION:
        raise VersionUnsupported(f"vault version {version!r} not supported")
    try:
        return VaultState(
            version=version,
            kdf=KdfParams(t=int(obj["kdf"]["t"]), m=int(obj["kdf"]["m"]),
                          p=int(obj["kdf"]["p"])),
            threshold=int(obj["threshold"]),
            factors=tuple(
                FactorConfig(id=f["id"], kind=f["kind"],
                             public=_public_from_json(f["kind"], f["public"]))
                for f in obj["factors"]
            ),
            shares=tuple((fid, _unb64(share)) for fid, share in obj["shares"]),
            verifier=_unb64(obj["verifier"]),
            filter=CuckooFilter.from_bytes(_unb64(obj["revocation"]["filter"])),
            revocation=RevocationConfig(
                n=int(obj["revocation"]["n"]),
                target_fpr=float(obj["revocation"]["target_fpr"])),
            integrity=_unb64(obj["integrity"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedEncoding(f"vault payload missing or bad field: {exc}") from exc


# --- file persistence ----------------------------------------------------------

def save_vault(path: str | Path, vault: VaultState) -> None:
    """Write-to-temp then atomic rename, serialized by an advisory lock."""
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    lock_path = path.with_suffix(path.suffix + ".lock")
    with open(lock_path, "w") as lock:
        fcntl.flock(lock, fcntl.LOCK_EX)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(export(vault) + "\n", encoding="utf-8")
        os.replace(tmp, path)


def load_vault(path: str | Path) -> VaultState:
    return import_vault(Path(path).expanduser().read_text(encoding="utf-8"))
