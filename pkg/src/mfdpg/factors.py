"""Factor constructions: turn a live authentication input (witness) plus
trustless public parameters into that factor's static 32-byte key material.

The dynamic factors (HOTP/TOTP/HMAC-challenge) use one-time pads: the
public parameters store pad = material XOR H(expected witness), so the
correct witness reproduces the material and the pad alone reveals nothing.
The factor's shared secret is kept in the public parameters too, but
encrypted under the master key, which lets a successful derivation roll the
pads forward (next counter, next time window, fresh challenge).
"""
from __future__ import annotations

import hashlib
import hmac as hmac_mod
import os
import struct
from dataclasses import dataclass, replace
from typing import Callable, Union

from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import StaleWindow
from .kdf import KdfParams, adaptive_kdf, subkey
from .otp import hotp, totp_step

KIND_PASSWORD = "password"
KIND_HOTP = "hotp"
KIND_TOTP = "totp"
KIND_HMAC = "hmac_challenge"

MAX_FACTORS = 16
MAX_ID_LENGTH = 32
OTP_SECRET_LEN = 20
DEFAULT_TOTP_WINDOW = 4096  # 30 s steps -> about 34 hours of future codes


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b, strict=True))


def _otp_digest(code: str) -> bytes:
    if len(code) != 6 or not code.isascii() or not code.isdigit():
        raise ValueError(f"OTP code must be 6 ASCII digits, got {code!r}")
    return hashlib.sha256(b"mfdpg/otp" + struct.pack("<I", int(code))).digest()


def _response_digest(response: bytes) -> bytes:
    return hashlib.sha256(b"mfdpg/hmac" + response).digest()


def hmac_sha1_response(secret: bytes, challenge: bytes) -> bytes:
    """The software stand-in for a challenge-response hardware token."""
    return hmac_mod.digest(secret, challenge, hashlib.sha1)


# --- public parameters per kind ----------------------------------------------

@dataclass(frozen=True)
class PasswordParams:
    salt: bytes  # 16 bytes


@dataclass(frozen=True)
class HotpParams:
    counter: int
    pad: bytes  # 32 bytes, pad for the current counter
    enc_secret: bytes


@dataclass(frozen=True)
class TotpParams:
    window_start: int
    pads: tuple  # window_size consecutive 32-byte pads from window_start
    enc_secret: bytes

    @property
    def window_size(self) -> int:
        return len(self.pads)


@dataclass(frozen=True)
class HmacParams:
    challenge: bytes  # 32 bytes
    pad: bytes
    enc_secret: bytes


PublicParams = Union[PasswordParams, HotpParams, TotpParams, HmacParams]


@dataclass(frozen=True)
class FactorConfig:
    id: str
    kind: str
    public: PublicParams


@dataclass(frozen=True)
class FactorWitness:
    id: str
    value: Union[str, bytes]  # password / 6-digit code as str, HMAC response as bytes


# --- setup specs --------------------------------------------------------------

@dataclass(frozen=True)
class PasswordSpec:
    id: str
    password: str


@dataclass(frozen=True)
class HotpSpec:
    id: str
    secret: bytes


@dataclass(frozen=True)
class TotpSpec:
    id: str
    secret: bytes
    window_size: int = DEFAULT_TOTP_WINDOW


@dataclass(frozen=True)
class HmacSpec:
    id: str
    secret: bytes


FactorSpec = Union[PasswordSpec, HotpSpec, TotpSpec, HmacSpec]


def validate_spec(spec: FactorSpec) -> None:
    if not spec.id or len(spec.id) > MAX_ID_LENGTH or not spec.id.isascii():
        raise ValueError(f"factor id {spec.id!r} must be ASCII, 1-32 chars")
    if isinstance(spec, PasswordSpec):
        if not spec.password:
            raise ValueError("password must be non-empty")
    elif isinstance(spec, (HotpSpec, TotpSpec, HmacSpec)):
        if len(spec.secret) != OTP_SECRET_LEN:
            raise ValueError(f"factor secret must be {OTP_SECRET_LEN} bytes")
        if isinstance(spec, TotpSpec) and spec.window_size < 1:
            raise ValueError("TOTP window must hold at least one step")
    else:
        raise TypeError(f"unknown factor spec {spec!r}")


# --- material from witnesses ---------------------------------------------------

def material_password(password: str, salt: bytes, params: KdfParams) -> bytes:
    if not password:
        raise ValueError("password must be non-empty")
    return adaptive_kdf(password.encode("utf-8"), salt, params)


def material_otp(code: str, pad: bytes) -> bytes:
    return _xor(pad, _otp_digest(code))


def material_hmac(response: bytes, pad: bytes) -> bytes:
    if len(response) != 20:
        raise ValueError("HMAC response must be 20 bytes")
    return _xor(pad, _response_digest(response))


def witness_material(config: FactorConfig, witness: FactorWitness,
                     kdf_params: KdfParams, now: int) -> bytes:
    """Material for a configured factor given its live witness."""
    public = config.public
    if config.kind == KIND_PASSWORD:
        return material_password(str(witness.value), public.salt, kdf_params)
    if config.kind == KIND_HOTP:
        return material_otp(str(witness.value), public.pad)
    if config.kind == KIND_TOTP:
        step = totp_step(now)
        offset = step - public.window_start
        if not 0 <= offset < public.window_size:
            raise StaleWindow(
                f"time step {step} outside pad window "
                f"[{public.window_start}, {public.window_start + public.window_size})")
        return material_otp(str(witness.value), public.pads[offset])
    if config.kind == KIND_HMAC:
        value = witness.value
        if isinstance(value, str):
            value = bytes.fromhex(value)
        return material_hmac(value, public.pad)
    raise ValueError(f"unknown factor kind {config.kind!r}")


# --- setup and roll-forward -----------------------------------------------------

def setup_factor(spec: FactorSpec, kdf_params: KdfParams, master_key: bytes,
                 rng: Callable[[int], bytes], now: int) -> tuple[FactorConfig, bytes]:
    """Build a factor's config and return (config, material)."""
    validate_spec(spec)
    if isinstance(spec, PasswordSpec):
        salt = rng(16)
        return (FactorConfig(spec.id, KIND_PASSWORD, PasswordParams(salt)),
                material_password(spec.password, salt, kdf_params))
    enc = _encrypt_secret(master_key, spec.id, spec.secret, rng)
    material = rng(32)
    if isinstance(spec, HotpSpec):
        pad = _xor(material, _otp_digest(hotp(spec.secret, 0)))
        return FactorConfig(spec.id, KIND_HOTP, HotpParams(0, pad, enc)), material
    if isinstance(spec, TotpSpec):
        start = totp_step(now)
        pads = _totp_pads(material, spec.secret, start, spec.window_size)
        return FactorConfig(spec.id, KIND_TOTP, TotpParams(start, pads, enc)), material
    if isinstance(spec, HmacSpec):
        challenge = rng(32)
        response = hmac_sha1_response(spec.secret, challenge)
        pad = _xor(material, _response_digest(response))
        return FactorConfig(spec.id, KIND_HMAC, HmacParams(challenge, pad, enc)), material
    raise TypeError(f"unknown factor spec {spec!r}")


def _totp_pads(material: bytes, secret: bytes, start: int, size: int) -> tuple:
    return tuple(
        _xor(material, _otp_digest(hotp(secret, step)))
        for step in range(start, start + size)
    )


def roll_forward(config: FactorConfig, master_key: bytes,
                 rng: Callable[[int], bytes], now: int) -> FactorConfig:
    """Advance a dynamic factor's public parameters after a successful
    derivation: next HOTP counter, TOTP window sliding up to the current
    step, or a fresh HMAC challenge. Password factors are static."""
    public = config.public
    if config.kind == KIND_PASSWORD:
        return config
    secret = _decrypt_secret(master_key, config.id, public.enc_secret)
    if config.kind == KIND_HOTP:
        material = _xor(public.pad, _otp_digest(hotp(secret, public.counter)))
        pad = _xor(material, _otp_digest(hotp(secret, public.counter + 1)))
        return replace(config, public=replace(public, counter=public.counter + 1, pad=pad))
    if config.kind == KIND_TOTP:
        step = totp_step(now)
        if step <= public.window_start:
            return config
        material = _xor(public.pads[0], _otp_digest(hotp(secret, public.window_start)))
        pads = _totp_pads(material, secret, step, public.window_size)
        return replace(config, public=replace(public, window_start=step, pads=pads))
    if config.kind == KIND_HMAC:
        old_response = hmac_sha1_response(secret, public.challenge)
        material = _xor(public.pad, _response_digest(old_response))
        challenge = rng(32)
        pad = _xor(material, _response_digest(hmac_sha1_response(secret, challenge)))
        return replace(config, public=replace(public, challenge=challenge, pad=pad))
    raise ValueError(f"unknown factor kind {config.kind!r}")


def expected_witness(config: FactorConfig, master_key: bytes, now: int) -> Union[str, bytes]:
    """What the correct witness would be right now (test/CLI helper for
    dynamic factors; needs the master key to decrypt the factor secret)."""
    secret = _decrypt_secret(master_key, config.id, config.public.enc_secret)
    if config.kind == KIND_HOTP:
        return hotp(secret, config.public.counter)
    if config.kind == KIND_TOTP:
        return hotp(secret, totp_step(now))
    if config.kind == KIND_HMAC:
        return hmac_sha1_response(secret, config.public.challenge)
    raise ValueError(f"no expected witness for kind {config.kind!r}")


def _enc_key(master_key: bytes, factor_id: str) -> bytes:
    return subkey(master_key, b"mfdpg/factor-enc/" + factor_id.encode("utf-8"))


def _encrypt_secret(master_key: bytes, factor_id: str, secret: bytes,
                    rng: Callable[[int], bytes] = os.urandom) -> bytes:
    nonce = rng(12)
    ct = AESGCM(_enc_key(master_key, factor_id)).encrypt(nonce, secret, None)
    return nonce + ct


def _decrypt_secret(master_key: bytes, factor_id: str, enc_secret: bytes) -> bytes:
    return AESGCM(_enc_key(master_key, factor_id)).decrypt(
        enc_secret[:12], enc_secret[12:], None)
