"""HOTP (RFC 4226) and TOTP (RFC 6238) code computation.

Fixed profile: HMAC-SHA1, 6 digits, 30-second TOTP step. These are the
values every mainstream authenticator app ships with.
"""
from __future__ import annotations

import base64
import hashlib
import hmac
import struct

DIGITS = 6
TIME_STEP = 30


def hotp(secret: bytes, counter: int) -> str:
    """6-digit HOTP code for `counter` (dynamic truncation per RFC 4226)."""
    mac = hmac.digest(secret, struct.pack(">Q", counter), hashlib.sha1)
    offset = mac[-1] & 0x0F
    code = struct.unpack(">L", mac[offset:offset + 4])[0] & 0x7FFFFFFF
    return str(code % 10 ** DIGITS).zfill(DIGITS)


def totp_step(now: int) -> int:
    """Time-step index for a unix timestamp."""
    return now // TIME_STEP


def totp(secret: bytes, now: int) -> str:
    return hotp(secret, totp_step(now))


def to_base32(secret: bytes) -> str:
    """Enrollment form (what authenticator apps accept)."""
    return base64.b32encode(secret).decode("ascii").rstrip("=")


def from_base32(text: str) -> bytes:
    padded = text.upper() + "=" * (-len(text) % 8)
    return base64.b32decode(padded)
