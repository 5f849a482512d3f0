"""HMAC-DRBG (SHA-256) per NIST SP 800-90A, no reseed, no prediction resistance.

`generate()` is the raw SP 800-90A generate call (state update after every
request); it reproduces the published NIST known-answer vectors byte for
byte. `generate_bytes()` layers a prefix-consistent stream on top: it pulls
fixed 64-byte blocks from `generate()` and serves requests from a buffer, so
reading n bytes then m bytes yields the same stream as reading n+m at once.
The password walk consumes the stream form.
"""
from __future__ import annotations

import hashlib
import hmac

MAX_REQUEST_BYTES = 4096
_BLOCK = 64


class HmacDrbg:
    """Deterministic bit generator seeded once with high-entropy input."""

    def __init__(self, seed_material: bytes):
        if len(seed_material) < 32:
            raise ValueError("seed material must be at least 32 bytes")
        self.K = b"\x00" * 32
        self.V = b"\x01" * 32
        self._update(seed_material)
        self.reseed_counter = 1
        self._buffer = b""

    def _update(self, data: bytes = b"") -> None:
        self.K = hmac.digest(self.K, self.V + b"\x00" + data, hashlib.sha256)
        self.V = hmac.digest(self.K, self.V, hashlib.sha256)
        if data:
            self.K = hmac.digest(self.K, self.V + b"\x01" + data, hashlib.sha256)
            self.V = hmac.digest(self.K, self.V, hashlib.sha256)

    def generate(self, n: int) -> bytes:
        """Raw SP 800-90A generate: n output bytes, then a state update."""
        if not 0 < n <= MAX_REQUEST_BYTES:
            raise ValueError(f"request of {n} bytes out of range")
        out = b""
        while len(out) < n:
            self.V = hmac.digest(self.K, self.V, hashlib.sha256)
            out += self.V
        self._update()
        self.reseed_counter += 1
        return out[:n]

    def generate_bytes(self, n: int) -> bytes:
        """Prefix-consistent stream: same bytes regardless of request sizes."""
        if not 0 < n <= MAX_REQUEST_BYTES:
            raise ValueError(f"request of {n} bytes out of range")
        while len(self._buffer) < n:
            self._buffer += self.generate(_BLOCK)
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out
