"""Byte-wise Shamir secret sharing over GF(256).

The field is GF(2^8) with the AES reduction polynomial x^8+x^4+x^3+x+1
(0x11B); multiplication goes through log/exp tables on generator 3. A
32-byte secret is split byte by byte: byte b of share i is p_b(i+1) where
p_b is a random degree-(k-1) polynomial with p_b(0) = secret[b].
"""
from __future__ import annotations

import os
from typing import Callable, Sequence

_EXP = [0] * 512
_LOG = [0] * 256
_x = 1
for _i in range(255):
    _EXP[_i] = _x
    _LOG[_x] = _i
    _x ^= (_x << 1) ^ (0x11B if _x & 0x80 else 0)
    _x &= 0xFF
for _i in range(255, 512):
    _EXP[_i] = _EXP[_i - 255]


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 in GF(256)")
    return _EXP[255 - _LOG[a]]


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    # Horner, highest-degree coefficient last in `coeffs`.
    acc = 0
    for c in reversed(coeffs):
        acc = gf_mul(acc, x) ^ c
    return acc


def shamir_split(
    secret: bytes,
    k: int,
    n: int,
    rng: Callable[[int], bytes] = os.urandom,
) -> list[bytes]:
    """Split `secret` into n shares, any k of which recover it.

    Share i (0-based in the returned list) carries x-coordinate i+1.
    """
    if not 1 <= k <= n <= 16:
        raise ValueError(f"require 1 <= k <= n <= 16, got k={k}, n={n}")
    coeff_rows = [rng(len(secret)) for _ in range(k - 1)]
    shares = []
    for i in range(n):
        x = i + 1
        share = bytes(
            _poly_eval([secret[b]] + [row[b] for row in coeff_rows], x)
            for b in range(len(secret))
        )
        shares.append(share)
    return shares


def shamir_combine(shares: Sequence[tuple[int, bytes]], k: int) -> bytes:
    """Recover the secret from (x, share) pairs; x is the 1-based index.

    More than k consistent shares are fine; fewer, or duplicate x values,
    are an error.
    """
    if len(shares) < k:
        raise ValueError(f"need at least {k} shares, got {len(shares)}")
    xs = [x for x, _ in shares]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate share indices")
    if any(not 1 <= x <= 255 for x in xs):
        raise ValueError("share index out of range")
    lengths = {len(s) for _, s in shares}
    if len(lengths) != 1:
        raise ValueError("shares have mixed lengths")
    (length,) = lengths

    # Lagrange basis at x=0: l_j = prod_{m != j} x_m / (x_m ^ x_j).
    weights = []
    for j, xj in enumerate(xs):
        num, den = 1, 1
        for m, xm in enumerate(xs):
            if m != j:
                num = gf_mul(num, xm)
                den = gf_mul(den, xm ^ xj)
        weights.append(gf_mul(num, gf_inv(den)))

    secret = bytearray(length)
    for b in range(length):
        acc = 0
        for (_, share), w in zip(shares, weights):
            acc ^= gf_mul(share[b], w)
        secret[b] = acc
    return bytes(secret)
