"""Independent Argon2id oracle (pure Python + numpy), used only by tests.

Implemented from RFC 9106 (version 0x13). Slow but honest: shares no code
with the production path, which goes through the cryptography package's
OpenSSL backend. The compression function is vectorized with numpy across
the 8 rows/columns of a block; everything else is straight-line Python.
"""
from __future__ import annotations

import hashlib
import struct

import numpy as np

_M32 = np.uint64(0xFFFFFFFF)
_TWO = np.uint64(2)
_R32, _R24, _R16, _R63 = (np.uint64(32), np.uint64(24), np.uint64(16), np.uint64(63))
_W64 = np.uint64(64)

_SYNC_POINTS = 4
_ADDRESSES_PER_BLOCK = 128


def _blake2b(data: bytes, digest_size: int) -> bytes:
    return hashlib.blake2b(data, digest_size=digest_size).digest()


def _h_prime(data: bytes, tag_length: int) -> bytes:
    """Variable-length hash H' from RFC 9106 section 3.3."""
    prefix = struct.pack("<I", tag_length)
    if tag_length <= 64:
        return _blake2b(prefix + data, tag_length)
    blocks = []
    v = _blake2b(prefix + data, 64)
    remaining = tag_length
    while remaining > 64:
        blocks.append(v[:32])
        remaining -= 32
        if remaining > 64:
            v = _blake2b(v, 64)
    blocks.append(_blake2b(v, remaining))
    return b"".join(blocks)


def _rotr(x: np.ndarray, n: np.uint64) -> np.ndarray:
    return (x >> n) | (x << (_W64 - n))


def _gb(v: list, ia: int, ib: int, ic: int, id_: int) -> None:
    a, b, c, d = v[ia], v[ib], v[ic], v[id_]
    a = a + b + _TWO * (a & _M32) * (b & _M32)
    d = _rotr(d ^ a, _R32)
    c = c + d + _TWO * (c & _M32) * (d & _M32)
    b = _rotr(b ^ c, _R24)
    a = a + b + _TWO * (a & _M32) * (b & _M32)
    d = _rotr(d ^ a, _R16)
    c = c + d + _TWO * (c & _M32) * (d & _M32)
    b = _rotr(b ^ c, _R63)
    v[ia], v[ib], v[ic], v[id_] = a, b, c, d


def _permute(v: list) -> None:
    for ia, ib, ic, id_ in ((0, 4, 8, 12), (1, 5, 9, 13), (2, 6, 10, 14),
                            (3, 7, 11, 15), (0, 5, 10, 15), (1, 6, 11, 12),
                            (2, 7, 8, 13), (3, 4, 9, 14)):
        _gb(v, ia, ib, ic, id_)


def _compress(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """G: 1024-byte blocks as arrays of 128 uint64."""
    r = x ^ y
    q = r.reshape(8, 16).copy()
    # P over each of the 8 rows (vectorized across rows).
    v = [q[:, j].copy() for j in range(16)]
    _permute(v)
    for j in range(16):
        q[:, j] = v[j]
    # P over each of the 8 register columns.
    z = q.reshape(8, 8, 2)
    v = [z[j // 2, :, j % 2].copy() for j in range(16)]
    _permute(v)
    for j in range(16):
        z[j // 2, :, j % 2] = v[j]
    return q.reshape(128) ^ r


def _index_alpha(passes_done: bool, slice_idx: int, seg_index: int,
                 seg_length: int, lane_length: int, j1: int,
                 same_lane: bool) -> int:
    if not passes_done:  # first pass
        if slice_idx == 0:
            area = seg_index - 1
        elif same_lane:
            area = slice_idx * seg_length + seg_index - 1
        else:
            area = slice_idx * seg_length - (1 if seg_index == 0 else 0)
    else:
        if same_lane:
            area = lane_length - seg_length + seg_index - 1
        else:
            area = lane_length - seg_length - (1 if seg_index == 0 else 0)
    rel = (j1 * j1) >> 32
    rel = area - 1 - ((area * rel) >> 32)
    start = 0
    if passes_done:
        start = 0 if slice_idx == _SYNC_POINTS - 1 else (slice_idx + 1) * seg_length
    return (start + rel) % lane_length


def argon2id(password: bytes, salt: bytes, time_cost: int, memory_cost: int,
             parallelism: int, tag_length: int = 32, secret: bytes = b"",
             associated_data: bytes = b"") -> bytes:
    p, t, m = parallelism, time_cost, memory_cost
    if p < 1 or t < 1 or m < 8 * p:
        raise ValueError("invalid cost parameters")

    h0 = _blake2b(
        struct.pack("<IIIIII", p, tag_length, m, t, 0x13, 2)
        + struct.pack("<I", len(password)) + password
        + struct.pack("<I", len(salt)) + salt
        + struct.pack("<I", len(secret)) + secret
        + struct.pack("<I", len(associated_data)) + associated_data,
        64)

    m_prime = 4 * p * (m // (4 * p))
    lane_length = m_prime // p
    seg_length = lane_length // _SYNC_POINTS

    blocks = np.zeros((p, lane_length, 128), dtype=np.uint64)
    for lane in range(p):
        for j in (0, 1):
            raw = _h_prime(h0 + struct.pack("<II", j, lane), 1024)
            blocks[lane, j] = np.frombuffer(raw, dtype="<u8")

    zero_block = np.zeros(128, dtype=np.uint64)
    for pass_idx in range(t):
        for slice_idx in range(_SYNC_POINTS):
            data_independent = pass_idx == 0 and slice_idx < 2
            for lane in range(p):
                start = 2 if pass_idx == 0 and slice_idx == 0 else 0
                if data_independent:
                    address_input = np.zeros(128, dtype=np.uint64)
                    address_input[:6] = [pass_idx, lane, slice_idx, m_prime, t, 2]
                    address_block = None
                for seg_index in range(start, seg_length):
                    if data_independent:
                        if address_block is None or seg_index % _ADDRESSES_PER_BLOCK == 0:
                            address_input[6] += np.uint64(1)
                            address_block = _compress(
                                zero_block, _compress(zero_block, address_input))
                        rand = int(address_block[seg_index % _ADDRESSES_PER_BLOCK])
                    else:
                        prev = (slice_idx * seg_length + seg_index - 1) % lane_length
                        rand = int(blocks[lane, prev, 0])
                    j1 = rand & 0xFFFFFFFF
                    j2 = rand >> 32
                    ref_lane = lane if pass_idx == 0 and slice_idx == 0 else j2 % p
                    same_lane = ref_lane == lane
                    ref_index = _index_alpha(pass_idx > 0, slice_idx, seg_index,
                                             seg_length, lane_length, j1, same_lane)
                    j = slice_idx * seg_length + seg_index
                    prev = (j - 1) % lane_length
                    new_block = _compress(blocks[lane, prev], blocks[ref_lane, ref_index])
                    if pass_idx > 0:
                        new_block ^= blocks[lane, j]
                    blocks[lane, j] = new_block

    final = blocks[0, lane_length - 1].copy()
    for lane in range(1, p):
        final ^= blocks[lane, lane_length - 1]
    return _h_prime(final.tobytes(), tag_length)
