import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfdpg.drbg import HmacDrbg

# NIST SP 800-90A worked-example vectors for HMAC_DRBG SHA-256, no reseed
# (csrc.nist.gov "Examples for NIST SP 800-90A" document). EntropyInput is
# 55 bytes, nonce 8 bytes; instantiate seed material is their concatenation.
ENTROPY = bytes.fromhex(
    "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f"
    "202122232425262728292a2b2c2d2e2f30313233343536")
NONCE = bytes.fromhex("2021222324252627")
PERSONALIZATION = bytes.fromhex(
    "404142434445464748494a4b4c4d4e4f505152535455565758595a5b5c5d5e5f"
    "606162636465666768696a6b6c6d6e6f70717273747576")

NO_PS_FIRST = (
    "d67b8c1734f46fa3f763cf57c6f9f4f2dc1089bd8bc1f6f023950bfc56176352"
    "08c8501238ad7a4400defee46c640b61af77c2d1a3bfaa90ede5d207406e5403")
NO_PS_SECOND = (
    "8fdaec20f8b421407059e3588920da7eda9dce3cf8274dfa1c59c108c1d0aa9b"
    "0fa38da5c792037c4d33cd070ca7cd0c5608dba8b885654639de2187b74cb263")
PS_FIRST = (
    "0dd9c85589f357c389d6af8de9d734a917c771ef2d8816b982596ed12db45d73"
    "4a62680835c02fda66b08e1a369ae218f26d5210ad564248872d7a28784159c3")
PS_SECOND = (
    "46b4f4756ae715e0e51681ab2932de1523be5d13baf0f4588b11fe372fda37ab"
    "e368317341bc8ba91fc5d85b7fb8ca8fbc309a758fd6fca9df43c7660b221322")


def test_nist_vector_no_personalization():
    drbg = HmacDrbg(ENTROPY + NONCE)
    assert drbg.generate(64).hex() == NO_PS_FIRST
    assert drbg.generate(64).hex() == NO_PS_SECOND


def test_nist_vector_with_personalization():
    drbg = HmacDrbg(ENTROPY + NONCE + PERSONALIZATION)
    assert drbg.generate(64).hex() == PS_FIRST
    assert drbg.generate(64).hex() == PS_SECOND


def test_stream_request_of_64_equals_two_of_32():
    a = HmacDrbg(b"\x05" * 32)
    b = HmacDrbg(b"\x05" * 32)
    assert a.generate_bytes(64) == b.generate_bytes(32) + b.generate_bytes(32)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=200), min_size=1, max_size=8))
def test_stream_prefix_consistency(chunks):
    total = sum(chunks)
    one_shot = HmacDrbg(b"\xa7" * 32).generate_bytes(total)
    piecewise = HmacDrbg(b"\xa7" * 32)
    assert b"".join(piecewise.generate_bytes(n) for n in chunks) == one_shot


def test_determinism_across_instances():
    assert HmacDrbg(b"\x42" * 32).generate_bytes(64) == \
        HmacDrbg(b"\x42" * 32).generate_bytes(64)


def test_single_bit_avalanche():
    distances = []
    for i in range(200):
        seed = bytes([i]) + b"\x33" * 31
        flipped = bytes([i ^ 0x01]) + b"\x33" * 31
        a = HmacDrbg(seed).generate_bytes(32)
        b = HmacDrbg(flipped).generate_bytes(32)
        assert a != b
        distances.append(sum(bin(x ^ y).count("1") for x, y in zip(a, b)))
    mean = sum(distances) / len(distances)
    assert 116 < mean < 140  # expect about 128 of 256 bits


def test_request_size_limits():
    drbg = HmacDrbg(b"\x01" * 32)
    with pytest.raises(ValueError):
        drbg.generate_bytes(4097)
    with pytest.raises(ValueError):
        drbg.generate_bytes(0)
    with pytest.raises(ValueError):
        HmacDrbg(b"\x01" * 31)


def test_reseed_counter_tracks_generate_calls():
    drbg = HmacDrbg(b"\x01" * 32)
    assert drbg.reseed_counter == 1
    drbg.generate(64)
    assert drbg.reseed_counter == 2
