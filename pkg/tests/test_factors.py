import hashlib
import struct

import pytest

from conftest import LIGHT_KDF, seeded_rng
from mfdpg.factors import (
    HmacSpec,
    HotpSpec,
    PasswordSpec,
    TotpSpec,
    material_hmac,
    material_otp,
    material_password,
    setup_factor,
    validate_spec,
)


def _otp_digest(code):
    return hashlib.sha256(b"mfdpg/otp" + struct.pack("<I", int(code))).digest()


def test_correct_code_reproduces_static_material():
    material = bytes(range(32))
    pad = bytes(a ^ b for a, b in zip(material, _otp_digest("123456")))
    assert material_otp("123456", pad) == material


def test_wrong_code_flips_about_half_the_bits():
    material = bytes(range(32))
    pad = bytes(a ^ b for a, b in zip(material, _otp_digest("123456")))
    distances = []
    for wrong in range(1000):
        code = str(wrong + 200000).zfill(6)
        got = material_otp(code, pad)
        distances.append(sum(bin(x ^ y).count("1") for x, y in zip(got, material)))
    mean = sum(distances) / len(distances)
    assert 122 < mean < 134  # 256-bit material, expect about 128


def test_adjacent_codes_give_unequal_materials():
    pad = bytes(32)
    assert material_otp("000000", pad) != material_otp("000001", pad)


@pytest.mark.parametrize("code", ["12345", "1234567", "12345a", "", "１２３４５６"])
def test_malformed_codes_rejected(code):
    with pytest.raises(ValueError):
        material_otp(code, bytes(32))


def test_password_material_determinism_and_salt():
    a = material_password("pw", b"\x00" * 16, LIGHT_KDF)
    assert a == material_password("pw", b"\x00" * 16, LIGHT_KDF)
    assert a != material_password("pw", b"\x01" * 16, LIGHT_KDF)
    with pytest.raises(ValueError):
        material_password("", b"\x00" * 16, LIGHT_KDF)


def test_hmac_material_rejects_bad_response_length():
    with pytest.raises(ValueError):
        material_hmac(b"\x00" * 19, bytes(32))


@pytest.mark.parametrize("spec", [
    PasswordSpec("", "x"),
    PasswordSpec("a" * 33, "x"),
    PasswordSpec("pw", ""),
    HotpSpec("h", b"\x00" * 19),
    TotpSpec("t", b"\x00" * 21),
    HmacSpec("m", b""),
    TotpSpec("t", b"\x00" * 20, window_size=0),
])
def test_invalid_specs_rejected(spec):
    with pytest.raises(ValueError):
        validate_spec(spec)


def test_setup_factor_material_round_trips_through_witness():
    from mfdpg.factors import FactorWitness, witness_material
    from mfdpg.otp import hotp

    rng = seeded_rng(5)
    master = rng(32)
    secret = rng(20)
    config, material = setup_factor(HotpSpec("h", secret), LIGHT_KDF, master, rng, 0)
    code = hotp(secret, 0)
    assert witness_material(config, FactorWitness("h", code), LIGHT_KDF, 0) == material
