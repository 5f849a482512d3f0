import itertools

import pytest

from conftest import LIGHT_KDF, seeded_rng
from mfdpg import errors, export
from mfdpg.factors import (
    FactorWitness,
    HmacSpec,
    HotpSpec,
    PasswordSpec,
    TotpSpec,
    expected_witness,
    hmac_sha1_response,
    witness_material,
)
from mfdpg.mfkdf import derive_master_key, setup_vault
from mfdpg.otp import hotp, totp
from mfdpg.revocation import RevocationConfig

REV8 = RevocationConfig(n=8)
NOW = 1_700_000_000

PW_SECRET = "correct horse battery"
T_SECRET = bytes(range(20))
H_SECRET = bytes(range(20, 40))
M_SECRET = bytes(range(40, 60))


def three_factor_vault(threshold=3, window=64):
    return setup_vault(
        [PasswordSpec("pw", PW_SECRET), TotpSpec("totp", T_SECRET, window_size=window),
         HotpSpec("hotp", H_SECRET)],
        threshold, kdf=LIGHT_KDF, revocation=REV8, now=NOW)


def good_witnesses(vault, now=NOW):
    out = []
    for config in vault.factors:
        if config.kind == "password":
            out.append(FactorWitness(config.id, PW_SECRET))
        elif config.kind == "totp":
            out.append(FactorWitness(config.id, totp(T_SECRET, now)))
        elif config.kind == "hotp":
            out.append(FactorWitness(config.id, hotp(H_SECRET, config.public.counter)))
        else:
            out.append(FactorWitness(
                config.id, hmac_sha1_response(M_SECRET, config.public.challenge)))
    return out


def test_single_factor_identity():
    vault, mk = setup_vault([PasswordSpec("pw", "hunter2!")], 1,
                            kdf=LIGHT_KDF, revocation=REV8)
    got, _ = derive_master_key(vault, [FactorWitness("pw", "hunter2!")], now=0)
    assert got == mk


def test_omitting_a_witness_fails():
    vault, _ = three_factor_vault(threshold=3)
    with pytest.raises(errors.MfdpgError):
        derive_master_key(vault, good_witnesses(vault)[:2], now=NOW)


def test_2_of_3_all_subsets_agree():
    vault, mk = setup_vault(
        [PasswordSpec("a", "alpha"), PasswordSpec("b", "bravo"),
         PasswordSpec("c", "charlie")],
        2, kdf=LIGHT_KDF, revocation=REV8)
    values = {"a": "alpha", "b": "bravo", "c": "charlie"}
    for pair in itertools.combinations("abc", 2):
        got, _ = derive_master_key(
            vault, [FactorWitness(i, values[i]) for i in pair], now=0)
        assert got == mk


def test_wrong_witness_error_is_uniform_across_factors():
    vault, _ = three_factor_vault()
    raised = []
    for i in range(3):
        witnesses = good_witnesses(vault)
        w = witnesses[i]
        bad = "000000" if isinstance(w.value, str) and w.value.isdigit() \
            else str(w.value) + "x"
        witnesses[i] = FactorWitness(w.id, bad)
        with pytest.raises(errors.VerifierMismatch) as info:
            derive_master_key(vault, witnesses, now=NOW)
        raised.append((type(info.value), str(info.value)))
    assert len(set(raised)) == 1  # no per-factor signal


def test_hotp_rolls_to_next_counter():
    vault, mk = three_factor_vault()
    assert vault.factor("hotp").public.counter == 0
    _, vault = derive_master_key(vault, good_witnesses(vault), now=NOW)
    assert vault.factor("hotp").public.counter == 1
    # the old code is now wrong, the next one works
    stale = good_witnesses(vault)
    stale = [FactorWitness(w.id, hotp(H_SECRET, 0)) if w.id == "hotp" else w
             for w in stale]
    with pytest.raises(errors.VerifierMismatch):
        derive_master_key(vault, stale, now=NOW)
    got, _ = derive_master_key(vault, good_witnesses(vault), now=NOW)
    assert got == mk


def test_totp_window_slides_forward():
    vault, mk = three_factor_vault(window=16)
    start = vault.factor("totp").public.window_start
    later = NOW + 10 * 30
    _, vault = derive_master_key(vault, good_witnesses(vault, later), now=later)
    assert vault.factor("totp").public.window_start == start + 10
    got, _ = derive_master_key(vault, good_witnesses(vault, later), now=later)
    assert got == mk


def test_stale_window_raises_when_totp_is_a_witness():
    vault, _ = three_factor_vault(window=4)
    far = NOW + 1000 * 30
    with pytest.raises(errors.StaleWindow):
        derive_master_key(vault, good_witnesses(vault, far), now=far)


def test_stale_window_repaired_by_other_factors():
    vault, mk = setup_vault(
        [PasswordSpec("pw", PW_SECRET), TotpSpec("totp", T_SECRET, window_size=4)],
        1, kdf=LIGHT_KDF, revocation=REV8, now=NOW)
    far = NOW + 1000 * 30
    # password alone meets the threshold and rebuilds the window in passing
    got, vault = derive_master_key(vault, [FactorWitness("pw", PW_SECRET)], now=far)
    assert got == mk
    assert vault.factor("totp").public.window_start == far // 30
    got, _ = derive_master_key(
        vault, [FactorWitness("totp", totp(T_SECRET, far)),
                FactorWitness("pw", PW_SECRET)], now=far)
    assert got == mk


def test_hmac_challenge_rotates_after_use():
    vault, mk = setup_vault([HmacSpec("tok", M_SECRET)], 1,
                            kdf=LIGHT_KDF, revocation=REV8)
    challenge = vault.factor("tok").public.challenge
    response = hmac_sha1_response(M_SECRET, challenge)
    _, vault = derive_master_key(vault, [FactorWitness("tok", response)], now=0)
    assert vault.factor("tok").public.challenge != challenge
    with pytest.raises(errors.VerifierMismatch):
        derive_master_key(vault, [FactorWitness("tok", response)], now=0)
    got, _ = derive_master_key(
        vault, [FactorWitness("tok", expected_witness(vault.factor("tok"), mk, 0))],
        now=0)
    assert got == mk


def test_unknown_and_duplicate_witnesses():
    vault, _ = three_factor_vault(threshold=1)
    with pytest.raises(errors.UnknownFactorId):
        derive_master_key(vault, [FactorWitness("nope", "x")], now=NOW)
    with pytest.raises(ValueError):
        derive_master_key(
            vault, [FactorWitness("pw", PW_SECRET), FactorWitness("pw", PW_SECRET)],
            now=NOW)


def test_setup_validation():
    with pytest.raises(ValueError):
        setup_vault([], 1, kdf=LIGHT_KDF, revocation=REV8)
    with pytest.raises(ValueError):
        setup_vault([PasswordSpec("a", "x")], 2, kdf=LIGHT_KDF, revocation=REV8)
    with pytest.raises(ValueError):
        setup_vault([PasswordSpec("a", "x"), PasswordSpec("a", "y")], 1,
                    kdf=LIGHT_KDF, revocation=REV8)
    with pytest.raises(ValueError):
        setup_vault([PasswordSpec("a", "")], 1, kdf=LIGHT_KDF, revocation=REV8)


def test_no_secret_bytes_in_serialized_vault():
    rng = seeded_rng(11)
    vault, mk = setup_vault(
        [PasswordSpec("pw", PW_SECRET), TotpSpec("totp", T_SECRET, window_size=64),
         HotpSpec("hotp", H_SECRET), HmacSpec("tok", M_SECRET)],
        4, kdf=LIGHT_KDF, revocation=REV8, rng=rng, now=NOW)
    blob = export(vault).encode()
    witnesses = good_witnesses(vault)
    materials = [
        witness_material(config, witness, LIGHT_KDF, NOW)
        for config, witness in zip(vault.factors, witnesses)
    ]
    assert mk not in blob
    for material in materials:
        assert material not in blob
