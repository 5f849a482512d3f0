import random

import pytest

from mfdpg import PasswordSpec, setup_vault
from mfdpg.kdf import KdfParams
from mfdpg.revocation import RevocationConfig

# Cheap Argon2 parameters for the many tests whose subject is not KDF cost.
LIGHT_KDF = KdfParams(t=1, m=8, p=1)
PAPER_KDF = KdfParams(t=2, m=24576, p=1)


def seeded_rng(seed: int):
    """Deterministic byte source with os.urandom's signature."""
    return random.Random(seed).randbytes


def make_password_vault(password="correct horse battery", n=8, seed=None):
    rng = seeded_rng(seed) if seed is not None else __import__("os").urandom
    return setup_vault([PasswordSpec("pw", password)], 1, kdf=LIGHT_KDF,
                       revocation=RevocationConfig(n=n), rng=rng)


@pytest.fixture
def password_vault():
    return make_password_vault()
