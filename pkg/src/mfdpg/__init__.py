"""mfdpg: multi-factor deterministic password generation.

Passwords are derived, never stored: multiple authentication factors
combine into a master key, a memory-hard KDF turns it into a site-specific
preimage, a fixed-cardinality cuckoo filter provides private revocation,
and a seeded DFA walk emits a password matching the site's policy.
"""
from . import errors
from .derivation import (
    Preimage,
    canonical_service,
    derive_preimage,
    mfdpg_generate,
    revoke_current,
)
from .drbg import HmacDrbg
from .factors import (
    FactorConfig,
    FactorWitness,
    HmacSpec,
    HotpSpec,
    PasswordSpec,
    TotpSpec,
)
from .kdf import KdfParams
from .mfkdf import derive_master_key, setup_vault
from .policy import (
    PasswordPolicy,
    compile_policy,
    generate,
    load_policy_corpus,
    matches,
    walk,
)
from .revocation import RevocationConfig
from .state import VaultState, export, import_vault, load_vault, save_vault, verify_integrity

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Preimage",
    "canonical_service",
    "derive_preimage",
    "mfdpg_generate",
    "revoke_current",
    "HmacDrbg",
    "FactorConfig",
    "FactorWitness",
    "HmacSpec",
    "HotpSpec",
    "PasswordSpec",
    "TotpSpec",
    "KdfParams",
    "derive_master_key",
    "setup_vault",
    "PasswordPolicy",
    "compile_policy",
    "generate",
    "load_policy_corpus",
    "matches",
    "walk",
    "RevocationConfig",
    "VaultState",
    "export",
    "import_vault",
    "load_vault",
    "save_vault",
    "verify_integrity",
    "__version__",
]
