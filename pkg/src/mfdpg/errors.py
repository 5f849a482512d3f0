"""Exception hierarchy. Every error raised by this package derives from MfdpgError."""


class MfdpgError(Exception):
    pass


# --- key derivation / vault ---

class VerifierMismatch(MfdpgError):
    """Some witness was wrong. Deliberately does not say which one."""


class UnknownFactorId(MfdpgError):
    pass


class ThresholdNotMet(MfdpgError):
    """Fewer witnesses supplied than the vault's threshold."""


class StaleWindow(MfdpgError):
    """TOTP time step outside the stored pad window and no other factor
    combination was given that could rebuild it."""


class IntegrityMismatch(MfdpgError):
    """Public parameters fail authentication against the master key."""


# --- revocation filter ---

class InsertionFailure(MfdpgError):
    """Cuckoo eviction chain exceeded the kick limit."""


class RevocationCapacityExhausted(MfdpgError):
    """All fictitious entries have been consumed."""


class CounterExhausted(MfdpgError):
    """Derivation counter exceeded its cap; indicates a corrupt filter."""


# --- policy compilation ---

class RegexSyntaxError(MfdpgError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnsupportedFeature(MfdpgError):
    """Regex feature outside the regular subset (backreference, lookaround)."""


class StateExplosion(MfdpgError):
    """Automaton construction exceeded the state cap."""


class PolicyEmpty(MfdpgError):
    """Compiled policy DFA accepts no string."""


# --- serialization ---

class MalformedEncoding(MfdpgError):
    pass


class VersionUnsupported(MfdpgError):
    pass


class VersionMismatch(MfdpgError):
    """Unknown version byte in an embedded binary structure."""


class CorruptLength(MfdpgError):
    """Embedded binary structure has an inconsistent length."""
