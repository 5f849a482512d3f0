"""Independent RFC 4226 HOTP implementation for cross-checking the
production code, written with manual byte arithmetic rather than struct."""
import hashlib
import hmac


def rfc4226_hotp(key: bytes, counter: int, digits: int = 6) -> str:
    message = bytes((counter >> (8 * (7 - i))) & 0xFF for i in range(8))
    digest = hmac.new(key, message, hashlib.sha1).digest()
    offset = digest[19] & 0x0F
    code = ((digest[offset] & 0x7F) << 24
            | digest[offset + 1] << 16
            | digest[offset + 2] << 8
            | digest[offset + 3])
    return str(code % 10 ** digits).rjust(digits, "0")
