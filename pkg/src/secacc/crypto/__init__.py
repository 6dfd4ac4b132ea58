"""Bit-correct functional models of the accelerated primitives.

SHA-256 / HMAC-SHA-256 / AES-256-CBC / modular exponentiation.  The block
kernels run either compiled or pure-Python (see ``_backend``); everything
here is a pure function or an immutable-input streaming helper, so the
simulator can drive the same state machines the hardware engines implement.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._backend import (
    HAVE_COMPILED,
    aes256_decrypt_block,
    aes256_encrypt_block,
    aes256_key_schedule,
    backend_name,
    sha256_compress,
)

_SHA256_IV = (
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
)

BLOCK_BYTES = 64


def sha256_block_count(message_bytes: int) -> int:
    """Number of compression-function invocations for a message of n bytes.

    Padding appends 1 marker byte and an 8-byte length, so the count is
    ceil((n + 9) / 64).  The timing model relies on this matching the
    engine's block count exactly.
    """
    return (message_bytes + 9 + BLOCK_BYTES - 1) // BLOCK_BYTES


class Sha256:
    """Streaming SHA-256 with an observable compression count."""

    def __init__(self) -> None:
        self._state = _SHA256_IV
        self._pending = b""
        self._length = 0
        self.compressions = 0

    def update(self, data: bytes) -> "Sha256":
        self._length += len(data)
        buf = self._pending + data
        full = len(buf) - len(buf) % BLOCK_BYTES
        if full:
            self._state = sha256_compress(self._state, buf[:full])
            self.compressions += full // BLOCK_BYTES
        self._pending = buf[full:]
        return self

    def digest(self) -> bytes:
        pad_len = (55 - self._length) % 64
        tail = self._pending + b"\x80" + b"\x00" * pad_len + (8 * self._length).to_bytes(8, "big")
        state = sha256_compress(self._state, tail)
        self.compressions += len(tail) // BLOCK_BYTES
        self._state = _SHA256_IV  # finalized; reuse is a fresh hash
        self._pending = b""
        self._length = 0
        return b"".join(word.to_bytes(4, "big") for word in state)


def sha256(message: bytes) -> bytes:
    """FIPS-180-4 SHA-256 digest."""
    return Sha256().update(message).digest()


def hmac_sha256(key: bytes, message: bytes) -> bytes:
    """RFC-2104 HMAC over SHA-256."""
    if len(key) > BLOCK_BYTES:
        key = sha256(key)
    key = key.ljust(BLOCK_BYTES, b"\x00")
    ipad = bytes(b ^ 0x36 for b in key)
    opad = bytes(b ^ 0x5C for b in key)
    return sha256(opad + sha256(ipad + message))


@dataclass(frozen=True)
class AesKeyIv:
    key: bytes
    iv: bytes

    def __post_init__(self) -> None:
        if len(self.key) != 32:
            raise ValueError("AES-256 key must be 32 bytes")
        if len(self.iv) != 16:
            raise ValueError("AES IV must be 16 bytes")


class Aes256Cbc:
    """Block-at-a-time AES-256-CBC, mirroring the hardware engine's chaining."""

    def __init__(self, k: AesKeyIv, decrypt: bool = False) -> None:
        self._schedule = aes256_key_schedule(k.key)
        self._feedback = k.iv
        self._decrypt = decrypt

    def process_block(self, block: bytes) -> bytes:
        if len(block) != 16:
            raise ValueError("CBC operates on 16-byte blocks")
        if self._decrypt:
            out = bytes(
                a ^ b
                for a, b in zip(aes256_decrypt_block(self._schedule, block), self._feedback)
            )
            self._feedback = block
        else:
            mixed = bytes(a ^ b for a, b in zip(block, self._feedback))
            out = aes256_encrypt_block(self._schedule, mixed)
            self._feedback = out
        return out


def _cbc(k: AesKeyIv, data: bytes, decrypt: bool) -> bytes:
    if len(data) % 16:
        raise ValueError("input length must be a multiple of 16 bytes")
    engine = Aes256Cbc(k, decrypt=decrypt)
    return b"".join(engine.process_block(data[i: i + 16]) for i in range(0, len(data), 16))


def aes256_cbc_encrypt(k: AesKeyIv, plaintext: bytes) -> bytes:
    return _cbc(k, plaintext, decrypt=False)


def aes256_cbc_decrypt(k: AesKeyIv, ciphertext: bytes) -> bytes:
    return _cbc(k, ciphertext, decrypt=True)


@dataclass(frozen=True)
class RsaParams:
    modulus: int
    exponent: int
    key_bits: int

    def __post_init__(self) -> None:
        if self.key_bits not in (512, 1024):
            raise ValueError("key_bits must be 512 or 1024")
        if self.modulus % 2 == 0 or self.modulus.bit_length() != self.key_bits:
            raise ValueError("modulus must be odd with bit length == key_bits")
        if not 0 < self.exponent < self.modulus:
            raise ValueError("exponent must be in (0, modulus)")


def rsa_modexp(base: int, exponent: int, modulus: int) -> int:
    """Left-to-right square-and-multiply modular exponentiation."""
    if modulus <= 1:
        raise ValueError("modulus must be > 1")
    if not 0 <= base < modulus:
        raise ValueError("base must be in [0, modulus)")
    result = 1
    for bit in bin(exponent)[2:] if exponent else "":
        result = (result * result) % modulus
        if bit == "1":
            result = (result * base) % modulus
    return result


def rsa_apply(params: RsaParams, message: bytes) -> bytes:
    """Raw big-endian exponentiation of a modulus-sized block."""
    size = params.key_bits // 8
    if len(message) != size:
        raise ValueError(f"message must be exactly {size} bytes")
    value = int.from_bytes(message, "big")
    if value >= params.modulus:
        raise ValueError("message does not reduce below the modulus")
    return rsa_modexp(value, params.exponent, params.modulus).to_bytes(size, "big")
