# cython: language_level=3
"""Compiled kernels: SHA-256 compression and AES-256 block cipher.

Same interface as ``_purepy``; selected at import time by ``_backend``.
"""

from libc.stdint cimport uint8_t, uint32_t
from libc.string cimport memcpy


cdef uint32_t[64] SHA_K
SHA_K = [
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1,
    0x923F82A4, 0xAB1C5ED5, 0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3,
    0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174, 0xE49B69C1, 0xEFBE4786,
    0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147,
    0x06CA6351, 0x14292967, 0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13,
    0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85, 0xA2BFE8A1, 0xA81A664B,
    0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A,
    0x5B9CCA4F, 0x682E6FF3, 0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208,
    0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
]


cdef inline uint32_t rotr(uint32_t x, int n):
    return (x >> n) | (x << (32 - n))


def sha256_compress(state, data):
    """Run the compression function over every 64-byte block in ``data``."""
    cdef uint32_t h[8]
    cdef uint32_t w[64]
    cdef uint32_t a, b, c, d, e, f, g, hh, s0, s1, t1, t2
    cdef const uint8_t[:] buf = data
    cdef Py_ssize_t n = len(data)
    cdef Py_ssize_t off
    cdef int t, i

    for i in range(8):
        h[i] = state[i]

    for off in range(0, n, 64):
        for t in range(16):
            i = <int> (off + 4 * t)
            w[t] = ((<uint32_t> buf[i]) << 24) | ((<uint32_t> buf[i + 1]) << 16) \
                | ((<uint32_t> buf[i + 2]) << 8) | (<uint32_t> buf[i + 3])
        for t in range(16, 64):
            s0 = rotr(w[t - 15], 7) ^ rotr(w[t - 15], 18) ^ (w[t - 15] >> 3)
            s1 = rotr(w[t - 2], 17) ^ rotr(w[t - 2], 19) ^ (w[t - 2] >> 10)
            w[t] = w[t - 16] + s0 + w[t - 7] + s1
        a, b, c, d = h[0], h[1], h[2], h[3]
        e, f, g, hh = h[4], h[5], h[6], h[7]
        for t in range(64):
            s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)
            t1 = hh + s1 + ((e & f) ^ (~e & g)) + SHA_K[t] + w[t]
            s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)
            t2 = s0 + ((a & b) ^ (a & c) ^ (b & c))
            hh = g
            g = f
            f = e
            e = d + t1
            d = c
            c = b
            b = a
            a = t1 + t2
        h[0] += a
        h[1] += b
        h[2] += c
        h[3] += d
        h[4] += e
        h[5] += f
        h[6] += g
        h[7] += hh

    return (h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7])


# --- AES-256 ------------------------------------------------------------

cdef uint8_t[256] SBOX
SBOX = bytes.fromhex(
    "637c777bf26b6fc53001672bfed7ab76ca82c97dfa5947f0add4a2af9ca472c0"
    "b7fd9326363ff7cc34a5e5f171d8311504c723c31896059a071280e2eb27b275"
    "09832c1a1b6e5aa0523bd6b329e32f8453d100ed20fcb15b6acbbe394a4c58cf"
    "d0efaafb434d338545f9027f503c9fa851a3408f929d38f5bcb6da2110fff3d2"
    "cd0c13ec5f974417c4a77e3d645d197360814fdc222a908846eeb814de5e0bdb"
    "e0323a0a4906245cc2d3ac629195e479e7c8376d8dd54ea96c56f4ea657aae08"
    "ba78252e1ca6b4c6e8dd741f4bbd8b8a703eb5664803f60e613557b986c11d9e"
    "e1f8981169d98e949b1e87e9ce5528df8ca1890dbfe6426841992d0fb054bb16"
)

cdef uint8_t[256] INV_SBOX
cdef int _i
for _i in range(256):
    INV_SBOX[SBOX[_i]] = <uint8_t> _i

cdef uint8_t[10] RCON
RCON = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36]

cdef uint8_t[256] MUL2, MUL3, MUL9, MUL11, MUL13, MUL14


cdef uint8_t gf_mul(int x, int y):
    cdef int out = 0
    while y:
        if y & 1:
            out ^= x
        x <<= 1
        if x & 0x100:
            x = (x ^ 0x1B) & 0xFF
        y >>= 1
    return <uint8_t> out

for _i in range(256):
    MUL2[_i] = gf_mul(_i, 2)
    MUL3[_i] = gf_mul(_i, 3)
    MUL9[_i] = gf_mul(_i, 9)
    MUL11[_i] = gf_mul(_i, 11)
    MUL13[_i] = gf_mul(_i, 13)
    MUL14[_i] = gf_mul(_i, 14)

# State bytes in block order: index r + 4c addresses row r, column c.
cdef int[16] SHIFT_ROWS, INV_SHIFT_ROWS
for _i in range(16):
    # _i = 4c + r; +4 keeps the C-style modulo non-negative
    SHIFT_ROWS[_i] = 4 * (((_i >> 2) + (_i & 3)) % 4) + (_i & 3)
    INV_SHIFT_ROWS[_i] = 4 * (((_i >> 2) - (_i & 3) + 4) % 4) + (_i & 3)


cdef inline uint32_t sub_word(uint32_t w):
    return ((<uint32_t> SBOX[(w >> 24) & 0xFF]) << 24) \
        | ((<uint32_t> SBOX[(w >> 16) & 0xFF]) << 16) \
        | ((<uint32_t> SBOX[(w >> 8) & 0xFF]) << 8) \
        | (<uint32_t> SBOX[w & 0xFF])


def aes256_key_schedule(key):
    """Expand a 32-byte key into 15 round keys (240 bytes, block order)."""
    cdef uint32_t words[60]
    cdef const uint8_t[:] k = key
    cdef uint8_t out[240]
    cdef uint32_t temp
    cdef int i

    if len(key) != 32:
        raise ValueError("AES-256 key must be 32 bytes")
    for i in range(8):
        words[i] = ((<uint32_t> k[4 * i]) << 24) | ((<uint32_t> k[4 * i + 1]) << 16) \
            | ((<uint32_t> k[4 * i + 2]) << 8) | (<uint32_t> k[4 * i + 3])
    for i in range(8, 60):
        temp = words[i - 1]
        if i % 8 == 0:
            temp = sub_word((temp << 8) | (temp >> 24)) ^ ((<uint32_t> RCON[i // 8 - 1]) << 24)
        elif i % 8 == 4:
            temp = sub_word(temp)
        words[i] = words[i - 8] ^ temp
    for i in range(60):
        out[4 * i] = <uint8_t> (words[i] >> 24)
        out[4 * i + 1] = <uint8_t> ((words[i] >> 16) & 0xFF)
        out[4 * i + 2] = <uint8_t> ((words[i] >> 8) & 0xFF)
        out[4 * i + 3] = <uint8_t> (words[i] & 0xFF)
    return bytes(out[:240])


def aes256_encrypt_block(schedule, block):
    cdef const uint8_t[:] rk = schedule
    cdef const uint8_t[:] inp = block
    cdef uint8_t s[16]
    cdef uint8_t t[16]
    cdef int i, rnd, c
    cdef uint8_t a0, a1, a2, a3

    for i in range(16):
        s[i] = inp[i] ^ rk[i]
    for rnd in range(1, 14):
        for i in range(16):
            t[i] = SBOX[s[SHIFT_ROWS[i]]]
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = t[c], t[c + 1], t[c + 2], t[c + 3]
            s[c] = MUL2[a0] ^ MUL3[a1] ^ a2 ^ a3
            s[c + 1] = a0 ^ MUL2[a1] ^ MUL3[a2] ^ a3
            s[c + 2] = a0 ^ a1 ^ MUL2[a2] ^ MUL3[a3]
            s[c + 3] = MUL3[a0] ^ a1 ^ a2 ^ MUL2[a3]
        for i in range(16):
            s[i] ^= rk[16 * rnd + i]
    for i in range(16):
        t[i] = SBOX[s[SHIFT_ROWS[i]]] ^ rk[224 + i]
    return bytes(t[:16])


def aes256_decrypt_block(schedule, block):
    cdef const uint8_t[:] rk = schedule
    cdef const uint8_t[:] inp = block
    cdef uint8_t s[16]
    cdef uint8_t t[16]
    cdef int i, rnd, c
    cdef uint8_t a0, a1, a2, a3

    for i in range(16):
        s[i] = inp[i] ^ rk[224 + i]
    for rnd in range(13, 0, -1):
        for i in range(16):
            t[i] = INV_SBOX[s[INV_SHIFT_ROWS[i]]] ^ rk[16 * rnd + i]
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = t[c], t[c + 1], t[c + 2], t[c + 3]
            s[c] = MUL14[a0] ^ MUL11[a1] ^ MUL13[a2] ^ MUL9[a3]
            s[c + 1] = MUL9[a0] ^ MUL14[a1] ^ MUL11[a2] ^ MUL13[a3]
            s[c + 2] = MUL13[a0] ^ MUL9[a1] ^ MUL14[a2] ^ MUL11[a3]
            s[c + 3] = MUL11[a0] ^ MUL13[a1] ^ MUL9[a2] ^ MUL14[a3]
    for i in range(16):
        t[i] = INV_SBOX[s[INV_SHIFT_ROWS[i]]] ^ rk[i]
    return bytes(t[:16])
