"""Pure-Python kernels: SHA-256 compression and AES-256 block cipher.

This is the fallback used when the compiled extension is unavailable.  Both
backends expose the same four functions; see ``_backend`` for selection.
"""

_MASK32 = 0xFFFFFFFF

_SHA_K = (
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
)


def sha256_compress(state, data):
    """Run the compression function over every 64-byte block in ``data``.

    ``state`` is a sequence of 8 32-bit words; returns the updated 8-tuple.
    ``len(data)`` must be a multiple of 64.
    """
    a, b, c, d, e, f, g, h0 = state
    w = [0] * 64
    for off in range(0, len(data), 64):
        for t in range(16):
            i = off + 4 * t
            w[t] = (data[i] << 24) | (data[i + 1] << 16) | (data[i + 2] << 8) | data[i + 3]
        for t in range(16, 64):
            x = w[t - 15]
            s0 = (((x >> 7) | (x << 25)) ^ ((x >> 18) | (x << 14)) ^ (x >> 3)) & _MASK32
            x = w[t - 2]
            s1 = (((x >> 17) | (x << 15)) ^ ((x >> 19) | (x << 13)) ^ (x >> 10)) & _MASK32
            w[t] = (w[t - 16] + s0 + w[t - 7] + s1) & _MASK32
        va, vb, vc, vd, ve, vf, vg, vh = a, b, c, d, e, f, g, h0
        for t in range(64):
            s1 = (((ve >> 6) | (ve << 26)) ^ ((ve >> 11) | (ve << 21)) ^ ((ve >> 25) | (ve << 7))) & _MASK32
            ch = (ve & vf) ^ (~ve & vg)
            t1 = (vh + s1 + ch + _SHA_K[t] + w[t]) & _MASK32
            s0 = (((va >> 2) | (va << 30)) ^ ((va >> 13) | (va << 19)) ^ ((va >> 22) | (va << 10))) & _MASK32
            maj = (va & vb) ^ (va & vc) ^ (vb & vc)
            t2 = (s0 + maj) & _MASK32
            vh, vg, vf, ve, vd, vc, vb, va = vg, vf, ve, (vd + t1) & _MASK32, vc, vb, va, (t1 + t2) & _MASK32
        a = (a + va) & _MASK32
        b = (b + vb) & _MASK32
        c = (c + vc) & _MASK32
        d = (d + vd) & _MASK32
        e = (e + ve) & _MASK32
        f = (f + vf) & _MASK32
        g = (g + vg) & _MASK32
        h0 = (h0 + vh) & _MASK32
    return (a, b, c, d, e, f, g, h0)


# --- AES-256 ------------------------------------------------------------

_SBOX = bytes.fromhex(
    "637c777bf26b6fc53001672bfed7ab76ca82c97dfa5947f0add4a2af9ca472c0"
    "b7fd9326363ff7cc34a5e5f171d8311504c723c31896059a071280e2eb27b275"
    "09832c1a1b6e5aa0523bd6b329e32f8453d100ed20fcb15b6acbbe394a4c58cf"
    "d0efaafb434d338545f9027f503c9fa851a3408f929d38f5bcb6da2110fff3d2"
    "cd0c13ec5f974417c4a77e3d645d197360814fdc222a908846eeb814de5e0bdb"
    "e0323a0a4906245cc2d3ac629195e479e7c8376d8dd54ea96c56f4ea657aae08"
    "ba78252e1ca6b4c6e8dd741f4bbd8b8a703eb5664803f60e613557b986c11d9e"
    "e1f8981169d98e949b1e87e9ce5528df8ca1890dbfe6426841992d0fb054bb16"
)

_INV_SBOX = bytearray(256)
for _i, _v in enumerate(_SBOX):
    _INV_SBOX[_v] = _i
_INV_SBOX = bytes(_INV_SBOX)

_RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def _xtime(x):
    x <<= 1
    return (x ^ 0x1B) & 0xFF if x & 0x100 else x


def _gf_mul(x, y):
    out = 0
    while y:
        if y & 1:
            out ^= x
        x = _xtime(x)
        y >>= 1
    return out


_MUL2 = bytes(_xtime(i) for i in range(256))
_MUL3 = bytes(_gf_mul(i, 3) for i in range(256))
_MUL9 = bytes(_gf_mul(i, 9) for i in range(256))
_MUL11 = bytes(_gf_mul(i, 11) for i in range(256))
_MUL13 = bytes(_gf_mul(i, 13) for i in range(256))
_MUL14 = bytes(_gf_mul(i, 14) for i in range(256))

# State bytes live in block order: index r + 4c addresses row r, column c.
_SHIFT_ROWS = tuple(
    (4 * ((c + r) % 4)) + r for c in range(4) for r in range(4)
)
_INV_SHIFT_ROWS = tuple(
    (4 * ((c - r) % 4)) + r for c in range(4) for r in range(4)
)


def aes256_key_schedule(key):
    """Expand a 32-byte key into 15 round keys (240 bytes, block order)."""
    words = [int.from_bytes(key[4 * i: 4 * i + 4], "big") for i in range(8)]
    for i in range(8, 60):
        temp = words[i - 1]
        if i % 8 == 0:
            temp = ((temp << 8) | (temp >> 24)) & _MASK32
            temp = (
                (_SBOX[(temp >> 24) & 0xFF] << 24)
                | (_SBOX[(temp >> 16) & 0xFF] << 16)
                | (_SBOX[(temp >> 8) & 0xFF] << 8)
                | _SBOX[temp & 0xFF]
            )
            temp ^= _RCON[i // 8 - 1] << 24
        elif i % 8 == 4:
            temp = (
                (_SBOX[(temp >> 24) & 0xFF] << 24)
                | (_SBOX[(temp >> 16) & 0xFF] << 16)
                | (_SBOX[(temp >> 8) & 0xFF] << 8)
                | _SBOX[temp & 0xFF]
            )
        words.append(words[i - 8] ^ temp)
    return b"".join(w.to_bytes(4, "big") for w in words)


def aes256_encrypt_block(schedule, block):
    s = [block[i] ^ schedule[i] for i in range(16)]
    for rnd in range(1, 14):
        s = [_SBOX[s[i]] for i in _SHIFT_ROWS]
        mixed = [0] * 16
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = s[c], s[c + 1], s[c + 2], s[c + 3]
            mixed[c] = _MUL2[a0] ^ _MUL3[a1] ^ a2 ^ a3
            mixed[c + 1] = a0 ^ _MUL2[a1] ^ _MUL3[a2] ^ a3
            mixed[c + 2] = a0 ^ a1 ^ _MUL2[a2] ^ _MUL3[a3]
            mixed[c + 3] = _MUL3[a0] ^ a1 ^ a2 ^ _MUL2[a3]
        rk = 16 * rnd
        s = [mixed[i] ^ schedule[rk + i] for i in range(16)]
    s = [_SBOX[s[i]] for i in _SHIFT_ROWS]
    return bytes(s[i] ^ schedule[224 + i] for i in range(16))


def aes256_decrypt_block(schedule, block):
    s = [block[i] ^ schedule[224 + i] for i in range(16)]
    for rnd in range(13, 0, -1):
        s = [_INV_SBOX[s[i]] for i in _INV_SHIFT_ROWS]
        rk = 16 * rnd
        s = [s[i] ^ schedule[rk + i] for i in range(16)]
        mixed = [0] * 16
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = s[c], s[c + 1], s[c + 2], s[c + 3]
            mixed[c] = _MUL14[a0] ^ _MUL11[a1] ^ _MUL13[a2] ^ _MUL9[a3]
            mixed[c + 1] = _MUL9[a0] ^ _MUL14[a1] ^ _MUL11[a2] ^ _MUL13[a3]
            mixed[c + 2] = _MUL13[a0] ^ _MUL9[a1] ^ _MUL14[a2] ^ _MUL11[a3]
            mixed[c + 3] = _MUL11[a0] ^ _MUL13[a1] ^ _MUL9[a2] ^ _MUL14[a3]
        s = mixed
    s = [_INV_SBOX[s[i]] for i in _INV_SHIFT_ROWS]
    return bytes(s[i] ^ schedule[i] for i in range(16))
