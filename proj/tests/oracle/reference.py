#!/usr/bin/env python3
"""Test-only reference implementations used to freeze fixture files.

Chaskey is written from the published reference algorithm on Python
integers; AES-CTR comes from the `cryptography` package. Neither shares
code with the C++ library.
"""

import struct

MASK32 = 0xFFFFFFFF


def rotl(x, b):
    return ((x << b) | (x >> (32 - b))) & MASK32


def chaskey_round(v):
    v0, v1, v2, v3 = v
    v0 = (v0 + v1) & MASK32; v1 = rotl(v1, 5); v1 ^= v0; v0 = rotl(v0, 16)
    v2 = (v2 + v3) & MASK32; v3 = rotl(v3, 8); v3 ^= v2
    v0 = (v0 + v3) & MASK32; v3 = rotl(v3, 13); v3 ^= v0
    v2 = (v2 + v1) & MASK32; v1 = rotl(v1, 7); v1 ^= v2; v2 = rotl(v2, 16)
    return [v0, v1, v2, v3]


def double128(key_int):
    out = key_int << 1
    if out >> 128:
        out = (out & ((1 << 128) - 1)) ^ 0x87
    return out


def key_to_int(key_bytes):
    return int.from_bytes(key_bytes, "little")


def int_to_words(x):
    return list(struct.unpack("<4I", x.to_bytes(16, "little")))


def chaskey(key_bytes, msg, rounds=8):
    k = key_to_int(key_bytes)
    k1 = double128(k)
    k2 = double128(k1)
    v = int_to_words(k)
    blocks = [msg[i:i + 16] for i in range(0, len(msg), 16)]
    if not blocks:
        blocks = [b""]
    for blk in blocks[:-1]:
        w = struct.unpack("<4I", blk)
        v = [a ^ b for a, b in zip(v, w)]
        for _ in range(rounds):
            v = chaskey_round(v)
    last = blocks[-1]
    if len(last) == 16:
        sub = k1
    else:
        sub = k2
        last = last + b"\x01" + b"\x00" * (15 - len(last))
    lw = int_to_words(sub)
    w = struct.unpack("<4I", last)
    v = [a ^ b ^ c for a, b, c in zip(v, w, lw)]
    for _ in range(rounds):
        v = chaskey_round(v)
    v = [a ^ c for a, c in zip(v, lw)]
    return struct.pack("<4I", *v)


def aes_ctr_first8(key, block16):
    from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block16) + enc.finalize()


def nonce_block(ident, session_nonce=None):
    hi = ident if session_nonce is None else (session_nonce ^ ident)
    return hi.to_bytes(8, "big") + (0).to_bytes(8, "big")


def secure_wire(mac_key, enc_key, ident, payload40):
    payload_bytes = payload40.to_bytes(5, "big")
    tag = chaskey(mac_key, payload_bytes)[:3]
    field = payload_bytes + tag
    ks = aes_ctr_first8(enc_key, nonce_block(ident))[:8]
    return bytes(a ^ b for a, b in zip(field, ks))
