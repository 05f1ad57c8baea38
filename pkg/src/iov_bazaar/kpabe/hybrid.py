"""Hybrid AES-256-GCM content protection gated by the KP-ABE scheme.

A sealed file is ``nonce || aes_body || trailer || trailer_len`` where
the trailer is ``magic || version || ct_len || ct_json`` and the CT
encrypts the fresh AES key.  Opening decrypts the KP-ABE ciphertext
first; an attribute or time mismatch returns Bottom without touching
the AES body.
"""

from __future__ import annotations

import base64
import json
import struct

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .backend import BilinearBackend, G1Element, GTElement
from .scheme import Bottom, Ciphertext, PrivateKey, PublicParams, decrypt, encrypt
from .timetree import Node

MAGIC = b"IOVSEAL\x01"
VERSION = 1
NONCE_LEN = 12
KEY_LEN = 32


class MalformedSealedFile(ValueError):
    pass


def _b64(n: int) -> str:
    return base64.b64encode(n.to_bytes(40, "big")).decode()


def _unb64(s: str) -> int:
    return int.from_bytes(base64.b64decode(s), "big")


def serialize_ciphertext(ct: Ciphertext) -> str:
    payload = {
        "periods": [list(n) for n in ct.periods],
        "attributes": list(ct.attributes),
        "c0": _b64(ct.c0.exp),
        "c0_prime": _b64(ct.c0_prime.exp),
        "c_time": {",".join(map(str, n)): [_b64(a.exp), _b64(b.exp)]
                   for n, (a, b) in ct.c_time.items()},
        "k_attr": {str(y): _b64(e.exp) for y, e in ct.k_attr.items()},
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def deserialize_ciphertext(text: str) -> Ciphertext:
    try:
        payload = json.loads(text)
        periods = tuple(tuple(n) for n in payload["periods"])
        c_time: dict[Node, tuple[G1Element, G1Element]] = {}
        for key, (a, b) in payload["c_time"].items():
            node = tuple(int(x) for x in key.split(","))
            c_time[node] = (G1Element(_unb64(a)), G1Element(_unb64(b)))
        return Ciphertext(
            periods=periods,
            attributes=tuple(payload["attributes"]),
            c0=GTElement(_unb64(payload["c0"])),
            c0_prime=G1Element(_unb64(payload["c0_prime"])),
            c_time=c_time,
            k_attr={int(y): G1Element(_unb64(e)) for y, e in payload["k_attr"].items()},
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedSealedFile(str(exc)) from exc


def hybrid_seal(content: bytes, pk: PublicParams, periods: list[Node],
                attributes: list[int], rng, backend: BilinearBackend) -> bytes:
    """AES-encrypt content under a fresh key and append its KP-ABE CT."""
    if not content:
        raise ValueError("content must be non-empty")
    key = bytes(rng.bytes(KEY_LEN))
    nonce = bytes(rng.bytes(NONCE_LEN))
    body = AESGCM(key).encrypt(nonce, content, MAGIC)
    ct = encrypt(pk, backend.encode_message(key), periods, attributes, rng, backend)
    ct_bytes = serialize_ciphertext(ct).encode()
    trailer = MAGIC + bytes([VERSION]) + struct.pack(">I", len(ct_bytes)) + ct_bytes
    return nonce + body + trailer + struct.pack(">I", len(trailer))


def parse_sealed(sealed: bytes) -> tuple[bytes, bytes, Ciphertext]:
    """(nonce, aes_body, ciphertext) from a sealed file."""
    if len(sealed) < NONCE_LEN + 4 + len(MAGIC) + 5:
        raise MalformedSealedFile("too short")
    (trailer_len,) = struct.unpack(">I", sealed[-4:])
    if trailer_len + 4 + NONCE_LEN > len(sealed):
        raise MalformedSealedFile("bad trailer length")
    trailer = sealed[-4 - trailer_len:-4]
    if trailer[:len(MAGIC)] != MAGIC:
        raise MalformedSealedFile("bad magic")
    if trailer[len(MAGIC)] != VERSION:
        raise MalformedSealedFile("unsupported version")
    (ct_len,) = struct.unpack(">I", trailer[len(MAGIC) + 1:len(MAGIC) + 5])
    ct_bytes = trailer[len(MAGIC) + 5:]
    if len(ct_bytes) != ct_len:
        raise MalformedSealedFile("ciphertext length mismatch")
    ct = deserialize_ciphertext(ct_bytes.decode())
    nonce = sealed[:NONCE_LEN]
    body = sealed[NONCE_LEN:-4 - trailer_len]
    return nonce, body, ct


def hybrid_open(sealed: bytes, sk: PrivateKey, pk: PublicParams,
                backend: BilinearBackend) -> bytes | Bottom:
    """Recover content, or Bottom when the key cannot decrypt the CT."""
    nonce, body, ct = parse_sealed(sealed)
    result = decrypt(ct, sk, pk, backend)
    if isinstance(result, Bottom):
        return result
    key = backend.decode_message(result, KEY_LEN)
    try:
        return AESGCM(key).decrypt(nonce, body, MAGIC)
    except InvalidTag as exc:
        raise MalformedSealedFile("authenticated decryption failed") from exc
