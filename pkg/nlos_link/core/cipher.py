"""
Payload cipher for the simulated secured link

XORs the payload with a keystream of hash blocks H(key || counter) derived from
the agreed shared key. Demo plumbing for the simulator, not a vetted cipher.
"""
import base64
import hashlib
import struct

from nlos_link.core.key_agreement import DEFAULT_HASH

_COUNTER = struct.Struct(">I")


def _key_bytes(key: int) -> bytes:
    return key.to_bytes(max(1, (key.bit_length() + 7) // 8), 'big')


def keystream(key: int, length: int, hash_name: str = DEFAULT_HASH) -> bytes:
    """First `length` bytes of H(key || 0) || H(key || 1) || ..."""
    seed = _key_bytes(key)
    blocks = []
    produced = 0
    counter = 0
    while produced < length:
        block = hashlib.new(hash_name, seed + _COUNTER.pack(counter)).digest()
        blocks.append(block)
        produced += len(block)
        counter += 1
    return b"".join(blocks)[:length]


def _xor_bytes(data: bytes, key: bytes) -> bytes:
    """XOR data with an equally long keystream"""
    return bytes(d ^ k for d, k in zip(data, key))


def encipher(plaintext: bytes, key: int) -> str:
    """
    Encipher a payload with the shared key.

    Args:
        plaintext: Payload bytes
        key: Shared key from the key agreement

    Returns:
        Base64 encoded ciphertext
    """
    if not plaintext:
        return ""
    encrypted = _xor_bytes(plaintext, keystream(key, len(plaintext)))
    return base64.b64encode(encrypted).decode('ascii')


def decipher(ciphertext: str, key: int) -> bytes:
    """
    Reverse encipher() with the (hopefully same) shared key.

    Args:
        ciphertext: Base64 encoded ciphertext

    Returns:
        Recovered payload bytes
    """
    if not ciphertext:
        return b""
    encrypted = base64.b64decode(ciphertext.encode('ascii'))
    return _xor_bytes(encrypted, keystream(key, len(encrypted)))
