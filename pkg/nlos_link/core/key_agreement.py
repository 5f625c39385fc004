"""
Password-Authenticated Key Agreement

Diffie-Hellman where both exchanged values are blinded by an exponent M
derived from a shared password:

    Alice -> Bob:   K1 = g^(a*M) mod n
    Bob -> Alice:   K2 = g^(b*M) mod n
    Alice:          R = K2^(M^-1) mod n,  Key1 = R^a mod n
    Bob:            X = K1^(M^-1) mod n,  Key2 = X^b mod n

M^-1 is taken modulo n-1, so by Fermat's little theorem the blinding cancels
and both sides hold g^(a*b) mod n. A peer with a different password unblinds
with the wrong inverse and ends up with a different key.
"""
import hashlib
import logging
import math
import random
import re
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple

from Crypto.Util.number import isPrime

from nlos_link.errors import DomainError, HandshakeStateError, NotInvertibleError, ProtocolError

logger = logging.getLogger(__name__)

DEFAULT_HASH = "sha256"
LENGTH_PREFIX = struct.Struct(">I")

# 2048-bit MODP group, generator 2
_MODP_2048_HEX = re.sub(r"\s", "", """
FFFFFFFF FFFFFFFF C90FDAA2 2168C234 C4C6628B 80DC1CD1
29024E08 8A67CC74 020BBEA6 3B139B22 514A0879 8E3404DD
EF9519B3 CD3A431B 302B0A6D F25F1437 4FE1356D 6D51C245
E485B576 625E7EC6 F44C42E9 A637ED6B 0BFF5CB6 F406B7ED
EE386BFB 5A899FA5 AE9F2411 7C4B1FE6 49286651 ECE45B3D
C2007CB8 A163BF05 98DA4836 1C55D39A 69163FA8 FD24CF5F
83655D23 DCA3AD96 1C62F356 208552BB 9ED52907 7096966D
670C354E 4ABC9804 F1746C08 CA18217C 32905E46 2E36CE3B
E39E772C 180E8603 9B2783A2 EC07A28F B5C55DF0 6F4C52C9
DE2BCBF6 95581718 3995497C EA956AE5 15D22618 98FA0510
15728E5A 8AACAA68 FFFFFFFF FFFFFFFF
""")


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """
    base^exponent mod modulus by left-to-right square-and-multiply.

    Raises:
        DomainError: If modulus < 2 or exponent < 0
    """
    if modulus < 2:
        raise DomainError(f"Modulus must be >= 2, got {modulus}", argument="modulus", value=modulus)
    if exponent < 0:
        raise DomainError(f"Exponent must be >= 0, got {exponent}", argument="exponent", value=exponent)

    base %= modulus
    result = 1
    for bit in bin(exponent)[2:]:
        result = (result * result) % modulus
        if bit == "1":
            result = (result * base) % modulus
    return result % modulus


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """
    The extended Euclidean algorithm.

    Returns:
        (g, x, y) with a*x + b*y = g = gcd(a, b)
    """
    last_remainder, remainder = abs(a), abs(b)
    x, last_x, y, last_y = 0, 1, 1, 0

    while remainder:
        last_remainder, (quotient, remainder) = remainder, divmod(last_remainder, remainder)
        x, last_x = last_x - quotient * x, x
        y, last_y = last_y - quotient * y, y

    return (
        last_remainder,
        last_x * (-1 if a < 0 else 1),
        last_y * (-1 if b < 0 else 1),
    )


def mod_inverse(m: int, modulus: int) -> int:
    """
    Inverse of m modulo modulus, in [1, modulus).

    Raises:
        DomainError: If modulus < 2
        NotInvertibleError: If gcd(m, modulus) != 1
    """
    if modulus < 2:
        raise DomainError(f"Modulus must be >= 2, got {modulus}", argument="modulus", value=modulus)
    g, x, _ = extended_gcd(m, modulus)
    if g != 1:
        raise NotInvertibleError(f"{m} is not invertible mod {modulus} (gcd {g})", value=m, modulus=modulus)
    return x % modulus


@dataclass(frozen=True)
class PublicParams:
    """Shared group: prime modulus n and base g"""
    n: int
    g: int

    def __post_init__(self):
        if self.n < 3 or not isPrime(self.n):
            raise DomainError(f"Modulus n must be an odd prime, got {self.n}", argument="n", value=self.n)
        if not 1 < self.g < self.n:
            raise DomainError(f"Base g must satisfy 1 < g < n, got {self.g}", argument="g", value=self.g)

    @classmethod
    def modp_2048(cls) -> "PublicParams":
        return cls(n=int(_MODP_2048_HEX, 16), g=2)

    @property
    def order(self) -> int:
        """Exponent modulus n - 1"""
        return self.n - 1


@dataclass(frozen=True)
class PasswordDigest:
    """Password blinding exponent M and its inverse modulo n - 1"""
    M: int
    M_inv: int

    def check(self, params: PublicParams) -> "PasswordDigest":
        order = params.order
        if not (1 <= self.M < order and 1 <= self.M_inv < order):
            raise DomainError(f"Digest values must lie in [1, {order})", argument="digest")
        if math.gcd(self.M, order) != 1 or (self.M * self.M_inv) % order != 1:
            raise DomainError(f"M={self.M} and M_inv={self.M_inv} are not inverse modulo {order}",
                              argument="digest")
        return self


def digest_from_value(m0: int, params: PublicParams) -> PasswordDigest:
    """
    Smallest unit modulo n-1 at or after m0, wrapping within [1, n-1), with its inverse.

    Terminates because 1 is always a unit.
    """
    order = params.order
    if order == 2:
        return PasswordDigest(M=1, M_inv=1)
    m = m0 % order or 1
    while math.gcd(m, order) != 1:
        m += 1
        if m >= order:
            m = 1
    return PasswordDigest(M=m, M_inv=mod_inverse(m, order))


def derive_digest(password: bytes, params: PublicParams, hash_name: str = DEFAULT_HASH) -> PasswordDigest:
    """
    Deterministically map a password to its blinding digest.

    M0 = int(H(password)) mod (n-1), mapped into [1, n-1); M is the first unit at or after M0.

    Raises:
        DomainError: On an empty password
    """
    if not password:
        raise DomainError("Password must not be empty", argument="password")
    if isinstance(password, str):
        password = password.encode('utf-8')
    value = int.from_bytes(hashlib.new(hash_name, password).digest(), 'big')
    return digest_from_value(value, params)


def unit_digest() -> PasswordDigest:
    """M = 1: no blinding, the exchange degenerates to plain Diffie-Hellman."""
    return PasswordDigest(M=1, M_inv=1)


def sample_exponent(params: PublicParams, rng: random.Random) -> int:
    """Uniform secret exponent in [2, n-2]."""
    if params.n < 5:
        return 1
    return rng.randint(2, params.n - 2)


def key_fingerprint(key: int, hash_name: str = DEFAULT_HASH) -> str:
    """Hex of the first 8 bytes of H(key); safe to print or log."""
    length = max(1, (key.bit_length() + 7) // 8)
    return hashlib.new(hash_name, key.to_bytes(length, 'big')).digest()[:8].hex()


class Role(str, Enum):
    INITIATOR = "initiator"
    RESPONDER = "responder"


class SessionState(str, Enum):
    FRESH = "fresh"
    SENT = "sent"
    ESTABLISHED = "established"


@dataclass(frozen=True)
class HandshakeMessage:
    """One exchange value on the wire"""
    sender: Role
    label: str                   # "K1" or "K2"
    value: int

    def encode(self) -> bytes:
        """4-byte big-endian length, then the value as unsigned big-endian bytes"""
        body = self.value.to_bytes(max(1, (self.value.bit_length() + 7) // 8), 'big')
        return LENGTH_PREFIX.pack(len(body)) + body

    @classmethod
    def decode(cls, frame: bytes, sender: Role, label: str) -> "HandshakeMessage":
        if len(frame) < LENGTH_PREFIX.size:
            raise ProtocolError(f"Frame of {len(frame)} bytes is shorter than its length prefix")
        (length,) = LENGTH_PREFIX.unpack_from(frame)
        body = frame[LENGTH_PREFIX.size:]
        if len(body) != length:
            raise ProtocolError(f"Frame announces {length} bytes but carries {len(body)}")
        return cls(sender=sender, label=label, value=int.from_bytes(body, 'big'))


@dataclass
class HandshakeSession:
    """
    One side of the exchange: Fresh -> Sent -> Established.

    A session is owned by one logical thread at a time.
    """
    role: Role
    params: PublicParams
    digest: PasswordDigest
    secret_exponent: int
    state: SessionState = SessionState.FRESH
    shared_key: Optional[int] = field(default=None, repr=False)

    def __post_init__(self):
        if not 1 <= self.secret_exponent < self.params.order:
            raise DomainError(
                f"Secret exponent must lie in [1, {self.params.order}), got {self.secret_exponent}",
                argument="secret_exponent")

    @property
    def label(self) -> str:
        return "K1" if self.role == Role.INITIATOR else "K2"

    def _expect(self, expected: SessionState):
        if self.state != expected:
            raise HandshakeStateError(
                f"{self.role.value} session is {self.state.value}, expected {expected.value}",
                state=self.state, expected=expected)

    def make_public_value(self) -> int:
        """K = g^(secret * M) mod n"""
        self._expect(SessionState.FRESH)
        value = mod_pow(self.params.g, self.secret_exponent * self.digest.M, self.params.n)
        self.state = SessionState.SENT
        return value

    def derive_shared_key(self, peer_value: int) -> int:
        """Unblind the peer value with M^-1, then raise to the own secret."""
        self._expect(SessionState.SENT)
        if not 0 < peer_value < self.params.n:
            raise ProtocolError(f"Peer value {peer_value} is outside (0, n)")
        unblinded = mod_pow(peer_value, self.digest.M_inv, self.params.n)
        self.shared_key = mod_pow(unblinded, self.secret_exponent, self.params.n)
        self.state = SessionState.ESTABLISHED
        return self.shared_key


def make_public_value(session: HandshakeSession) -> int:
    return session.make_public_value()


def derive_shared_key(session: HandshakeSession, peer_value: int) -> int:
    return session.derive_shared_key(peer_value)


@dataclass
class HandshakeResult:
    key_initiator: int
    key_responder: int
    transcript: List[HandshakeMessage]

    @property
    def keys_match(self) -> bool:
        return self.key_initiator == self.key_responder


Transport = Callable[[bytes], bytes]


def run_handshake(
    initiator_password: bytes,
    responder_password: bytes,
    params: PublicParams,
    a: int,
    b: int,
    transport: Optional[Transport] = None,
    initiator_digest: Optional[PasswordDigest] = None,
    responder_digest: Optional[PasswordDigest] = None,
) -> HandshakeResult:
    """
    Run both sides of the two-message exchange.

    Args:
        initiator_password: Password held by the initiator
        responder_password: Password held by the responder
        params: Shared public group
        a: Initiator secret exponent
        b: Responder secret exponent
        transport: Carries each encoded frame to the peer; in-process hand-over when omitted
        initiator_digest: Overrides the digest derived from initiator_password
        responder_digest: Overrides the digest derived from responder_password

    Returns:
        Both derived keys and the transcript [K1, K2]
    """
    carry = transport or (lambda frame: frame)
    initiator = HandshakeSession(
        role=Role.INITIATOR,
        params=params,
        digest=initiator_digest.check(params) if initiator_digest else derive_digest(initiator_password, params),
        secret_exponent=a,
    )
    responder = HandshakeSession(
        role=Role.RESPONDER,
        params=params,
        digest=responder_digest.check(params) if responder_digest else derive_digest(responder_password, params),
        secret_exponent=b,
    )

    k1 = HandshakeMessage(Role.INITIATOR, "K1", initiator.make_public_value())
    received_k1 = HandshakeMessage.decode(carry(k1.encode()), Role.INITIATOR, "K1")
    k2 = HandshakeMessage(Role.RESPONDER, "K2", responder.make_public_value())
    key_responder = responder.derive_shared_key(received_k1.value)
    received_k2 = HandshakeMessage.decode(carry(k2.encode()), Role.RESPONDER, "K2")
    key_initiator = initiator.derive_shared_key(received_k2.value)

    result = HandshakeResult(key_initiator=key_initiator, key_responder=key_responder, transcript=[k1, k2])
    if result.keys_match:
        logger.info(f"Handshake established key {key_fingerprint(key_initiator)}")
    else:
        logger.warning("Handshake keys differ: password digests do not match")
    return result
