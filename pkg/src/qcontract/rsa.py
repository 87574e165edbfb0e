"""Unpadded RSA with the signing exponent chosen first.

Key setup picks two primes p, q, forms n = p*q and z = (p-1)*(q-1), fixes a
prime signing exponent d coprime to z, and derives the verification
exponent as e = d^-1 mod z. Signing is s = m^d mod n and verification
recovers m = s^e mod n. Raw modular signatures without padding are
cryptographically unsound for real deployments; this module trades
hardening for auditability and reproducibility.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

__all__ = [
    "Contract",
    "ContractEncodingError",
    "KeyGenerationError",
    "PublicKey",
    "RsaKeyPair",
    "encode_contract",
    "generate_keypair",
    "is_probable_prime",
    "keypair_from_primes",
    "mod_exp",
    "mod_inverse",
    "sign",
    "verify",
]

DEFAULT_MR_ROUNDS = 40

_MAX_PRIME_ATTEMPTS = 10_000


def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


_SMALL_PRIMES = _sieve(1000)
_TRIAL_CONCLUSIVE_BELOW = _SMALL_PRIMES[-1] ** 2


class KeyGenerationError(RuntimeError):
    """Prime sampling exhausted its retry budget."""


class ContractEncodingError(ValueError):
    """Contract bytes do not encode to a usable message integer."""


@dataclass(frozen=True)
class PublicKey:
    n: int
    e: int

    def __post_init__(self) -> None:
        if self.n < 6:
            raise ValueError(f"modulus must be at least 6, got {self.n}")


@dataclass(frozen=True)
class RsaKeyPair:
    p: int
    q: int
    n: int
    z: int
    d: int
    e: int

    @property
    def public(self) -> PublicKey:
        return PublicKey(n=self.n, e=self.e)


@dataclass(frozen=True)
class Contract:
    """Agreed contract text together with its big-endian integer encoding."""

    text: bytes
    m: int


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus by square-and-multiply."""
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise ValueError(f"exponent must be >= 0, got {exponent}")
    result = 1
    base %= modulus
    while exponent:
        if exponent & 1:
            result = result * base % modulus
        base = base * base % modulus
        exponent >>= 1
    return result


def mod_inverse(a: int, modulus: int) -> int:
    """Inverse of a mod modulus via the extended Euclidean algorithm."""
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    g, x = _extended_gcd(a % modulus, modulus)
    if g != 1:
        raise ValueError(f"{a} has no inverse mod {modulus} (gcd is {g})")
    return x % modulus


def _extended_gcd(a: int, b: int) -> tuple[int, int]:
    # returns (g, x) with a*x = g (mod b)
    x0, x1 = 1, 0
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
    return a, x0


def is_probable_prime(n: int, rounds: int = DEFAULT_MR_ROUNDS, rng=None) -> bool:
    """Miller-Rabin with small-prime trial division first.

    A composite passes with probability at most 4**-rounds. Trial division
    is conclusive for n below the square of the largest sieved prime, so
    small inputs never consume randomness.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _TRIAL_CONCLUSIVE_BELOW:
        return True

    if rng is None:
        rng = random
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(bits: int, rng) -> int:
    for _ in range(_MAX_PRIME_ATTEMPTS):
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(candidate, rng=rng):
            return candidate
    raise KeyGenerationError(f"no {bits}-bit prime found in {_MAX_PRIME_ATTEMPTS} draws")


def _default_signing_exponent(z: int) -> int:
    # smallest prime >= 3 that is coprime to z; deterministic in (p, q)
    candidate = 3
    while True:
        if math.gcd(candidate, z) == 1 and is_probable_prime(candidate):
            return candidate
        candidate += 2


def keypair_from_primes(p: int, q: int, d: int | None = None) -> RsaKeyPair:
    """Assemble and validate a keypair from explicit primes.

    With d omitted, the signing exponent is the smallest prime >= 3 coprime
    to z; passing d overrides that rule (worked examples, tests).
    """
    if p == q:
        raise ValueError("p and q must be distinct primes")
    if not is_probable_prime(p) or not is_probable_prime(q):
        raise ValueError(f"p={p}, q={q} must both be prime")
    n = p * q
    z = (p - 1) * (q - 1)
    if d is None:
        d = _default_signing_exponent(z)
    else:
        if not is_probable_prime(d):
            raise ValueError(f"signing exponent d={d} must be prime")
        if math.gcd(d, z) != 1:
            raise ValueError(f"signing exponent d={d} must be coprime to z={z}")
    e = mod_inverse(d, z)
    return RsaKeyPair(p=p, q=q, n=n, z=z, d=d, e=e)


def generate_keypair(prime_bits: int, rng, d_override: int | None = None) -> RsaKeyPair:
    """Sample two distinct primes of exactly prime_bits bits and build keys."""
    if prime_bits < 4:
        raise ValueError(f"prime_bits must be >= 4, got {prime_bits}")
    p = _random_prime(prime_bits, rng)
    q = _random_prime(prime_bits, rng)
    attempts = 0
    while q == p:
        q = _random_prime(prime_bits, rng)
        attempts += 1
        if attempts > _MAX_PRIME_ATTEMPTS:
            raise KeyGenerationError("could not find a second distinct prime")
    return keypair_from_primes(p, q, d_override)


def sign(m: int, key: RsaKeyPair) -> int:
    """Signature m**d mod n. The message must already lie in (0, n)."""
    if not 0 < m < key.n:
        raise ValueError(f"message {m} out of range (0, {key.n})")
    return mod_exp(m, key.d, key.n)


def verify(s: int, pub: PublicKey) -> int:
    """Recover s**e mod n; the caller compares the result to the message."""
    if not 0 <= s < pub.n:
        raise ValueError(f"signature {s} out of range [0, {pub.n})")
    return mod_exp(s, pub.e, pub.n)


def encode_contract(text: bytes, bound: int) -> Contract:
    """Interpret contract bytes as a big-endian integer below `bound`.

    Out-of-range contracts are a hard error rather than a silent modular
    reduction, since reduction would let distinct contracts share one
    signature.
    """
    if bound < 2:
        raise ValueError(f"bound must be >= 2, got {bound}")
    if len(text) == 0:
        raise ContractEncodingError("contract is empty")
    m = int.from_bytes(text, "big")
    if m == 0:
        raise ContractEncodingError("contract encodes to zero; pick nonzero bytes")
    if m >= bound:
        raise ContractEncodingError(
            f"contract integer {m} exceeds the key bound {bound}; "
            "use larger keys or a shorter contract"
        )
    return Contract(text=bytes(text), m=m)
