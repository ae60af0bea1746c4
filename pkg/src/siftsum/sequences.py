"""Sifted sequences: odd primitive Gaussian and primitive Loeschian integers.

``b(n) = 1`` iff ``n`` is odd and ``n = u^2 + v^2`` with ``gcd(u, v) = 1``;
equivalently ``n = 1 mod 4`` with no prime factor ``3 mod 4``.

``l(n) = 1`` iff ``n = u^2 + uv + v^2`` with ``gcd(u, v) = 1``.  Such ``n``
have no prime factor ``2 mod 3`` *and* are not divisible by 9: the primitive
representations force ``v_3(n) <= 1``.  The looser description "no prime
factor 2 mod 3" admits 9, 63, 81, ... which have no coprime representation;
the sieve here follows the representation definition, and the test suite
checks it against the brute-force oracles below.

Both sieves only need primes up to ``sqrt(N)`` because of a residue argument:
a number in the right residue class with a forbidden prime factor has at
least two of them (counted with multiplicity), so the smallest is at most
``sqrt(n)``.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import resolve_threads
from .errors import DomainError

SEGMENT = 1 << 20

GAUSSIAN = "gaussian"
LOESCHIAN = "loeschian"
BOTH = "both"
KINDS = (GAUSSIAN, LOESCHIAN, BOTH)

CLASS_3MOD4 = "3mod4"
CLASS_2MOD3 = "2mod3"
CLASS_ALL = "all"
_CLASSES = {CLASS_3MOD4: (4, 3), CLASS_2MOD3: (3, 2), CLASS_ALL: None}


def primes_below(n: int) -> np.ndarray:
    """All primes ``p < n`` (Eratosthenes)."""
    if n <= 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(n, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n - 1) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@dataclass(frozen=True)
class PrimeProduct:
    """The primes ``p < z`` of one residue class, i.e. the factors of P(z)."""

    z: float
    residue_class: str
    primes: tuple

    @property
    def value(self) -> int:
        return math.prod(self.primes)

    def divisors(self, cap: int = 20):
        """Squarefree divisors ``d`` of the product with their Moebius signs."""
        from .errors import CapError

        if len(self.primes) > cap:
            raise CapError(f"{len(self.primes)} prime factors exceed the cap of {cap}")
        out = [(1, 1)]
        for p in self.primes:
            out += [(d * p, -mu) for d, mu in out]
        return out


def prime_product(z: float, residue_class: str = CLASS_3MOD4) -> PrimeProduct:
    if residue_class not in _CLASSES:
        raise DomainError(f"unknown residue class {residue_class!r}")
    if z < 0:
        raise DomainError("z must be nonnegative")
    ps = primes_below(math.ceil(z))
    mod = _CLASSES[residue_class]
    if mod is not None:
        ps = ps[ps % mod[0] == mod[1]]
    return PrimeProduct(z=z, residue_class=residue_class, primes=tuple(int(p) for p in ps))


@dataclass(frozen=True)
class SievedSequence:
    """Membership bitmap over ``1..limit``.

    ``packed`` holds bit ``n - 1`` for ``n`` (LSB first within each byte).
    """

    limit: int
    kind: str
    packed: np.ndarray = field(repr=False)
    recipe: dict = field(default_factory=dict)

    def bits(self) -> np.ndarray:
        """Boolean array of length ``limit + 1``; index 0 is always False."""
        out = np.zeros(self.limit + 1, dtype=bool)
        out[1:] = np.unpackbits(self.packed, count=self.limit, bitorder="little").astype(bool)
        return out

    def __getitem__(self, n: int) -> bool:
        if not 1 <= n <= self.limit:
            return False
        k = n - 1
        return bool((self.packed[k >> 3] >> (k & 7)) & 1)

    def members(self, lo: int = 1, hi: int | None = None) -> np.ndarray:
        """Members ``n`` with ``lo <= n <= hi`` as an ascending int64 array."""
        hi = self.limit if hi is None else min(hi, self.limit)
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        lo = max(lo, 1)
        b0 = (lo - 1) >> 3
        b1 = (hi - 1) >> 3
        bits = np.unpackbits(self.packed[b0:b1 + 1], bitorder="little")
        idx = np.flatnonzero(bits).astype(np.int64) + (b0 << 3) + 1
        return idx[(idx >= lo) & (idx <= hi)]

    def count(self, hi: int | None = None) -> int:
        """Number of members ``n <= hi`` (``B(hi)`` for the Gaussian kind)."""
        return int(len(self.members(1, hi)))

    def __and__(self, other: "SievedSequence") -> "SievedSequence":
        if self.limit != other.limit:
            raise DomainError("limits differ")
        kind = BOTH if {self.kind, other.kind} == {GAUSSIAN, LOESCHIAN} else self.kind
        return SievedSequence(self.limit, kind, self.packed & other.packed,
                              {"and": [self.recipe, other.recipe]})

    def to_bytes(self) -> bytes:
        return struct.pack("<Q", self.limit) + self.packed.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, kind: str = "unknown") -> "SievedSequence":
        (limit,) = struct.unpack_from("<Q", data)
        nbytes = (limit + 7) // 8
        packed = np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=8).copy()
        return cls(limit, kind, packed, {"source": "bitmap"})


def _sieve(N, residues, modulus, primes, threads):
    """Segmented sieve: keep ``n`` with ``n mod modulus`` in ``residues`` and
    no divisor in ``primes``."""
    if N < 1:
        raise DomainError("N must be at least 1")
    primes = [int(p) for p in primes]
    res = np.array(sorted(residues), dtype=np.int64)

    def segment(lo):
        hi = min(lo + SEGMENT, N + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        keep = np.isin(n % modulus, res)
        for p in primes:
            start = -(-lo // p) * p
            keep[start - lo::p] = False
        return np.packbits(keep, bitorder="little")

    starts = range(1, N + 1, SEGMENT)
    threads = resolve_threads(threads)
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(segment, starts))
    else:
        parts = [segment(lo) for lo in starts]
    # SEGMENT is a multiple of 8, so the byte streams concatenate cleanly
    return np.concatenate(parts)


def sieve_gaussian(N: int, z: float | None = None, threads: int | None = None) -> SievedSequence:
    """Odd primitive Gaussian integers up to ``N``.

    With ``z=None`` the sieve is complete.  With a threshold ``z`` only the
    primes ``p < z``, ``p = 3 mod 4`` are removed (the condition
    ``(n, P_{4;3}(z)) = 1``), with ``2 <= z <= sqrt(N) + 1``.
    """
    if z is None:
        primes = prime_product(math.isqrt(N) + 1, CLASS_3MOD4).primes
        recipe = {"kind": GAUSSIAN, "mode": "full", "N": N}
    else:
        if not 2 <= z <= math.sqrt(N) + 1:
            raise DomainError(f"z={z} outside [2, sqrt(N) + 1]")
        primes = prime_product(z, CLASS_3MOD4).primes
        recipe = {"kind": GAUSSIAN, "mode": "truncated", "z": z, "N": N}
    packed = _sieve(N, (1,), 4, primes, threads)
    return SievedSequence(N, GAUSSIAN, packed, recipe)


def sieve_loeschian(N: int, threads: int | None = None) -> SievedSequence:
    """Primitive Loeschian integers up to ``N``.

    ``n mod 9`` in ``{1, 3, 4, 7}`` encodes "``n`` or ``n/3`` is ``1 mod 3``
    and ``9`` does not divide ``n``"; the primes ``2 mod 3`` up to
    ``sqrt(N)`` are then sieved out.
    """
    primes = prime_product(math.isqrt(N) + 1, CLASS_2MOD3).primes
    packed = _sieve(N, (1, 3, 4, 7), 9, primes, threads)
    return SievedSequence(N, LOESCHIAN, packed, {"kind": LOESCHIAN, "N": N})


def sieve_both(N: int, threads: int | None = None) -> SievedSequence:
    s = sieve_gaussian(N, threads=threads) & sieve_loeschian(N, threads=threads)
    return SievedSequence(N, BOTH, s.packed, {"kind": BOTH, "N": N})


def sieve(kind: str, N: int, z: float | None = None, threads: int | None = None) -> SievedSequence:
    if kind == GAUSSIAN:
        return sieve_gaussian(N, z, threads)
    if z is not None:
        raise DomainError("truncated sieving is only defined for the gaussian kind")
    if kind == LOESCHIAN:
        return sieve_loeschian(N, threads)
    if kind == BOTH:
        return sieve_both(N, threads)
    raise DomainError(f"unknown kind {kind!r}")


# -- brute-force representation oracles ------------------------------------

def is_primitive_gaussian_oracle(n: int) -> bool:
    """Scan ``u <= sqrt(n)`` for ``n = u^2 + v^2`` with ``gcd(u, v) = 1``, n odd."""
    if n < 1:
        raise DomainError("n must be positive")
    if n % 2 == 0:
        return False
    for u in range(math.isqrt(n) + 1):
        r = n - u * u
        v = math.isqrt(r)
        if v * v == r and math.gcd(u, v) == 1:
            return True
    return False


def is_primitive_loeschian_oracle(n: int) -> bool:
    """Scan ``|u| <= ceil(2 sqrt(n))`` for ``n = u^2 + uv + v^2`` with ``gcd(u, v) = 1``."""
    if n < 1:
        raise DomainError("n must be positive")
    bound = math.isqrt(4 * n) + 1
    for u in range(-bound, bound + 1):
        disc = 4 * n - 3 * u * u
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        for num in (-u + s, -u - s):
            if num % 2 == 0 and math.gcd(u, num // 2) == 1:
                return True
    return False


def gaussian_oracle_table(N: int) -> np.ndarray:
    """``b(n)`` for ``0 <= n <= N`` by enumerating every pair ``u, v >= 0``
    with ``u^2 + v^2 <= N`` and keeping the coprime ones."""
    r = math.isqrt(N)
    u = np.arange(r + 1, dtype=np.int64)
    U, V = np.meshgrid(u, u, indexing="ij")
    n = U * U + V * V
    ok = (n <= N) & (np.gcd(U, V) == 1) & (n % 2 == 1)
    out = np.zeros(N + 1, dtype=bool)
    out[n[ok]] = True
    return out


def loeschian_oracle_table(N: int) -> np.ndarray:
    """``l(n)`` for ``0 <= n <= N`` by enumerating every integer pair with
    ``u^2 + uv + v^2 <= N`` (which forces ``|u|, |v| <= sqrt(4N/3)``)."""
    r = math.isqrt(4 * N // 3) + 1
    u = np.arange(-r, r + 1, dtype=np.int64)
    U, V = np.meshgrid(u, u, indexing="ij")
    n = U * U + U * V + V * V
    ok = (n >= 1) & (n <= N) & (np.gcd(U, V) == 1)
    out = np.zeros(N + 1, dtype=bool)
    out[n[ok]] = True
    return out
