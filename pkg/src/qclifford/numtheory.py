"""Small integer helpers: factorization, SL(2, Z_N) orders, per-prime grouping."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence


@dataclass(frozen=True)
class PrimeFactorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**k for p, k in self.factors)

    def value(self) -> int:
        return prod(p**k for p, k in self.factors)


@dataclass(frozen=True)
class DivisorBlock:
    """Prime-power parts ``p**k`` of the input dimensions sharing one prime."""

    prime: int
    local_dims: tuple[int, ...]


def factorize(n: int) -> PrimeFactorization:
    """Trial-division factorization; primes in ascending order."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n!r}")
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            factors.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return PrimeFactorization(n, tuple(factors))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).factors == ((n, 1),)


def sl2_order(n: int) -> int:
    """|SL(2, Z_n)| = n^3 * prod_p (1 - 1/p^2), evaluated in integers."""
    if n < 2:
        raise ValueError(f"sl2_order needs n >= 2, got {n}")
    primes = factorize(n).primes
    num = n**3 * prod(p * p - 1 for p in primes)
    den = prod(p * p for p in primes)
    assert num % den == 0
    return num // den


def sp_order(m: int, n: int) -> int:
    """|Sp(2m, Z_n)| from the prime-power lifting of |Sp(2m, F_p)|.

    Used only as an independent cross-check on closure counts.
    """
    total = 1
    for p, k in factorize(n).factors:
        over_field = p ** (m * m) * prod(p ** (2 * i) - 1 for i in range(1, m + 1))
        total *= p ** ((k - 1) * (2 * m * m + m)) * over_field
    return total


def crt_split(n: int) -> tuple[int, ...]:
    """Coprime prime-power parts of ``n`` (Z_n = prod Z_{p^k})."""
    return factorize(n).prime_powers()


def elementary_divisor_blocks(dims: Sequence[int]) -> list[DivisorBlock]:
    """Group the prime-power parts of every dimension by prime.

    >>> elementary_divisor_blocks([180, 150])[0]
    DivisorBlock(prime=2, local_dims=(4, 2))
    """
    if len(dims) == 0:
        raise ValueError("elementary_divisor_blocks needs at least one dimension")
    per_prime: dict[int, list[int]] = {}
    for d in dims:
        if d < 2:
            raise ValueError(f"dimensions must be >= 2, got {d}")
        for p, k in factorize(d).factors:
            per_prime.setdefault(p, []).append(p**k)
    return [DivisorBlock(p, tuple(per_prime[p])) for p in sorted(per_prime)]
