"""Exact integer, residue and binomial arithmetic.

Includes the q-adic variant of Lucas' congruence, where q is any power of
the prime p rather than p itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2


def is_prime(n: int) -> bool:
    """Trial division; inputs here are tiny."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Characteristic:
    """Characteristic of the ground field: 0 or a prime."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"characteristic must be an int, got {self.p!r}")
        if self.p < 0 or (self.p > 0 and not is_prime(self.p)):
            raise ValueError(f"characteristic must be 0 or a prime, got {self.p}")

    def __int__(self):
        return self.p

    def __index__(self):
        return self.p


def char_of(p) -> int:
    """Validate ``p`` (an int or Characteristic) and return it as an int."""
    if isinstance(p, Characteristic):
        return p.p
    return Characteristic(p).p


def prime_power_exponent(q: int, p: int) -> int | None:
    """Return nu with q == p**nu and nu >= 1, or None."""
    if p < 2 or q < p:
        return None
    nu = 0
    while q % p == 0:
        q //= p
        nu += 1
    return nu if q == 1 else None


@dataclass(frozen=True)
class QAdicDigits:
    """Little-endian base-q digits (a_0 first)."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if any(not 0 <= a < self.base for a in self.digits):
            raise ValueError(f"digits out of range for base {self.base}: {self.digits}")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("trailing zero digit")

    def value(self) -> int:
        return sum(a * self.base**i for i, a in enumerate(self.digits))

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i] if i < len(self.digits) else 0


def q_adic_digits(a: int, q: int) -> QAdicDigits:
    """Base-q expansion of a nonnegative integer.

    >>> q_adic_digits(255, 8).digits
    (7, 7, 3)
    """
    if q < 2:
        raise ValueError(f"base must be >= 2, got {q}")
    if a < 0:
        raise ValueError(f"expected a nonnegative integer, got {a}")
    digits = []
    while a:
        a, r = divmod(a, q)
        digits.append(r)
    return QAdicDigits(q, tuple(digits))


def binomial_exact(a: int, b: int) -> int:
    """C(a, b) as an exact integer; zero when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial_exact expects nonnegative arguments")
    # GMP is ~50x faster than math.comb on the 2000-row scans
    return int(gmpy2.comb(a, b))


@lru_cache(maxsize=None)
def _digit_binomials(q: int, p: int) -> tuple[tuple[int, ...], ...]:
    # table[a][b] = C(a, b) mod p for 0 <= a, b < q
    rows = [[0] * q for _ in range(q)]
    for a in range(q):
        rows[a][0] = 1
        for b in range(1, a + 1):
            rows[a][b] = (rows[a - 1][b - 1] + rows[a - 1][b]) % p
    return tuple(tuple(r) for r in rows)


def lucas_binomial_mod(a: int, b: int, p, q: int) -> int:
    """C(a, b) mod p as the product of digit binomials in base q = p**nu."""
    p = char_of(p)
    if p == 0:
        raise ValueError("lucas_binomial_mod needs p > 0")
    if prime_power_exponent(q, p) is None:
        raise ValueError(f"{q} is not a power of {p}")
    if a < 0 or b < 0:
        raise ValueError("expected nonnegative arguments")
    table = _digit_binomials(q, p)
    result = 1
    while b:
        if a < b:
            return 0
        a, ai = divmod(a, q)
        b, bi = divmod(b, q)
        result = result * table[ai][bi] % p
        if not result:
            return 0
    return result


def lucas_zero_block(m: int, q: int, p) -> bool:
    """Check C(m+q-2-a, q-1-b) == 0 mod p for all 0 <= b <= a <= m-2.

    For q a power of p and 0 <= m <= q this always holds, so the function
    doubles as an executable check of that congruence.
    """
    p = char_of(p)
    if p == 0 or prime_power_exponent(q, p) is None:
        raise ValueError(f"{q} is not a power of the prime {p}")
    if not 0 <= m <= q:
        raise ValueError(f"need 0 <= m <= q, got m={m}, q={q}")
    for a in range(m - 1):
        for b in range(a + 1):
            if binomial_exact(m + q - 2 - a, q - 1 - b) % p:
                return False
    return True
