"""Exact arithmetic over residue rings Z/p^e."""

from __future__ import annotations

from dataclasses import dataclass

MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class ResidueRing:
    """The ring Z/p^e."""

    p: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError(f"exponent must be positive, got {self.e}")

    @property
    def modulus(self) -> int:
        return self.p**self.e

    def reduce(self, k: int) -> int:
        return k % self.modulus

    def is_unit(self, k: int) -> bool:
        return k % self.p != 0

    def inverse(self, k: int) -> int:
        return pow(k, -1, self.modulus)

    def valuation(self, k: int) -> int:
        return p_valuation(k, self)

    def unit_part(self, k: int) -> tuple[int, int]:
        """Split a nonzero residue as ``p**v * u`` with ``u`` a unit; returns ``(v, u)``."""
        k %= self.modulus
        v = p_valuation(k, self)
        if v == self.e:
            return v, 1
        return v, (k // self.p**v) % self.modulus


def p_valuation(k: int, ring: ResidueRing) -> int:
    """Largest ``v <= e`` with ``p**v | k``. Zero gets the cap ``e``."""
    k %= ring.modulus
    if k == 0:
        return ring.e
    v = 0
    while k % ring.p == 0:
        k //= ring.p
        v += 1
    return v


def valuation(k: int, p: int, cap: int) -> int:
    """Same as :func:`p_valuation` without building a ring object."""
    k %= p**cap
    if k == 0:
        return cap
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def rem(i: int, q: int) -> int:
    if q <= 0:
        raise ValueError(f"modulus must be positive, got {q}")
    return i % q


def carry_floor(s: int, t: int, q: int) -> int:
    """1 if reducing s and t mod q and adding overflows q, else 0."""
    return (rem(s, q) + rem(t, q)) // q
