"""The rings Z/m, their ideal lattice, and exact modular matrix arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _divisors(m: int) -> list[int]:
    return sorted(d for d in range(1, m + 1) if m % d == 0)


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class ZmRing:
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    def elements(self) -> range:
        return range(self.modulus)

    def units(self) -> list[int]:
        return [a for a in range(1, self.modulus) if math.gcd(a, self.modulus) == 1]

    def __str__(self):
        return f"Z/{self.modulus}"


@dataclass(frozen=True)
class ZmIdeal:
    """The ideal (d) of Z/m; d = m encodes the zero ideal, d = 1 the unit ideal."""

    ring: ZmRing
    d: int

    def __post_init__(self):
        if self.ring.modulus % self.d != 0 or not 1 <= self.d <= self.ring.modulus:
            raise ValueError(f"{self.d} does not divide {self.ring.modulus}")

    @classmethod
    def generated_by(cls, ring: ZmRing, x: int) -> "ZmIdeal":
        g = math.gcd(x % ring.modulus, ring.modulus)
        return cls(ring, g if g else ring.modulus)

    def contains(self, x: int) -> bool:
        return (x % self.ring.modulus) % self.d == 0

    def elements(self) -> list[int]:
        return list(range(0, self.ring.modulus, self.d))

    def is_zero(self) -> bool:
        return self.d == self.ring.modulus

    def is_unit(self) -> bool:
        return self.d == 1

    def __add__(self, other: "ZmIdeal") -> "ZmIdeal":
        return ZmIdeal(self.ring, math.gcd(self.d, other.d))

    def issubset(self, other: "ZmIdeal") -> bool:
        return self.d % other.d == 0

    def __str__(self):
        return f"({self.d})"


def ring_ideals(ring: ZmRing) -> list[ZmIdeal]:
    return [ZmIdeal(ring, d) for d in _divisors(ring.modulus)]


def jacobson_radical(ring: ZmRing) -> ZmIdeal:
    """Generated by the product of the distinct primes dividing the modulus."""
    prod = 1
    for p in _prime_factors(ring.modulus):
        prod *= p
    return ZmIdeal(ring, prod)


# -- exact matrix arithmetic mod m ------------------------------------------

def identity_mat(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) % m


def det_int(mat) -> int:
    """Exact integer determinant by Laplace expansion (n <= 4 in practice)."""
    a = [[int(x) for x in row] for row in mat]
    n = len(a)
    if n == 0:
        return 1  # empty minor, needed when adjugating a 1x1 matrix
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for j in range(n):
        if a[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        total += (-1) ** j * a[0][j] * det_int(minor)
    return total


def adjugate_int(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.int64)
    n = a.shape[0]
    adj = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * det_int(minor)
    return adj


def scalar_inverse(a: int, m: int) -> int | None:
    try:
        return pow(a % m, -1, m)
    except ValueError:
        return None


def mat_inverse_mod(mat: np.ndarray, m: int) -> np.ndarray | None:
    """Inverse mod m via the adjugate; None when the determinant is not a unit."""
    d = det_int(mat) % m
    dinv = scalar_inverse(d, m)
    if dinv is None:
        return None
    return (adjugate_int(mat) * dinv) % m
