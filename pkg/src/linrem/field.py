"""Prime-field arithmetic on canonical integer residues.

Elements are plain ints in range(q); no wrapper objects, so the hot
enumeration loops elsewhere in the package stay cheap.
"""

from __future__ import annotations

from .errors import NonPrimeModulus


def is_prime(n: int) -> bool:
    """Deterministic trial division; intended for desk-scale moduli."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime_above(x: int) -> int:
    """Smallest prime strictly greater than x."""
    n = max(x + 1, 2)
    while not is_prime(n):
        n += 1
    return n


class PrimeField:
    """Arithmetic mod a prime q. All ops take and return ints in range(q)."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if not is_prime(q):
            raise NonPrimeModulus(f"{q} is not prime")
        self.q = q

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    def element(self, x: int) -> int:
        """Canonical residue of an arbitrary integer."""
        return x % self.q

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.q}")
        return pow(a, -1, self.q)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))
