"""Finite fields of odd characteristic, modeled through discrete logarithms.

An element of F_q^x is stored as its exponent against a fixed abstract
generator g of the cyclic group F_q^x. Generators of different fields are
chosen compatibly: the generator of a subfield is the norm of the generator
of the bigger field. With this convention the norm map and the inclusion of
a subfield are both plain exponent arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd

from sympy import isprime

__all__ = [
    "FiniteField",
    "UnitClass",
    "qr_character",
    "norm_map",
    "embed",
]


_is_prime = lru_cache(maxsize=None)(isprime)


@dataclass(frozen=True, order=True)
class FiniteField:
    """The field with q = p^f elements, p an odd prime."""

    p: int
    f: int

    def __post_init__(self) -> None:
        if self.p < 3 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError(f"degree f must be positive, got {self.f}")

    @cached_property
    def q(self) -> int:
        return self.p**self.f

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.q - 1

    def unit(self, exponent: int) -> UnitClass:
        return UnitClass(self, exponent)

    def one(self) -> UnitClass:
        return UnitClass(self, 0)

    def minus_one(self) -> UnitClass:
        return UnitClass(self, self.order // 2)

    def units(self) -> list[UnitClass]:
        return [UnitClass(self, k) for k in range(self.order)]

    def extension(self, k: int) -> FiniteField:
        return FiniteField(self.p, self.f * k)

    def contains(self, other: FiniteField) -> bool:
        """True when `other` is a subfield of self."""
        return other.p == self.p and self.f % other.f == 0

    def __repr__(self) -> str:
        return f"F_{self.q}"


@dataclass(frozen=True, order=True)
class UnitClass:
    """The element g^exponent of F_q^x."""

    field: FiniteField
    exponent: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", self.exponent % self.field.order)

    def __mul__(self, other: UnitClass) -> UnitClass:
        if other.field != self.field:
            raise ValueError(f"cannot multiply units of {self.field} and {other.field}")
        return UnitClass(self.field, self.exponent + other.exponent)

    def __pow__(self, k: int) -> UnitClass:
        return UnitClass(self.field, self.exponent * k)

    def inverse(self) -> UnitClass:
        return UnitClass(self.field, -self.exponent)

    @property
    def order(self) -> int:
        n = self.field.order
        return n // gcd(n, self.exponent)

    def is_square(self) -> bool:
        return self.exponent % 2 == 0

    def __repr__(self) -> str:
        return f"g^{self.exponent} in {self.field!r}"


def qr_character(x: UnitClass) -> int:
    """Quadratic residue character: +1 on squares, -1 otherwise."""
    return 1 if x.exponent % 2 == 0 else -1


def norm_map(x: UnitClass, k: int) -> UnitClass:
    """Norm from x.field down to its subfield of index k.

    N(g) = g^((Q-1)/(q0-1)) is the chosen generator of the subfield, so
    the image of g^a is the subfield element with exponent a mod (q0-1).
    """
    if k < 1 or x.field.f % k != 0:
        raise ValueError(f"index {k} does not divide the degree {x.field.f} of {x.field!r}")
    sub = FiniteField(x.field.p, x.field.f // k)
    return UnitClass(sub, x.exponent)


def embed(x: UnitClass, target: FiniteField) -> UnitClass:
    """Inclusion of x.field into a bigger field `target`."""
    if not target.contains(x.field):
        raise ValueError(f"{x.field!r} is not a subfield of {target!r}")
    scale = target.order // x.field.order
    return UnitClass(target, x.exponent * scale)
