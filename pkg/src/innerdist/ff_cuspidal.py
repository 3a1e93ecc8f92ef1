"""Cuspidal representations of GL_m(F_q) as Frobenius orbits of characters.

A character xi of t^x = F_{q^m}^x is the exponent k in Z/(q^m - 1) with
xi(g) = exp(2 pi i k / (q^m - 1)). It is regular when its orbit under
k -> k*q has m elements; regular orbits parametrize cuspidal
representations. The contragredient is k -> -k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import Poly, cyclotomic_poly, factorint, symbols

from . import _kernels

__all__ = [
    "CharOrbit",
    "CyclotomicInteger",
    "Subfield",
    "InnerConj",
    "prime_power",
    "enumerate_cuspidals",
    "is_selfdual",
    "is_sigma_autodual",
    "sigma_autodual_by_orbit",
    "stabilizer_order",
    "exists_autodual_with_stabilizer",
    "autodual_stabilizer_census",
    "green_trace",
    "parity_constraint_solvable",
    "verify_parity_constraint",
    "is_distinguished_gow",
]

# past this many exponents a full scan of Z/(q^m - 1) is refused
SCAN_LIMIT = 20_000_000


def prime_power(q: int) -> tuple[int, int]:
    """(p, f) with q = p^f, p odd."""
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, f),) = fac.items()
    if p == 2:
        raise ValueError(f"{q} has even characteristic")
    return p, f


def _log(base: int, x: int) -> int | None:
    """k with base^k = x, or None."""
    k, y = 0, 1
    while y < x:
        y *= base
        k += 1
    return k if y == x else None


@dataclass(frozen=True, order=True)
class CharOrbit:
    """A regular Frobenius orbit, stored through its smallest exponent."""

    q: int
    m: int
    rep_exponent: int

    def __post_init__(self) -> None:
        prime_power(self.q)
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        M = self.modulus
        k = self.rep_exponent % M
        object.__setattr__(self, "rep_exponent", k)
        members = self.members()
        if len(set(members)) != self.m:
            raise ValueError(f"exponent {k} is not regular for (q={self.q}, m={self.m})")
        if min(members) != k:
            raise ValueError(f"{k} is not the orbit minimum {min(members)}")

    @classmethod
    def of(cls, q: int, m: int, k: int) -> CharOrbit:
        """The orbit containing exponent k, in canonical form."""
        M = q**m - 1
        return cls(q, m, min(k * pow(q, i, M) % M for i in range(m)))

    @property
    def modulus(self) -> int:
        return self.q**self.m - 1

    def members(self) -> tuple[int, ...]:
        M = self.modulus
        return tuple(self.rep_exponent * pow(self.q, i, M) % M for i in range(self.m))

    @property
    def order(self) -> int:
        """Order of the character xi."""
        M = self.modulus
        return M // gcd(M, self.rep_exponent)


def enumerate_cuspidals(q: int, m: int) -> list[CharOrbit]:
    """All regular orbits of Z/(q^m - 1) under multiplication by q."""
    p, f = prime_power(q)
    M = q**m - 1
    if M > SCAN_LIMIT:
        raise ValueError(f"q^m - 1 = {M} is too large to enumerate")
    ks = np.arange(M, dtype=np.int64)
    size, low = _kernels.orbit_profile(ks, M, p, f, m)
    reps = ks[(size == m) & (low == ks)]
    return [CharOrbit(q, m, int(k)) for k in reps]


def is_selfdual(o: CharOrbit) -> bool:
    return (-o.rep_exponent) % o.modulus in o.members()


def _half_power(q: int, q0: int) -> int:
    two_c = _log(q0, q)
    if two_c is None or two_c == 0 or two_c % 2:
        raise ValueError(f"q={q} is not an even power of q0={q0}")
    return two_c // 2


def is_sigma_autodual(o: CharOrbit, q0: int) -> bool:
    """Order of xi divides q0^(mc) + 1, where q = q0^(2c)."""
    c = _half_power(o.q, q0)
    return (q0 ** (o.m * c) + 1) % o.order == 0


def sigma_autodual_by_orbit(o: CharOrbit, q0: int) -> bool:
    """-k lies in the q-orbit of k * q0^c: the dual is the Galois twist."""
    c = _half_power(o.q, q0)
    M = o.modulus
    return (-o.rep_exponent * pow(q0, c, M)) % M in o.members()


def stabilizer_order(o: CharOrbit, qE: int) -> int:
    """Order of the stabilizer of the orbit in Gal(l/k_E), cyclic of order c."""
    c = _log(qE, o.q)
    if c is None or c == 0:
        raise ValueError(f"q={o.q} is not a power of qE={qE}")
    M = o.modulus
    members = set(o.members())
    return sum(1 for j in range(c) if o.rep_exponent * pow(qE, j, M) % M in members)


def exists_autodual_with_stabilizer(q0: int, m: int, c: int, s: int) -> bool:
    """Whether a sigma-autodual cuspidal of GL_m(l), |l| = q0^(2c), has stabilizer order s."""
    if (m * c) % 2 == 0:
        raise ValueError(f"m*c = {m * c} must be odd")
    prime_power(q0)
    return c % s == 0 and gcd(s, m) == 1


@lru_cache(maxsize=None)
def autodual_stabilizer_census(q0: int, m: int, c: int, exhaustive: bool = False) -> dict[int, int]:
    """Brute force: stabilizer order -> number of sigma-autodual regular orbits.

    The torus is F_{q^m}, q = q0^(2c), sigma acts by x -> x^(q0^c) and
    the Galois group of l over k_E is generated by x -> x^(q0^2). The dual
    condition -k in orbit(k q0^c) reads k (q0^(c(2i+1)) + 1) = 0 mod M for
    some i < m. The default candidate set is the union of these solution
    lattices; `exhaustive` scans all of Z/M instead.
    """
    p, a = prime_power(q0)
    q = q0 ** (2 * c)
    M = q**m - 1
    if exhaustive:
        if M > SCAN_LIMIT:
            raise ValueError(f"q^m - 1 = {M} is too large to scan")
        ks = np.arange(M, dtype=np.int64)
    else:
        parts = []
        for i in range(m):
            g = gcd(M, q0 ** (c * (2 * i + 1)) + 1)
            parts.append(np.arange(0, M, M // g, dtype=np.int64))
        ks = np.unique(np.concatenate(parts))
    size, low = _kernels.orbit_profile(ks, M, p, 2 * a * c, m)
    ks = ks[(size == m) & (low == ks)]
    ks = ks[_kernels.twisted_dual_hits(ks, M, p, 2 * a * c, a * c, m)]
    stab = _kernels.stabilizer_sizes(ks, M, p, 2 * a * c, 2 * a, c, m)
    return dict(sorted(Counter(int(s) for s in stab).items()))


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(M: int) -> tuple[int, ...]:
    x = symbols("x")
    # low degree first
    return tuple(int(a) for a in reversed(Poly(cyclotomic_poly(M, x), x).all_coeffs()))


@dataclass(frozen=True)
class CyclotomicInteger:
    """An element of Z[zeta_M], stored reduced modulo the M-th cyclotomic polynomial."""

    M: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_exponents(cls, M: int, exponents: dict[int, int]) -> CyclotomicInteger:
        """sum of mult * zeta_M^e over the given exponent multiplicities."""
        vec = [0] * M
        for e, mult in exponents.items():
            vec[e % M] += mult
        phi = _cyclotomic_coeffs(M)
        deg = len(phi) - 1
        for top in range(M - 1, deg - 1, -1):
            lead = vec[top]
            if lead:
                for j, a in enumerate(phi):
                    vec[top - deg + j] -= lead * a
        return cls(M, tuple(vec[:deg]))

    def __add__(self, other: CyclotomicInteger) -> CyclotomicInteger:
        if other.M != self.M:
            raise ValueError("different cyclotomic fields")
        return CyclotomicInteger(self.M, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CyclotomicInteger:
        return CyclotomicInteger(self.M, tuple(-a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> int | None:
        """The integer this element equals, if it lies in Z."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0] if self.coeffs else 0

    def to_complex(self) -> complex:
        z = np.exp(2j * np.pi / self.M)
        return complex(sum(a * z**i for i, a in enumerate(self.coeffs)))


def green_trace(o: CharOrbit, x_exponent: int) -> CyclotomicInteger:
    """Trace of the cuspidal attached to o at the regular elliptic element g^x."""
    M = o.modulus
    x = x_exponent % M
    if len({x * pow(o.q, i, M) % M for i in range(o.m)}) != o.m:
        raise ValueError(f"g^{x_exponent} is not regular elliptic in GL_{o.m}(F_{o.q})")
    sign = -1 if o.m % 2 == 0 else 1
    mult: Counter[int] = Counter()
    for k in o.members():
        mult[k * x % M] += sign
    return CyclotomicInteger.from_exponents(M, dict(mult))


def parity_constraint_solvable(q0: int, m: int, ramified: bool) -> bool:
    """Exhaustive search for the residue-level relation forced by autoduality.

    Unramified: q = q0^2 and xi^(q^i + q0) = chi o N with chi^q0 = chi.
    Ramified: q = q0 and xi^(q^i + 1) = chi o N, chi arbitrary.
    xi runs over regular characters of F_{q^m}^x, i over 0..m-1, chi over
    characters of F_q^x.
    """
    p, a = prime_power(q0)
    q = q0 * q0 if not ramified else q0
    M = q**m - 1
    if M > SCAN_LIMIT:
        raise ValueError(f"q^m - 1 = {M} is too large to scan")
    ks = np.arange(M, dtype=np.int64)
    size, _ = _kernels.orbit_profile(ks, M, p, a * (1 if ramified else 2), m)
    regular = ks[size == m]
    js = [j for j in range(q - 1) if ramified or (j * q0 - j) % (q - 1) == 0]
    # chi o N has exponent j (q^m - 1)/(q - 1) on t^x
    allowed = np.array(sorted({j * (M // (q - 1)) % M for j in js}), dtype=np.int64)
    shift = 1 if ramified else q0
    for i in range(m):
        e = (pow(q, i, M) + shift) % M
        if np.isin(regular * e % M, allowed).any():
            return True
    return False


def verify_parity_constraint(q0: int, m: int, ramified: bool) -> bool:
    """Solvability matches the allowed parity: m odd (unramified), m even or 1 (ramified)."""
    allowed = (m % 2 == 0 or m == 1) if ramified else (m % 2 == 1)
    return parity_constraint_solvable(q0, m, ramified) == allowed


@dataclass(frozen=True)
class Subfield:
    """Distinction by GL_m of the subfield of index 2, of cardinality q0."""

    q0: int


class _InnerConj:
    def __repr__(self) -> str:
        return "InnerConj"


InnerConj = _InnerConj()


def is_distinguished_gow(o: CharOrbit, flavor: Subfield | _InnerConj) -> bool:
    if isinstance(flavor, Subfield):
        if o.q != flavor.q0**2:
            raise ValueError(f"Subfield flavor needs q = q0^2, got q={o.q}, q0={flavor.q0}")
        M = o.modulus
        # xi^(q0^m) is in the orbit of xi^-1
        return (-o.rep_exponent * pow(flavor.q0, o.m, M)) % M in o.members()
    if flavor is InnerConj:
        return is_selfdual(o)
    raise ValueError(f"unknown flavor {flavor!r}")
