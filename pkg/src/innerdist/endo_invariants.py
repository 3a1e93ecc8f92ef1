"""Numeric shadow of an inner form GL_r(D), an autodual endo-class and an involution.

Nothing here builds strata or groups. An inner form is (r, d) with rd = 2n,
an endo-class is ([E:F], e, f, quad) where quad is the type of E/E0, and the
involution is remembered through the square class of alpha = kappa^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd, isqrt, lcm

from .residue_field import FiniteField, UnitClass
from .tame_tower import QuadExtClass, SquareClass

__all__ = [
    "Quad",
    "InnerFormSpec",
    "EndoClassInvariants",
    "InvolutionSpec",
    "DerivedInvariants",
    "RepInvariants",
    "BetaClass",
    "derive",
    "residue_division_degree",
    "cuspidal_exists",
    "admissible_degrees",
    "rep_invariants",
    "enumerate_beta_classes",
    "antiinvariant_units",
    "is_antiinvariant",
]


class Quad(Enum):
    NULL = "null"
    UNRAMIFIED = "unram"
    RAMIFIED = "ram"


@dataclass(frozen=True)
class InnerFormSpec:
    """GL_r(D) with D of reduced degree d, an inner form of GL_2n(F)."""

    n: int
    r: int
    d: int

    def __post_init__(self) -> None:
        if min(self.n, self.r, self.d) < 1:
            raise ValueError(f"n, r, d must be positive, got {self.n}, {self.r}, {self.d}")
        if self.r * self.d != 2 * self.n:
            raise ValueError(f"r*d = {self.r * self.d} must equal 2n = {2 * self.n}")

    @classmethod
    def of(cls, r: int, d: int) -> InnerFormSpec:
        if (r * d) % 2:
            raise ValueError(f"r*d = {r * d} must be even")
        return cls(r * d // 2, r, d)

    @property
    def two_n(self) -> int:
        return 2 * self.n

    @property
    def is_split(self) -> bool:
        return self.d == 1


@dataclass(frozen=True)
class EndoClassInvariants:
    degree: int
    e: int
    f: int
    quad: Quad

    def __post_init__(self) -> None:
        if self.degree != self.e * self.f:
            raise ValueError(f"degree {self.degree} != e*f = {self.e * self.f}")
        if self.quad is Quad.NULL and self.degree != 1:
            raise ValueError("level zero (quad=null) forces degree = e = f = 1")
        if self.quad is Quad.UNRAMIFIED and self.f % 2:
            raise ValueError(f"E/E0 unramified needs f even, got f={self.f}")
        if self.quad is Quad.RAMIFIED and self.e % 2:
            raise ValueError(f"E/E0 ramified needs e even, got e={self.e}")

    @property
    def is_level_zero(self) -> bool:
        return self.quad is Quad.NULL

    @property
    def g(self) -> int | None:
        """[E0:F]."""
        return None if self.is_level_zero else self.degree // 2

    def check_against(self, inner: InnerFormSpec) -> None:
        if inner.two_n % self.degree:
            raise ValueError(f"degree {self.degree} does not divide 2n = {inner.two_n}")


@dataclass(frozen=True)
class InvolutionSpec:
    """Conjugation by kappa with kappa^2 = alpha, through the class of alpha."""

    alpha: SquareClass

    @property
    def is_sigma_case(self) -> bool:
        return self.alpha.is_trivial()

    @property
    def K(self) -> QuadExtClass | None:
        return None if self.is_sigma_case else QuadExtClass(self.alpha)

    def check_against(self, inner: InnerFormSpec) -> None:
        if self.is_sigma_case and inner.r % 2:
            raise ValueError("alpha a square requires r even")


@dataclass(frozen=True)
class DerivedInvariants:
    m: int
    c: int
    g: int | None
    c0: int | None
    l: int | None
    t: int | None


def residue_division_degree(d: int, g: int, alpha_in_norm: bool) -> int:
    """c0, the reduced degree of the division algebra C0 over E0."""
    x = d // gcd(d, g)
    if alpha_in_norm or x % 4 == 0:
        return x
    if x % 2:
        return 2 * x
    return x // 2


def derive(
    inner: InnerFormSpec,
    endo: EndoClassInvariants,
    inv: InvolutionSpec,
    alpha_in_norm: bool,
) -> DerivedInvariants:
    endo.check_against(inner)
    inv.check_against(inner)
    c = inner.d // gcd(inner.d, endo.degree)
    m = inner.two_n // (c * endo.degree)
    if endo.is_level_zero:
        return DerivedInvariants(m, c, None, None, None, None)
    g = endo.g
    c0 = residue_division_degree(inner.d, g, alpha_in_norm or inv.is_sigma_case)
    if c0 not in (c, 2 * c):
        raise ArithmeticError(f"c0 = {c0} is neither c nor 2c (c = {c})")
    l = m * c // c0
    if l * c0 != m * c:
        raise ArithmeticError(f"c0 = {c0} does not divide mc = {m * c}")
    return DerivedInvariants(m, c, g, c0, l, inner.two_n // lcm(inner.d, g))


def cuspidal_exists(inner: InnerFormSpec, endo: EndoClassInvariants, N: int) -> bool:
    """Existence of an autodual cuspidal of parametric degree N*[E:F]."""
    delta = N * endo.degree
    if N < 1 or delta > inner.two_n:
        return False
    if delta != inner.r * gcd(inner.d, delta):
        return False
    if endo.quad is Quad.UNRAMIFIED:
        return N % 2 == 1
    return N % 2 == 0 or N == 1


def admissible_degrees(inner: InnerFormSpec, endo: EndoClassInvariants) -> list[int]:
    """All N for which cuspidal_exists holds."""
    return [N for N in range(1, inner.two_n // endo.degree + 1) if cuspidal_exists(inner, endo, N)]


@dataclass(frozen=True)
class BetaClass:
    """beta = pi_E^val * zeta * (principal unit)."""

    val: int
    zeta: UnitClass


@dataclass(frozen=True)
class RepInvariants:
    delta: int
    s: int
    b: int
    t_pi: int
    conductor: int | None


def rep_invariants(
    inner: InnerFormSpec,
    endo: EndoClassInvariants,
    delta: int,
    beta: BetaClass | None = None,
) -> RepInvariants:
    if delta % endo.degree or not cuspidal_exists(inner, endo, delta // endo.degree):
        raise ValueError(f"no autodual cuspidal of parametric degree {delta}")
    N = delta // endo.degree
    c = inner.d // gcd(inner.d, endo.degree)
    m = inner.two_n // (c * endo.degree)
    s = inner.two_n // delta
    b, rem = divmod(delta, m * endo.degree)
    if rem:
        raise ArithmeticError(f"m*[E:F] = {m * endo.degree} does not divide delta = {delta}")
    t_pi = N * endo.f
    conductor = None if beta is None else t_pi * abs(beta.val)
    return RepInvariants(delta, s, b, t_pi, conductor)


def enumerate_beta_classes(endo: EndoClassInvariants, residue: FiniteField) -> list[BetaClass]:
    """Classes (val mod 2, zeta) with sigma(beta) = -beta; residue is the residue field of E."""
    if endo.quad is Quad.NULL:
        raise ValueError("beta classes need a positive-level endo-class")
    if residue.f % endo.f:
        raise ValueError(f"{residue!r} cannot be the residue field of E with f={endo.f}")
    if endo.quad is Quad.RAMIFIED:
        return [BetaClass(1, z) for z in residue.units()]
    return [BetaClass(v, z) for v in (0, 1) for z in antiinvariant_units(residue)]


def is_antiinvariant(z: UnitClass) -> bool:
    Q = z.field.q
    Q0 = isqrt(Q)
    return Q0 * Q0 == Q and (z.exponent * (Q0 - 1)) % (Q - 1) == (Q - 1) // 2


def antiinvariant_units(residue: FiniteField) -> list[UnitClass]:
    """zeta in l^x with zeta^(Q0 - 1) = -1, i.e. conjugate to -zeta over l0."""
    Q = residue.q
    Q0 = isqrt(Q)
    if Q0 * Q0 != Q:
        raise ValueError(f"|l| = {Q} is not a square")
    # k (Q0 - 1) = (Q - 1)/2 mod (Q - 1)  <=>  k = (Q0 + 1)/2 mod (Q0 + 1)
    return [residue.unit((Q0 + 1) // 2 + j * (Q0 + 1)) for j in range(Q0 - 1)]
