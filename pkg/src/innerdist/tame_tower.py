"""Square-class arithmetic in tamely ramified towers over a p-adic field, p odd.

A local field is either a `BaseField` or a `TameTower` sitting over another
local field. A tower L/K is the data (e, f, zeta) with

    pi_L^e = pi_K * zeta,    zeta a unit of the residue field of L,

read modulo principal units. Since p is odd, principal units are squares and
their norms are principal, so (valuation, residue unit) is all the square-class
and norm computations below ever need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Union

from .residue_field import FiniteField, UnitClass, embed, norm_map, qr_character

__all__ = [
    "BaseField",
    "TameTower",
    "LocalField",
    "FieldElementClass",
    "SquareClass",
    "QuadExtClass",
    "SubextensionProfile",
    "square_class",
    "square_classes",
    "hilbert_symbol",
    "omega",
    "lift",
    "norm_down",
    "norm_square_class",
    "is_square_in",
    "quad_subext_profile",
    "quadratic_extensions",
]


@dataclass(frozen=True)
class BaseField:
    """A p-adic field, remembered only through its residue field."""

    residue: FiniteField

    @property
    def p(self) -> int:
        return self.residue.p

    @property
    def q(self) -> int:
        return self.residue.q

    @property
    def bottom(self) -> BaseField:
        return self

    @property
    def e_total(self) -> int:
        return 1

    @property
    def f_total(self) -> int:
        return 1

    def flatten(self) -> BaseField:
        return self

    def element(self, val: int = 0, exponent: int = 0) -> FieldElementClass:
        return FieldElementClass(self, val, self.residue.unit(exponent))

    def __repr__(self) -> str:
        return f"BaseField(q={self.q})"


@dataclass(frozen=True)
class TameTower:
    """A tame extension L of `base` with pi_L^e = pi_base * zeta."""

    base: Union[BaseField, "TameTower"]
    e: int
    f: int
    zeta: UnitClass | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if self.e < 1 or self.f < 1:
            raise ValueError(f"e and f must be positive, got e={self.e}, f={self.f}")
        if gcd(self.e, self.base.p) != 1:
            raise ValueError(f"e={self.e} is divisible by p={self.base.p}: not tame")
        res = self.base.residue.extension(self.f)
        if self.zeta is None:
            object.__setattr__(self, "zeta", res.one())
        elif self.zeta.field != res:
            raise ValueError(f"zeta must live in {res!r}, got {self.zeta.field!r}")

    @cached_property
    def residue(self) -> FiniteField:
        return self.base.residue.extension(self.f)

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def q(self) -> int:
        return self.residue.q

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def bottom(self) -> BaseField:
        return self.base.bottom

    @property
    def e_total(self) -> int:
        return self.e * self.base.e_total

    @property
    def f_total(self) -> int:
        return self.f * self.base.f_total

    def flatten(self) -> TameTower:
        """The same field presented as a single step over the bottom base field."""
        if isinstance(self.base, BaseField):
            return self
        below = self.base.flatten()
        # pi^(e1 e2) = pi_B^e1 zeta2^e1 = pi_F zeta1 zeta2^e1
        z = embed(below.zeta, self.residue) * self.zeta**below.e
        return TameTower(below.base, below.e * self.e, below.f * self.f, z)

    def unramified(self, k: int) -> TameTower:
        """The unramified extension of degree k, flattened over the bottom."""
        flat = self.flatten()
        if isinstance(flat, BaseField):
            return TameTower(flat, 1, k)
        return TameTower(flat.base, flat.e, flat.f * k, embed(flat.zeta, flat.residue.extension(k)))

    def element(self, val: int = 0, exponent: int = 0) -> FieldElementClass:
        return FieldElementClass(self, val, self.residue.unit(exponent))

    def __repr__(self) -> str:
        return f"TameTower(e={self.e}, f={self.f}, zeta=g^{self.zeta.exponent}, over {self.base!r})"


LocalField = Union[BaseField, TameTower]


@dataclass(frozen=True)
class FieldElementClass:
    """pi^val * (Teichmuller lift of unit), up to principal units."""

    field: LocalField
    val: int
    unit: UnitClass

    def __post_init__(self) -> None:
        if self.unit.field != self.field.residue:
            raise ValueError(f"unit must lie in {self.field.residue!r}")

    def __mul__(self, other: FieldElementClass) -> FieldElementClass:
        if other.field != self.field:
            raise ValueError("elements of different fields")
        return FieldElementClass(self.field, self.val + other.val, self.unit * other.unit)

    def __pow__(self, k: int) -> FieldElementClass:
        return FieldElementClass(self.field, self.val * k, self.unit**k)

    def inverse(self) -> FieldElementClass:
        return FieldElementClass(self.field, -self.val, self.unit.inverse())

    def is_square(self) -> bool:
        return self.val % 2 == 0 and self.unit.is_square()


@dataclass(frozen=True, order=True)
class SquareClass:
    """An element of K^x / K^x2: valuation parity and residue quadratic character."""

    field: LocalField = field(compare=False)
    val_parity: int
    unit_qr: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "val_parity", self.val_parity % 2)
        if self.unit_qr not in (1, -1):
            raise ValueError(f"unit_qr must be +1 or -1, got {self.unit_qr}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareClass):
            return NotImplemented
        return (
            self.field.flatten() == other.field.flatten()
            and self.val_parity == other.val_parity
            and self.unit_qr == other.unit_qr
        )

    def __hash__(self) -> int:
        return hash((self.val_parity, self.unit_qr))

    def __mul__(self, other: SquareClass) -> SquareClass:
        return SquareClass(self.field, self.val_parity + other.val_parity, self.unit_qr * other.unit_qr)

    def is_trivial(self) -> bool:
        return self.val_parity == 0 and self.unit_qr == 1

    def representative(self) -> FieldElementClass:
        return FieldElementClass(
            self.field, self.val_parity, self.field.residue.unit(0 if self.unit_qr == 1 else 1)
        )

    def __repr__(self) -> str:
        return f"SquareClass({self.val_parity}, {self.unit_qr:+d})"


def square_class(x: FieldElementClass) -> SquareClass:
    return SquareClass(x.field, x.val % 2, qr_character(x.unit))


def square_classes(k: LocalField) -> list[SquareClass]:
    """The four classes of k^x / k^x2, trivial class first."""
    return [SquareClass(k, v, s) for v in (0, 1) for s in (1, -1)]


def _as_class(x: FieldElementClass | SquareClass) -> SquareClass:
    return x if isinstance(x, SquareClass) else square_class(x)


def hilbert_symbol(a: FieldElementClass | SquareClass, b: FieldElementClass | SquareClass) -> int:
    """Tame Hilbert symbol (a, b) over the common field of a and b."""
    a, b = _as_class(a), _as_class(b)
    if a.field.flatten() != b.field.flatten():
        raise ValueError("Hilbert symbol of classes over different fields")
    q = a.field.residue.q
    sign = -1 if (a.val_parity * b.val_parity * ((q - 1) // 2)) % 2 else 1
    if b.val_parity:
        sign *= a.unit_qr
    if a.val_parity:
        sign *= b.unit_qr
    return sign


@dataclass(frozen=True)
class QuadExtClass:
    """The quadratic extension K = k[sqrt(disc)] of disc.field."""

    disc: SquareClass

    def __post_init__(self) -> None:
        if self.disc.is_trivial():
            raise ValueError("the trivial square class does not define a quadratic extension")

    @property
    def is_unramified(self) -> bool:
        return self.disc.val_parity == 0

    @property
    def kind(self) -> str:
        return "unramified" if self.is_unramified else "ramified"

    @property
    def e(self) -> int:
        return 1 if self.is_unramified else 2

    @property
    def f(self) -> int:
        return 2 if self.is_unramified else 1

    def as_tower(self) -> TameTower:
        """K as a tower over the field of its discriminant."""
        k = self.disc.field
        if self.is_unramified:
            return TameTower(k, 1, 2)
        # pi_K^2 = disc = pi_k * u
        return TameTower(k, 2, 1, self.disc.representative().unit)


def omega(K: QuadExtClass, x: FieldElementClass | SquareClass) -> int:
    """The quadratic character of the base with kernel N_{K/k}(K^x)."""
    return hilbert_symbol(K.disc, x)


def quadratic_extensions(k: LocalField) -> list[QuadExtClass]:
    return [QuadExtClass(c) for c in square_classes(k) if not c.is_trivial()]


def _step_up(x: FieldElementClass, L: TameTower) -> FieldElementClass:
    # pi_K = pi_L^e * zeta^-1
    a = x.val
    u = embed(x.unit, L.residue) * L.zeta ** (-a)
    return FieldElementClass(L, L.e * a, u)


def lift(x: FieldElementClass, L: LocalField) -> FieldElementClass:
    """Image of x under the inclusion of x.field into L."""
    if x.field == L:
        return x
    if isinstance(L, BaseField):
        raise ValueError(f"{x.field!r} is not a subfield of {L!r}")
    if L.base == x.field:
        return _step_up(x, L)
    if isinstance(L.base, TameTower):
        try:
            return _step_up(lift(x, L.base), L)
        except ValueError:
            pass
    flat = L.flatten()
    if flat != L:
        y = lift(x, flat)
        return FieldElementClass(L, y.val, y.unit)
    raise ValueError(f"{x.field!r} is not a subfield of {L!r}")


def _step_down(x: FieldElementClass) -> FieldElementClass:
    L = x.field
    K = L.base
    # N(pi_L) = (-1)^((e-1) f) pi_K N(zeta), N(w) = N_res(w)^e
    res_norm = norm_map(x.unit, L.f) ** L.e
    pi_norm = norm_map(L.zeta, L.f)
    if (L.e - 1) * L.f % 2:
        pi_norm = pi_norm * K.residue.minus_one()
    return FieldElementClass(K, L.f * x.val, res_norm * pi_norm**x.val)


def norm_down(x: FieldElementClass, K: LocalField | None = None) -> FieldElementClass:
    """N_{L/K}(x) where L = x.field; K defaults to the bottom base field."""
    target = x.field.bottom if K is None else K
    while x.field != target:
        if isinstance(x.field, BaseField):
            raise ValueError(f"{target!r} is not below {x.field!r}")
        if x.field.flatten() == target.flatten() and isinstance(target, TameTower):
            return FieldElementClass(target, x.val, x.unit)
        x = _step_down(x)
    return x


def norm_square_class(x: FieldElementClass, K: LocalField | None = None) -> SquareClass:
    return square_class(norm_down(x, K))


def is_square_in(x: FieldElementClass, P: LocalField) -> bool:
    """Whether x, an element of a subfield of P, becomes a square in P."""
    return lift(x, P).is_square()


@dataclass(frozen=True)
class SubextensionProfile:
    embeds_unramified: bool
    embedded_ramified_discs: frozenset[SquareClass]

    @property
    def count(self) -> int:
        return int(self.embeds_unramified) + len(self.embedded_ramified_discs)


def quad_subext_profile(P: TameTower) -> SubextensionProfile:
    """Which quadratic extensions of the bottom field embed in P."""
    flat = P.flatten()
    if flat.degree % 2:
        raise ValueError(f"P has odd degree {flat.degree} over the base")
    unram = False
    ram = set()
    for K in quadratic_extensions(flat.base):
        if is_square_in(K.disc.representative(), flat):
            if K.is_unramified:
                unram = True
            else:
                ram.add(K.disc)
    return SubextensionProfile(unram, frozenset(ram))
