"""Decision formulas for tau-autodual simple characters and distinction.

Two families of functions live here. The closed forms take the numeric
invariants and a norm-membership bit. The tower computations take explicit
tame data for E0 inside E and work with actual square classes, Hilbert
symbols and norms. The verification sweep checks that the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import gcd, lcm

from .endo_invariants import (
    BetaClass,
    DerivedInvariants,
    EndoClassInvariants,
    InnerFormSpec,
    InvolutionSpec,
    Quad,
    derive,
    is_antiinvariant,
    rep_invariants,
)
from .ff_cuspidal import (
    CharOrbit,
    InnerConj,
    Subfield,
    enumerate_cuspidals,
    is_distinguished_gow,
    is_selfdual,
    is_sigma_autodual,
    stabilizer_order,
)
from .residue_field import UnitClass, embed
from .tame_tower import (
    BaseField,
    FieldElementClass,
    QuadExtClass,
    SquareClass,
    TameTower,
    hilbert_symbol,
    is_square_in,
    lift,
    norm_down,
    omega,
    square_class,
)

__all__ = [
    "PROVENANCE",
    "StratumTowers",
    "stratum_towers",
    "matrix_embeds",
    "quaternion_embeds",
    "field_embedding_with_involution",
    "stable_max_order_exists",
    "norm_membership",
    "norm_membership_enumerated",
    "tau_character_exists",
    "character_class_count",
    "w_sign_closed_form",
    "w_sign_formulary",
    "w_sign_direct",
    "w_sign_inner_form",
    "norm_residue_test",
    "ramified_square_test",
    "epsilon_level0",
    "distinguished_verdict",
    "Level0Case",
    "level0_case",
    "level0_order_exists",
    "level0_type_distinction",
    "OmegaModel",
    "omega_elements",
    "omega_counts",
    "symplectic_count",
    "Parity",
    "RhoData",
    "parity_predicate",
    "CrossCheckError",
    "DistinctionReport",
    "NEEDS_SYMPLECTIC",
    "distinction_report",
]

# Short names of the results each reported value rests on.
PROVENANCE = {
    "m": "centralizer of E: M_m(C) with c = d/(d, [E:F])",
    "c": "centralizer of E: M_m(C) with c = d/(d, [E:F])",
    "g": "degree of E0 over F",
    "c0": "degree of the division algebra of the fixed centralizer",
    "l": "fixed centralizer M_l(C0), c0 l = m c",
    "t": "2n / lcm(d, [E0:F])",
    "admissible_N": "autodual cuspidals of given parametric degree",
    "alpha_in_norm": "Hilbert symbol over E0 against the discriminant of E/E0",
    "tau_char_exists": "selfdual simple character existence criterion",
    "tau_char_exists_sigma": "sigma-autodual characters always exist for r even",
    "tau_char_exists_level0": "stable maximal order existence at level zero",
    "char_class_count": "fixed-point conjugacy classes of tau-autodual characters",
    "w_sign": "epsilon sign criterion against (-1)^r",
    "w_sign_formulary": "epsilon sign by the residue-level case formulary",
    "e_K": "epsilon sign of the parameter restricted to K",
    "e_K_level0": "level zero epsilon sign (-1)^(s f_K), twisted Steinberg exception",
    "verdict": "distinction iff symplectic and e_K = (-1)^r",
    "delta": "parametric degree delta = m b [E:F]",
    "s": "segment length s = 2n / delta",
    "b": "index of J in J_theta",
    "t_pi": "number of unramified self-twists",
    "conductor": "conductor t(pi) |val_E(beta)|",
}


@dataclass(frozen=True)
class StratumTowers:
    """E0 inside E over F, with pi_E fixed or negated by the involution of E/E0."""

    quad: Quad
    E: TameTower
    E0: TameTower
    rel: TameTower = field(repr=False)

    @property
    def base(self) -> BaseField:
        return self.E.bottom

    @property
    def disc(self) -> SquareClass:
        """Square class over E0 with E = E0[sqrt(disc)]."""
        return SquareClass(self.E0, 1, 1) if self.quad is Quad.RAMIFIED else SquareClass(self.E0, 0, -1)

    def P(self, N: int) -> TameTower:
        """Unramified extension of E of degree N."""
        return self.E.unramified(N)


def stratum_towers(base: BaseField, endo: EndoClassInvariants, zeta: UnitClass | int = 0) -> StratumTowers:
    """Tame model of E/E0/F with pi_E^e = pi_F * zeta.

    Ramified E/E0: pi_E^2 = pi_E0, so sigma(pi_E) = -pi_E and E0 inherits
    zeta. Unramified E/E0: pi_E = pi_E0 is sigma-fixed, which forces zeta
    into the residue field of E0.
    """
    if endo.quad is Quad.NULL:
        raise ValueError("level zero has no quadratic step E/E0")
    res = base.residue.extension(endo.f)
    if isinstance(zeta, int):
        zeta = res.unit(zeta)
    if zeta.field != res:
        raise ValueError(f"zeta must live in the residue field {res!r} of E")
    if endo.quad is Quad.RAMIFIED:
        E0 = TameTower(base, endo.e // 2, endo.f, zeta)
        rel = TameTower(E0, 2, 1)
    else:
        res0 = base.residue.extension(endo.f // 2)
        step = res0.q + 1
        if zeta.exponent % step:
            raise ValueError(
                f"zeta = g^{zeta.exponent} is not in the residue field of E0 "
                f"(E/E0 unramified needs the exponent divisible by {step})"
            )
        E0 = TameTower(base, endo.e, endo.f // 2, res0.unit(zeta.exponent // step))
        rel = TameTower(E0, 1, 2)
    E = TameTower(base, endo.e, endo.f, zeta)
    if rel.flatten() != E:
        raise ArithmeticError("E/E0 does not compose to E/F")
    return StratumTowers(endo.quad, E, E0, rel)


# ---------------------------------------------------------------- embeddings


def matrix_embeds(k: int, inner: InnerFormSpec) -> bool:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return inner.r % k == 0


def quaternion_embeds(alpha_in_norm: bool, inner: InnerFormSpec) -> bool:
    if alpha_in_norm:
        return inner.r % 2 == 0
    return (inner.r - inner.n) % 2 == 0


def field_embedding_with_involution(inner: InnerFormSpec, endo_degree: int, alpha_in_norm: bool) -> bool:
    if endo_degree % 2 or inner.two_n % endo_degree:
        raise ValueError(f"degree {endo_degree} must be even and divide 2n = {inner.two_n}")
    co = inner.two_n // endo_degree
    if inner.r % 2 == 0:
        return alpha_in_norm or co % 2 == 0
    return not alpha_in_norm and co % 2 == 1


def stable_max_order_exists(c0: int, quad: Quad) -> bool:
    if quad is Quad.NULL:
        raise ValueError("needs a quadratic step E/E0")
    return c0 % 2 == 1 or quad is Quad.RAMIFIED


# ---------------------------------------------------------- norm membership


def _alpha_in_E0(alpha: SquareClass, towers: StratumTowers) -> FieldElementClass:
    return lift(alpha.representative(), towers.E0)


def norm_membership(alpha: SquareClass, towers: StratumTowers) -> bool:
    """alpha in N_{E/E0}(E^x), through the Hilbert symbol of E0."""
    return hilbert_symbol(towers.disc, _alpha_in_E0(alpha, towers)) == 1


def norm_membership_enumerated(alpha: SquareClass, towers: StratumTowers) -> bool:
    """alpha in N_{E/E0}(E^x), by listing norm classes of generators of E^x mod squares."""
    rel = towers.rel
    gens = [rel.element(1, 0), rel.element(0, 1)]
    classes = {SquareClass(towers.E0, 0, 1)}
    for g in gens:
        n = square_class(norm_down(g, towers.E0))
        classes |= {c * n for c in classes}
    return square_class(_alpha_in_E0(alpha, towers)) in classes


# ---------------------------------------------------------- existence/count


def tau_character_exists(
    inner: InnerFormSpec,
    endo: EndoClassInvariants,
    inv: InvolutionSpec,
    alpha_in_norm_T: bool | None = None,
) -> bool:
    inv.check_against(inner)
    endo.check_against(inner)
    if endo.is_level_zero:
        return level0_order_exists(inner, inv)
    if inv.is_sigma_case:
        return True
    if alpha_in_norm_T is None:
        raise ValueError("positive level needs the norm membership of alpha")
    co = inner.two_n // endo.degree
    if inner.r % 2:
        return not alpha_in_norm_T and co % 2 == 1
    return alpha_in_norm_T or co % 2 == 0


class Level0Case(Enum):
    I = "I"
    II = "II"
    III = "III"


def level0_case(inner: InnerFormSpec, inv: InvolutionSpec) -> Level0Case:
    """Shape of the tau-stable maximal order at level zero."""
    if inv.is_sigma_case:
        return Level0Case.I
    if inv.K.is_unramified:
        return Level0Case.I if inner.d % 2 == 0 else Level0Case.II
    return Level0Case.III


def character_class_count(
    inner: InnerFormSpec,
    endo: EndoClassInvariants,
    derived: DerivedInvariants,
    inv: InvolutionSpec,
    alpha_in_norm_T: bool | None = None,
) -> int:
    if not tau_character_exists(inner, endo, inv, alpha_in_norm_T):
        raise ValueError("no tau-autodual simple character to count")
    if endo.is_level_zero:
        if level0_case(inner, inv) is Level0Case.I:
            return inner.r // 2 + 1
        return 1
    if endo.quad is Quad.UNRAMIFIED or derived.c0 % 2 == 0:
        return 1
    return derived.m // 2 + 1


# ---------------------------------------------------------------- w signs


def w_sign_closed_form(inner: InnerFormSpec, endo: EndoClassInvariants, alpha_in_norm_T: bool) -> int:
    if endo.is_level_zero:
        raise ValueError("closed form needs positive level")
    return 1 if alpha_in_norm_T or (inner.two_n // endo.degree) % 2 == 0 else -1


def _check_formulary_inputs(endo: EndoClassInvariants, beta: BetaClass, N: int, towers: StratumTowers) -> None:
    E = towers.E
    if (E.e, E.f) != (endo.e, endo.f) or towers.quad is not endo.quad:
        raise ValueError("tower data does not match the endo-class")
    if beta.zeta.field != E.residue:
        raise ValueError("beta's residue must live in the residue field of E")
    if endo.quad is Quad.RAMIFIED:
        if beta.val % 2 == 0:
            raise ValueError("E/E0 ramified forces val_E(beta) odd")
        if N % 2 and N != 1:
            raise ValueError(f"E/E0 ramified forces N even or 1, got {N}")
    else:
        if not is_antiinvariant(beta.zeta):
            raise ValueError("E/E0 unramified forces zeta^(Q0-1) = -1 for beta")
        if N % 2 == 0:
            raise ValueError(f"E/E0 unramified forces N odd, got {N}")


def w_sign_formulary(
    K: QuadExtClass,
    endo: EndoClassInvariants,
    beta: BetaClass,
    N: int,
    towers: StratumTowers,
) -> int:
    """w_K of an autodual cuspidal of GL_{N [E:F]}(F), by cases on K and E/E0."""
    _check_formulary_inputs(endo, beta, N, towers)
    if K.is_unramified:
        return -1 if (N * endo.f * beta.val) % 2 else 1
    if endo.quad is Quad.UNRAMIFIED:
        return -1 if endo.e % 2 else 1
    n0 = N * endo.g
    base = towers.base
    sign = omega(K, base.element(0, base.residue.order // 2)) ** n0
    if is_square_in(K.disc.representative(), towers.P(N)):
        return sign
    return -sign


def w_sign_direct(K: QuadExtClass, beta: BetaClass, N: int, towers: StratumTowers) -> int:
    """omega_K((-1)^n det beta) with det beta = N_{E/F}(beta)^N in GL_{N [E:F]}(F)."""
    E = towers.E
    b = FieldElementClass(E, beta.val, beta.zeta)
    det = norm_down(b) ** N
    n0 = N * E.degree // 2
    base = towers.base
    x = det * base.element(0, (base.residue.order // 2) * n0)
    return omega(K, x)


def w_sign_inner_form(K: QuadExtClass, endo: EndoClassInvariants, beta: BetaClass, N: int, s: int, towers: StratumTowers) -> int:
    """w_K of the inner-form representation whose transfer has cuspidal support of degree N [E:F], raised to s."""
    return w_sign_formulary(K, endo, beta, N, towers) ** s


def norm_residue_test(alpha: SquareClass, N: int, towers: StratumTowers) -> bool:
    """val_T(alpha) even and alpha N(pi_T)^(-val_T(alpha)/2) reduces to a square of k_P."""
    a0 = _alpha_in_E0(alpha, towers)
    v = towers.rel.e * a0.val
    if v % 2:
        return False
    npi = norm_down(towers.rel.element(1, 0), towers.E0)
    u = a0 * npi ** (-(v // 2))
    if u.val != 0:
        raise ArithmeticError(f"expected a unit, got valuation {u.val}")
    return embed(u.unit, towers.P(N).residue).is_square()


def ramified_square_test(alpha: SquareClass, N: int, towers: StratumTowers) -> bool:
    """(-1)^(e/2) alpha is a square in P, for K and E/E0 both ramified."""
    if towers.quad is not Quad.RAMIFIED or alpha.val_parity == 0:
        raise ValueError("needs K and E/E0 ramified")
    base = towers.base
    half = towers.E.e // 2
    x = alpha.representative() * base.element(0, (base.residue.order // 2) * half)
    return is_square_in(x, towers.P(N))


# ---------------------------------------------------------------- level 0


def epsilon_level0(
    inner: InnerFormSpec,
    s: int,
    K: QuadExtClass,
    steinberg_chi_trivial_on_norms: bool | None = None,
) -> int:
    if inner.two_n % s:
        raise ValueError(f"s = {s} does not divide 2n = {inner.two_n}")
    if s == inner.two_n:
        if steinberg_chi_trivial_on_norms is None:
            raise ValueError("s = 2n needs to know whether chi is trivial on norms from K")
        return -1 if steinberg_chi_trivial_on_norms else 1
    if steinberg_chi_trivial_on_norms is not None:
        raise ValueError("the chi flag only applies when s = 2n")
    return -1 if (s * K.f) % 2 else 1


def level0_order_exists(inner: InnerFormSpec, inv: InvolutionSpec) -> bool:
    if inv.is_sigma_case:
        return True
    return inner.d % inv.K.e == 0


def level0_type_distinction(
    case: Level0Case,
    inner: InnerFormSpec,
    orbit: CharOrbit,
    index_i: int | None = None,
) -> bool:
    if orbit.m != inner.r:
        raise ValueError(f"orbit of GL_{orbit.m} does not match r = {inner.r}")
    if case is Level0Case.I:
        if index_i is None:
            raise ValueError("case I needs the index i")
        return (inner.r % 2 == 0 or inner.r == 1) and index_i == inner.r // 2 and is_selfdual(orbit)
    if index_i is not None:
        raise ValueError(f"the index only applies to case I, got case {case.value}")
    if case is Level0Case.II:
        return inner.r % 2 == 0 and is_selfdual(orbit)
    q0 = _sqrt_exact(orbit.q)
    return inner.r % 2 == 1 and is_distinguished_gow(orbit, Subfield(q0))


def _sqrt_exact(q: int) -> int:
    from math import isqrt

    r = isqrt(q)
    if r * r != q:
        raise ValueError(f"{q} is not a square")
    return r


def distinguished_verdict(symplectic: bool, e_K: int, r: int) -> bool:
    if e_K not in (1, -1):
        raise ValueError(f"e_K must be a sign, got {e_K}")
    return symplectic and e_K == (-1) ** r


# ---------------------------------------------------------------- Omega


@dataclass(frozen=True)
class OmegaModel:
    """Finite-field side of the extensions of a tau-autodual simple character.

    q0 is the cardinality of the residue field of E0. Unramified E/E0:
    l has q0^(2c) elements and tau acts as the Frobenius of l/l0. Ramified
    E/E0: l has q0^c elements and tau acts by an inner automorphism.
    """

    q0: int
    m: int
    c: int
    quad: Quad
    c0_odd: bool = True
    index_i: int | None = None

    def __post_init__(self) -> None:
        if self.quad is Quad.NULL:
            raise ValueError("Omega needs positive level")
        if self.quad is Quad.UNRAMIFIED:
            if (self.m * self.c) % 2 == 0:
                raise ValueError("E/E0 unramified needs m c odd")
            if not self.c0_odd:
                raise ValueError("E/E0 unramified needs c0 odd")
        elif self.c0_odd:
            if self.m % 2 and self.m != 1:
                raise ValueError("E/E0 ramified with c0 odd needs m even or 1")
            if self.c % 2 == 0:
                raise ValueError("c0 odd forces c = c0 odd")
            if self.index_i != self.m // 2:
                raise ValueError(f"index must be floor(m/2) = {self.m // 2}")

    @property
    def qE(self) -> int:
        return self.q0**2 if self.quad is Quad.UNRAMIFIED else self.q0

    @property
    def q(self) -> int:
        return self.qE**self.c

    @property
    def exceptional(self) -> bool:
        return self.quad is Quad.RAMIFIED and self.c0_odd and self.m == 1

    def is_autodual(self, o: CharOrbit) -> bool:
        if self.quad is Quad.UNRAMIFIED:
            return is_sigma_autodual(o, self.q0)
        return is_selfdual(o)


def omega_elements(model: OmegaModel) -> list[tuple[CharOrbit, int, bool]]:
    """(orbit, twist, distinguished) for each element of Omega."""
    out = []
    for o in enumerate_cuspidals(model.q, model.m):
        if not model.is_autodual(o):
            continue
        if gcd(stabilizer_order(o, model.qE), model.m) != 1:
            continue
        for twist in (1, -1):
            if model.exceptional:
                # {1, omega, v, v omega}: distinguished iff trivial on J^0
                dist = o.rep_exponent == 0
            else:
                dist = twist == 1
            out.append((o, twist, dist))
    return out


def omega_counts(model: OmegaModel) -> dict[str, int]:
    elems = omega_elements(model)
    M = model.q**model.m - 1

    def galois_class(o: CharOrbit) -> int:
        # conjugation by pi_E acts on orbits through x -> x^qE
        return min(CharOrbit.of(model.q, model.m, o.rep_exponent * pow(model.qE, j, M)).rep_exponent for j in range(model.c))

    classes = {(galois_class(o), t) for o, t, _ in elems}
    classes_plus = {(galois_class(o), t) for o, t, d in elems if d}
    return {
        "omega": len(elems),
        "omega_plus": sum(1 for *_, d in elems if d),
        "classes": len(classes),
        "classes_plus": len(classes_plus),
    }


def symplectic_count(
    counts_per_s: dict[int, int],
    theta_null: bool,
    r: int,
    two_n: int | None = None,
) -> int:
    for s, k in counts_per_s.items():
        if k % 2:
            raise ValueError(f"fiber s={s} has odd size {k}")
        if theta_null and r == 1 and two_n is not None and s == two_n and k != 4:
            raise ValueError(f"the s = 2n fiber of the null class has 4 elements, got {k}")
    total = sum(counts_per_s.values()) // 2
    return total + (2 if theta_null and r == 1 else 0)


# ---------------------------------------------------------------- parity


class Parity(Enum):
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"


@dataclass(frozen=True)
class RhoData:
    is_unramified_character: bool | None = None
    central_char_nontrivial_on_Z: bool | None = None
    central_char_trivial_on_Z0: bool | None = None


def parity_predicate(quad: Quad, m: int, rho: RhoData) -> Parity:
    if quad is Quad.NULL:
        raise ValueError("parity predicate needs positive level")
    if quad is Quad.RAMIFIED:
        if m == 1:
            flag = rho.is_unramified_character
        elif m % 2 == 0:
            flag = rho.central_char_nontrivial_on_Z
        else:
            raise ValueError(f"E/E0 ramified does not allow odd m = {m} > 1")
    else:
        if m % 2 == 0:
            raise ValueError(f"E/E0 unramified does not allow even m = {m}")
        flag = rho.central_char_trivial_on_Z0
    if flag is None:
        raise ValueError("rho data does not carry the flag this case needs")
    return Parity.SYMPLECTIC if flag else Parity.ORTHOGONAL


# ---------------------------------------------------------------- report


class CrossCheckError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class DistinctionReport:
    derived: DerivedInvariants
    alpha_in_norm: bool | None
    tau_char_exists: bool
    char_class_count: int | None
    w_sign: int | None
    w_sign_formulary: int | None
    e_K: int | None
    verdict: bool | str

    def as_dict(self) -> dict:
        out = {k: getattr(self.derived, k) for k in ("m", "c", "g", "c0", "l", "t")}
        for k in ("alpha_in_norm", "tau_char_exists", "char_class_count", "w_sign", "w_sign_formulary", "e_K", "verdict"):
            out[k] = getattr(self, k)
        return out


NEEDS_SYMPLECTIC = "needs_symplectic_flag"


def _derived_without_c0(inner: InnerFormSpec, endo: EndoClassInvariants) -> DerivedInvariants:
    c = inner.d // gcd(inner.d, endo.degree)
    m = inner.two_n // (c * endo.degree)
    if endo.is_level_zero:
        return DerivedInvariants(m, c, None, None, None, None)
    g = endo.g
    return DerivedInvariants(m, c, g, None, None, inner.two_n // lcm(inner.d, g))


def distinction_report(
    base: BaseField,
    inner: InnerFormSpec,
    endo: EndoClassInvariants,
    inv: InvolutionSpec,
    zeta: int = 0,
    beta: BetaClass | None = None,
    N: int | None = None,
    symplectic: bool | None = None,
    s: int | None = None,
    chi_trivial_on_norms: bool | None = None,
) -> DistinctionReport:
    """All invariants for one tuple.

    Positive level reads the norm membership of alpha off the tame tower with
    the given zeta. When beta and N are supplied the formulary sign at the
    cuspidal support is computed too and must agree with the closed form.
    Level zero takes s (and the chi flag when s = 2n) for the epsilon sign.
    """
    endo.check_against(inner)
    inv.check_against(inner)
    if inv.alpha.field.flatten() != base.flatten():
        raise ValueError("alpha does not live over the base field")
    if endo.is_level_zero:
        exists = level0_order_exists(inner, inv)
        derived = derive(inner, endo, inv, False)
        count = character_class_count(inner, endo, derived, inv) if exists else None
        e_K = None
        if s is not None:
            if inv.is_sigma_case:
                raise ValueError("the epsilon sign needs alpha a non-square")
            e_K = epsilon_level0(inner, s, inv.K, chi_trivial_on_norms)
        verdict: bool | str = NEEDS_SYMPLECTIC
        if symplectic is not None and e_K is not None:
            verdict = distinguished_verdict(symplectic, e_K, inner.r)
        return DistinctionReport(derived, None, exists, count, None, None, e_K, verdict)

    towers = stratum_towers(base, endo, zeta)
    in_norm = True if inv.is_sigma_case else norm_membership(inv.alpha, towers)
    exists = tau_character_exists(inner, endo, inv, in_norm)
    derived = derive(inner, endo, inv, in_norm) if exists else _derived_without_c0(inner, endo)
    count = character_class_count(inner, endo, derived, inv, in_norm) if exists else None
    w = w_sign_closed_form(inner, endo, in_norm)
    w_form = None
    if (beta is None) != (N is None):
        raise ValueError("beta and N go together")
    if beta is not None and not inv.is_sigma_case:
        rep = rep_invariants(inner, endo, N * endo.degree, beta)
        w_form = w_sign_inner_form(inv.K, endo, beta, N, rep.s, towers)
        if w_form != w:
            raise CrossCheckError(f"closed form w = {w} but formulary w = {w_form}")
    if exists != (w == (-1) ** inner.r):
        raise CrossCheckError(f"existence {exists} does not match w = {w} against r = {inner.r}")
    # symplectic parameters have c(-1) = 1, so e_K = w_K
    e_K = w
    verdict = NEEDS_SYMPLECTIC if symplectic is None else distinguished_verdict(symplectic, e_K, inner.r)
    return DistinctionReport(derived, in_norm, exists, count, w, w_form, e_K, verdict)
