"""Exhaustive sweeps that pit the closed forms against the tower computations.

A sweep tuple fixes the base field, the inner form, the tame model of E/E0,
the class of alpha, a class of beta and an admissible parametric degree.
Every check is evaluated on every tuple; a failing tuple is reported
verbatim together with the name of the check.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import gcd

from .distinction_engine import (
    field_embedding_with_involution,
    norm_membership,
    norm_membership_enumerated,
    norm_residue_test,
    ramified_square_test,
    stable_max_order_exists,
    stratum_towers,
    tau_character_exists,
    w_sign_closed_form,
    w_sign_direct,
    w_sign_formulary,
)
from .endo_invariants import (
    BetaClass,
    EndoClassInvariants,
    InnerFormSpec,
    InvolutionSpec,
    Quad,
    admissible_degrees,
    antiinvariant_units,
    derive,
    rep_invariants,
)
from .residue_field import FiniteField
from .tame_tower import BaseField, QuadExtClass, SquareClass, is_square_in, quad_subext_profile

__all__ = [
    "ALPHA_LABELS",
    "SweepRanges",
    "SweepTuple",
    "SweepResult",
    "alpha_class",
    "sample_exponents",
    "tower_zetas",
    "beta_classes",
    "generate_tuples",
    "check_tuple",
    "run_sweep",
]

ALPHA_LABELS = {
    "square": (0, 1),
    "unit-nonsquare": (0, -1),
    "unif": (1, 1),
    "unif-nonsquare": (1, -1),
}

# unit groups up to this order are swept completely
FULL_SWEEP_ORDER = 80


def alpha_class(base: BaseField, label: str) -> SquareClass:
    try:
        v, s = ALPHA_LABELS[label]
    except KeyError:
        raise ValueError(f"unknown alpha class {label!r}; expected one of {sorted(ALPHA_LABELS)}") from None
    return SquareClass(base, v, s)


def sample_exponents(order: int, limit: int = FULL_SWEEP_ORDER) -> list[int]:
    """All of Z/order when small, otherwise a fixed spread of both parities."""
    if order <= limit:
        return list(range(order))
    half = order // 2
    picks = {0, 1, 2, 3, half - 1, half, half + 1, order - 2, order - 1}
    return sorted(x % order for x in picks)


def tower_zetas(base: BaseField, endo: EndoClassInvariants, limit: int = FULL_SWEEP_ORDER) -> list[int]:
    """Exponents of zeta (pi_E^e = pi_F zeta) allowed by the tame model of E/E0."""
    res = base.residue.extension(endo.f)
    if endo.quad is Quad.RAMIFIED:
        return sample_exponents(res.order, limit)
    q0 = base.residue.extension(endo.f // 2).q
    return [k * (q0 + 1) for k in sample_exponents(q0 - 1, limit)]


def beta_classes(base: BaseField, endo: EndoClassInvariants, limit: int = FULL_SWEEP_ORDER) -> list[tuple[int, int]]:
    """(val, zeta exponent) for beta with sigma(beta) = -beta."""
    res = base.residue.extension(endo.f)
    if endo.quad is Quad.RAMIFIED:
        return [(1, k) for k in sample_exponents(res.order, limit)]
    q0 = base.residue.extension(endo.f // 2).q
    zs = [(q0 + 1) // 2 + j * (q0 + 1) for j in sample_exponents(q0 - 1, limit)]
    return [(v, z) for v in (0, 1) for z in zs]


@dataclass(frozen=True)
class SweepRanges:
    primes: tuple[int, ...] = (3, 5, 7)
    f0s: tuple[int, ...] = (1,)
    two_n_max: int = 8
    e_max: int = 4
    f_max: int = 4
    quads: tuple[Quad, ...] = (Quad.UNRAMIFIED, Quad.RAMIFIED)
    zeta_limit: int = FULL_SWEEP_ORDER


@dataclass(frozen=True, order=True)
class SweepTuple:
    p: int
    f0: int
    r: int
    d: int
    e: int
    f: int
    quad: str
    zeta: int
    alpha: str
    beta_val: int
    beta_zeta: int
    N: int

    @property
    def base(self) -> BaseField:
        return _base(self.p, self.f0)

    @property
    def inner(self) -> InnerFormSpec:
        return InnerFormSpec.of(self.r, self.d)

    @property
    def endo(self) -> EndoClassInvariants:
        return EndoClassInvariants(self.e * self.f, self.e, self.f, Quad(self.quad))


@lru_cache(maxsize=None)
def _base(p: int, f0: int) -> BaseField:
    return BaseField(FiniteField(p, f0))


@lru_cache(maxsize=None)
def _towers(p: int, f0: int, e: int, f: int, quad: str, zeta: int):
    return stratum_towers(_base(p, f0), EndoClassInvariants(e * f, e, f, Quad(quad)), zeta)


def _endo_shapes(ranges: SweepRanges, p: int, two_n: int) -> list[EndoClassInvariants]:
    out = []
    for e in range(1, ranges.e_max + 1):
        if gcd(e, p) != 1:
            continue
        for f in range(1, ranges.f_max + 1):
            if two_n % (e * f):
                continue
            for quad in ranges.quads:
                if quad is Quad.UNRAMIFIED and f % 2 == 0 or quad is Quad.RAMIFIED and e % 2 == 0:
                    out.append(EndoClassInvariants(e * f, e, f, quad))
    return out


def generate_tuples(ranges: SweepRanges):
    for p, f0 in itertools.product(ranges.primes, ranges.f0s):
        base = _base(p, f0)
        for two_n in range(2, ranges.two_n_max + 1, 2):
            for r in range(1, two_n + 1):
                if two_n % r:
                    continue
                inner = InnerFormSpec.of(r, two_n // r)
                for endo in _endo_shapes(ranges, p, two_n):
                    Ns = admissible_degrees(inner, endo)
                    if not Ns:
                        continue
                    zetas = tower_zetas(base, endo, ranges.zeta_limit)
                    betas = beta_classes(base, endo, ranges.zeta_limit)
                    for N, z, label, (bv, bz) in itertools.product(Ns, zetas, ALPHA_LABELS, betas):
                        if label == "square" and r % 2:
                            continue
                        yield SweepTuple(p, f0, r, inner.d, endo.e, endo.f, endo.quad.value, z, label, bv, bz, N)


@dataclass
class SweepResult:
    tuples: int = 0
    checks: dict[str, int] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    def record(self, name: str, ok: bool, t: SweepTuple, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, 0) + 1
        if not ok:
            self.failures.append({"check": name, "tuple": asdict(t), "detail": detail})

    def merge(self, other: SweepResult) -> None:
        self.tuples += other.tuples
        for k, v in other.checks.items():
            self.checks[k] = self.checks.get(k, 0) + v
        self.failures.extend(other.failures)

    def summary(self) -> dict:
        return {
            "tuples": self.tuples,
            "checks": dict(sorted(self.checks.items())),
            "failures": len(self.failures),
            "counterexamples": self.failures[:20],
        }


@dataclass(frozen=True)
class _GroupFacts:
    """Everything about a tuple that does not depend on beta."""

    records: tuple[tuple[str, bool, str], ...]
    exists: bool
    ex1: bool
    s: int
    K_unramified_square: bool | None


@lru_cache(maxsize=None)
def _group_facts(p: int, f0: int, r: int, d: int, e: int, f: int, quad: str, zeta: int, label: str, N: int) -> _GroupFacts:
    base = _base(p, f0)
    inner = InnerFormSpec.of(r, d)
    endo = EndoClassInvariants(e * f, e, f, Quad(quad))
    towers = _towers(p, f0, e, f, quad, zeta)
    alpha = alpha_class(base, label)
    inv = InvolutionSpec(alpha)
    recs: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str = "") -> None:
        recs.append((name, bool(ok), detail))

    in_norm = norm_membership(alpha, towers)
    in_norm_enum = norm_membership_enumerated(alpha, towers)
    record("norm membership: Hilbert symbol vs enumerated norms", in_norm == in_norm_enum)

    exists = tau_character_exists(inner, endo, inv, in_norm)
    rep = rep_invariants(inner, endo, N * endo.degree)
    s = rep.s
    w_closed = w_sign_closed_form(inner, endo, in_norm)
    record("closed form w = (-1)^r iff existence", exists == (w_closed == (-1) ** r), f"exists={exists} w={w_closed}")

    # the split group GL_{N [E:F]} carrying the cuspidal support
    split = InnerFormSpec.of(N * endo.degree, 1)
    ex1 = tau_character_exists(split, endo, inv, in_norm)
    ex2 = in_norm_enum or N % 2 == 0
    ex3 = norm_residue_test(alpha, N, towers)
    record("norm/parity/residue tri-equivalence", ex1 == ex2 == ex3, f"{ex1} {ex2} {ex3}")

    P = towers.P(N)
    K_sq = None
    if not inv.is_sigma_case:
        K = QuadExtClass(alpha)
        if K.is_unramified:
            K_sq = is_square_in(alpha.representative(), P)
        elif endo.quad is Quad.RAMIFIED:
            record(
                "K, E/E0 ramified: existence iff (-1)^(e/2) alpha square in P",
                ex1 == ramified_square_test(alpha, N, towers),
            )

    prof = quad_subext_profile(P)
    if P.f % 2:
        shape = not prof.embeds_unramified and len(prof.embedded_ramified_discs) == 1
    else:
        shape = prof.embeds_unramified and len(prof.embedded_ramified_discs) in (0, 2)
    record("quadratic subfields of P", shape)

    if not inv.is_sigma_case:
        record(
            "embedding with involution iff existence",
            field_embedding_with_involution(inner, endo.degree, in_norm) == exists,
        )

    c = inner.d // gcd(inner.d, endo.degree)
    m = inner.two_n // (c * endo.degree)
    record("m c [E:F] = 2n", m * c * endo.degree == inner.two_n)
    record("s prime to m, s | c", gcd(s, m) == 1 and c % s == 0, f"s={s} m={m} c={c}")
    record("delta = m b [E:F]", rep.delta == m * rep.b * endo.degree)
    if endo.quad is Quad.UNRAMIFIED:
        record("cuspidal degree parity", N % 2 == 1)
    else:
        record("cuspidal degree parity", N % 2 == 0 or N == 1)
    if exists:
        der = derive(inner, endo, inv, in_norm)
        ok = True
        if endo.quad is Quad.UNRAMIFIED:
            ok &= der.m % 2 == 1 and der.c % 2 == 1 and der.c0 % 2 == 1
        else:
            ok &= der.m % 2 == 0 or der.m == 1
        if r % 2:
            ok &= der.m % 2 == 1 and der.c % 2 == 1
        record("parity consequences of existence", ok, f"m={der.m} c={der.c} c0={der.c0}")
        record("stable maximal order", stable_max_order_exists(der.c0, endo.quad), f"c0={der.c0}")
    return _GroupFacts(tuple(recs), exists, ex1, s, K_sq)


@lru_cache(maxsize=None)
def _w_formulary(p: int, f0: int, e: int, f: int, quad: str, zeta: int, label: str, beta_val: int, N: int) -> int:
    towers = _towers(p, f0, e, f, quad, zeta)
    K = QuadExtClass(alpha_class(_base(p, f0), label))
    endo = EndoClassInvariants(e * f, e, f, Quad(quad))
    # the formulary reads beta only through its valuation; any admissible residue will do
    res = towers.E.residue
    z = res.unit(0) if Quad(quad) is Quad.RAMIFIED else antiinvariant_units(res)[0]
    return w_sign_formulary(K, endo, BetaClass(beta_val, z), N, towers)


@lru_cache(maxsize=None)
def _w_direct(p: int, f0: int, e: int, f: int, quad: str, zeta: int, label: str, beta_val: int, beta_zeta: int, N: int) -> int:
    towers = _towers(p, f0, e, f, quad, zeta)
    K = QuadExtClass(alpha_class(_base(p, f0), label))
    beta = BetaClass(beta_val, towers.E.residue.unit(beta_zeta))
    return w_sign_direct(K, beta, N, towers)


def check_tuple(t: SweepTuple, out: SweepResult | None = None) -> SweepResult:
    """Evaluate every cross-check on one tuple."""
    out = SweepResult() if out is None else out
    out.tuples += 1
    g = _group_facts(t.p, t.f0, t.r, t.d, t.e, t.f, t.quad, t.zeta, t.alpha, t.N)
    for name, ok, detail in g.records:
        out.record(name, ok, t, detail)

    # sign at the level of the cuspidal support, then raised to s
    if t.alpha == "square":
        w_cusp = w_direct = 1
    else:
        w_cusp = _w_formulary(t.p, t.f0, t.e, t.f, t.quad, t.zeta, t.alpha, t.beta_val, t.N)
        w_direct = _w_direct(t.p, t.f0, t.e, t.f, t.quad, t.zeta, t.alpha, t.beta_val, t.beta_zeta, t.N)
    w = w_cusp**g.s
    r = t.r
    out.record("existence iff w_K = (-1)^r", g.exists == (w == (-1) ** r), t, f"exists={g.exists} w={w}")
    out.record("formulary w = omega((-1)^n det beta)", w_cusp == w_direct, t, f"{w_cusp} vs {w_direct}")
    out.record("split case: existence iff w_K = 1", g.ex1 == (w_cusp == 1), t)
    if t.d == 1:
        out.record("split case: existence iff w_K = 1", g.exists == (w == 1), t)
    if g.K_unramified_square is not None:
        out.record("K unramified: w_K = 1 iff K embeds in P", (w_cusp == 1) == g.K_unramified_square, t)
    if t.quad == Quad.RAMIFIED.value:
        out.record("beta valuation odd", t.beta_val % 2 == 1, t)
    return out


def _check_chunk(chunk: list[SweepTuple]) -> SweepResult:
    res = SweepResult()
    for t in chunk:
        check_tuple(t, res)
    return res


def run_sweep(ranges: SweepRanges, jobs: int = 1) -> SweepResult:
    tuples = sorted(generate_tuples(ranges))
    if jobs <= 1:
        return _check_chunk(tuples)
    from concurrent.futures import ProcessPoolExecutor

    size = max(1, len(tuples) // (4 * jobs))
    chunks = [tuples[i : i + size] for i in range(0, len(tuples), size)]
    total = SweepResult()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_check_chunk, chunks):
            total.merge(part)
    return total
