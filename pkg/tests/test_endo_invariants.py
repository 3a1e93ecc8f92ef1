import pytest

from innerdist.endo_invariants import (
    BetaClass,
    EndoClassInvariants,
    InnerFormSpec,
    InvolutionSpec,
    Quad,
    admissible_degrees,
    antiinvariant_units,
    cuspidal_exists,
    derive,
    enumerate_beta_classes,
    is_antiinvariant,
    rep_invariants,
    residue_division_degree,
)
from innerdist.residue_field import FiniteField
from innerdist.tame_tower import BaseField, SquareClass

B3 = BaseField(FiniteField(3, 1))
SIGMA = InvolutionSpec(SquareClass(B3, 0, 1))
UNIF = InvolutionSpec(SquareClass(B3, 1, 1))


def test_inner_form_validation():
    assert InnerFormSpec.of(2, 3) == InnerFormSpec(3, 2, 3)
    assert InnerFormSpec.of(4, 1).is_split
    with pytest.raises(ValueError):
        InnerFormSpec.of(3, 1)
    with pytest.raises(ValueError):
        InnerFormSpec(2, 3, 1)


@pytest.mark.parametrize(
    "args",
    [(2, 2, 2, Quad.RAMIFIED), (2, 1, 2, Quad.RAMIFIED), (2, 2, 1, Quad.UNRAMIFIED), (2, 2, 1, Quad.NULL), (3, 1, 3, Quad.UNRAMIFIED)],
)
def test_endo_validation(args):
    with pytest.raises(ValueError):
        EndoClassInvariants(*args)


def test_endo_degree_must_divide():
    with pytest.raises(ValueError):
        EndoClassInvariants(4, 2, 2, Quad.RAMIFIED).check_against(InnerFormSpec.of(2, 1))


def test_sigma_case_requires_even_r():
    with pytest.raises(ValueError):
        SIGMA.check_against(InnerFormSpec.of(1, 2))
    assert SIGMA.is_sigma_case and SIGMA.K is None
    assert UNIF.K.kind == "ramified"


def test_derive_split():
    inner = InnerFormSpec.of(6, 1)
    der = derive(inner, EndoClassInvariants(2, 2, 1, Quad.RAMIFIED), UNIF, True)
    assert (der.c, der.m, der.g) == (1, inner.n, 1)


@pytest.mark.parametrize(
    "d,g,in_norm,c0",
    [
        (4, 2, True, 2),
        (2, 1, False, 1),
        (4, 1, False, 4),  # 4 | d/(d,g): unchanged
        (3, 1, False, 6),  # odd: doubled
        (3, 3, False, 2),
    ],
)
def test_residue_division_degree(d, g, in_norm, c0):
    assert residue_division_degree(d, g, in_norm) == c0


def test_derive_full():
    inner = InnerFormSpec.of(2, 4)
    der = derive(inner, EndoClassInvariants(4, 2, 2, Quad.RAMIFIED), UNIF, True)
    assert (der.m, der.c, der.g, der.c0, der.l, der.t) == (2, 1, 2, 2, 1, 2)


def test_derive_rejects_inconsistent_c0():
    # no tau-autodual character: c0 = 2 cannot divide m c = 1
    with pytest.raises(ArithmeticError):
        derive(InnerFormSpec.of(1, 2), EndoClassInvariants(2, 2, 1, Quad.RAMIFIED), UNIF, True)


def test_cuspidal_exists_examples():
    inner = InnerFormSpec.of(2, 1)
    assert cuspidal_exists(inner, EndoClassInvariants(2, 1, 2, Quad.UNRAMIFIED), 1)
    big = InnerFormSpec.of(4, 1)
    assert not cuspidal_exists(big, EndoClassInvariants(2, 1, 2, Quad.UNRAMIFIED), 2)
    # delta = 2 but r (d, delta) = 4
    assert not cuspidal_exists(InnerFormSpec.of(2, 2), EndoClassInvariants(2, 2, 1, Quad.RAMIFIED), 1)


def test_admissible_degrees():
    inner = InnerFormSpec.of(8, 1)
    assert admissible_degrees(inner, EndoClassInvariants(2, 2, 1, Quad.RAMIFIED)) == [4]
    assert admissible_degrees(InnerFormSpec.of(1, 8), EndoClassInvariants(2, 2, 1, Quad.RAMIFIED)) == [1, 2, 4]
    assert admissible_degrees(InnerFormSpec.of(1, 6), EndoClassInvariants(2, 1, 2, Quad.UNRAMIFIED)) == [1, 3]


def test_rep_invariants_examples():
    inner = InnerFormSpec.of(4, 1)
    ram = EndoClassInvariants(2, 2, 1, Quad.RAMIFIED)
    assert rep_invariants(inner, ram, 4).s == 1
    level0 = EndoClassInvariants(1, 1, 1, Quad.NULL)
    assert rep_invariants(InnerFormSpec.of(1, 4), level0, 1).s == 4
    # r = 2, d = 2, [E:F] = 2: delta must equal r (d, delta) = 4
    ri = rep_invariants(InnerFormSpec.of(2, 2), ram, 4)
    assert (ri.s, ri.b, ri.t_pi) == (1, 1, 2)
    with pytest.raises(ValueError):
        rep_invariants(InnerFormSpec.of(2, 2), ram, 2)


def test_rep_invariants_conductor():
    inner = InnerFormSpec.of(1, 4)
    endo = EndoClassInvariants(2, 2, 1, Quad.RAMIFIED)
    beta = BetaClass(-3, FiniteField(3, 1).unit(0))
    ri = rep_invariants(inner, endo, 4, beta)
    assert (ri.s, ri.t_pi, ri.conductor) == (1, 2, 6)


def test_beta_classes_examples():
    ram = enumerate_beta_classes(EndoClassInvariants(2, 2, 1, Quad.RAMIFIED), FiniteField(3, 1))
    assert len(ram) == 2 and all(b.val % 2 for b in ram)
    unram = EndoClassInvariants(2, 1, 2, Quad.UNRAMIFIED)
    assert sorted({b.zeta.exponent for b in enumerate_beta_classes(unram, FiniteField(3, 2))}) == [2, 6]
    assert [z.exponent for z in antiinvariant_units(FiniteField(5, 2))] == [3, 9, 15, 21]


@pytest.mark.parametrize("p,f", [(3, 2), (5, 2), (7, 2), (3, 4)])
def test_antiinvariant_units_by_scan(p, f):
    F = FiniteField(p, f)
    scan = [z.exponent for z in F.units() if is_antiinvariant(z)]
    assert scan == sorted(z.exponent for z in antiinvariant_units(F))


def test_ramified_beta_valuations_are_odd():
    for p in (3, 5, 7):
        for e in (2, 4):
            if e % p == 0:
                continue
            endo = EndoClassInvariants(e, e, 1, Quad.RAMIFIED)
            assert all(b.val % 2 == 1 for b in enumerate_beta_classes(endo, FiniteField(p, 1)))
