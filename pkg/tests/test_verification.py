import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerdist import verification as vf
from innerdist.endo_invariants import EndoClassInvariants, Quad, enumerate_beta_classes
from innerdist.verification import (
    SweepRanges,
    beta_classes,
    check_tuple,
    generate_tuples,
    run_sweep,
    sample_exponents,
    tower_zetas,
)

SMALL = SweepRanges(primes=(3,), two_n_max=4)


def test_sample_exponents():
    assert sample_exponents(6) == list(range(6))
    picks = sample_exponents(1000, limit=16)
    assert {x % 2 for x in picks} == {0, 1} and len(picks) == 9


def test_tower_zetas_lie_in_the_subfield():
    B = vf._base(5, 1)
    endo = EndoClassInvariants(4, 1, 4, Quad.UNRAMIFIED)
    zs = tower_zetas(B, endo)
    assert len(zs) == 24 and all(z % 26 == 0 for z in zs)


@pytest.mark.parametrize("p,f,quad", [(3, 1, Quad.RAMIFIED), (3, 2, Quad.UNRAMIFIED), (5, 2, Quad.UNRAMIFIED), (7, 1, Quad.RAMIFIED)])
def test_beta_classes_cover_the_enumeration(p, f, quad):
    e = 2 if quad is Quad.RAMIFIED else 1
    endo = EndoClassInvariants(e * f, e, f, quad)
    B = vf._base(p, 1)
    got = sorted(beta_classes(B, endo, limit=10**6))
    ref = sorted((b.val, b.zeta.exponent) for b in enumerate_beta_classes(endo, B.residue.extension(f)))
    assert got == ref


def test_generated_tuples_respect_constraints():
    for t in generate_tuples(SMALL):
        assert t.e % t.p and t.r * t.d <= 4
        assert not (t.alpha == "square" and t.r % 2)
        if t.quad == "ram":
            assert t.e % 2 == 0 and t.beta_val % 2 == 1 and (t.N % 2 == 0 or t.N == 1)
        else:
            assert t.f % 2 == 0 and t.N % 2 == 1


def test_small_sweep_is_clean_and_sorted():
    res = run_sweep(SMALL)
    assert res.tuples == len(list(generate_tuples(SMALL))) > 0
    assert res.failures == []
    assert list(res.summary()["checks"]) == sorted(res.summary()["checks"])


def test_single_tuple_equals_sweep_rows():
    tuples = sorted(generate_tuples(SMALL))
    total = vf.SweepResult()
    for t in tuples:
        one = check_tuple(t)
        assert one.tuples == 1
        total.merge(one)
    assert total.summary() == run_sweep(SMALL).summary()


def test_parallel_sweep_matches_serial():
    assert run_sweep(SMALL, jobs=2).summary() == run_sweep(SMALL).summary()


def test_sweep_catches_a_wrong_formulary(monkeypatch):
    vf._w_formulary.cache_clear()
    wrong = vf._w_formulary.__wrapped__

    def flipped(p, f0, e, f, quad, zeta, label, beta_val, N):
        w = wrong(p, f0, e, f, quad, zeta, label, beta_val, N)
        return -w if quad == "ram" and label == "unif" else w

    monkeypatch.setattr(vf, "_w_formulary", flipped)
    res = run_sweep(SMALL)
    assert res.failures
    checks = {f["check"] for f in res.failures}
    assert "formulary w = omega((-1)^n det beta)" in checks
    assert all(f["tuple"]["quad"] == "ram" and f["tuple"]["alpha"] == "unif" for f in res.failures)


def _outcome(p, f0, r, d, e, f, quad, z, label, N):
    g = vf._group_facts(p, f0, r, d, e, f, quad, z, label, N)
    ws = None if label == "square" else vf._w_formulary(p, f0, e, f, quad, z, label, 1, N)
    return g.exists, g.ex1, g.K_unramified_square, tuple(ok for _, ok, _ in g.records), ws


@given(
    st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)]),
    st.sampled_from([(2, 1, "ram"), (2, 2, "ram"), (4, 1, "ram"), (1, 2, "unram"), (1, 4, "unram"), (2, 2, "unram")]),
    st.sampled_from(list(vf.ALPHA_LABELS)),
    st.integers(0, 10**6),
)
@settings(max_examples=120, deadline=None)
def test_outcomes_depend_only_on_zeta_parity(base, shape, label, k):
    # justifies sampling zeta by parity when the unit group is large
    p, f0 = base
    e, f, quad = shape
    if e % p == 0:
        return
    B = vf._base(p, f0)
    r, d = 1, 2 * e * f
    N = 1
    if quad == "unram":
        step = B.residue.extension(f // 2).q + 1
        order = B.residue.extension(f // 2).order
        z, z_par = (k % order) * step, (k % 2) * step
    else:
        order = B.residue.extension(f).order
        z, z_par = k % order, k % 2
    if label == "square":
        r, d = 2, e * f // 2
    assert _outcome(p, f0, r, d, e, f, quad, z, label, N) == _outcome(p, f0, r, d, e, f, quad, z_par, label, N)
