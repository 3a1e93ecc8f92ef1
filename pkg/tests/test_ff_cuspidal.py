import os
import subprocess
import sys
from collections import Counter
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import divisors, mobius

from innerdist import _kernels
from innerdist.ff_cuspidal import (
    CharOrbit,
    CyclotomicInteger,
    InnerConj,
    Subfield,
    autodual_stabilizer_census,
    enumerate_cuspidals,
    exists_autodual_with_stabilizer,
    green_trace,
    is_distinguished_gow,
    is_selfdual,
    is_sigma_autodual,
    parity_constraint_solvable,
    sigma_autodual_by_orbit,
    stabilizer_order,
    verify_parity_constraint,
)


def regular_count(q, m):
    return sum(mobius(d) * (q ** (m // d) - 1) for d in divisors(m)) // m


def census_by_loops(q0, m, c):
    """Plain-python census of sigma-autodual regular orbits by stabilizer order."""
    q, qE = q0 ** (2 * c), q0**2
    M = q**m - 1
    out = Counter()
    for k in range(M):
        orbit = [k * pow(q, i, M) % M for i in range(m)]
        if len(set(orbit)) != m or min(orbit) != k:
            continue
        if (-k * pow(q0, c, M)) % M not in orbit:
            continue
        out[sum(1 for j in range(c) if k * pow(qE, j, M) % M in orbit)] += 1
    return dict(out)


@pytest.mark.parametrize("q,m,count", [(3, 1, 2), (3, 2, 3), (5, 1, 4)])
def test_cuspidal_count_examples(q, m, count):
    assert len(enumerate_cuspidals(q, m)) == count


@pytest.mark.parametrize("q,m", [(3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (9, 2), (25, 2)])
def test_cuspidal_count_matches_necklace_formula(q, m):
    assert len(enumerate_cuspidals(q, m)) == regular_count(q, m)


def test_exactly_one_selfdual_for_gl2_f3():
    orbits = enumerate_cuspidals(3, 2)
    assert [o.rep_exponent for o in orbits if is_selfdual(o)] == [2]


def test_char_orbit_validation():
    with pytest.raises(ValueError):
        CharOrbit(3, 2, 4)  # 4 * 3 = 12 = 4 mod 8: not regular
    with pytest.raises(ValueError):
        CharOrbit(3, 2, 3)  # orbit {3, 1}: 3 is not the minimum
    with pytest.raises(ValueError):
        CharOrbit(6, 1, 1)
    assert CharOrbit.of(3, 2, 3) == CharOrbit(3, 2, 1)
    assert CharOrbit(3, 2, 2).order == 4


def test_selfdual_examples():
    assert is_selfdual(CharOrbit(3, 1, 0))
    assert is_selfdual(CharOrbit(3, 2, 2))
    assert not is_selfdual(CharOrbit(5, 1, 1))


def test_sigma_autodual_examples():
    assert is_sigma_autodual(CharOrbit(9, 1, 0), 3)
    assert is_sigma_autodual(CharOrbit(9, 1, 2), 3)
    assert not is_sigma_autodual(CharOrbit(9, 1, 1), 3)
    with pytest.raises(ValueError):
        is_sigma_autodual(CharOrbit(27, 1, 1), 3)


@pytest.mark.parametrize("q0,c,m", [(3, 1, 1), (3, 1, 3), (3, 3, 1), (5, 1, 3), (7, 1, 1)])
def test_sigma_autodual_order_test_equals_orbit_test(q0, c, m):
    for o in enumerate_cuspidals(q0 ** (2 * c), m):
        assert is_sigma_autodual(o, q0) == sigma_autodual_by_orbit(o, q0)


def test_order_test_is_specific_to_odd_mc():
    # with m c even the order criterion and the orbit criterion part ways
    orbits = enumerate_cuspidals(9, 2)
    assert any(is_sigma_autodual(o, 3) != sigma_autodual_by_orbit(o, 3) for o in orbits)


def test_stabilizer_examples():
    assert all(stabilizer_order(o, 9) == 1 for o in enumerate_cuspidals(9, 2))
    # q = 9, m = 2, qE = 3, c = 2: 4 * 3 = 12 is outside the orbit {4, 36}
    assert stabilizer_order(CharOrbit(9, 2, 4), 3) == 1
    # q = 27, m = 1: k = 13 is fixed by x -> 3x
    assert stabilizer_order(CharOrbit(27, 1, 13), 3) == 3


def test_exists_examples():
    assert exists_autodual_with_stabilizer(3, 1, 1, 1)
    assert not exists_autodual_with_stabilizer(3, 1, 3, 2)
    assert not exists_autodual_with_stabilizer(3, 3, 3, 3)
    with pytest.raises(ValueError):
        exists_autodual_with_stabilizer(3, 2, 1, 1)


@pytest.mark.parametrize("q0,m,c", [(3, 1, 1), (3, 1, 3), (3, 3, 1), (5, 1, 1), (3, 5, 1), (3, 1, 5), (5, 3, 1)])
def test_census_matches_plain_loops(q0, m, c):
    assert autodual_stabilizer_census(q0, m, c) == census_by_loops(q0, m, c)


@pytest.mark.parametrize("q0,m,c", [(3, 1, 3), (3, 3, 1), (5, 1, 3), (3, 5, 1)])
def test_lattice_census_equals_exhaustive(q0, m, c):
    assert autodual_stabilizer_census(q0, m, c) == autodual_stabilizer_census(q0, m, c, exhaustive=True)


# frozen from the census: sigma-autodual regular orbits by stabilizer order
CENSUS = {
    (3, 1, 1): {1: 4},
    (3, 1, 3): {1: 24, 3: 4},
    (3, 3, 1): {1: 8},
    (5, 1, 1): {1: 6},
}


@pytest.mark.parametrize("key", sorted(CENSUS))
def test_census_frozen(key):
    assert autodual_stabilizer_census(*key) == CENSUS[key]


def test_census_supports_only_prime_to_m_divisors():
    for q0, m, c in [(3, 1, 3), (3, 3, 3), (5, 3, 1), (3, 1, 5)]:
        census = autodual_stabilizer_census(q0, m, c)
        for s in divisors(c):
            assert (census.get(s, 0) > 0) == exists_autodual_with_stabilizer(q0, m, c, s)


def test_green_trace_examples():
    o = CharOrbit(3, 2, 2)
    assert green_trace(o, 1).is_zero()
    assert green_trace(o, 2).rational_value() == 2
    t = green_trace(CharOrbit(5, 1, 1), 1)
    assert abs(t.to_complex() - 1j) < 1e-12
    with pytest.raises(ValueError):
        green_trace(o, 4)


@pytest.mark.parametrize("q,m", [(3, 2), (3, 3), (5, 2)])
def test_green_trace_matches_float_sum(q, m):
    M = q**m - 1
    xs = [x for x in range(1, M) if len({x * q**i % M for i in range(m)}) == m][:6]
    for o in enumerate_cuspidals(q, m)[:6]:
        for x in xs:
            ref = (-1) ** (m - 1) * sum(np.exp(2j * np.pi * k * x / M) for k in o.members())
            assert abs(green_trace(o, x).to_complex() - ref) < 1e-9


def test_cyclotomic_reduction():
    assert CyclotomicInteger.from_exponents(6, {k: 1 for k in range(6)}).is_zero()
    assert CyclotomicInteger.from_exponents(4, {2: 1}).rational_value() == -1
    a = CyclotomicInteger.from_exponents(8, {1: 1})
    assert (a + (-a)).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("ramified", [False, True])
def test_parity_constraint_q0_3(m, ramified):
    assert verify_parity_constraint(3, m, ramified)


def test_parity_examples():
    assert not parity_constraint_solvable(3, 2, False)
    assert parity_constraint_solvable(3, 3, False)
    assert not parity_constraint_solvable(3, 3, True)


def test_gow_examples():
    assert is_distinguished_gow(CharOrbit(9, 1, 0), Subfield(3))
    assert is_distinguished_gow(CharOrbit(3, 1, 0), InnerConj)
    assert is_distinguished_gow(CharOrbit(9, 1, 2), Subfield(3))
    assert is_distinguished_gow(CharOrbit(3, 2, 2), InnerConj)
    with pytest.raises(ValueError):
        is_distinguished_gow(CharOrbit(3, 1, 1), Subfield(3))


# ---------------------------------------------------------------- kernels

kernel_args = st.tuples(
    st.sampled_from([(3, 1), (3, 2), (5, 1), (7, 1)]),
    st.integers(1, 4),
).filter(lambda t: (t[0][0] ** t[0][1]) ** t[1] < 10**6)


@pytest.mark.skipif(_kernels.backend() != "numba", reason="numba path disabled")
@given(kernel_args, st.data())
@settings(max_examples=60, deadline=None)
def test_kernels_agree_with_numpy(args, data):
    (p, fq), m = args
    M = (p**fq) ** m - 1
    ks = np.array(data.draw(st.lists(st.integers(0, M - 1), min_size=1, max_size=40)), dtype=np.int64)
    s1, l1 = _kernels.orbit_profile(ks, M, p, fq, m)
    s2, l2 = _kernels.orbit_profile_numpy(ks, M, p, fq, m)
    assert np.array_equal(s1, s2) and np.array_equal(l1, l2)
    assert np.array_equal(
        _kernels.stabilizer_sizes(ks, M, p, fq, 1, fq, m),
        _kernels.stabilizer_sizes_numpy(ks, M, p, fq, 1, fq, m),
    )
    assert np.array_equal(
        _kernels.twisted_dual_hits(ks, M, p, fq, 1, m),
        _kernels.twisted_dual_hits_numpy(ks, M, p, fq, 1, m),
    )


def test_numpy_backend_selected_by_flag():
    code = (
        "from innerdist import _kernels; from innerdist.ff_cuspidal import autodual_stabilizer_census as c;"
        "print(_kernels.backend(), sorted(c(3, 3, 1).items()))"
    )
    env = dict(os.environ, **{_kernels.DISABLE_ENV: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split()[0] == "numpy"
    assert out.strip().endswith(str(sorted(autodual_stabilizer_census(3, 3, 1).items())))


def test_census_stabilizers_divide_c():
    for (q0, m, c), census in CENSUS.items():
        assert all(c % s == 0 and gcd(s, m) == 1 for s in census)
