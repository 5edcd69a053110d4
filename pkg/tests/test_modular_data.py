from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etale.catalogue import (RING_NAMES, get_ring, published_characters, published_conformal,
                             published_mfcs, published_modular_data)
from etale.exactnum import Cyclo, sqrt_int
from etale.fusion_ring import FusionRing
from etale.modular_data import (brute_force_conformal, build_modular_data, central_charge,
                                character_stabilizer, count_mfcs, enumerate_conformal,
                                factorization_string, frobenius_schur_indicators, mat_mul,
                                orbit_representative, solve_characters, verify_modular)
from etale.modular_data import det, is_singular


def cyclic_ring(n: int) -> FusionRing:
    N = np.zeros((n, n, n), dtype=int)
    for i in range(n):
        for j in range(n):
            N[i, j, (i + j) % n] = 1
    return FusionRing([str(k) for k in range(n)], N, [(-k) % n for k in range(n)], f"Z{n}")


def fib_ring() -> FusionRing:
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[0, 1, 1] = N[1, 0, 1] = N[1, 1, 0] = N[1, 1, 1] = 1
    return FusionRing(["1", "t"], N, [0, 1], "Fib")


@pytest.mark.parametrize("name", RING_NAMES)
def test_first_published_mfc_verifies(name):
    md = published_modular_data(name, 0)
    assert verify_modular(md).ok
    St = md.S_tilde
    r = md.ring.rank
    assert all(St[i][j] == St[j][i] for i in range(r) for j in range(r))
    assert tuple(St[0]) == md.d
    sq = mat_mul(St, St)
    for i in range(r):
        for j in range(r):
            assert sq[i][j] == (md.global_dim_sq if md.ring.dual[i] == j else 0)


@pytest.mark.parametrize("name", ["Vec_Z6", "so(5)_2", "su(3)_2"])
def test_all_published_mfcs_verify(name):
    for k in range(len(published_mfcs(name))):
        assert verify_modular(published_modular_data(name, k)).ok


@pytest.mark.parametrize("name", RING_NAMES)
def test_h_mutation_fails(name):
    md = published_modular_data(name, 0)
    for j in range(1, 6):
        h = list(md.h)
        h[j] += F(1, 2 * h[j].denominator)
        assert not verify_modular(build_modular_data(md.ring, md.d, h, md.sign)).ok


@pytest.mark.parametrize("name", RING_NAMES)
def test_d_mutation_fails(name):
    md = published_modular_data(name, 0)
    for j in range(1, 6):
        d = list(md.d)
        d[j] = d[j] + 1
        assert not verify_modular(build_modular_data(md.ring, d, md.h, md.sign)).ok


def test_vec_z6_mixed_and_zero_twists_fail():
    ring = get_ring("Vec_Z6")
    d = published_characters("Vec_Z6")[0]
    good = published_conformal("Vec_Z6")[0][0]
    assert verify_modular(build_modular_data(ring, d, good)).ok
    mixed = list(good)
    mixed[1], mixed[2] = good[2], good[1]
    assert not verify_modular(build_modular_data(ring, d, mixed)).ok
    assert not verify_modular(build_modular_data(ring, d, [0] * 6)).ok


def test_frobenius_schur_indicators_so52():
    md = published_modular_data("so(5)_2", 0)
    nu = frobenius_schur_indicators(md)
    assert all(x == 1 or x == -1 for x in nu)


def test_central_charges():
    fib = build_modular_data(fib_ring(), [1, (1 + sqrt_int(5)) / 2], [0, F(2, 5)])
    assert verify_modular(fib).ok
    assert central_charge(fib) == F(14, 5)
    semion = build_modular_data(cyclic_ring(2), [1, 1], [0, F(1, 4)])
    assert central_charge(semion) == 1
    z5 = build_modular_data(cyclic_ring(5), [1] * 5, [F(k * k, 5) for k in range(5)])
    assert verify_modular(z5).ok
    assert central_charge(z5) % 4 == 0
    for k in range(len(published_mfcs("so(5)_2"))):
        assert central_charge(published_modular_data("so(5)_2", k)) % 4 == 0


def test_sign_flips_D_only():
    plus = published_modular_data("so(5)_2", 0)
    minus = published_modular_data("so(5)_2", 1)
    assert plus.D == -minus.D
    assert plus.S_tilde == minus.S_tilde


@pytest.mark.parametrize("name,counts", [("Vec_Z6", [2, 2]), ("so(5)_2", [2])])
def test_characters_real_and_nonzero(name, counts):
    chars = solve_characters(get_ring(name))
    assert all(all(x.is_real() and not x.is_zero() for x in c) for c in chars)
    assert {tuple(c) for c in chars} == set(published_characters(name))


@pytest.mark.parametrize("name,bound", [("Vec_Z6", 12), ("su(3)_2", 15), ("so(5)_2", 12)])
def test_enumeration_matches_brute_force(name, bound):
    ring = get_ring(name)
    for d in solve_characters(ring):
        assert enumerate_conformal(ring, d, bound) == brute_force_conformal(ring, d, bound)


@pytest.mark.slow
@pytest.mark.parametrize("name,bound", [("Z2xIsing", 16), ("psu(2)_11", 13), ("so(5)_2", 16)])
def test_enumeration_matches_brute_force_slow(name, bound):
    ring = get_ring(name)
    for d in solve_characters(ring):
        assert enumerate_conformal(ring, d, bound) == brute_force_conformal(ring, d, bound)


def test_count_vec_z6():
    result = count_mfcs(get_ring("Vec_Z6"), 12)
    assert result.total == 16
    assert result.factorization == "2(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=16"


def test_factorization_string():
    assert factorization_string([16, 32, 32, 16]) == "16+16+32+32=96"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3))
def test_orbit_representative_is_invariant(k):
    ring = get_ring("so(5)_2")
    d = published_characters("so(5)_2")[0]
    group = character_stabilizer(ring, d)
    h = published_conformal("so(5)_2")[0][k]
    rep = orbit_representative(h, group)
    for g in group:
        moved = [None] * 6
        for i in range(6):
            moved[g[i]] = h[i]
        assert orbit_representative(moved, group) == rep


@st.composite
def cyclo_matrices(draw):
    n = draw(st.sampled_from([1, 3, 4, 5, 8, 12]))
    r = draw(st.integers(1, 4))
    from etale.exactnum import totient
    phi = totient(n)
    rows = [[Cyclo(n, draw(st.lists(st.integers(-3, 3), min_size=phi, max_size=phi)),
                   draw(st.integers(1, 3))) for _ in range(r)] for _ in range(r)]
    if r > 1 and draw(st.booleans()):
        # force a dependent row
        c = Cyclo(n, draw(st.lists(st.integers(-2, 2), min_size=phi, max_size=phi)))
        rows[-1] = [c * x for x in rows[0]]
    return rows


@settings(max_examples=150, deadline=None)
@given(cyclo_matrices())
def test_modular_singularity_test_agrees_with_exact_det(M):
    assert is_singular(M) == det(M).is_zero()
