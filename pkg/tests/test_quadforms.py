import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siftsum import CapError, DomainError
from siftsum import quadforms as qf

import support

B, HSH = qf.BRUTEFORCE, qf.HASHED


@pytest.mark.parametrize("abc, expect", [((1, 1, 2), 1), ((1, 1, 3), 0), ((1, 2, 9), 1)])
def test_binary_examples(abc, expect):
    for method in (B, HSH):
        assert qf.count_binary(*abc, 5, method).count == expect


def test_binary_domain():
    with pytest.raises(DomainError):
        qf.count_binary(0, 1, 1, 5)
    with pytest.raises(DomainError):
        qf.count_binary(1, 1, 1, 5, "magic")


@settings(max_examples=50)
@given(st.integers(-20, 20).filter(bool), st.integers(-20, 20).filter(bool),
       st.integers(-5000, 5000).filter(bool), st.integers(1, 120))
def test_binary_methods_agree_and_monotone(a, b, c, P):
    h = qf.count_binary(a, b, c, P, HSH).count
    assert h == qf.count_binary(a, b, c, P, B).count
    assert qf.count_binary(a, b, c, P + 1, HSH).count >= h


def test_R_examples():
    assert qf.count_R(0, 1, 1).count == 1
    assert qf.count_R(4, 1, 1).count == 0


@settings(max_examples=50)
@given(st.integers(-3000, 3000), st.integers(0, 12), st.integers(0, 12))
def test_R_methods_agree_and_symmetric(j, H, V):
    h = qf.count_R(j, H, V, HSH).count
    assert h == qf.count_R(j, H, V, B).count
    assert h == qf.count_R(-j, H, V, HSH).count


@pytest.mark.parametrize("H, V", [(1, 1), (3, 4), (5, 2), (0, 3)])
def test_R_table_volume(H, V):
    tab = qf.R_table(H, V)
    vol = math.floor(H) * math.floor(V)
    assert sum(tab.values()) == vol * vol
    for j in list(tab)[:20]:
        assert tab[j] == qf.count_R(j, H, V).count


def test_M3_zero_h():
    for P in range(4):
        assert qf.count_M3(0, P, False).count == (2 * P + 1) ** 4


@pytest.mark.parametrize("coprime", [False, True])
def test_M3_against_plain_loop(coprime):
    for H, P in [(1, 1), (0, 1), (1, 0)]:
        expect = support.brute_m3(H, P, coprime)
        assert qf.count_M3(H, P, coprime, HSH).count == expect
        assert qf.count_M3(H, P, coprime, B).count == expect


@pytest.mark.parametrize("H, P", [(2, 2), (1, 3), (3, 1), (2, 4)])
def test_M3_methods_agree(backend, H, P):
    for coprime in (False, True):
        assert qf.count_M3(H, P, coprime, HSH).count == qf.count_M3(H, P, coprime, B).count


@pytest.mark.parametrize("H, P", [(1, 4), (3, 6), (2, 8)])
def test_M3_mobius_identity(H, P):
    total = sum(mu * c for _, mu, c in qf.m3_mobius_terms(H, P))
    assert total == qf.count_M3(H, P, True).count
    # d = 1 term is every solution with a nonzero m-vector
    d1 = qf.m3_mobius_terms(H, P)[0]
    assert d1[0] == 1
    assert d1[2] == qf.count_M3(H, P, False).count - (2 * H + 1) ** 4


def test_M3_cap():
    with pytest.raises(CapError):
        qf.count_M3(60, 60)
    with pytest.raises(DomainError):
        qf.count_M3(-1, 2)


def test_m3_bound_rhs():
    assert qf.m3_bound_rhs(2, 8, 0) == pytest.approx(8 * 64 + 32 * 4 + 256)


def test_bhb_examples():
    P = 100.0
    b = qf.bhb_bound_rhs(1, 1, 1, 1, P)
    assert (b.delta_q, b.delta_bad, b.norm_q) == (1, 1, 1)
    assert b.rhs == pytest.approx((P**2 + P**(4 / 3)) * math.log(2 * P) * math.log(2))
    b = qf.bhb_bound_rhs(4, 1, 1, 1, P)
    assert (b.delta_q, b.delta_bad) == (4, 4)
    assert not b.hypothesis_ok
    b = qf.bhb_bound_rhs(2, 3, 1, 1, P)
    assert (b.delta_q, b.delta_bad) == (6, 1)
    assert b.hypothesis_ok
    assert qf.bhb_bound_rhs(2, 2, 3, 5, P).delta_bad == 4
    with pytest.raises(DomainError):
        qf.bhb_bound_rhs(0, 1, 1, 1, P)


def test_bhb_large_coefficients():
    b = qf.bhb_bound_rhs(999_999_937, 999_999_937, 6, 1, 10.0)
    assert b.delta_bad == 999_999_937**2


def test_bound4_brute_matches_hashed():
    for N, W, H in [(100, 10, 1), (60, 10, 1), (80, 10, 2), (200, 20, 1)]:
        assert qf.bound4_lhs(N, W, H, HSH) == qf.bound4_lhs(N, W, H, B)


def test_bound4_empty_window():
    # V = N/(2W) < 1/2 leaves no integer m in (V, 2V]
    assert qf.bound4_lhs(10, 40, 1) == 0


def test_bound4_regression():
    rep = qf.bound4_check(1e3, 1e2, 4)
    assert rep.lhs == 532
    assert rep.ratio == pytest.approx(0.047700226104447026, rel=1e-12)


# max_{0<|c|<=1e4} #{1<=x,y<=100 : a x^2 + b y^2 = c}, pinned after the first run
VW_PINNED = {(1, 1): 12, (1, 2): 8, (1, 3): 12, (2, 3): 6, (1, -1): 9, (1, -2): 7}


@pytest.mark.parametrize("ab", sorted(VW_PINNED))
def test_binary_max_count_regression(ab):
    assert qf.max_binary_count(*ab, 10**4, 100) == VW_PINNED[ab]
