import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siftsum import Angle, CapError, DomainError
from siftsum import bilinear as bl
from siftsum.sequences import CLASS_3MOD4

import support


def test_coeff_seq_bound():
    with pytest.raises(DomainError):
        bl.CoeffSeq(1, np.array([0.5, 2.0]), 1.0)
    c = bl.CoeffSeq.constant(1, 3, 5)
    assert c.at(np.array([2, 3, 5, 6])).tolist() == [0, 1, 1, 0]
    assert c.stop == 6
    f = bl.CoeffSeq.from_function(lambda i: (-1) ** i, 1, 4)
    assert f.values.real.tolist() == [-1, 1, -1, 1]


def test_legendre_examples():
    u = bl.CoeffSeq.constant(1, 1, 30)
    assert bl.legendre_identity_check(u, 6) == (20, 20)
    lhs, rhs = bl.legendre_identity_check(u, 2)
    assert lhs == rhs == 30


def test_legendre_random():
    r = support.rng(11)
    u = bl.CoeffSeq(1, r.standard_normal(1000) + 1j * r.standard_normal(1000), 10.0)
    lhs, rhs = bl.legendre_identity_check(u, 20, CLASS_3MOD4)
    assert abs(lhs - rhs) <= 1e-10


def test_legendre_cap():
    u = bl.CoeffSeq.constant(1, 1, 10)
    with pytest.raises(CapError):
        bl.legendre_identity_check(u, 500, "all")


def test_decomposition_examples():
    p = bl.DecompositionParams(100, 2, 3)
    s1, s2, s3 = bl.eval_decomposition_terms(p, Angle.rational(0, 1))
    assert s1 == sum(1 for n in range(51, 101) if n % 4 == 1)
    direct = sum(1 for p_ in (3, 7) for m in range(1, 101)
                 if 50 < m * p_ <= 100 and (m * p_) % 4 == 1)
    assert s2 == direct
    zero = (bl.CoeffSeq(2, np.zeros(10)), bl.CoeffSeq(1, np.zeros(100)))
    assert bl.eval_decomposition_terms(p, Angle.rational(0, 1), coeffs=zero).s3 == 0


def test_decomposition_s1_against_direct():
    N, M, z = 500, 30, 12
    alpha = Angle.rational(5, 17)
    s1 = bl.eval_decomposition_terms(bl.DecompositionParams(N, M, z), alpha).s1
    ref = 0
    for d, mu in [(1, 1), (3, -1), (7, -1), (11, -1), (21, 1)]:
        ns = [n for n in range(N // 2 + 1, N + 1) if n % d == 0 and n % 4 == 1]
        ref += mu * support.exact_square_sum(ns, alpha)
    assert s1 == pytest.approx(ref, abs=1e-10)


def test_decomposition_trivial_bounds():
    t = bl.eval_decomposition_terms(bl.DecompositionParams(400, 5, 8), support.quad_irrational(2))
    for v, triv in zip(t, t.trivial):
        assert abs(v) <= triv + 1e-9


def test_decomposition_param_checks():
    with pytest.raises(DomainError):
        bl.DecompositionParams(100, 5, 3, M0=1)
    with pytest.raises(DomainError):
        bl.DecompositionParams(100, 5, 3, Z=200)


def test_char4_examples():
    assert bl.char4_expansion(1) == pytest.approx((1, 1), abs=1e-12)
    assert bl.char4_expansion(2) == pytest.approx((0, 0), abs=1e-12)
    assert bl.char4_expansion(3) == pytest.approx((1, -1), abs=1e-12)


def test_char4_reconstructs_indicator():
    for m in range(4):
        for n in range(4):
            w0m, w1m = bl.char4_expansion(m)
            w0n, w1n = bl.char4_expansion(n)
            ind = (w0m * w0n + w1m * w1n) / 2
            assert ind == pytest.approx(1.0 if (m * n) % 4 == 1 else 0.0, abs=1e-12)


def test_type_I_examples(backend):
    zero = bl.CoeffSeq.constant(0, 1, 100, sup_bound=1)
    assert bl.type_I_sum(zero, Angle.rational(1, 3), 5, 10, 100) == 0
    one = bl.CoeffSeq.constant(1, 1, 100)
    m, n = bl.box_pairs(5, 10, 100)
    direct = sum(1 for mm in range(6, 11) for nn in range(11, 21) if 50 < mm * nn <= 100)
    assert len(m) == direct
    assert bl.type_I_sum(one, Angle.rational(0, 1), 5, 10, 100) == direct
    m, n = bl.box_pairs(5, 10, 100, congruence=True)
    assert bl.type_I_sum(one, Angle.rational(1, 2), 5, 10, 100, congruence=True) == pytest.approx(-len(m), abs=1e-12)


@settings(max_examples=30)
@given(st.integers(0, 10**4), st.integers(1, 10**4), st.integers(2, 30), st.integers(0, 2**32))
def test_character_route_agrees(a, q, V, seed):
    N = 600
    W = N / (2 * V)
    coeff = bl.CoeffSeq.random_unimodular(support.rng(seed), V + 1, 2 * V)
    alpha = Angle.rational(a, q)
    direct = bl.type_I_sum(coeff, alpha, V, W, N, congruence=True)
    via = bl.type_I_via_characters(coeff, alpha, V, W, N)
    assert via == pytest.approx(direct, abs=1e-9)
    assert abs(direct) <= len(bl.box_pairs(V, W, N, True)[0]) + 1e-9


def test_type_I_h_avg():
    one = bl.CoeffSeq.constant(1, 1, 100)
    total, per_h = bl.type_I_h_avg(one, Angle.rational(1, 4), 5, 10, 100, 4, congruence=True)
    pairs = len(bl.box_pairs(5, 10, 100, True)[0])
    assert total == pytest.approx(4 * pairs)
    assert len(per_h) == 4


def test_window_checks():
    with pytest.raises(DomainError):
        bl.box_pairs(0, 10, 100)
    with pytest.raises(DomainError):
        bl.box_pairs(5, 200, 100)


def test_linear_rhs_formulas():
    N, V, q, H = 1e4, 50, 300, 4
    assert bl.linear_rhs(N, V, q) == pytest.approx(N * V**0.5 / q**0.5 + N**0.5 * V + (V * q)**0.5)
    assert bl.hlinear_rhs(N, V, q, 1) == pytest.approx(bl.linear_rhs(N, V, q))
    assert bl.hlinear_rhs(N, V, q, H, 0.1) == pytest.approx(
        (N * q)**0.1 * (H * N * V**0.5 / q**0.5 + H * N**0.5 * V + (H * V * q)**0.5))


def test_type_II_examples(backend):
    a = bl.CoeffSeq.constant(1, 1, 200)
    b0 = bl.CoeffSeq.constant(0, 1, 200, sup_bound=1)
    res = bl.type_II_sum(a, b0, Angle.rational(1, 3), 5, 10, 100, H=3)
    assert res.total == 0
    b = bl.CoeffSeq.constant(1, 1, 200)
    res = bl.type_II_sum(a, b, Angle.rational(1, 4), 5, 10, 100)
    assert res.per_h[0] == pytest.approx(1j * res.pairs)


def test_type_II_dyadic_window():
    a = bl.CoeffSeq.constant(1, 1, 200)
    res = bl.type_II_sum(a, a, Angle.rational(1, 8), 5, 10, 100, H=3, h_window="dyadic")
    assert res.hs.tolist() == [4, 5, 6]
    with pytest.raises(DomainError):
        bl.h_range(0)
    with pytest.raises(DomainError):
        bl.h_range(2, "triadic")


def test_bilinear_rhs():
    N, W, H, q = 1e6, 100, 4, 1e4
    r1 = H * N / q**0.25 + H * N / W**0.5 + H * N**0.75 * W**0.25 + H**0.75 * N**0.5 * q**0.25
    assert bl.bilinear_rhs(1, N, W, H, q) == pytest.approx(r1)
    assert bl.bilinear_rhs_min(N, W, H, q) == min(bl.bilinear_rhs(k, N, W, H, q) for k in (1, 2, 3))
    assert bl.bilinear1_rhs(N, W, q) == pytest.approx(
        N / q**0.25 + (N * W)**0.5 + N / W**0.25 + N**0.5 * q**0.25)
    with pytest.raises(DomainError):
        bl.bilinear_rhs(4, N, W, H, q)


def test_choose_bilinear_bound():
    assert bl.choose_bilinear_bound(10, 100, 2, 10**4) == 3
    assert bl.choose_bilinear_bound(10, 100, 10**3, 10**4) == 2
    assert bl.choose_bilinear_bound(100, 10, 2, 10**4) == 1


def test_weyl_examples():
    assert bl.weyl_difference_check(lambda n: 0, []) == (0.0, 0.0)
    d, e = bl.weyl_difference_check(lambda n: 0, range(50))
    assert d == pytest.approx(2500) and e == pytest.approx(2500)
    d, e = bl.weyl_difference_check(lambda n: Fraction(9 * n * n, 7), range(11, 21))
    assert d == pytest.approx(e, abs=1e-10)


def test_weyl_cap():
    with pytest.raises(DomainError):
        bl.weyl_difference_check(lambda n: 0, range(10_001))


@pytest.mark.parametrize("x, T, f", [(1.0, 100.0, 3.0), (1.0, 1000.0, 3.0), (2.0, 1000.0, 0.75),
                                     (1.0, 100.0, 0.3)])
def test_kernel_against_sine_integral(x, T, f):
    k = bl.fourier_cutoff_kernel(x, T, f * x)
    assert k.estimate == pytest.approx(support.kernel_closed_form(x, T, f * x), abs=1e-7)
    assert abs(k.estimate - k.indicator) <= k.err_allowance


def test_kernel_small_t_is_vacuous():
    k = bl.fourier_cutoff_kernel(1.0, 1e-3, 0.75)
    assert k.err_allowance > 100


def test_kernel_breakpoint_guard():
    with pytest.raises(DomainError):
        bl.fourier_cutoff_kernel(1.0, 10.0, 1.0)
    with pytest.raises(DomainError):
        bl.fourier_cutoff_kernel(-1.0, 10.0, 0.3)


def test_kernel_limit_at_zero():
    assert bl.cutoff_kernel(0.0, 2.0) == pytest.approx(1 / math.pi)
    assert bl.cutoff_kernel(1e-9, 2.0) == pytest.approx(1 / math.pi)


def test_kernel_l1():
    assert bl.kernel_l1(1.0, 100.0) <= bl.C_L1 * bl.kernel_l1_rhs(1.0, 100.0)
    with pytest.raises(DomainError):
        bl.kernel_l1(0.0, 1.0)


def test_adaptive_simpson_polynomial():
    assert bl.adaptive_simpson(lambda t: t**3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-12)
