"""Exact engine: cyclotomic ring, series arithmetic, theta expansions, F_n."""
from fractions import Fraction

import pytest

from circsum import CycRing, TauPoint, cyclotomic_poly, fn_series, theta
from circsum.harness import SplitMix64
from circsum.qseries import (QSeries, exact_constrained_qseries, series_add,
                             series_div_unit, series_eval, series_mul,
                             series_neg, series_pow, series_sub, theta_qseries)


def test_cyclotomic_small_orders():
    assert cyclotomic_poly(1) == (-1, 1)            # x - 1
    assert cyclotomic_poly(2) == (1, 1)             # x + 1
    assert cyclotomic_poly(4) == (1, 0, 1)          # x^2 + 1
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)  # x^4 - x^2 + 1


def test_cyclotomic_products_reconstruct_xn_minus_1():
    from circsum.qseries import _poly_mul
    for M in (6, 8, 12, 24):
        prod = (1,)
        for d in range(1, M + 1):
            if M % d == 0:
                prod = _poly_mul(prod, cyclotomic_poly(d))
        want = tuple([-1] + [0] * (M - 1) + [1])
        assert prod == want


def _rand_elt(ring, rng):
    return ring.reduce(tuple(int(rng.next_u64() % 7) - 3
                             for _ in range(ring.degree + 2)))


@pytest.mark.parametrize("M", [1, 4, 12, 24])
def test_ring_axioms(M):
    ring = CycRing(M)
    rng = SplitMix64(M * 1000 + 9)
    for _ in range(25):
        a, b, c = (_rand_elt(ring, rng) for _ in range(3))
        assert ring.mul(a, b) == ring.mul(b, a)
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        lhs = ring.mul(a, ring.add(b, c))
        rhs = ring.add(ring.mul(a, b), ring.mul(a, c))
        assert lhs == rhs
        assert ring.reduce(ring.reduce(a)) == ring.reduce(a)


@pytest.mark.parametrize("M", [4, 6, 12])
def test_reduced_nonzero_evaluates_nonzero(M):
    ring = CycRing(M)
    rng = SplitMix64(M * 77 + 1)
    for _ in range(40):
        a = _rand_elt(ring, rng)
        if ring.is_zero(a):
            continue
        assert abs(ring.to_complex(a)) > 1e-10


def test_zeta_order():
    ring = CycRing(12)
    z = ring.zeta_pow(1)
    acc = ring.one()
    for _ in range(12):
        acc = ring.mul(acc, z)
    assert acc == ring.one()
    assert ring.zeta_pow(6) == ring.from_int(-1)
    assert ring.i_pow(1) == ring.zeta_pow(3)


def test_theta3_series_leading_terms():
    ring = CycRing(4)
    s = theta_qseries(3, 0, 1, 1, 4, 16, ring)
    one = ring.one()
    assert s.terms[0] == {0: one}
    assert s.terms[4] == {2: one, -2: one}
    assert s.terms[16] == {4: one, -4: one}
    assert set(s.terms) == {0, 4, 16}


def test_theta1_series_prefactor():
    ring = CycRing(4)
    s = theta_qseries(1, 0, 1, 1, 4, 1, ring)
    minus_i = ring.i_pow(3)
    assert set(s.terms) == {1}
    assert s.terms[1] == {1: minus_i, -1: ring.neg(minus_i)}


def test_theta4_is_signed_theta3():
    ring = CycRing(4)
    s3 = theta_qseries(3, 0, 1, 1, 4, 16, ring)
    s4 = theta_qseries(4, 0, 1, 1, 4, 16, ring)
    for e, coeff in s3.terms.items():
        n = abs(next(iter(coeff))) // 2
        for we, c in coeff.items():
            want = c if n % 2 == 0 else ring.neg(c)
            assert s4.terms[e][we] == want


def test_series_scale_const_and_accessors():
    ring = CycRing(4)
    from circsum.qseries import series_const, series_scale
    s = theta_qseries(3, 0, 1, 1, 4, 16, ring)
    scaled = series_scale(s, ring.i_pow(1))
    tau = TauPoint(1.2j)
    assert abs(series_eval(scaled, 0.1, tau) - 1j * series_eval(s, 0.1, tau)) < 1e-14
    zero = series_scale(s, ring.zero())
    assert zero.is_zero()

    five = series_const(ring, 5, 8)
    assert series_eval(five, 0.3, tau) == 5
    assert series_const(ring, 0, 8).is_zero()

    assert s.coefficient(4) == {2: ring.one(), -2: ring.one()}
    assert s.coefficient(5) == {}
    with pytest.raises(ValueError, match="beyond"):
        s.coefficient(17)
    with pytest.raises(ValueError, match="extend"):
        s.copy_truncated(32)
    assert s.copy_truncated(3).terms == {0: {0: ring.one()}}


def test_series_mul_identity_and_low():
    ring = CycRing(4)
    s = theta_qseries(2, 0, 1, 1, 4, 20, ring)
    one = QSeries(ring, {0: {0: ring.one()}}, 20, 0)
    prod = series_mul(s, one)
    assert prod.terms == s.terms
    sq = series_mul(s, s)
    assert sq.low == 2 * s.low
    assert min(sq.terms) == 2 * min(s.terms)


def test_series_eval_homomorphism():
    # (theta3 series) * (theta4 series) evaluated at z = 0 matches the
    # numeric product at tau = 1.2i
    ring = CycRing(4)
    tau = TauPoint(1.2j)
    K = 60
    s3 = theta_qseries(3, 0, 1, 1, 4, K, ring)
    s4 = theta_qseries(4, 0, 1, 1, 4, K, ring)
    prod = series_mul(s3, s4)
    got = series_eval(prod, 0j, tau)
    want = theta(3, 0, tau) * theta(4, 0, tau)
    assert abs(got - want) < 1e-12


def test_series_eval_with_shift_phase():
    ring = CycRing(12)
    tau = TauPoint(1.1j)
    s = theta_qseries(2, 1, 3, 1, 4, 40, ring)  # theta2(z + pi/3 | tau)
    import math
    got = series_eval(s, 0.2, tau)
    want = theta(2, 0.2 + math.pi / 3, tau)
    assert abs(got - want) < 1e-12


def test_div_unit_roundtrip_and_hand_example():
    ring = CycRing(1)
    one = ring.one()
    # den = 1 - q (w^2 + w^-2); num = 1
    den = QSeries(ring, {0: {0: one}, 4: {2: ring.from_int(-1), -2: ring.from_int(-1)}},
                  12, 0)
    num = QSeries(ring, {0: {0: one}}, 12, 0)
    f = series_div_unit(num, den, 12)
    assert f.terms[0] == {0: one}
    assert f.terms[4] == {2: one, -2: one}
    assert f.terms[8] == {4: one, 0: ring.from_int(2), -4: one}
    # f * den reproduces num through K
    back = series_mul(f, den)
    diff = series_sub(back, num)
    assert all(not c for e, c in diff.terms.items() if e <= 12)


def test_div_unit_rejects_non_unit():
    ring = CycRing(1)
    den = QSeries(ring, {0: {0: ring.from_int(2)}}, 8, 0)
    num = QSeries(ring, {0: {0: ring.one()}}, 8, 0)
    with pytest.raises(ValueError):
        series_div_unit(num, den, 8)


def test_div_self_is_one():
    ring = CycRing(4)
    den = theta_qseries(3, 0, 1, 1, 4, 24, ring)
    f = series_div_unit(den, den, 24)
    assert f.terms == {0: {0: ring.one()}}


def test_fn_series_values():
    assert fn_series(3, 2) == [1, 0, 6]
    assert fn_series(4, 3) == [1, 0, 0, 8]
    assert fn_series(5, 4) == [1, 0, 0, 0, 10]
    assert fn_series(2, 1) == [1, 2]


def test_fn_series_w_free_to_order_ten():
    # raises if the quotient carried any w-dependence
    for n in (2, 3, 4, 5):
        coeffs = fn_series(n, 10)
        assert coeffs[0] == 1


def test_fn_series_rejects_small_n():
    with pytest.raises(ValueError):
        fn_series(1, 4)


def test_exact_constrained_matches_numeric():
    # exact R3-type sum at shifts (pi/6, -pi/6) vs the numeric engine
    from circsum import RFamily, eval_R_single
    import math
    ring = CycRing(12)
    K = 40
    s = exact_constrained_qseries(
        ring, K, 2, 0, [False, False], [False, False],
        [Fraction(1, 6), Fraction(-1, 6)], Fraction(0), 0, 2, 0)
    assert s.w_free()
    tau = TauPoint(1.05j)
    got = series_eval(s, 0j, tau)
    want = eval_R_single(RFamily.R3, 1, 2,
                         [math.pi / 6, -math.pi / 6], tau)
    assert abs(got - want) < 1e-12


def test_exact_constrained_matches_numeric_signed_family():
    # the theta1*theta2 coefficient shape: sign mask, odd scalar power of i,
    # negative q-prefactor; constraint 2*sum + n = 0 at n = 2
    from circsum import RFamily, eval_R
    import math
    ring = CycRing(8)
    s = exact_constrained_qseries(
        ring, 60, 2, -1, [True, False], [False, False],
        [Fraction(1, 4), Fraction(-1, 4)], Fraction(0), -2, 2, 3)
    tau = TauPoint(1.05j)
    got = series_eval(s, 0j, tau)
    want = eval_R(RFamily.R12, 1, 2, 1, 1,
                  [math.pi / 4], [-math.pi / 4], tau)
    assert abs(got - want) < 1e-11
