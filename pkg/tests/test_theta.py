"""Theta evaluator: truncation control, defining-series values, shift laws,
and the f(a, b) family."""
import cmath
import math

import pytest

from circsum import (DomainError, EvalConfig, TauPoint, TruncationError,
                     quasi_shift_reference, ramanujan_f, ramanujan_lhs, theta,
                     truncation_order)
from circsum.harness import SplitMix64


def rand_tau(rng):
    return TauPoint(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.0)))


def rand_z(rng):
    return complex(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3))


# --------------------------------------------------------------- truncation

def test_truncation_order_examples():
    assert truncation_order(math.exp(-math.pi), 0.0, 1e-14) == 4
    assert truncation_order(1e-300, 0.0, 0.1) == 1
    assert truncation_order(0.9, 0.0, 1e-12) == 17


def test_truncation_order_monotone_in_tol():
    n_loose = truncation_order(0.5, 0.1, 1e-6)
    n_tight = truncation_order(0.5, 0.1, 1e-14)
    assert n_tight >= n_loose


def test_truncation_order_domain_guard():
    with pytest.raises(DomainError):
        truncation_order(0.96, 0.0, 1e-10)
    with pytest.raises(TruncationError):
        truncation_order(0.94, 30.0, 1e-12, max_terms=16)


def test_truncation_stability():
    # doubling the window beyond the chosen order moves the value by < tol
    cfg = EvalConfig(tol=1e-12)
    rng = SplitMix64(101)
    for _ in range(20):
        tau = rand_tau(rng)
        z = rand_z(rng)
        kind = 1 + rng.next_u64() % 4
        n0 = truncation_order(tau.q_abs, abs(z.imag), cfg.tol)
        v1 = theta(kind, z, tau, cfg)
        v2 = theta(kind, z, tau, cfg, n_terms=2 * n0)
        assert abs(v1 - v2) < cfg.tol


# --------------------------------------------------------------- theta values

def test_theta1_vanishes_at_origin():
    assert abs(theta(1, 0, TauPoint(1j))) < 1e-12
    assert abs(theta(1, 0, TauPoint(0.3 + 0.9j))) < 1e-12


def test_theta3_value_at_i():
    # direct-summation value, 10 digits
    assert abs(theta(3, 0, TauPoint(1j)) - 1.0864348112) < 1e-10


def test_theta_invalid_kind_and_tau():
    with pytest.raises(ValueError):
        theta(5, 0, TauPoint(1j))
    with pytest.raises(DomainError):
        TauPoint(1.0 - 0.2j)


def test_pi_shift_parity():
    # kinds 1, 2 flip sign under z -> z + pi; kinds 3, 4 are invariant
    cfg = EvalConfig(tol=1e-12)
    rng = SplitMix64(7)
    for _ in range(10):
        tau = rand_tau(rng)
        z = rand_z(rng)
        for kind, sign in ((1, -1), (2, -1), (3, 1), (4, 1)):
            lhs = theta(kind, z + math.pi, tau, cfg)
            rhs = sign * theta(kind, z, tau, cfg)
            assert abs(lhs - rhs) < 10 * cfg.tol


def test_quasi_periodicity_against_reference():
    # values reach |q|^{-4} ~ 1e11 at n_shift = 2, so the absolute bound
    # needs extended working precision: both the evaluation and the shifted
    # argument z + n_shift*pi*tau must be formed at the working precision
    import mpmath
    cfg = EvalConfig(tol=1e-12, digits=30)
    rng = SplitMix64(13)
    for _ in range(25):
        tau = rand_tau(rng)
        z = rand_z(rng)
        n_shift = int(rng.next_u64() % 5) - 2
        kind = 1 + int(rng.next_u64() % 4)
        with mpmath.workdps(cfg.digits):
            zs = (mpmath.mpc(z.real, z.imag)
                  + n_shift * mpmath.pi * mpmath.mpc(tau.tau.real, tau.tau.imag))
            lhs = theta(kind, zs, tau, cfg)
            rhs = quasi_shift_reference(kind, z, tau, n_shift, cfg)
            assert abs(lhs - rhs) < 10 * cfg.tol


def test_quasi_shift_zero_is_identity():
    tau = TauPoint(0.2 + 1.1j)
    z = 0.4 + 0.1j
    for kind in (1, 2, 3, 4):
        assert quasi_shift_reference(kind, z, tau, 0) == theta(kind, z, tau)


def test_quasi_shift_reference_formulas():
    tau = TauPoint(0.2 + 1.1j)
    z = 0.4 + 0.1j
    # kind 3, one step: q^{-1} e^{-2iz} theta3(z|tau)
    want = tau.q_pow(-1) * cmath.exp(-2j * z) * theta(3, z, tau)
    assert abs(quasi_shift_reference(3, z, tau, 1) - want) < 1e-12
    # kind 1, two steps: positive sign, q^{-4} e^{-4iz} theta1(z|tau)
    want = tau.q_pow(-4) * cmath.exp(-4j * z) * theta(1, z, tau)
    assert abs(quasi_shift_reference(1, z, tau, 2) - want) < 1e-12
    # kind 4, one step: extra (-1)
    want = -tau.q_pow(-1) * cmath.exp(-2j * z) * theta(4, z, tau)
    assert abs(quasi_shift_reference(4, z, tau, 1) - want) < 1e-12


def test_parity_in_z():
    cfg = EvalConfig(tol=1e-12)
    rng = SplitMix64(19)
    for _ in range(10):
        tau = rand_tau(rng)
        z = rand_z(rng)
        assert abs(theta(1, -z, tau, cfg) + theta(1, z, tau, cfg)) < 10 * cfg.tol
        for kind in (2, 3, 4):
            assert abs(theta(kind, -z, tau, cfg) - theta(kind, z, tau, cfg)) < 10 * cfg.tol


def test_extended_precision_path():
    import mpmath
    tau = TauPoint(1.3j)
    cfg = EvalConfig(digits=40)
    v = theta(3, 0.1, tau, cfg)
    assert isinstance(v, mpmath.mpc)
    assert abs(complex(v) - theta(3, 0.1, tau)) < 1e-12


def test_against_external_reference():
    # mpmath.jtheta shares the same series conventions and is an entirely
    # independent implementation
    import mpmath
    rng = SplitMix64(404)
    for _ in range(12):
        tau = rand_tau(rng)
        z = rand_z(rng)
        q = cmath.exp(1j * math.pi * tau.tau)
        for kind in (1, 2, 3, 4):
            ref = complex(mpmath.jtheta(kind, mpmath.mpc(z.real, z.imag),
                                        mpmath.mpc(q.real, q.imag)))
            assert abs(theta(kind, z, tau) - ref) < 1e-12


# --------------------------------------------------------------- f(a, b)

def test_f_zero_argument():
    assert ramanujan_f(0.0, 0.37) == pytest.approx(1.37, abs=1e-15)
    assert ramanujan_f(0.41, 0.0) == pytest.approx(1.41, abs=1e-15)


def test_f_diagonal_is_theta3():
    # f(q, q) = sum q^{n^2} = theta3(0|tau)
    tau = TauPoint(1.1j)
    q = tau.q_abs
    assert ramanujan_f(q, q) == pytest.approx(theta(3, 0, tau).real, abs=1e-12)


def test_f_against_window_oracle():
    ref = sum((0.3) ** (k * (k + 1) // 2) * (0.2) ** (k * (k - 1) // 2)
              for k in range(-60, 61))
    assert abs(ramanujan_f(0.3, 0.2) - ref) < 1e-13


def test_f_domain_errors():
    with pytest.raises(DomainError):
        ramanujan_f(-0.1, 0.2)
    with pytest.raises(DomainError):
        ramanujan_f(2.0, 0.5)


def test_f_extreme_base_ratio():
    # a*b < 1 admits huge a with tiny b; separate powers would overflow
    import mpmath
    with mpmath.workdps(40):
        a, b = mpmath.mpf(50), mpmath.mpf("0.01")
        ref = mpmath.nsum(lambda k: a ** (k * (k + 1) / 2) * b ** (k * (k - 1) / 2),
                          [-30, 30])
    got = ramanujan_f(50.0, 0.01)
    assert abs(got - float(ref)) / float(ref) < 1e-10
    assert math.isfinite(ramanujan_f(1e6, 1e-7))
    assert math.isfinite(ramanujan_lhs(1e6, 1e-7, 3))


def test_lhs_n1_reduces_to_f():
    for a, b in ((0.3, 0.2), (0.05, 0.9), (0.0, 0.4)):
        assert abs(ramanujan_lhs(a, b, 1) - ramanujan_f(a, b)) < 1e-13


def test_lhs_at_origin():
    assert ramanujan_lhs(0.0, 0.0, 3) == pytest.approx(1.0, abs=1e-15)


def test_lhs_ratio_depends_on_product_only():
    cfg = EvalConfig(tol=1e-13)
    pairs = [(0.3, 0.2), (0.2, 0.3), (0.15, 0.4)]
    ratios = [ramanujan_lhs(a, b, 3, cfg) / ramanujan_f(a, b, cfg)
              for a, b in pairs]
    for r in ratios[1:]:
        assert abs(r - ratios[0]) < 1e-10
