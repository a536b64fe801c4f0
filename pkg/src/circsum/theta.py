"""Numerical evaluation of the four Jacobi theta series and Ramanujan's f(a, b).

Conventions used throughout the package:

* the nome is q = exp(i*pi*tau) with Im(tau) > 0, so |q| < 1;
* every fractional power q**alpha means exp(i*alpha*pi*tau), computed from tau
  itself (see :meth:`TauPoint.q_pow`), so quarter-integer and negative powers
  carry no branch ambiguity;
* theta_1(z) = -i q^{1/4} sum (-1)^n q^{n(n+1)} e^{(2n+1)iz}
  theta_2(z) =    q^{1/4} sum        q^{n(n+1)} e^{(2n+1)iz}
  theta_3(z) =            sum        q^{n^2}    e^{2niz}
  theta_4(z) =            sum (-1)^n q^{n^2}    e^{2niz}
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import IntEnum

import mpmath


class DomainError(ValueError):
    """Argument outside the supported domain (e.g. Im(tau) <= 0, or |q| too large)."""


class TruncationError(RuntimeError):
    """No truncation window within the term budget meets the requested tolerance."""


class ThetaKind(IntEnum):
    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4


@dataclass(frozen=True)
class TauPoint:
    """A modular parameter tau with Im(tau) > 0; single source of q-powers."""

    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise DomainError(f"tau must satisfy Im(tau) > 0, got {tau}")
        object.__setattr__(self, "tau", tau)

    @property
    def q_abs(self) -> float:
        return math.exp(-math.pi * self.tau.imag)

    @property
    def q(self) -> complex:
        return self.q_pow(1)

    def q_pow(self, alpha: float) -> complex:
        """q**alpha defined as exp(i*alpha*pi*tau); alpha may be any real."""
        return cmath.exp(1j * alpha * math.pi * self.tau)

    def scaled(self, factor: float) -> "TauPoint":
        """TauPoint at factor*tau (factor > 0 keeps the upper half-plane)."""
        return TauPoint(self.tau * factor)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation budget: absolute truncation tolerance and window caps.

    digits > 16 switches the theta evaluator to mpmath working precision,
    needed when a result is a tiny offset from 1 (leading-coefficient checks).
    """

    tol: float = 1e-12
    max_terms: int = 400
    q_abs_ceiling: float = 0.95
    digits: int = 15

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")
        if not 0 < self.q_abs_ceiling < 1:
            raise ValueError("q_abs_ceiling must lie in (0, 1)")
        if self.digits < 15:
            raise ValueError("digits must be at least 15")


DEFAULT_CONFIG = EvalConfig()


def truncation_order(q_abs: float, im_z_abs: float, tol: float, *,
                     max_terms: int = 400, q_abs_ceiling: float = 0.95) -> int:
    """Smallest window N so that the discarded theta tail is below tol.

    Requires both  q_abs^{N^2} e^{2N|Im z|} < tol/4  (first discarded term)
    and  q_abs^{2N+1} e^{2|Im z|} < 1/2  (geometric decay of the tail), which
    together bound the tail of any of the four series by tol.
    """
    if not 0 < q_abs < q_abs_ceiling:
        raise DomainError(
            f"|q| = {q_abs} outside (0, {q_abs_ceiling}); tolerances are only "
            "promised below the ceiling")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lq = math.log(q_abs)
    log_thresh = math.log(tol) - math.log(4.0)
    log_half = math.log(0.5)
    for n in range(1, max_terms + 1):
        head_small = n * n * lq + 2.0 * n * im_z_abs < log_thresh
        ratio_small = (2 * n + 1) * lq + 2.0 * im_z_abs < log_half
        if head_small and ratio_small:
            return n
    raise TruncationError(
        f"no truncation window <= {max_terms} meets tol={tol} at |q|={q_abs}, "
        f"|Im z|={im_z_abs}; q too close to 1 or z too far from the real axis")


def _theta_terms(kind: ThetaKind, n_window: int):
    """Yield (q_exponent, w_exponent, sign) per summation index.

    The q^{1/4} prefactor of theta_1/theta_2 is folded into the exponent, and
    the -i prefactor of theta_1 into the sign stream (sign is a 4th root of
    unity as an integer power of i).
    """
    if kind in (ThetaKind.T1, ThetaKind.T2):
        for n in range(-n_window - 1, n_window + 1):
            qe = n * n + n + 0.25
            we = 2 * n + 1
            if kind is ThetaKind.T1:
                ipow = 3 if n % 2 == 0 else 1  # -i * (-1)^n
            else:
                ipow = 0
            yield qe, we, ipow
    else:
        for n in range(-n_window, n_window + 1):
            qe = float(n * n)
            ipow = 2 if (kind is ThetaKind.T4 and n % 2 != 0) else 0
            yield qe, 2 * n, ipow


_I_POW = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def theta(kind, z, tau: TauPoint, cfg: EvalConfig = DEFAULT_CONFIG, *,
          n_terms: int | None = None):
    """Truncated theta_kind(z | tau) with absolute truncation error < cfg.tol.

    With cfg.digits > 16 the sum is carried out in mpmath at that many digits
    and an mpmath.mpc is returned; otherwise a complex.
    """
    kind = ThetaKind(kind)
    zc = complex(z)
    n_win = n_terms if n_terms is not None else truncation_order(
        tau.q_abs, abs(zc.imag), cfg.tol,
        max_terms=cfg.max_terms, q_abs_ceiling=cfg.q_abs_ceiling)
    if cfg.digits > 16:
        return _theta_mp(kind, z, tau, n_win, cfg.digits)
    ipitau = 1j * math.pi * tau.tau
    total = 0j
    for qe, we, ipow in _theta_terms(kind, n_win):
        total += _I_POW[ipow] * cmath.exp(ipitau * qe + 1j * we * zc)
    return total


def _theta_mp(kind, z, tau, n_win, digits):
    with mpmath.workdps(digits):
        zm = _to_mpc(z)
        taum = _to_mpc(tau.tau)
        ipitau = 1j * mpmath.pi * taum
        total = mpmath.mpc(0)
        for qe, we, ipow in _theta_terms(kind, n_win):
            total += (1j ** ipow) * mpmath.exp(ipitau * qe + 1j * we * zm)
        return total


def _to_mpc(z):
    if isinstance(z, mpmath.mpc) or isinstance(z, mpmath.mpf):
        return mpmath.mpc(z)
    zc = complex(z)
    return mpmath.mpc(zc.real, zc.imag)


def quasi_shift_reference(kind, z, tau: TauPoint, n_shift: int,
                          cfg: EvalConfig = DEFAULT_CONFIG):
    """Right side of the z -> z + n_shift*pi*tau multiplier law.

    For kinds 2 and 3:  q^{-n^2} e^{-2niz} theta(z|tau);
    kinds 1 and 4 carry an extra (-1)^n.  Used as the independent reference in
    the quasi-periodicity tests.
    """
    kind = ThetaKind(kind)
    base = theta(kind, z, tau, cfg)
    if cfg.digits > 16:
        with mpmath.workdps(cfg.digits):
            taum = _to_mpc(tau.tau)
            mult = mpmath.exp(-1j * (n_shift ** 2) * mpmath.pi * taum
                              - 2j * n_shift * _to_mpc(z))
            if kind in (ThetaKind.T1, ThetaKind.T4) and n_shift % 2 != 0:
                mult = -mult
            return mult * base
    mult = tau.q_pow(-(n_shift ** 2)) * cmath.exp(-2j * n_shift * complex(z))
    if kind in (ThetaKind.T1, ThetaKind.T4) and n_shift % 2 != 0:
        mult = -mult
    return mult * base


def _pow_product(a: float, b: float, ea: float, eb: float) -> float:
    """a^ea * b^eb for nonnegative a, b and nonnegative exponents.

    Computed in log space when both bases are positive: the separate powers
    can overflow even when the product is tiny (a*b < 1 with a huge), and
    inf * 0 would poison the sum.  0.0 ** 0 == 1.0 keeps the 0^0 := 1
    boundary convention on the zero-base path.
    """
    if a == 0.0 or b == 0.0:
        return (a ** ea) * (b ** eb)
    return math.exp(ea * math.log(a) + eb * math.log(b))


def _f_term(a: float, b: float, k: int) -> float:
    """a^{k(k+1)/2} b^{k(k-1)/2}; triangular exponents, so exact integers."""
    return _pow_product(a, b, k * (k + 1) // 2, k * (k - 1) // 2)


def ramanujan_f(a: float, b: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """f(a, b) = sum over all integers k of a^{k(k+1)/2} b^{k(k-1)/2}.

    Restricted to real a, b >= 0 with a*b < 1 so all powers are principal.
    """
    _check_f_domain(a, b)
    thresh = cfg.tol * (1.0 - a * b) / 8.0
    total = 1.0  # k = 0
    for direction in (1, -1):
        small = 0
        for j in range(1, cfg.max_terms + 1):
            t = _f_term(a, b, direction * j)
            total += t
            small = small + 1 if t < thresh else 0
            if small >= 2:
                break
        else:
            raise TruncationError(f"f({a}, {b}) did not converge within "
                                  f"{cfg.max_terms} terms")
    return total


def ramanujan_lhs(a: float, b: float, n: int,
                  cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Circular-summation left side: sum over residue classes r mod n of the
    n-th power of the class subsum of f(a, b)'s terms.

    Classes run over -n/2 < r <= n/2; the inner sums use fractional exponents
    k(k±1)/(2n), principal for the nonnegative real domain.  Inner sums are
    truncated three decades below cfg.tol so the n-th power's error stays
    inside the overall budget.
    """
    _check_f_domain(a, b)
    if n < 1:
        raise ValueError("n must be a positive integer")
    inner_thresh = cfg.tol * (1.0 - a * b) * 1e-3
    total = 0.0
    for r in range(math.floor(-n / 2) + 1, math.floor(n / 2) + 1):
        inner = 0.0
        for direction in (1, -1):
            small = 0
            j = 0 if direction == 1 else 1
            while j <= cfg.max_terms:
                k = r + n * j * direction
                t = _pow_product(a, b, k * (k + 1) / (2 * n), k * (k - 1) / (2 * n))
                inner += t
                small = small + 1 if t < inner_thresh else 0
                if small >= 2:
                    break
                j += 1
            else:
                raise TruncationError("inner class sum did not converge within "
                                      f"{cfg.max_terms} terms")
        total += inner ** n
    return total


def _check_f_domain(a: float, b: float) -> None:
    if a < 0 or b < 0:
        raise DomainError("f(a, b) requires nonnegative real a and b")
    if a * b >= 1:
        raise DomainError("f(a, b) requires a*b < 1")
