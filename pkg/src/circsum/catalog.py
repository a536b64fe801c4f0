"""Registry of the circular-summation identities: hypothesis validation,
parity dispatch of the right-hand theta kind, and LHS/RHS evaluators.

Every entry states an identity of the form

    sum_{k=0}^{mn-1} prod_j theta_{kind_j}(z + shift_j + k*pi/(mn) | tau)
        = R(tau) * theta_{3 or 4}(mn*z | m^2*n*tau)

with R a constrained lattice sum (or a closed form for the preset entries),
plus the background identities (Boon-type decomposition, the two-block
theta_3 form, and the f(a,b)/nome forms of Ramanujan's summation).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from . import qseries
from .lattice import RFamily, eval_G, eval_R, eval_R33, eval_R_single, eval_cubic
from .theta import (DEFAULT_CONFIG, EvalConfig, TauPoint, ramanujan_f,
                    ramanujan_lhs, theta)


class HypothesisError(ValueError):
    """A named identity hypothesis failed validation."""


@dataclass(frozen=True)
class IdentityInstance:
    """A validated binding of an identity id to concrete parameters."""

    id: str
    m: int
    n: int
    a: int
    b: int
    shifts_x: tuple[complex, ...]
    shifts_y: tuple[complex, ...]
    rhs_kind: int
    k: int = 0  # ZENG only
    x_fracs: tuple[Fraction, ...] | None = None  # shifts as exact multiples of pi
    y_fracs: tuple[Fraction, ...] | None = None
    validated: bool = True

    @property
    def shifts(self) -> tuple[complex, ...]:
        return self.shifts_x + self.shifts_y


def _as_complex_tuple(values) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


def _check_sum_zero(shifts: Sequence[complex]) -> None:
    total = 0j
    for s in shifts:
        total += s
    if abs(total) > 1e-14:
        raise HypothesisError(f"shifts must sum to 0; got sum {total}")


def _fracs_of(values) -> tuple[Fraction, ...] | None:
    if all(isinstance(v, Fraction) for v in values):
        return tuple(values)
    return None


def _to_shift(v) -> complex:
    if isinstance(v, Fraction):
        return complex(float(v) * math.pi)
    return complex(v)


def _product_lhs(kinds: Sequence[int], shifts: Sequence[complex], m: int, n: int,
                 z: complex, tau: TauPoint, cfg: EvalConfig) -> complex:
    mn = m * n
    step = math.pi / mn
    total = 0j
    for k in range(mn):
        term = 1.0 + 0j
        for j, (kind, s) in enumerate(zip(kinds, shifts)):
            try:
                term = term * theta(kind, z + s + k * step, tau, cfg)
            except Exception as exc:
                raise type(exc)(
                    f"{exc} (rotation k={k}, factor j={j}, kind={kind})") from exc
        total += term
    return total


# ---------------------------------------------------------------------------
# family descriptions shared by the mixed- and single-kind entries

@dataclass(frozen=True)
class _PairFamily:
    kinds: tuple[int, int]
    family: RFamily
    hyp_name: str | None      # "n_even" | "a_even" | None
    dispatch: Callable[[int, int, int, int], int]

_PAIR_TABLE: dict[str, _PairFamily] = {
    "LUO4": _PairFamily((1, 2), RFamily.R12, "n_even",
                        lambda m, n, a, b: 3 if (m * a) % 2 == 0 else 4),
    "LUO5": _PairFamily((1, 3), RFamily.R13, "a_even", lambda m, n, a, b: 3),
    "LUO6": _PairFamily((1, 4), RFamily.R14, "a_even",
                        lambda m, n, a, b: 3 if (m * n) % 2 == 0 else 4),
    "LUO7": _PairFamily((2, 3), RFamily.R23, "a_even", lambda m, n, a, b: 3),
    "LUO8": _PairFamily((2, 4), RFamily.R24, "a_even",
                        lambda m, n, a, b: 3 if (m * b) % 2 == 0 else 4),
    "LUO9": _PairFamily((3, 4), RFamily.R34, None,
                        lambda m, n, a, b: 3 if (m * b) % 2 == 0 else 4),
}

_SINGLE_TABLE: dict[str, tuple[int, RFamily, str | None]] = {
    # id: (theta kind, coefficient family, hypothesis)
    "COR149": (1, RFamily.R1, "n_even"),
    "COR155": (2, RFamily.R2, "n_even"),
    "COR600": (3, RFamily.R3, None),
    "COR400": (4, RFamily.R4, "mn_even"),
}

_ZERO_SHIFT_TABLE: dict[str, tuple[int, RFamily, str | None]] = {
    "COR200": (1, RFamily.R1, "n_even"),
    "COR203": (2, RFamily.R2, "n_even"),
    "COR206": (3, RFamily.R3, None),
    "COR209": (4, RFamily.R4, "n_even"),
}


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise HypothesisError(message)


def _common_product_checks(m: int, n: int, a: int, b: int) -> None:
    _require(m >= 1, "m must be a positive integer")
    _require(n >= 1, "n must be a positive integer")
    _require(a >= 0 and b >= 0, "a and b must be nonnegative")
    _require(a + b == n, f"a + b must equal n (got a={a}, b={b}, n={n})")


class Entry:
    """Base class; concrete entries provide validate/lhs/rhs and sampling."""

    id: str
    anchor: str
    param_names: tuple[str, ...] = ()
    hypotheses: tuple[str, ...] = ()
    supports_exact = False

    def validate(self, **params) -> IdentityInstance:
        raise NotImplementedError

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG) -> complex:
        raise NotImplementedError

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG) -> complex:
        raise NotImplementedError

    def free_arity(self, params: Mapping) -> int:
        """Number of free complex shift values the verifier samples."""
        return 0

    def instance_from_free(self, params: Mapping, free: Sequence[complex]) -> IdentityInstance:
        """Build an instance from sampled free shift values (default: the
        free values are all shifts but the last, which balances the sum)."""
        raise NotImplementedError


class _PairEntry(Entry):
    def __init__(self, id_: str):
        fam = _PAIR_TABLE[id_]
        self.id = id_
        self._fam = fam
        k1, k2 = fam.kinds
        self.param_names = ("m", "n", "a", "b")
        hyp = {"n_even": "n even", "a_even": "a even"}.get(fam.hyp_name)
        self.hypotheses = tuple(h for h in (
            hyp, "a + b = n", "shifts sum to 0") if h)
        self.anchor = (f"sum_k theta{k1}^a theta{k2}^b (z+shift_j+k*pi/mn|tau) "
                       f"= {fam.family.value} * theta_[3|4](mn*z|m^2*n*tau)")

    def validate(self, *, m, n, a, b, shifts_x=(), shifts_y=(), **_ignored) -> IdentityInstance:
        _common_product_checks(m, n, a, b)
        if self._fam.hyp_name == "n_even":
            _require(n % 2 == 0, "n must be even")
        elif self._fam.hyp_name == "a_even":
            _require(a % 2 == 0, "a must be even")
        _require(len(shifts_x) == a, f"need {a} first-kind shifts")
        _require(len(shifts_y) == b, f"need {b} second-kind shifts")
        xs = _as_complex_tuple(_to_shift(s) for s in shifts_x)
        ys = _as_complex_tuple(_to_shift(s) for s in shifts_y)
        _check_sum_zero(xs + ys)
        return IdentityInstance(
            id=self.id, m=m, n=n, a=a, b=b, shifts_x=xs, shifts_y=ys,
            rhs_kind=self._fam.dispatch(m, n, a, b),
            x_fracs=_fracs_of(shifts_x), y_fracs=_fracs_of(shifts_y))

    def factor_kinds(self, inst) -> tuple[int, ...]:
        k1, k2 = self._fam.kinds
        return (k1,) * inst.a + (k2,) * inst.b

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs(self.factor_kinds(inst), inst.shifts,
                            inst.m, inst.n, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_R(self._fam.family, inst.m, inst.n, inst.a, inst.b,
                      inst.shifts_x, inst.shifts_y, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        mn = inst.m * inst.n
        return (self.coefficient(inst, tau, cfg)
                * theta(inst.rhs_kind, mn * z, tau.scaled(inst.m * inst.m * inst.n), cfg))

    def free_arity(self, params):
        return params["n"] - 1

    def instance_from_free(self, params, free):
        a, b = params["a"], params["b"]
        shifts = list(free) + [-sum(free, 0j)]
        return self.validate(m=params["m"], n=params["n"], a=a, b=b,
                             shifts_x=shifts[:a], shifts_y=shifts[a:])

    supports_exact = True


class _SingleEntry(Entry):
    def __init__(self, id_: str):
        kind, family, hyp = _SINGLE_TABLE[id_]
        self.id = id_
        self._kind = kind
        self._family = family
        self._hyp = hyp
        self.param_names = ("m", "n")
        hname = {"n_even": "n even", "mn_even": "mn even"}.get(hyp)
        self.hypotheses = tuple(h for h in (hname, "shifts sum to 0") if h)
        self.anchor = (f"sum_k prod_j theta{kind}(z+y_j+k*pi/mn|tau) "
                       f"= {family.value} * theta3(mn*z|m^2*n*tau)")

    def validate(self, *, m, n, shifts_y=(), **_ignored) -> IdentityInstance:
        _common_product_checks(m, n, n, 0)
        if self._hyp == "n_even":
            _require(n % 2 == 0, "n must be even")
        elif self._hyp == "mn_even":
            _require((m * n) % 2 == 0, "mn must be even")
        _require(len(shifts_y) == n, f"need {n} shifts")
        ys = _as_complex_tuple(_to_shift(s) for s in shifts_y)
        _check_sum_zero(ys)
        return IdentityInstance(
            id=self.id, m=m, n=n, a=n, b=0, shifts_x=ys, shifts_y=(),
            rhs_kind=3, x_fracs=_fracs_of(shifts_y))

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs((self._kind,) * inst.n, inst.shifts_x,
                            inst.m, inst.n, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_R_single(self._family, inst.m, inst.n, inst.shifts_x, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        mn = inst.m * inst.n
        return (self.coefficient(inst, tau, cfg)
                * theta(3, mn * z, tau.scaled(inst.m * inst.m * inst.n), cfg))

    def free_arity(self, params):
        return params["n"] - 1

    def instance_from_free(self, params, free):
        shifts = list(free) + [-sum(free, 0j)]
        return self.validate(m=params["m"], n=params["n"], shifts_y=shifts)

    supports_exact = True


class _ZeroShiftEntry(Entry):
    """m = 1, all shifts zero: sum_k theta_i^n(z + k*pi/n | tau)."""

    def __init__(self, id_: str):
        kind, family, hyp = _ZERO_SHIFT_TABLE[id_]
        self.id = id_
        self._kind = kind
        self._family = family
        self._hyp = hyp
        self.param_names = ("n",)
        self.hypotheses = ("n even",) if hyp == "n_even" else ()
        self.anchor = (f"sum_k theta{kind}^n(z+k*pi/n|tau) "
                       f"= {family.value}(n;tau) * theta3(n*z|n*tau)")

    def validate(self, *, n, **_ignored) -> IdentityInstance:
        _require(n >= 1, "n must be a positive integer")
        if self._hyp == "n_even":
            _require(n % 2 == 0, "n must be even")
        zeros = (Fraction(0),) * n
        return IdentityInstance(
            id=self.id, m=1, n=n, a=n, b=0,
            shifts_x=(0j,) * n, shifts_y=(), rhs_kind=3,
            x_fracs=zeros)

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs((self._kind,) * inst.n, inst.shifts_x,
                            1, inst.n, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_R_single(self._family, 1, inst.n, inst.shifts_x, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return (self.coefficient(inst, tau, cfg)
                * theta(3, inst.n * z, tau.scaled(inst.n), cfg))

    def instance_from_free(self, params, free):
        return self.validate(n=params["n"])

    supports_exact = True


class _ChanLiuEntry(Entry):
    def __init__(self):
        self.id = "CHANLIU"
        self.param_names = ("m", "n")
        self.hypotheses = ("shifts sum to 0",)
        self.anchor = ("sum_k prod_j theta3(z+y_j+k*pi/mn|tau) "
                       "= Gmn(y|tau) * theta3(mn*z|m^2*n*tau)")

    def validate(self, *, m, n, shifts_y=(), **_ignored) -> IdentityInstance:
        _common_product_checks(m, n, n, 0)
        _require(len(shifts_y) == n, f"need {n} shifts")
        ys = _as_complex_tuple(_to_shift(s) for s in shifts_y)
        _check_sum_zero(ys)
        return IdentityInstance(id=self.id, m=m, n=n, a=n, b=0,
                                shifts_x=ys, shifts_y=(), rhs_kind=3,
                                x_fracs=_fracs_of(shifts_y))

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs((3,) * inst.n, inst.shifts_x, inst.m, inst.n, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_G(inst.m, inst.n, inst.shifts_x, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        mn = inst.m * inst.n
        return (self.coefficient(inst, tau, cfg)
                * theta(3, mn * z, tau.scaled(inst.m * inst.m * inst.n), cfg))

    def free_arity(self, params):
        return params["n"] - 1

    def instance_from_free(self, params, free):
        shifts = list(free) + [-sum(free, 0j)]
        return self.validate(m=params["m"], n=params["n"], shifts_y=shifts)

    supports_exact = True


class _BoonEntry(Entry):
    """theta3 decomposition: sum_{k<n} theta3(z+k*pi/n|tau) = n*theta3(nz|n^2 tau)."""

    def __init__(self):
        self.id = "BOON"
        self.param_names = ("n",)
        self.hypotheses = ()
        self.anchor = "sum_k theta3(z+k*pi/n|tau) = n * theta3(n*z|n^2*tau)"

    def validate(self, *, n, **_ignored) -> IdentityInstance:
        _require(n >= 1, "n must be a positive integer")
        return IdentityInstance(id=self.id, m=n, n=1, a=1, b=0,
                                shifts_x=(0j,), shifts_y=(), rhs_kind=3,
                                x_fracs=(Fraction(0),))

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs((3,), (0j,), inst.m, 1, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_G(inst.m, 1, (0j,), tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        nn = inst.m
        return (self.coefficient(inst, tau, cfg)
                * theta(3, nn * z, tau.scaled(nn * nn), cfg))

    def instance_from_free(self, params, free):
        return self.validate(n=params["n"])

    supports_exact = True


class _ZengEntry(Entry):
    """Two-block theta3 form: for a + b = n,

    sum_{s=0}^{kn-1} theta3^a(z/(kn)+y/a+pi*s/(kn) | tau/(k^2 n))
                   * theta3^b(z/(kn)-y/b+pi*s/(kn) | tau/(k^2 n))
        = [kn sum_{sum=0} q'^{sum squares} e^{2n(first-block sum) i y/(ab)}]
          * theta3(z|tau),   q' the nome of tau/(k^2 n).

    The coefficient is eval_R33 called with its two leading arguments
    swapped, which realizes the 2n phase weight and kn prefactor.
    """

    def __init__(self):
        self.id = "ZENG"
        self.param_names = ("k", "n", "a", "b")
        self.hypotheses = ("a + b = n", "y = 0 when a*b = 0")
        self.anchor = ("sum_s theta3^a(z/kn+y/a+pi*s/kn|tau/(k^2 n)) * "
                       "theta3^b(z/kn-y/b+...) = R33 * theta3(z|tau)")

    def validate(self, *, k, n, a, b, y=0j, **_ignored) -> IdentityInstance:
        _require(k >= 1 and n >= 1, "k and n must be positive integers")
        _require(a >= 0 and b >= 0, "a and b must be nonnegative")
        _require(a + b == n, f"a + b must equal n (got a={a}, b={b}, n={n})")
        yv = complex(y)
        if a == 0 or b == 0:
            _require(yv == 0, "y must be 0 when a or b is 0")
        return IdentityInstance(id=self.id, m=1, n=n, a=a, b=b,
                                shifts_x=(yv,), shifts_y=(), rhs_kind=3, k=k)

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        k, n, a, b = inst.k, inst.n, inst.a, inst.b
        y = inst.shifts_x[0]
        kn = k * n
        tau_in = tau.scaled(1.0 / (k * k * n))
        total = 0j
        for s in range(kn):
            w = z / kn + s * math.pi / kn
            term = 1.0 + 0j
            if a:
                term *= theta(3, w + y / a, tau_in, cfg) ** a
            if b:
                term *= theta(3, w - y / b, tau_in, cfg) ** b
            total += term
        return total

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        k, n, a, b = inst.k, inst.n, inst.a, inst.b
        y = inst.shifts_x[0]
        yarg = y / (a * b) if a and b else 0j
        return eval_R33(n, k, a, b, yarg, tau.scaled(1.0 / (k * k * n)), cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return self.coefficient(inst, tau, cfg) * theta(3, z, tau, cfg)

    def free_arity(self, params):
        return 1 if (params["a"] and params["b"]) else 0

    def instance_from_free(self, params, free):
        y = free[0] if free else 0j
        return self.validate(k=params["k"], n=params["n"],
                             a=params["a"], b=params["b"], y=y)


class _RamaT3Entry(Entry):
    """Nome-form circular summation:
    sum_k q^{k^2} e^{2kiz} theta3^n(z+k*pi*tau|n*tau) = theta3(z|tau) F_n(tau),
    with F_n taken from the exact integer expansion."""

    def __init__(self):
        self.id = "RAMA_T3"
        self.param_names = ("n",)
        self.hypotheses = ("n >= 2",)
        self.anchor = ("sum_k q^{k^2} e^{2kiz} theta3^n(z+k*pi*tau|n*tau) "
                       "= theta3(z|tau) * F_n(tau)")

    def validate(self, *, n, **_ignored) -> IdentityInstance:
        _require(n >= 2, "n must be >= 2")
        return IdentityInstance(id=self.id, m=1, n=n, a=n, b=0,
                                shifts_x=(), shifts_y=(), rhs_kind=3)

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        n = inst.n
        tau_n = tau.scaled(n)
        total = 0j
        for k in range(n):
            total += (tau.q_pow(k * k) * cmath.exp(2j * k * complex(z))
                      * theta(3, z + k * math.pi * tau.tau, tau_n, cfg) ** n)
        return total

    def fn_value(self, n: int, tau: TauPoint, cfg=DEFAULT_CONFIG) -> complex:
        return _fn_numeric(n, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return theta(3, z, tau, cfg) * _fn_numeric(inst.n, tau, cfg)

    def instance_from_free(self, params, free):
        return self.validate(n=params["n"])


@lru_cache(maxsize=64)
def _fn_coeffs_cached(n: int, order: int) -> tuple[int, ...]:
    return tuple(qseries.fn_series(n, order))


def _fn_numeric(n: int, tau: TauPoint, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """F_n(tau) from the exact coefficients, truncated so the tail is far
    below cfg.tol (integer coefficients, geometric tail in |q|)."""
    q_abs = tau.q_abs
    order = max(n + 1, min(60, int(math.log(cfg.tol * 1e-2) / math.log(q_abs)) + 2))
    coeffs = _fn_coeffs_cached(n, order)
    q = tau.q_pow(1)
    total = 0j
    for c in reversed(coeffs):
        total = total * q + c
    return total


class _RamaPiEntry(Entry):
    def __init__(self):
        self.id = "RAMA_PI"
        self.param_names = ("n",)
        self.hypotheses = ()
        self.anchor = ("sum_k theta3^n(z+k*pi/n|tau) = G_n(tau) * theta3(n*z|n*tau)")

    def validate(self, *, n, **_ignored) -> IdentityInstance:
        _require(n >= 1, "n must be a positive integer")
        return IdentityInstance(id=self.id, m=1, n=n, a=n, b=0,
                                shifts_x=(0j,) * n, shifts_y=(), rhs_kind=3,
                                x_fracs=(Fraction(0),) * n)

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return _product_lhs((3,) * inst.n, inst.shifts_x, 1, inst.n, z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return eval_G(1, inst.n, inst.shifts_x, tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return (self.coefficient(inst, tau, cfg)
                * theta(3, inst.n * z, tau.scaled(inst.n), cfg))

    def instance_from_free(self, params, free):
        return self.validate(n=params["n"])

    supports_exact = True


class _RamaFEntry(Entry):
    """f(a,b) form: the class-power sum equals f(a,b) * F_n(ab); since F_n
    depends only on the product ab, the ratio lhs/f is factorization-invariant.
    Verification draws two factorizations of the same product and compares
    the ratios."""

    def __init__(self):
        self.id = "RAMA_F"
        self.param_names = ("n",)
        self.hypotheses = ("n >= 1", "0 <= a, 0 <= b, a*b < 1")
        self.anchor = ("sum_{-n/2<r<=n/2} (class_r sum of f-terms)^n "
                       "= f(a,b) * F_n(ab); ratio depends on ab only")

    def validate(self, *, n, **_ignored) -> IdentityInstance:
        _require(n >= 1, "n must be a positive integer")
        return IdentityInstance(id=self.id, m=1, n=n, a=0, b=0,
                                shifts_x=(), shifts_y=(), rhs_kind=3)

    def ratio(self, a: float, b: float, n: int, cfg=DEFAULT_CONFIG) -> float:
        return ramanujan_lhs(a, b, n, cfg) / ramanujan_f(a, b, cfg)

    def instance_from_free(self, params, free):
        return self.validate(n=params["n"])


# ---------------------------------------------------------------------------
# preset entries for the product identities with pinned closed-form factors

def _hex_half(signed: bool, u1: complex, u2: complex, tau: TauPoint,
              cfg: EvalConfig) -> complex:
    """Hexagonal series on the half-integer coset, via the a/b series at
    arguments shifted by 3*pi*tau'/4 (tau' = the series' own tau):

        q'^{3/4} e^{i(u1+u2)} * (a|b)(u1 + 3*pi*tau'/4, u2 + 3*pi*tau'/4 | tau').
    """
    kind = RFamily.CUBIC_B if signed else RFamily.CUBIC_A
    shift = 0.75 * math.pi * tau.tau
    return (tau.q_pow(0.75) * cmath.exp(1j * (u1 + u2))
            * eval_cubic(kind, u1 + shift, u2 + shift, tau, cfg))


@dataclass(frozen=True)
class _AppDef:
    base: str
    m: int
    n: int
    a: int
    b: int
    free_names: tuple[str, ...]
    # free values -> (shifts_x, shifts_y)
    shifts: Callable[[Sequence[complex]], tuple[tuple[complex, ...], tuple[complex, ...]]]
    # (free values, tau, cfg) -> closed-form coefficient
    closed: Callable[[Sequence[complex], TauPoint, EvalConfig], complex]
    note: str


def _du(free: Sequence) -> tuple[complex, complex]:
    """(x1 - y1, x2 - y1) with y1 balancing x1 + x2."""
    x1, x2 = _to_shift(free[0]), _to_shift(free[1])
    y1 = -(x1 + x2)
    return x1 - y1, x2 - y1


def _pair_shifts(free: Sequence) -> tuple[tuple, tuple]:
    """Shift pattern (x1, x2 | y1 = -(x1+x2)); exact for Fraction inputs."""
    x1, x2 = free[0], free[1]
    return (x1, x2), (-(x1 + x2),)


_APP_TABLE: dict[str, _AppDef] = {}


def _add_app(id_: str, base: str, m: int, n: int, a: int, b: int,
             free_names, shifts, closed, note) -> None:
    _APP_TABLE[id_] = _AppDef(base, m, n, a, b, tuple(free_names), shifts, closed, note)


def _register_apps() -> None:
    # theta1*theta2 pair: coefficient is a theta1 at doubled arguments
    _add_app("APP_12_22", "LUO4", 2, 2, 1, 1, ("x",),
             lambda f: ((f[0],), (-f[0],)),
             lambda f, tau, cfg: 4 * theta(1, 2 * _to_shift(f[0]), tau.scaled(2), cfg),
             "coefficient 4*theta1(2x|2tau)")
    _add_app("APP_12_12", "LUO4", 1, 2, 1, 1, ("x",),
             lambda f: ((f[0],), (-f[0],)),
             lambda f, tau, cfg: 2 * theta(1, 2 * _to_shift(f[0]), tau.scaled(2), cfg),
             "coefficient 2*theta1(2x|2tau)")

    def hd_coeff(mult):
        def fn(f, tau, cfg):
            u1, u2 = _du(f)
            return mult * _hex_half(True, u1, u2, tau.scaled(2), cfg)
        return fn

    def hc_coeff(mult):
        def fn(f, tau, cfg):
            u1, u2 = _du(f)
            return mult * _hex_half(False, u1, u2, tau.scaled(2), cfg)
        return fn

    for m in (1, 2):
        _add_app(f"APP_13_M{m}", "LUO5", m, 3, 2, 1, ("x1", "x2"), _pair_shifts,
                 hd_coeff(-3 * m),
                 "coefficient -3m * signed half-coset hexagonal series at 2tau")
        _add_app(f"APP_14_M{m}", "LUO6", m, 3, 2, 1, ("x1", "x2"), _pair_shifts,
                 hc_coeff(3 * m),
                 "coefficient 3m * half-coset hexagonal series at 2tau")
        _add_app(f"APP_23_M{m}", "LUO7", m, 3, 2, 1, ("x1", "x2"), _pair_shifts,
                 hc_coeff(3 * m),
                 "coefficient 3m * half-coset hexagonal series at 2tau")
        _add_app(f"APP_24_M{m}", "LUO8", m, 3, 2, 1, ("x1", "x2"), _pair_shifts,
                 hd_coeff(-3 * m),
                 "coefficient -3m * signed half-coset hexagonal series at 2tau")

        def b_coeff(mult):
            def fn(f, tau, cfg):
                u1, u2 = _du(f)
                return mult * eval_cubic(RFamily.CUBIC_B, u1, u2, tau.scaled(2), cfg)
            return fn

        _add_app(f"APP_34_M{m}", "LUO9", m, 3, 2, 1, ("x1", "x2"), _pair_shifts,
                 b_coeff(3 * m), "coefficient 3m * b(x1-y1, x2-y1 | 2tau)")

        def b2_coeff(mult):
            def fn(f, tau, cfg):
                y1, y2 = _to_shift(f[0]), _to_shift(f[1])
                x1 = -(y1 + y2)
                return mult * eval_cubic(RFamily.CUBIC_B, y1 - x1, y2 - x1,
                                         tau.scaled(2), cfg)
            return fn

        _add_app(f"APP_34B_M{m}", "LUO9", m, 3, 1, 2, ("y1", "y2"),
                 lambda f: ((-(f[0] + f[1]),), (f[0], f[1])),
                 b2_coeff(3 * m), "coefficient 3m * b(y1-x1, y2-x1 | 2tau)")

    def a_coeff(f, tau, cfg):
        y1, y2 = _to_shift(f[0]), _to_shift(f[1])
        y3 = -(y1 + y2)
        return 6 * eval_cubic(RFamily.CUBIC_A, y1 - y3, y2 - y3, tau.scaled(2), cfg)

    _add_app("APP_44_M2", "COR400", 2, 3, 3, 0, ("y1", "y2"),
             lambda f: ((f[0], f[1], -(f[0] + f[1])), ()),
             a_coeff, "coefficient 6 * a(y1-y3, y2-y3 | 2tau)")


_register_apps()


class _AppEntry(Entry):
    """A preset instance of a general entry whose coefficient is pinned to an
    independently evaluated closed form (theta1 at doubled arguments, or a
    two-variable hexagonal series)."""

    def __init__(self, id_: str):
        d = _APP_TABLE[id_]
        self.id = id_
        self._def = d
        self.param_names = ()  # presets: the free shifts are sampled, not flags
        base = CATALOG[d.base]
        self.hypotheses = (f"preset of {d.base} at m={d.m}, n={d.n}, a={d.a}, b={d.b}",)
        self.anchor = f"{base.anchor}; {d.note}"
        self._base = base

    def free_arity(self, params):
        return len(self._def.free_names)

    def validate(self, **params) -> IdentityInstance:
        free = [params.get(name, 0) for name in self._def.free_names]
        xs, ys = self._def.shifts(free)
        if isinstance(self._base, _SingleEntry):
            inst = self._base.validate(m=self._def.m, n=self._def.n, shifts_y=xs)
        else:
            inst = self._base.validate(m=self._def.m, n=self._def.n,
                                       a=self._def.a, b=self._def.b,
                                       shifts_x=xs, shifts_y=ys)
        return replace(inst, id=self.id)

    def _free_of(self, inst) -> tuple[complex, ...]:
        # the free values are recoverable from the stored shifts
        d = self._def
        if d.base == "COR400":
            return inst.shifts_x[:2]
        if inst.id.startswith("APP_34B"):
            return inst.shifts_y[:2]
        if d.a == 1:
            return (inst.shifts_x[0],)
        return inst.shifts_x[:2]

    def lhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        return self._base.lhs(replace(inst, id=self._def.base), z, tau, cfg)

    def coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        return self._def.closed(self._free_of(inst), tau, cfg)

    def base_coefficient(self, inst, tau, cfg=DEFAULT_CONFIG) -> complex:
        """The same constant from the generic lattice-sum route."""
        return self._base.coefficient(replace(inst, id=self._def.base), tau, cfg)

    def rhs(self, inst, z, tau, cfg=DEFAULT_CONFIG):
        mn = inst.m * inst.n
        return (self.coefficient(inst, tau, cfg)
                * theta(inst.rhs_kind, mn * z, tau.scaled(inst.m * inst.m * inst.n), cfg))

    def instance_from_free(self, params, free):
        return self.validate(**dict(zip(self._def.free_names, free)))

    @property
    def supports_exact(self):
        return self._base.supports_exact


# ---------------------------------------------------------------------------
# registry

CATALOG: dict[str, Entry] = {}


def _register(entry: Entry) -> None:
    CATALOG[entry.id] = entry


for _id in _PAIR_TABLE:
    _register(_PairEntry(_id))
for _id in _SINGLE_TABLE:
    _register(_SingleEntry(_id))
for _id in _ZERO_SHIFT_TABLE:
    _register(_ZeroShiftEntry(_id))
_register(_ChanLiuEntry())
_register(_BoonEntry())
_register(_ZengEntry())
_register(_RamaT3Entry())
_register(_RamaPiEntry())
_register(_RamaFEntry())
for _id in _APP_TABLE:
    _register(_AppEntry(_id))


def validate(identity_id: str, **params) -> IdentityInstance:
    """Validated instance or a HypothesisError naming the failed condition."""
    entry = _entry(identity_id)
    return entry.validate(**params)


def rhs_kind(identity_id: str, m: int, n: int, a: int, b: int) -> int:
    if identity_id in _PAIR_TABLE:
        return _PAIR_TABLE[identity_id].dispatch(m, n, a, b)
    if identity_id in _APP_TABLE:
        d = _APP_TABLE[identity_id]
        return rhs_kind(d.base, m, n, a, b)
    return 3


def lhs_value(inst: IdentityInstance, z, tau: TauPoint,
              cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    return _entry(inst.id).lhs(inst, z, tau, cfg)


def rhs_value(inst: IdentityInstance, z, tau: TauPoint,
              cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    return _entry(inst.id).rhs(inst, z, tau, cfg)


def _entry(identity_id: str) -> Entry:
    try:
        return CATALOG[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity id: {identity_id}") from None


def list_catalog() -> list[dict]:
    """Catalog as JSON-ready records: id, parameter schema, hypotheses, anchor."""
    out = []
    for id_ in sorted(CATALOG):
        e = CATALOG[id_]
        out.append({
            "id": id_,
            "params": list(e.param_names),
            "hypotheses": list(e.hypotheses),
            "anchor": e.anchor,
        })
    return out


# ---------------------------------------------------------------------------
# exact series check for product-family instances with rational-pi shifts

_EXACT_FAMILY = {
    # family: (sign side, linear on first side, const phase, qpre per (n, a), ipow per a)
    RFamily.R12: ("x", False, False, lambda n, a: -n, lambda a: (3 * a) % 4),
    RFamily.R13: ("x", True, True, lambda n, a: a, lambda a: a % 4),
    RFamily.R14: (None, True, True, lambda n, a: a, lambda a: 0),
    RFamily.R23: (None, True, True, lambda n, a: a, lambda a: 0),
    RFamily.R24: ("y", True, True, lambda n, a: a, lambda a: 0),
    RFamily.R34: ("y", False, False, lambda n, a: 0, lambda a: 0),
}


def _exact_coefficient_series(inst: IdentityInstance, ring: qseries.CycRing,
                              K: int) -> qseries.QSeries:
    entry = _entry(inst.id)
    if isinstance(entry, _AppEntry):
        entry = entry._base
        inst = replace(inst, id=entry.id)
    m, n, a, b = inst.m, inst.n, inst.a, inst.b
    x_fr = inst.x_fracs or ()
    y_fr = inst.y_fracs or ()
    if isinstance(entry, _PairEntry):
        fam = entry._fam.family
        sign_side, linear, const, qpre_fn, ipow_fn = _EXACT_FAMILY[fam]
        t = n
        sign_mask = ([sign_side == "x"] * a + [sign_side == "y"] * b)
        linear_mask = [linear] * a + [False] * b
        phase_fracs = list(x_fr) + list(y_fr)
        const_frac = sum(x_fr, Fraction(0)) if const else Fraction(0)
        if fam is RFamily.R12:
            constraint = -(n // 2)
        elif fam is RFamily.R34:
            constraint = 0
        else:
            constraint = -(a // 2)
        return qseries.exact_constrained_qseries(
            ring, K, t, constraint, sign_mask, linear_mask, phase_fracs,
            const_frac, qpre_fn(n, a), m * n, ipow_fn(a))
    # single-kind entries (theta_i^n products); BOON/CHANLIU/RAMA_PI carry
    # the plain sum-zero coefficient (R3 shape)
    fam = getattr(entry, "_family", RFamily.R3)
    if fam in (RFamily.R1, RFamily.R2):
        constraint, qpre = n // 2, -n
        phase_fracs = [-f for f in x_fr]
    else:
        constraint, qpre = 0, 0
        phase_fracs = list(x_fr)
    return qseries.exact_constrained_qseries(
        ring, K, n, constraint, [False] * n, [False] * n, phase_fracs,
        Fraction(0), qpre, m * n, 0)


def identity_series_check(inst: IdentityInstance, K: int) -> int | None:
    """Exact proof through quarter-order K that LHS - RHS vanishes, for
    product-family instances whose shifts are rational multiples of pi.

    Returns None on success, else the first failing quarter-exponent.
    """
    entry = _entry(inst.id)
    if isinstance(entry, _AppEntry):
        base_inst = replace(inst, id=entry._def.base)
        kinds = entry._base.factor_kinds(base_inst) if isinstance(entry._base, _PairEntry) \
            else (entry._base._kind,) * inst.n
    elif isinstance(entry, _PairEntry):
        kinds = entry.factor_kinds(inst)
    elif isinstance(entry, (_SingleEntry, _ZeroShiftEntry, _ChanLiuEntry, _RamaPiEntry)):
        kinds = (entry._kind if hasattr(entry, "_kind") else 3,) * inst.n
    elif isinstance(entry, _BoonEntry):
        kinds = (3,)
    else:
        raise ValueError(f"{inst.id} has no exact-series form")
    fracs = list(inst.x_fracs or []) + list(inst.y_fracs or [])
    if len(fracs) != len(kinds):
        raise ValueError("exact check needs all shifts as rational multiples of pi")

    m, n = inst.m, inst.n
    mn = m * n
    denoms = [f.denominator for f in fracs] or [1]
    M = qseries._lcm(4, 2 * mn, *(2 * d for d in denoms))
    if M > 360:
        raise ValueError(
            f"shift denominators require cyclotomic order M = {M}, beyond "
            "the supported budget (360); use coarser rational shifts")
    ring = qseries.CycRing(M)

    lhs = None
    for k in range(mn):
        term = None
        for kind, fr in zip(kinds, fracs):
            tot = fr + Fraction(k, mn)
            f = qseries.theta_qseries(kind, tot.numerator, tot.denominator, 1, 4, K, ring)
            term = f if term is None else qseries.series_mul(term, f)
        lhs = term if lhs is None else qseries.series_add(lhs, term)

    coeff = _exact_coefficient_series(inst, ring, K)
    # the product of the coefficient (low may be negative) with the theta
    # series needs the theta exact far enough to survive K bookkeeping
    th_K = K - min(coeff.low, 0)
    th = qseries.theta_qseries(inst.rhs_kind, 0, 1, mn, 4 * m * m * n, th_K, ring)
    rhs = qseries.series_mul(coeff, th)
    diff = qseries.series_sub(lhs, rhs)
    limit = min(diff.k_trunc, K)
    bad = sorted(e for e, c in diff.terms.items() if e <= limit and c)
    if bad:
        return bad[0]
    return None
