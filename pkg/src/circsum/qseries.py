"""Exact formal q-series over cyclotomic integers, on the quarter-integer grid.

A QSeries maps quarter-integer q-exponents (stored as integer quarter-units,
possibly negative) to Laurent polynomials in w = e^{iz} whose coefficients
live in Z[zeta_M] represented modulo the M-th cyclotomic polynomial.  All
arithmetic is exact; truncation orders are tracked so a result never claims
precision beyond what its inputs support.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# integer polynomials (dense tuples, constant term first)

def _poly_trim(c: list[int]) -> tuple[int, ...]:
    end = len(c)
    while end > 0 and c[end - 1] == 0:
        end -= 1
    return tuple(c[:end])


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_divmod_exact(num: Sequence[int], den: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quotient and remainder over Z; every leading-coefficient division must
    be exact (den is monic wherever this is used)."""
    num = list(num)
    ddeg = len(den) - 1
    lead = den[-1]
    quo = [0] * max(1, len(num) - ddeg)
    while len(_poly_trim(num)) - 1 >= ddeg:
        ndeg = len(_poly_trim(num)) - 1
        c, r = divmod(_poly_trim(num)[-1], lead)
        if r:
            raise ArithmeticError("non-exact polynomial division")
        shift = ndeg - ddeg
        quo[shift] = c
        num = list(num[:ndeg + 1])
        for j, cd in enumerate(den):
            num[shift + j] -= c * cd
    return _poly_trim(quo), _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """M-th cyclotomic polynomial by iterated exact division of x^M - 1 by
    Phi_d over the proper divisors d of M; constant term first."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    num = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    poly = _poly_trim(num)
    for d in range(1, M):
        if M % d == 0:
            poly, rem = _poly_divmod_exact(poly, cyclotomic_poly(d))
            if rem:
                raise ArithmeticError("cyclotomic division left a remainder")
    return poly


@dataclass(frozen=True)
class CycRing:
    """Z[zeta_M] with zeta_M = e^{2 pi i / M}, elements reduced mod Phi_M.

    Elements are integer tuples of length deg(Phi_M); an element is zero iff
    its tuple is all zeros, which gives the decidable zero test the series
    comparisons rely on.
    """

    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("ring order must be >= 1")

    @property
    def modulus(self) -> tuple[int, ...]:
        return cyclotomic_poly(self.order)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def reduce(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        _, rem = _poly_divmod_exact(coeffs, self.modulus)
        out = list(rem) + [0] * (self.degree - len(rem))
        return tuple(out)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.degree

    def one(self) -> tuple[int, ...]:
        return self.from_int(1)

    def from_int(self, n: int) -> tuple[int, ...]:
        return self.reduce((n,))

    def zeta_pow(self, k: int) -> tuple[int, ...]:
        k %= self.order
        return self.reduce((0,) * k + (1,))

    def i_pow(self, k: int) -> tuple[int, ...]:
        """i^k as a ring element; requires 4 | M (i = zeta_M^{M/4})."""
        if self.order % 4 != 0:
            if self.order == 1 and k % 4 in (0, 2):
                return self.from_int(1 if k % 4 == 0 else -1)
            raise ValueError(f"i is not in Z[zeta_{self.order}]")
        return self.zeta_pow((k % 4) * (self.order // 4))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        return self.reduce(_poly_mul(a, b))

    def scale(self, a, n: int):
        return tuple(n * x for x in a)

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def to_complex(self, a) -> complex:
        zeta = complex(math.cos(2 * math.pi / self.order),
                       math.sin(2 * math.pi / self.order))
        total = 0j
        for k in reversed(range(len(a))):
            total = total * zeta + a[k]
        return total


# ---------------------------------------------------------------------------
# w-Laurent coefficients: dict w-exponent -> ring element, zeros absent

def wl_add(ring: CycRing, a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        s = ring.add(out[e], c) if e in out else c
        if ring.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out


def wl_neg(ring: CycRing, a: dict) -> dict:
    return {e: ring.neg(c) for e, c in a.items()}


def wl_mul(ring: CycRing, a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            p = ring.mul(ca, cb)
            if e in out:
                p = ring.add(out[e], p)
            if ring.is_zero(p):
                out.pop(e, None)
            else:
                out[e] = p
    return out


def wl_scale(ring: CycRing, a: dict, c) -> dict:
    out = {}
    for e, v in a.items():
        p = ring.mul(v, c)
        if not ring.is_zero(p):
            out[e] = p
    return out


# ---------------------------------------------------------------------------
# the series type

@dataclass
class QSeries:
    """Truncated exact series  sum_e q^{e/4} * (w-Laurent coefficient).

    terms: quarter-exponent -> {w-exponent -> ring element}; exponents above
    k_trunc are unknown (absent by contract), none lie below `low`.
    """

    ring: CycRing
    terms: dict[int, dict]
    k_trunc: int
    low: int = 0

    def __post_init__(self):
        bad = [e for e in self.terms if e > self.k_trunc or e < self.low]
        if bad:
            raise ValueError(f"exponents {bad} outside [{self.low}, {self.k_trunc}]")

    def copy_truncated(self, K: int) -> "QSeries":
        if K > self.k_trunc:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.ring, {e: dict(c) for e, c in self.terms.items() if e <= K},
                       K, self.low)

    def coefficient(self, quarter_exp: int) -> dict:
        if quarter_exp > self.k_trunc:
            raise ValueError(f"exponent {quarter_exp} beyond truncation {self.k_trunc}")
        return self.terms.get(quarter_exp, {})

    def is_zero(self) -> bool:
        return not self.terms

    def w_free(self) -> bool:
        return all(set(c) <= {0} for c in self.terms.values())


def series_const(ring: CycRing, value: int, K: int) -> QSeries:
    terms = {}
    c = ring.from_int(value)
    if not ring.is_zero(c):
        terms[0] = {0: c}
    return QSeries(ring, terms, K, min(0, K))


def series_add(a: QSeries, b: QSeries) -> QSeries:
    if a.ring.order != b.ring.order:
        raise ValueError("ring order mismatch")
    K = min(a.k_trunc, b.k_trunc)
    low = min(a.low, b.low)
    ring = a.ring
    out: dict[int, dict] = {}
    for src in (a.terms, b.terms):
        for e, c in src.items():
            if e > K:
                continue
            out[e] = wl_add(ring, out.get(e, {}), c)
            if not out[e]:
                del out[e]
    return QSeries(ring, out, K, low)


def series_neg(a: QSeries) -> QSeries:
    return QSeries(a.ring, {e: wl_neg(a.ring, c) for e, c in a.terms.items()},
                   a.k_trunc, a.low)


def series_scale(a: QSeries, c) -> QSeries:
    ring = a.ring
    out = {}
    for e, coeff in a.terms.items():
        s = wl_scale(ring, coeff, c)
        if s:
            out[e] = s
    return QSeries(ring, out, a.k_trunc, a.low)


def series_shift(a: QSeries, dq: int, dw: int = 0) -> QSeries:
    """Multiply by q^{dq/4} w^{dw} (exact monomial shift)."""
    out = {e + dq: ({we + dw: c for we, c in coeff.items()})
           for e, coeff in a.terms.items()}
    return QSeries(a.ring, out, a.k_trunc + dq, a.low + dq)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    if a.ring.order != b.ring.order:
        raise ValueError("ring order mismatch")
    ring = a.ring
    K = min(a.k_trunc + b.low, b.k_trunc + a.low)
    low = a.low + b.low
    out: dict[int, dict] = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = ea + eb
            if e > K:
                continue
            prod = wl_mul(ring, ca, cb)
            if prod:
                out[e] = wl_add(ring, out.get(e, {}), prod)
                if not out[e]:
                    del out[e]
    return QSeries(ring, out, K, low)


def series_pow(a: QSeries, n: int) -> QSeries:
    if n < 1:
        raise ValueError("power must be >= 1")
    acc = a
    for _ in range(n - 1):
        acc = series_mul(acc, a)
    return acc


def series_sub(a: QSeries, b: QSeries) -> QSeries:
    return series_add(a, series_neg(b))


def series_div_unit(num: QSeries, den: QSeries, K: int) -> QSeries:
    """The unique f with f*den = num through quarter-order K, by forward
    substitution.  den must start with the exact unit term q^0 w^0 * 1."""
    if num.ring.order != den.ring.order:
        raise ValueError("ring order mismatch")
    ring = num.ring
    lead = den.terms.get(0, {})
    if den.low != 0 or set(lead) != {0} or lead[0] != ring.one():
        raise ValueError("denominator must have lowest term q^0 w^0 with coefficient 1")
    K_eff = min(K, num.k_trunc, den.k_trunc + num.low)
    out: dict[int, dict] = {}
    den_rest = {e: c for e, c in den.terms.items() if e != 0}
    for e in range(num.low, K_eff + 1):
        acc = dict(num.terms.get(e, {}))
        for ed, cd in den_rest.items():
            ef = e - ed
            if ef < num.low or ef not in out:
                continue
            acc = wl_add(ring, acc, wl_neg(ring, wl_mul(ring, cd, out[ef])))
        if acc:
            out[e] = acc
    return QSeries(ring, out, K_eff, num.low)


def series_eval(a: QSeries, z: complex, tau) -> complex:
    """Evaluation homomorphism: substitute numeric q-powers (from tau), w from
    z and zeta_M from e^{2 pi i/M}, summing the stored terms only."""
    ring = a.ring
    total = 0j
    import cmath
    for e, coeff in a.terms.items():
        qpow = tau.q_pow(e / 4.0)
        for we, c in coeff.items():
            total += qpow * ring.to_complex(c) * cmath.exp(1j * we * complex(z))
    return total


# ---------------------------------------------------------------------------
# exact theta expansions

def theta_qseries(kind: int, shift_num: int, shift_den: int, scale_z: int,
                  scale_tau_quarter: int, K: int, ring: CycRing) -> QSeries:
    """Exact expansion of theta_kind(scale_z*z + shift_num*pi/shift_den |
    (scale_tau_quarter/4)*tau) through quarter-order K.

    Needs ring order M divisible by lcm(4, 2*shift_den) so the shift phase and
    the -i prefactor are exact ring elements; kinds 1 and 2 need
    4 | scale_tau_quarter so the q^{1/4} prefactor lands on the quarter grid.
    """
    if kind not in (1, 2, 3, 4):
        raise ValueError("kind must be 1..4")
    if shift_den < 1 or scale_z < 1 or scale_tau_quarter < 1:
        raise ValueError("shift_den, scale_z, scale_tau_quarter must be >= 1")
    M = ring.order
    # -i (kinds 1/2) and a nontrivial shift phase must be exact ring elements
    need = _lcm(4 if kind in (1, 2) else 1,
                2 * shift_den if shift_num % (2 * shift_den) else 1)
    if M % need != 0:
        raise ValueError(f"ring order {M} must be a multiple of {need}")
    stq = scale_tau_quarter
    terms: dict[int, dict] = {}

    if kind in (1, 2):
        if stq % 4 != 0:
            raise ValueError("kinds 1 and 2 need scale_tau_quarter divisible by 4")
        # quarter-exponent stq*(n^2 + n) + stq/4
        base = stq // 4
        n = 0
        lows = []
        while True:
            added = False
            for nn in (n, -n - 1) if n >= 0 else ():
                e = stq * (nn * nn + nn) + base
                if e <= K:
                    c = ring.zeta_pow(((2 * nn + 1) * shift_num * (M // (2 * shift_den))) % M)
                    if kind == 1:
                        c = ring.mul(c, ring.i_pow(3))  # -i
                        if nn % 2 != 0:
                            c = ring.neg(c)
                    terms.setdefault(e, {})
                    we = (2 * nn + 1) * scale_z
                    terms[e][we] = ring.add(terms[e].get(we, ring.zero()), c)
                    lows.append(e)
                    added = True
            if not added and n > 0:
                break
            n += 1
        low = min(lows) if lows else min(0, K)
    else:
        n = 0
        lows = []
        while True:
            added = False
            for nn in ({0} if n == 0 else (n, -n)):
                e = stq * nn * nn
                if e <= K:
                    c = ring.zeta_pow((2 * nn * shift_num * (M // (2 * shift_den))) % M)
                    if kind == 4 and nn % 2 != 0:
                        c = ring.neg(c)
                    terms.setdefault(e, {})
                    we = 2 * nn * scale_z
                    terms[e][we] = ring.add(terms[e].get(we, ring.zero()), c)
                    lows.append(e)
                    added = True
            if not added and n > 0:
                break
            n += 1
        low = min(lows) if lows else min(0, K)

    cleaned = {e: {we: c for we, c in coeff.items() if not ring.is_zero(c)}
               for e, coeff in terms.items()}
    cleaned = {e: coeff for e, coeff in cleaned.items() if coeff}
    return QSeries(ring, cleaned, K, min(low, 0) if not cleaned else low)


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


# ---------------------------------------------------------------------------
# F_n extraction (ring M = 1: pi*tau-direction shifts move q-powers only)

def _theta3_shifted_series(n: int, k: int, K: int, ring: CycRing) -> QSeries:
    """Exact theta_3(z + k*pi*tau | n*tau) = sum_j q^{n j^2 + 2 j k} w^{2j}."""
    terms: dict[int, dict] = {}
    jmax = int(math.isqrt(max(K, 0) // (4 * n) + 1)) + abs(k) // n + 2
    lows = []
    for j in range(-jmax, jmax + 1):
        e = 4 * (n * j * j + 2 * j * k)
        lows.append(e)
        if e <= K:
            terms.setdefault(e, {})[2 * j] = ring.one()
    return QSeries(ring, terms, K, min(lows))


def fn_series(n: int, order: int) -> list[int]:
    """Exact integer coefficients of F_n through q^order, from the theta form
    of the circular summation: expand sum_k q^{k^2} w^{2k} theta_3^n(z + k pi
    tau | n tau), divide by theta_3(z | tau), check the quotient carries no w.

    Raises ArithmeticError if the quotient has any w-dependence at the
    computed order; that would falsify the summation shape and must abort.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if order < 0:
        raise ValueError("order must be >= 0")
    ring = CycRing(1)
    Kq = 4 * order
    pieces = []
    for k in range(n):
        low_k = 4 * min(0, n - 2 * k)  # most negative exponent of the k-th factor
        K_work = Kq + (n - 1) * (-low_k)
        base = _theta3_shifted_series(n, k, K_work, ring)
        powed = series_pow(base, n)
        shifted = series_shift(powed, 4 * k * k, 2 * k)
        pieces.append(shifted.copy_truncated(Kq))
    lhs = pieces[0]
    for p in pieces[1:]:
        lhs = series_add(lhs, p)

    den = theta_qseries(3, 0, 1, 1, 4, Kq, ring)
    quo = series_div_unit(lhs, den, Kq)
    if not quo.w_free():
        bad = min(e for e, c in quo.terms.items() if set(c) - {0})
        raise ArithmeticError(
            f"circular-summation quotient has w-dependence at quarter-exponent {bad}")
    coeffs = [0] * (order + 1)
    for e, c in quo.terms.items():
        if e % 4 != 0:
            raise ArithmeticError(
                f"quotient exponent {e} not on the integer q-grid")
        coeffs[e // 4] = c.get(0, (0,))[0]
    return coeffs


# ---------------------------------------------------------------------------
# exact constrained coefficient series (independent of the numeric engine)

def exact_constrained_qseries(
        ring: CycRing, K: int, index_count: int, constraint: int | None,
        sign_mask: Sequence[bool], linear_mask: Sequence[bool],
        phase_fracs: Sequence[Fraction], const_phase_frac: Fraction,
        qpre_quarter_units: int, scalar_int: int, scalar_i_pow: int) -> QSeries:
    """Exact w-free QSeries of a constrained lattice coefficient:

    scalar_int * i^{scalar_i_pow} * e^{i pi const_phase_frac} * q^{qpre/4} *
    sum over vectors (sum = constraint) of prod (-1)^{r_i}[sign] *
    q^{r_i^2 + r_i[linear]} * e^{2 i r_i * pi * phase_fracs[i]}.

    Phases are rational multiples of pi, exact in Z[zeta_M].
    """
    t = index_count
    M = ring.order
    for fr in list(phase_fracs) + [Fraction(const_phase_frac)]:
        if M % (2 * Fraction(fr).denominator) != 0:
            raise ValueError(
                f"ring order {M} cannot represent the phase pi*{fr}")
    budget = (K - qpre_quarter_units) / 4.0
    bound = int(math.isqrt(int(max(budget, 0)) + t + 2)) + 2
    import itertools

    base = ring.mul(ring.scale(ring.i_pow(scalar_i_pow), scalar_int),
                    _pi_phase(ring, const_phase_frac))
    terms: dict[int, dict] = {}
    free = t - 1 if constraint is not None else t
    coords: Iterable[tuple[int, ...]]
    if free == 0:
        coords = [()]
    else:
        coords = itertools.product(range(-bound, bound + 1), repeat=free)
    for head in coords:
        if constraint is not None:
            last = constraint - sum(head)
            if abs(last) > bound:
                continue
            vec = (*head, last)
        else:
            vec = head
        qe = qpre_quarter_units + 4 * sum(
            r * r + (r if linear_mask[i] else 0) for i, r in enumerate(vec))
        if qe > K:
            continue
        c = base
        neg = sum(vec[i] for i in range(t) if sign_mask[i]) % 2
        if neg:
            c = ring.neg(c)
        phase = Fraction(0)
        for i, r in enumerate(vec):
            phase += 2 * r * Fraction(phase_fracs[i])
        c = ring.mul(c, _pi_phase(ring, phase))
        if ring.is_zero(c):
            continue
        slot = terms.setdefault(qe, {})
        s = ring.add(slot.get(0, ring.zero()), c)
        if ring.is_zero(s):
            slot.pop(0, None)
            if not slot:
                del terms[qe]
        else:
            slot[0] = s
    low = min(terms) if terms else min(qpre_quarter_units, 0)
    return QSeries(ring, terms, K, min(low, qpre_quarter_units))


def _pi_phase(ring: CycRing, frac: Fraction):
    """e^{i pi frac} as an exact ring element (frac rational, 2*den | M)."""
    frac = Fraction(frac)
    M = ring.order
    num, den = frac.numerator, frac.denominator
    if M % (2 * den) != 0:
        raise ValueError(f"ring order {M} cannot represent e^(i pi {frac})")
    return ring.zeta_pow((num * (M // (2 * den))) % M)
