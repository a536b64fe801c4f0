"""One generic evaluator for the constrained multi-index q-lattice sums.

Every coefficient family differs only in sign characters, a linear term in
the q-exponent, per-index phase weights, prefactors, and a hyperplane
constraint; a single shell-enumeration engine executes all of them.  The
two-variable hexagonal-lattice series (a, b, c, d) have a rank-2 cross term
and get their own shell loop.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .theta import DEFAULT_CONFIG, EvalConfig, TauPoint, TruncationError


class RFamily(Enum):
    R12 = "R12"
    R13 = "R13"
    R14 = "R14"
    R23 = "R23"
    R24 = "R24"
    R34 = "R34"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    GMN = "Gmn"
    R33 = "R33"
    CUBIC_A = "CubicA"
    CUBIC_B = "CubicB"
    CUBIC_C = "CubicC"
    CUBIC_D = "CubicD"


@dataclass(frozen=True)
class ConstrainedSumSpec:
    """Description of  scalar * q^{qpre/4} * cphase *
    sum over integer vectors r (with sum r_i = constraint_sum when present) of
    prod_i (-1)^{r_i}[sign_mask] * q^{r_i^2 + r_i[linear_q_mask]} * e^{2 i r_i w_i}.
    """

    index_count: int
    sign_mask: tuple[bool, ...]
    linear_q_mask: tuple[bool, ...]
    phase_weights: tuple[complex, ...]
    constant_phase: complex = 1.0 + 0j
    q_prefactor_quarter_units: int = 0
    scalar_prefactor: complex = 1.0 + 0j
    constraint_sum: int | None = None
    feasible: bool = True  # False: the parity constraint has no integer solutions

    def __post_init__(self):
        t = self.index_count
        if t < 1:
            raise ValueError("index_count must be >= 1")
        for name in ("sign_mask", "linear_q_mask", "phase_weights"):
            if len(getattr(self, name)) != t:
                raise ValueError(f"{name} must have length {t}")


def _shell_vectors(dims: int, radius: int) -> np.ndarray:
    """Integer vectors in [-radius, radius]^dims with max-norm exactly radius."""
    if radius == 0:
        return np.zeros((1, dims), dtype=np.int64)
    rng = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.meshgrid(*([rng] * dims), indexing="ij")
    pts = np.stack([g.ravel() for g in grid], axis=1)
    return pts[np.abs(pts).max(axis=1) == radius]

_MAX_SHELL_POINTS = 1 << 23


def eval_constrained_sum(spec: ConstrainedSumSpec, tau: TauPoint,
                         cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Shell-accumulated value of the sum described by spec; |error| < cfg.tol.

    Shells are max-norm spheres of the free indices (the last index is
    eliminated by the constraint when one is present); accumulation stops when
    two consecutive shells contribute less than tol/10 to the final value,
    which guards against accidental zero shells from sign cancellation.
    Infeasible specs evaluate to exactly 0.
    """
    if not spec.feasible:
        return 0j
    pref = (complex(spec.scalar_prefactor)
            * tau.q_pow(spec.q_prefactor_quarter_units / 4.0)
            * complex(spec.constant_phase))
    t = spec.index_count
    constrained = spec.constraint_sum is not None
    free = t - 1 if constrained else t

    sign_idx = np.array([i for i, s in enumerate(spec.sign_mask) if s], dtype=np.int64)
    lin_idx = np.array([i for i, s in enumerate(spec.linear_q_mask) if s], dtype=np.int64)
    weights = np.asarray(spec.phase_weights, dtype=np.complex128)
    ipitau = 1j * math.pi * tau.tau

    if free == 0:
        pts = np.array([[spec.constraint_sum]], dtype=np.int64)
        return pref * complex(_shell_value(pts, sign_idx, lin_idx, weights, ipitau))

    total = 0j
    small_streak = 0
    abs_pref = abs(pref)
    for radius in range(0, cfg.max_terms + 1):
        if (2 * radius + 1) ** free > _MAX_SHELL_POINTS:
            raise TruncationError(
                f"lattice sum did not converge before the shell budget "
                f"(radius {radius}, {free} free indices)")
        vecs = _shell_vectors(free, radius)
        if constrained:
            last = spec.constraint_sum - vecs.sum(axis=1)
            pts = np.concatenate([vecs, last[:, None]], axis=1)
        else:
            pts = vecs
        shell = _shell_value(pts, sign_idx, lin_idx, weights, ipitau)
        total += shell
        if abs(shell) * abs_pref < cfg.tol / 10.0:
            small_streak += 1
            if small_streak >= 2 and radius >= 2:
                return pref * total
        else:
            small_streak = 0
    raise TruncationError(
        f"lattice sum did not converge within {cfg.max_terms} shells")


def _shell_value(pts: np.ndarray, sign_idx, lin_idx, weights, ipitau) -> complex:
    q_exp = (pts * pts).sum(axis=1).astype(np.float64)
    if lin_idx.size:
        q_exp = q_exp + pts[:, lin_idx].sum(axis=1)
    exponent = ipitau * q_exp
    if weights.size:
        exponent = exponent + 2j * (pts @ weights)
    terms = np.exp(exponent)
    if sign_idx.size:
        parity = np.bitwise_and(pts[:, sign_idx].sum(axis=1), 1)
        terms = terms * (1.0 - 2.0 * parity)
    return complex(terms.sum())


def _check_shift_sum(shifts: Sequence[complex], what: str) -> None:
    total = sum(shifts, 0j)
    if abs(total) > 1e-9:
        raise ValueError(f"{what} must sum to 0, got sum {total}")


_PAIR_FAMILIES = (RFamily.R12, RFamily.R13, RFamily.R14, RFamily.R23,
                  RFamily.R24, RFamily.R34)


def build_pair_spec(family: RFamily, m: int, n: int, a: int, b: int,
                    shifts_x: Sequence[complex], shifts_y: Sequence[complex],
                    ) -> ConstrainedSumSpec:
    """ConstrainedSumSpec for the mixed-product coefficient families.

    Masks per family: sign on the first-kind indices for R12/R13 and on the
    second-kind indices for R24/R34; linear q-term on the first-kind indices
    for R13/R14/R23/R24; those four also carry the constant phase
    e^{i(x_1+...+x_a)} and the q^{a/4} prefactor; R12 carries q^{-n/4} and
    scalar mn*(-i)^a; the rest scalar mn.  Constraints: 2*sum + n = 0 for R12
    (needs n even), 2*sum + a = 0 for R13/R14/R23/R24 (needs a even),
    sum = 0 for R34 (always feasible).
    """
    if family not in _PAIR_FAMILIES:
        raise ValueError(f"{family} is not a two-kind coefficient family")
    if a < 0 or b < 0 or a + b != n:
        raise ValueError(f"need nonnegative a, b with a + b = n; "
                         f"got a={a}, b={b}, n={n}")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    if len(shifts_x) != a or len(shifts_y) != b:
        raise ValueError("shift lists must have lengths a and b")
    _check_shift_sum(list(shifts_x) + list(shifts_y), "the combined shifts")

    t = n
    sign_on_x = family in (RFamily.R12, RFamily.R13)
    sign_on_y = family in (RFamily.R24, RFamily.R34)
    sign_mask = tuple([sign_on_x] * a + [sign_on_y] * b)
    has_linear = family in (RFamily.R13, RFamily.R14, RFamily.R23, RFamily.R24)
    linear_mask = tuple([has_linear] * a + [False] * b)
    weights = tuple(complex(s) for s in shifts_x) + tuple(complex(s) for s in shifts_y)

    if family is RFamily.R12:
        feasible = n % 2 == 0
        constraint = -(n // 2) if feasible else None
        qpre = -n
        scalar = m * n * (-1j) ** (a % 4)
        cphase = 1.0 + 0j
    elif family is RFamily.R34:
        feasible = True
        constraint = 0
        qpre = 0
        scalar = complex(m * n)
        cphase = 1.0 + 0j
    else:
        feasible = a % 2 == 0
        constraint = -(a // 2) if feasible else None
        qpre = a
        scalar = m * n * (1j ** (a % 4)) if family is RFamily.R13 else complex(m * n)
        cphase = cmath.exp(1j * sum(shifts_x, 0j))

    return ConstrainedSumSpec(
        index_count=t, sign_mask=sign_mask, linear_q_mask=linear_mask,
        phase_weights=weights, constant_phase=cphase,
        q_prefactor_quarter_units=qpre, scalar_prefactor=scalar,
        constraint_sum=constraint if feasible else None, feasible=feasible)


def eval_R(family: RFamily, m: int, n: int, a: int, b: int,
           shifts_x: Sequence[complex], shifts_y: Sequence[complex],
           tau: TauPoint, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Mixed-product circular-summation coefficient; 0 when the parity
    constraint is infeasible (see ConstrainedSumSpec.feasible)."""
    spec = build_pair_spec(family, m, n, a, b, shifts_x, shifts_y)
    return eval_constrained_sum(spec, tau, cfg)


def build_single_spec(family: RFamily, m: int, n: int,
                      shifts: Sequence[complex]) -> ConstrainedSumSpec:
    """Spec for the single-kind families: R1/R2 sum over sum(r) = n/2 with
    q^{-n/4} and phases e^{-2i r y}; R3/R4 over sum(r) = 0 with e^{+2i r y}."""
    if family not in (RFamily.R1, RFamily.R2, RFamily.R3, RFamily.R4):
        raise ValueError(f"{family} is not a single-kind coefficient family")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    if len(shifts) != n:
        raise ValueError(f"need {n} shifts")
    _check_shift_sum(shifts, "the shifts")
    if family in (RFamily.R1, RFamily.R2):
        feasible = n % 2 == 0
        constraint = n // 2 if feasible else None
        qpre = -n
        weights = tuple(-complex(s) for s in shifts)
    else:
        feasible = True
        constraint = 0
        qpre = 0
        weights = tuple(complex(s) for s in shifts)
    return ConstrainedSumSpec(
        index_count=n, sign_mask=(False,) * n, linear_q_mask=(False,) * n,
        phase_weights=weights, q_prefactor_quarter_units=qpre,
        scalar_prefactor=complex(m * n),
        constraint_sum=constraint if feasible else None, feasible=feasible)


def eval_R_single(family: RFamily, m: int, n: int, shifts: Sequence[complex],
                  tau: TauPoint, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    spec = build_single_spec(family, m, n, shifts)
    return eval_constrained_sum(spec, tau, cfg)


def build_g_spec(m: int, n: int, ys: Sequence[complex]) -> ConstrainedSumSpec:
    return build_single_spec(RFamily.R3, m, n, ys)


def eval_G(m: int, n: int, ys: Sequence[complex], tau: TauPoint,
           cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """G_{m,n} = mn * sum over sum(r)=0 of q^{sum r^2} e^{2i sum r_j y_j}."""
    return eval_constrained_sum(build_g_spec(m, n, ys), tau, cfg)


def build_r33_spec(k: int, n: int, a: int, b: int, y: complex) -> ConstrainedSumSpec:
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive integers")
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need nonnegative a, b with a + b >= 1")
    t = a + b
    weights = tuple([k * complex(y)] * a + [0j] * b)
    return ConstrainedSumSpec(
        index_count=t, sign_mask=(False,) * t, linear_q_mask=(False,) * t,
        phase_weights=weights, scalar_prefactor=complex(k * n), constraint_sum=0)


def eval_R33(k: int, n: int, a: int, b: int, y: complex, tau: TauPoint,
             cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """kn * sum over sum-zero index vectors of q^{sum squares} *
    e^{2k(first a indices' sum) i y}."""
    return eval_constrained_sum(build_r33_spec(k, n, a, b, y), tau, cfg)


_CUBIC_KINDS = (RFamily.CUBIC_A, RFamily.CUBIC_B, RFamily.CUBIC_C, RFamily.CUBIC_D)


def eval_cubic(kind: RFamily, y1: complex, y2: complex, tau: TauPoint,
               cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Two-variable hexagonal-lattice series over (r, s):

    A: q^{r^2+rs+s^2} e^{2i(r y1 + s y2)};          B: A with (-1)^{r+s};
    C: q^{r^2+rs+s^2+2r+2s} e^{i(2r y1+2s y2+y1+y2)};  D: C with (-1)^{r+s}.

    The exponent of C/D reaches -1 (three times), so negative q-powers occur;
    they are computed via the q^alpha := e^{i alpha pi tau} rule like all
    others.  Termination follows the same two-small-shells rule as
    eval_constrained_sum, justified by positive-definiteness of r^2+rs+s^2.
    """
    if kind not in _CUBIC_KINDS:
        raise ValueError(f"{kind} is not a two-variable hexagonal series")
    signed = kind in (RFamily.CUBIC_B, RFamily.CUBIC_D)
    shifted = kind in (RFamily.CUBIC_C, RFamily.CUBIC_D)
    ipitau = 1j * math.pi * tau.tau
    w1, w2 = complex(y1), complex(y2)
    cphase = cmath.exp(1j * (w1 + w2)) if shifted else 1.0 + 0j

    total = 0j
    small_streak = 0
    for radius in range(0, cfg.max_terms + 1):
        pts = _shell_vectors(2, radius)
        r, s = pts[:, 0], pts[:, 1]
        q_exp = (r * r + r * s + s * s).astype(np.float64)
        if shifted:
            q_exp = q_exp + 2.0 * (r + s)
        exponent = ipitau * q_exp + 2j * (r * w1 + s * w2)
        terms = np.exp(exponent)
        if signed:
            parity = np.bitwise_and(r + s, 1)
            terms = terms * (1.0 - 2.0 * parity)
        shell = complex(terms.sum())
        total += shell
        if abs(shell) < cfg.tol / 10.0:
            small_streak += 1
            if small_streak >= 2 and radius >= 2:
                return cphase * total
        else:
            small_streak = 0
    raise TruncationError(
        f"hexagonal series did not converge within {cfg.max_terms} shells")
