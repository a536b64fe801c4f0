"""Seeded randomized verification, independent brute-force oracles, suite
orchestration, and report generation.

The sample stream is produced by SplitMix64 (Steele-Lea-Vigna), a 64-bit
counter-hash PRNG: state advances by the golden-gamma constant and each
output is a finalizer hash of the state.  Uniform doubles take the top 53
bits.  The generator is ~15 lines of integer arithmetic, so any
reimplementation reproduces reports bit-for-bit from the same seed.
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

import mpmath

from . import catalog
from .lattice import ConstrainedSumSpec, RFamily
from .theta import DEFAULT_CONFIG, EvalConfig, TauPoint, theta

SCHEMA_VERSION = 1

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit PRNG; same seed gives the same stream everywhere."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float, hi: float) -> float:
        u = (self.next_u64() >> 11) * (2.0 ** -53)
        return lo + (hi - lo) * u


@dataclass(frozen=True)
class SampleDomain:
    """Sampling boxes; tau always lands strictly inside the upper half-plane."""

    im_tau: tuple[float, float] = (0.8, 2.0)
    re_tau: tuple[float, float] = (-0.5, 0.5)
    z_re: float = 1.0
    z_im: float = 0.3
    shift_re: float = 1.0
    shift_im: float = 0.3

    def sample_tau(self, rng: SplitMix64) -> TauPoint:
        return TauPoint(complex(rng.uniform(*self.re_tau),
                                rng.uniform(*self.im_tau)))

    def sample_z(self, rng: SplitMix64) -> complex:
        return complex(rng.uniform(-self.z_re, self.z_re),
                       rng.uniform(-self.z_im, self.z_im))

    def sample_shift(self, rng: SplitMix64) -> complex:
        return complex(rng.uniform(-self.shift_re, self.shift_re),
                       rng.uniform(-self.shift_im, self.shift_im))


DEFAULT_DOMAIN = SampleDomain()


@dataclass
class VerificationReport:
    schema_version: int
    identity_id: str
    params: dict
    samples: int
    seed: int
    tol: float
    max_abs_residual: float
    max_rel_residual: float
    status: str
    failures: list[dict]
    runtime_ms: int

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "identity_id": self.identity_id,
            "params": self.params,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_abs_residual": self.max_abs_residual,
            "max_rel_residual": self.max_rel_residual,
            "status": self.status,
            "failures": self.failures,
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _residual(lhs: complex, rhs: complex) -> tuple[float, float]:
    absr = abs(lhs - rhs)
    return absr, absr / max(1.0, abs(lhs), abs(rhs))


def verify(identity_id: str, params: Mapping, samples: int = 16,
           tol: float = 1e-9, seed: int = 0,
           domain: SampleDomain = DEFAULT_DOMAIN,
           cfg: EvalConfig = DEFAULT_CONFIG) -> VerificationReport:
    """Draw `samples` independent (z, tau, shifts) points and compare the
    identity's two sides; relative residuals are measured against
    max(1, |lhs|, |rhs|).  Reports are reproducible from (seed, params)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    entry = catalog.CATALOG[identity_id] if identity_id in catalog.CATALOG else None
    if entry is None:
        raise KeyError(f"unknown identity id: {identity_id}")
    params = dict(params)
    start = time.monotonic()
    rng = SplitMix64(seed)
    max_abs = 0.0
    max_rel = 0.0
    failures: list[dict] = []

    if identity_id == "RAMA_F":
        entry.validate(**params)
        n = params["n"]
        for idx in range(samples):
            p = rng.uniform(0.02, 0.5)
            d1 = rng.uniform(0.5, 2.0)
            d2 = rng.uniform(0.5, 2.0)
            a1, b1 = math.sqrt(p * d1), math.sqrt(p / d1)
            a2, b2 = math.sqrt(p * d2), math.sqrt(p / d2)
            r1 = entry.ratio(a1, b1, n, cfg)
            r2 = entry.ratio(a2, b2, n, cfg)
            absr, relr = _residual(complex(r1), complex(r2))
            max_abs = max(max_abs, absr)
            max_rel = max(max_rel, relr)
            if relr >= tol:
                failures.append({"sample": idx, "p": p, "split": [d1, d2],
                                 "residual": relr})
    else:
        # validation errors propagate before any sample is drawn
        entry.instance_from_free(params, tuple(
            0j for _ in range(entry.free_arity(params))))
        for idx in range(samples):
            z = domain.sample_z(rng)
            tau = domain.sample_tau(rng)
            arity = entry.free_arity(params)
            free = tuple(domain.sample_shift(rng) for _ in range(arity))
            inst = entry.instance_from_free(params, free)
            lhs = entry.lhs(inst, z, tau, cfg)
            rhs = entry.rhs(inst, z, tau, cfg)
            absr, relr = _residual(lhs, rhs)
            max_abs = max(max_abs, absr)
            max_rel = max(max_rel, relr)
            if relr >= tol:
                failures.append({
                    "sample": idx,
                    "z": [z.real, z.imag],
                    "tau": [tau.tau.real, tau.tau.imag],
                    "free_shifts": [[s.real, s.imag] for s in free],
                    "residual": relr,
                })
    status = "pass" if (max_rel < tol and not failures) else "fail"
    runtime_ms = int((time.monotonic() - start) * 1000)
    return VerificationReport(
        schema_version=SCHEMA_VERSION, identity_id=identity_id, params=params,
        samples=samples, seed=seed, tol=tol, max_abs_residual=max_abs,
        max_rel_residual=max_rel, status=status, failures=failures,
        runtime_ms=runtime_ms)


# ---------------------------------------------------------------------------
# independent fixed-window oracles (no shared truncation logic)

def oracle_theta(kind: int, z: complex, tau: TauPoint, window: int) -> complex:
    """Plain fixed-window sum of the defining series; no error control."""
    q = tau.q_pow(1)
    zc = complex(z)
    total = 0j
    if kind in (1, 2):
        pref = tau.q_pow(0.25)
        for n in range(-window, window + 1):
            term = pref * q ** (n * (n + 1)) * cmath.exp((2 * n + 1) * 1j * zc)
            if kind == 1:
                term = term * (-1j) * ((-1) ** n)
            total += term
    else:
        for n in range(-window, window + 1):
            term = q ** (n * n) * cmath.exp(2j * n * zc)
            if kind == 4:
                term = term * ((-1) ** n)
            total += term
    return total


def oracle_sum(spec: ConstrainedSumSpec, tau: TauPoint, window: int) -> complex:
    """Brute-force window evaluation of a ConstrainedSumSpec (nested loops)."""
    if not spec.feasible:
        return 0j
    t = spec.index_count
    q = tau.q_pow(1)
    pref = (complex(spec.scalar_prefactor)
            * tau.q_pow(spec.q_prefactor_quarter_units / 4.0)
            * complex(spec.constant_phase))
    total = 0j
    rng = range(-window, window + 1)
    for vec in itertools.product(rng, repeat=t):
        if spec.constraint_sum is not None and sum(vec) != spec.constraint_sum:
            continue
        qe = 0
        phase = 0j
        sign = 1
        for i, r in enumerate(vec):
            qe += r * r
            if spec.linear_q_mask[i]:
                qe += r
            phase += 2j * r * complex(spec.phase_weights[i])
            if spec.sign_mask[i] and r % 2:
                sign = -sign
        total += sign * q ** qe * cmath.exp(phase)
    return pref * total


def oracle_cubic(kind: RFamily, y1: complex, y2: complex, tau: TauPoint,
                 window: int) -> complex:
    q = tau.q_pow(1)
    signed = kind in (RFamily.CUBIC_B, RFamily.CUBIC_D)
    shifted = kind in (RFamily.CUBIC_C, RFamily.CUBIC_D)
    total = 0j
    for r in range(-window, window + 1):
        for s in range(-window, window + 1):
            qe = r * r + r * s + s * s
            ph = 2j * (r * complex(y1) + s * complex(y2))
            if shifted:
                qe += 2 * r + 2 * s
                ph += 1j * (complex(y1) + complex(y2))
            term = q ** qe * cmath.exp(ph)
            if signed and (r + s) % 2:
                term = -term
            total += term
    return total


# ---------------------------------------------------------------------------
# the leading-coefficient and modular cross-checks

def _fn_numeric_ratio(n: int, tau: TauPoint, cfg: EvalConfig,
                      rng: SplitMix64 | None = None) -> complex:
    """F_n(tau) as the ratio (sum_k q^{k^2} e^{2kiz} theta3^n(z+k pi tau|n
    tau)) / theta3(z|tau), resampling z away from theta zeros."""
    rng = rng or SplitMix64(12345)
    use_mp = cfg.digits > 16
    for _ in range(32):
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(-0.2, 0.2))
        den = theta(3, z, tau, cfg)
        if abs(den) < 0.1:
            continue
        if use_mp:
            with mpmath.workdps(cfg.digits):
                taum = mpmath.mpc(tau.tau.real, tau.tau.imag)
                zm = mpmath.mpc(z.real, z.imag)
                tau_n = TauPoint(tau.tau * n)
                total = mpmath.mpc(0)
                for k in range(n):
                    pref = mpmath.exp(1j * (k * k) * mpmath.pi * taum + 2j * k * zm)
                    total += pref * theta(3, zm + k * mpmath.pi * taum, tau_n, cfg) ** n
                return total / den
        total = 0j
        tau_n = tau.scaled(n)
        for k in range(n):
            total += (tau.q_pow(k * k) * cmath.exp(2j * k * z)
                      * theta(3, z + k * math.pi * tau.tau, tau_n, cfg) ** n)
        return total / den
    raise RuntimeError("could not find z away from theta zeros")


def fn_leading_check(n: int, tau: TauPoint,
                     cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Relative deviation |(F_n - 1)/(2n q^{n-1}) - 1| of the numeric F_n from
    its leading behavior, cross-checked against the exact integer route
    (coefficients 1, 0...0, 2n through q^{n-1})."""
    if n not in (3, 4, 5):
        raise ValueError("leading-coefficient check covers n in {3, 4, 5}")
    coeffs = catalog._fn_coeffs_cached(n, n - 1)
    expected = [1] + [0] * (n - 2) + [2 * n]
    if list(coeffs) != expected:
        raise ArithmeticError(
            f"exact coefficients {list(coeffs)} differ from {expected}")
    use_cfg = cfg if cfg.digits > 16 or n < 4 else EvalConfig(
        tol=cfg.tol, max_terms=cfg.max_terms,
        q_abs_ceiling=cfg.q_abs_ceiling, digits=30)
    fn = _fn_numeric_ratio(n, tau, use_cfg)
    if use_cfg.digits > 16:
        with mpmath.workdps(use_cfg.digits):
            taum = mpmath.mpc(tau.tau.real, tau.tau.imag)
            lead = 2 * n * mpmath.exp(1j * (n - 1) * mpmath.pi * taum)
            dev = abs((fn - 1) / lead - 1)
        return float(dev)
    lead = 2 * n * tau.q_pow(n - 1)
    return abs((complex(fn) - 1) / lead - 1)


def gn_fn_modular_check(n: int, tau: TauPoint,
                        cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|G_n(tau) - sqrt(n) * (-i tau)^{(1-n)/2} * F_n(-1/(n tau))| with the
    principal branch of the half-integer power and F_n from the numeric
    ratio at the transformed tau."""
    from .lattice import eval_G
    if n == 1:
        return abs(eval_G(1, 1, (0j,), tau, cfg) - 1.0)
    g = eval_G(1, n, (0j,) * n, tau, cfg)
    tau_t = TauPoint(-1.0 / (n * tau.tau))
    fn = complex(_fn_numeric_ratio(n, tau_t, cfg))
    factor = math.sqrt(n) * (-1j * tau.tau) ** ((1 - n) / 2)
    return abs(g - factor * fn)


# ---------------------------------------------------------------------------
# default suite

def _pair_param_grid(max_mn: int = 6):
    for id_, fam in catalog._PAIR_TABLE.items():
        for n in range(1, max_mn + 1):
            for m in range(1, max_mn // n + 1):
                for a in range(0, n + 1):
                    b = n - a
                    if fam.hyp_name == "n_even" and n % 2:
                        continue
                    if fam.hyp_name == "a_even" and a % 2:
                        continue
                    yield id_, {"m": m, "n": n, "a": a, "b": b}


def default_suite(max_mn: int = 6) -> list[tuple[str, dict]]:
    """Every hypothesis-satisfying (m, n, a, b) with mn <= max_mn for the six
    mixed-product families, plus at least one validated parameter set for
    every other catalog entry."""
    suite: list[tuple[str, dict]] = list(_pair_param_grid(max_mn))
    for id_ in ("COR149", "COR155"):
        suite += [(id_, {"m": m, "n": n}) for m, n in ((1, 2), (2, 2), (1, 4))]
    suite += [("COR600", {"m": m, "n": n}) for m, n in ((1, 1), (1, 3), (2, 2))]
    suite += [("COR400", {"m": m, "n": n}) for m, n in ((1, 2), (2, 1), (2, 3))]
    suite += [("COR200", {"n": 2}), ("COR200", {"n": 4}),
              ("COR203", {"n": 2}), ("COR203", {"n": 4}),
              ("COR206", {"n": 1}), ("COR206", {"n": 3}),
              ("COR209", {"n": 2}), ("COR209", {"n": 4})]
    suite += [("CHANLIU", {"m": m, "n": n})
              for m, n in ((1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 6))]
    suite += [("BOON", {"n": n}) for n in (1, 2, 3, 4)]
    suite += [("ZENG", {"k": k, "n": n, "a": a, "b": n - a})
              for k in (1, 2) for n in (1, 2, 3) for a in range(n + 1)]
    suite += [("RAMA_T3", {"n": n}) for n in (2, 3, 4)]
    suite += [("RAMA_PI", {"n": n}) for n in (1, 2, 3)]
    suite += [("RAMA_F", {"n": n}) for n in (1, 2, 3)]
    suite += [(app_id, {}) for app_id in sorted(catalog._APP_TABLE)]
    return suite


def run_suite(suite: Sequence[tuple[str, dict]] | None = None,
              samples: int = 16, tol: float = 1e-9, seed: int = 1,
              cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[list[VerificationReport], dict]:
    """Run the given (or default) suite; returns (reports, summary)."""
    suite = default_suite() if suite is None else list(suite)
    reports = []
    for i, (id_, params) in enumerate(suite):
        reports.append(verify(id_, params, samples=samples, tol=tol,
                              seed=seed + i, cfg=cfg))
    passed = sum(1 for r in reports if r.status == "pass")
    summary = {"total": len(reports), "passed": passed,
               "failed": len(reports) - passed}
    return reports, summary
