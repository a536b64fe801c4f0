"""Command-line front end: theta evaluation, coefficient evaluation, exact
series extraction, and identity verification.

Complex literals use the shell-friendly form ``a+bi`` (no whitespace):
an optional real part followed by an optional signed imaginary part with an
``i`` suffix, e.g. ``0.3``, ``2i``, ``-1.5+0.25i``, ``0.13+1.02i``.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import catalog
from . import harness as harness_mod
from .lattice import RFamily, eval_R
from .qseries import fn_series
from .theta import DomainError, EvalConfig, TauPoint, theta

_NUMBER_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


class CliError(ValueError):
    pass


def _parse_real(text: str, original: str) -> float:
    if not _NUMBER_RE.match(text):
        raise CliError(f"malformed complex literal: {original!r}")
    return float(text)


def parse_complex(text: str) -> complex:
    s = text.strip()
    if not s or " " in s:
        raise CliError(f"malformed complex literal: {text!r}")
    if not s.endswith("i"):
        return complex(_parse_real(s, text), 0.0)
    body = s[:-1]
    # split the trailing signed imaginary part off: the last +/- that does
    # not follow an exponent marker and is not the leading sign
    split = -1
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break
    real_text, imag_text = (body[:split], body[split:]) if split > 0 else ("", body)
    real = _parse_real(real_text, text) if real_text else 0.0
    if imag_text in ("", "+"):
        imag = 1.0
    elif imag_text == "-":
        imag = -1.0
    else:
        imag = _parse_real(imag_text, text)
    return complex(real, imag)


def parse_tau(text: str) -> TauPoint:
    try:
        return TauPoint(parse_complex(text))
    except DomainError as exc:
        raise CliError(str(exc)) from exc


def _config_from_env_and_args(tol: float | None) -> EvalConfig:
    digits = 15
    env = os.environ.get("THETA_PRECISION")
    if env:
        digits = int(env)
        if digits < 15:
            raise CliError("THETA_PRECISION must be an integer >= 15")
    kwargs = {"digits": digits}
    if tol is not None:
        kwargs["tol"] = tol
    return EvalConfig(**kwargs)


def _fmt_complex(value: complex) -> str:
    return f"{value.real:.15g}{value.imag:+.15g}i"


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="circsum",
        description="evaluate theta series and verify circular-summation identities")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval-theta", help="evaluate theta_k(z|tau)")
    pe.add_argument("--kind", type=int, required=True, choices=(1, 2, 3, 4))
    pe.add_argument("--z", required=True)
    pe.add_argument("--tau", required=True)
    pe.add_argument("--tol", type=float, default=None)

    pc = sub.add_parser("eval-coeff", help="evaluate a lattice-sum coefficient")
    pc.add_argument("--family", required=True,
                    choices=[f.value for f in RFamily])
    pc.add_argument("--m", type=int, required=True,
                    help="first block-count parameter (the k of R33)")
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--a", type=int, default=None)
    pc.add_argument("--b", type=int, default=None)
    pc.add_argument("--shifts", default="",
                    help="comma-separated complex shifts (first-kind side "
                         "then second-kind side; Cubic* take y1,y2; R33 takes y)")
    pc.add_argument("--tau", required=True)
    pc.add_argument("--tol", type=float, default=None)

    pf = sub.add_parser("fn-series", help="exact coefficients of F_n")
    pf.add_argument("--n", type=int, required=True)
    pf.add_argument("--order", type=int, required=True)

    pv = sub.add_parser("verify", help="verify one identity")
    pv.add_argument("--id", required=True)
    pv.add_argument("--m", type=int)
    pv.add_argument("--n", type=int)
    pv.add_argument("--a", type=int)
    pv.add_argument("--b", type=int)
    pv.add_argument("--k", type=int)
    pv.add_argument("--samples", type=int, default=16)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--tol", type=float, default=1e-9)
    pv.add_argument("--out", default=None)

    pa = sub.add_parser("verify-all", help="run a verification suite")
    pa.add_argument("--suite", default="paper", choices=("paper",))
    pa.add_argument("--samples", type=int, default=16)
    pa.add_argument("--seed", type=int, default=1)
    pa.add_argument("--tol", type=float, default=1e-9)
    pa.add_argument("--out", default=None)

    pl = sub.add_parser("list", help="list the identity catalog")
    pl.add_argument("--json", action="store_true")
    return p


def _cmd_eval_theta(args) -> int:
    cfg = _config_from_env_and_args(args.tol)
    value = theta(args.kind, parse_complex(args.z), parse_tau(args.tau), cfg)
    print(_fmt_complex(complex(value)))
    return 0


def _cmd_eval_coeff(args) -> int:
    cfg = _config_from_env_and_args(args.tol)
    tau = parse_tau(args.tau)
    shifts = [parse_complex(s) for s in args.shifts.split(",") if s.strip()]
    family = RFamily(args.family)
    if family in (RFamily.R12, RFamily.R13, RFamily.R14,
                  RFamily.R23, RFamily.R24, RFamily.R34):
        if args.a is None or args.b is None:
            raise CliError("--a and --b are required for the mixed families")
        value = eval_R(family, args.m, args.n, args.a, args.b,
                       shifts[:args.a], shifts[args.a:], tau, cfg)
    elif family in (RFamily.R1, RFamily.R2, RFamily.R3, RFamily.R4):
        from .lattice import eval_R_single
        value = eval_R_single(family, args.m, args.n, shifts, tau, cfg)
    elif family is RFamily.GMN:
        from .lattice import eval_G
        value = eval_G(args.m, args.n, shifts, tau, cfg)
    elif family is RFamily.R33:
        from .lattice import eval_R33
        if args.a is None or args.b is None:
            raise CliError("--a and --b are required for R33")
        y = shifts[0] if shifts else 0j
        value = eval_R33(args.m, args.n, args.a, args.b, y, tau, cfg)
    else:
        from .lattice import eval_cubic
        if len(shifts) < 2:
            shifts = list(shifts) + [0j] * (2 - len(shifts))
        value = eval_cubic(family, shifts[0], shifts[1], tau, cfg)
    print(_fmt_complex(complex(value)))
    return 0


def _cmd_fn_series(args) -> int:
    coeffs = fn_series(args.n, args.order)
    print(" ".join(str(c) for c in coeffs))
    return 0


def _cmd_verify(args) -> int:
    entry = catalog.CATALOG.get(args.id)
    if entry is None:
        raise CliError(f"unknown identity id: {args.id}")
    params = {}
    for name in entry.param_names:
        val = getattr(args, name, None)
        if val is None:
            raise CliError(f"identity {args.id} requires --{name}")
        params[name] = val
    report = harness_mod.verify(args.id, params, samples=args.samples,
                               tol=args.tol, seed=args.seed,
                               cfg=_config_from_env_and_args(None))
    text = report.to_json(indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.status == "pass" else 1


def _cmd_verify_all(args) -> int:
    reports, summary = harness_mod.run_suite(samples=args.samples,
                                            tol=args.tol, seed=args.seed)
    payload = {"reports": [r.to_dict() for r in reports], "summary": summary}
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if summary["failed"] == 0 else 1


def _cmd_list(args) -> int:
    records = catalog.list_catalog()
    if args.json:
        print(json.dumps(records, indent=2, sort_keys=True))
    else:
        for rec in records:
            params = " ".join(rec["params"]) or "-"
            print(f"{rec['id']:<12} params: {params:<12} {rec['anchor']}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    handlers = {
        "eval-theta": _cmd_eval_theta,
        "eval-coeff": _cmd_eval_coeff,
        "fn-series": _cmd_fn_series,
        "verify": _cmd_verify,
        "verify-all": _cmd_verify_all,
        "list": _cmd_list,
    }
    try:
        return handlers[args.command](args)
    except (CliError, DomainError, catalog.HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
