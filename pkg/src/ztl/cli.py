"""Command-line surface: single verifications, parameter sweeps, Psi
evaluation, and the property self-test suite.

Exit codes are the machine contract: 0 pass, 1 identity failure, 2 usage
error, 3 numerical non-convergence. Sweep output is byte-stable across runs
(timings are zeroed unless --timing is given).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from mpmath import mp, mpf

from .hp import PrecisionError, with_precision
from . import identities, mellin, selftest, special
from .psi import PsiRequest, psi

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# weight cap for negative m: beyond n^15 the series term counts explode
# before the kernel decay wins
MAX_ABS_WEIGHT = 15


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    digits: int = 50
    identity: list[str] = field(default_factory=lambda: ["main"])
    k_list: list[int] = field(default_factory=lambda: [1])
    m_list: list[int] = field(default_factory=lambda: [1])
    theta_list: list[str] = field(default_factory=lambda: ["0"])
    out: str | None = None
    format: str = "csv"
    jobs: int = 0
    trace: bool = False
    timing: bool = False


def _parse_config_file(path: str) -> dict:
    """Flat key=value lines, # comments, comma-separated lists."""
    conf = {}
    try:
        with open(path) as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{ln}: expected key=value, got {raw.strip()!r}")
                key, val = line.split("=", 1)
                conf[key.strip()] = val.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return conf


def _default_digits() -> int:
    env = os.environ.get("ZTL_DIGITS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"ZTL_DIGITS must be an integer, got {env!r}")
    return 50


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [v.strip() for v in str(text).split(",") if v.strip() != ""]


def _check_identity_params(identity: str, k: int, m: int | None) -> None:
    if identity not in identities.IDENTITY_NAMES:
        raise UsageError(f"unknown identity {identity!r}; choose from {identities.IDENTITY_NAMES}")
    if k < 1:
        raise UsageError("k must be a positive integer")
    needs_m = identity in ("main", "ramanujan", "dixit", "eisenstein", "lerch")
    if needs_m:
        if m is None:
            raise UsageError(f"{identity} requires --m")
        if m == 0 and identity != "eisenstein":
            raise UsageError("m must be nonzero")
        if identity == "eisenstein" and m <= 1:
            raise UsageError("eisenstein requires m > 1")
        if identity == "lerch" and m % 2 == 0:
            raise UsageError("lerch requires odd m")
        if abs(2 * m + 1) > MAX_ABS_WEIGHT:
            raise UsageError(f"|2m+1| must be <= {MAX_ABS_WEIGHT}")


def _theta_from_args(args) -> str:
    if getattr(args, "alpha", None) is not None:
        a = mpf(args.alpha)
        if not a > 0:
            raise UsageError("--alpha must be positive")
        with mp.workdps(40):
            return mp.nstr(mp.log(a / mp.pi), 30)
    return args.theta if args.theta is not None else "0"


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    digits = args.digits or _default_digits()
    identity = args.identity
    m = args.m
    _check_identity_params(identity, args.k, m if m is not None else (2 if identity == "eisenstein" else 1))
    theta = _theta_from_args(args)
    ctx = with_precision(digits)
    sink: list | None = None
    if args.trace:
        sink = []
        mellin.set_trace_sink(sink)
    try:
        report = identities.verify(identity, k=args.k,
                                   m=m if m is not None else (2 if identity == "eisenstein" else 1),
                                   theta=theta, ctx=ctx)
    finally:
        mellin.set_trace_sink(None)
    print(report)
    if args.trace and sink is not None:
        print(json.dumps(sink, indent=2))
    if args.out:
        _write_rows(args.out, args.format, [report], timing=args.timing)
    return EXIT_PASS if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# sweep

def _sweep_cell(task):
    identity, k, m, theta, digits = task
    ctx = with_precision(digits)
    report = identities.verify(identity, k=k, m=m if m is not None else 1,
                               theta=theta or "0", ctx=ctx)
    return report


def _sweep_grid(cfg: RunConfig) -> list[tuple]:
    if not cfg.k_list or not cfg.m_list or not cfg.theta_list or not cfg.identity:
        raise UsageError("sweep grids must be non-empty")
    tasks = []
    for identity in cfg.identity:
        k_list = cfg.k_list
        m_list: list[int | None] = list(cfg.m_list)
        theta_list: list[str | None] = list(cfg.theta_list)
        if identity in ("ramanujan", "dixit"):
            k_list = [2 if identity == "dixit" else 1]
        if identity in ("quasimodular", "eta"):
            m_list = [None]
        if identity == "lerch":
            theta_list = [None]
        for k in k_list:
            for m in m_list:
                if m is not None:
                    _check_identity_params(identity, k, m)
                for theta in theta_list:
                    tasks.append((identity, k, m, theta, cfg.digits))
    return tasks


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    tasks = _sweep_grid(cfg)
    jobs = cfg.jobs or os.cpu_count() or 1
    reports = []
    failed = False
    numeric_failure = None
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_sweep_cell, t) for t in tasks]
            for fut in futures:
                try:
                    reports.append(fut.result())
                except ArithmeticError as exc:
                    numeric_failure = exc
                    break
    else:
        for t in tasks:
            try:
                reports.append(_sweep_cell(t))
            except ArithmeticError as exc:
                numeric_failure = exc
                break
    for r in reports:
        print(r)
        failed = failed or not r.passed
    if cfg.out:
        _write_rows(cfg.out, cfg.format, reports, timing=cfg.timing)
    if numeric_failure is not None:
        print(f"numerical non-convergence: {numeric_failure}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_FAIL if failed else EXIT_PASS


def _write_rows(path, fmt, reports, timing=False):
    if fmt == "csv":
        body = identities.CSV_HEADER + "\n" + "".join(
            r.csv_row(timing=timing) + "\n" for r in reports)
    elif fmt == "json":
        body = json.dumps([r.json_dict(timing=timing) for r in reports], indent=2) + "\n"
    else:
        raise UsageError(f"unknown output format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(body)


def _build_config(args) -> RunConfig:
    conf = _parse_config_file(args.config) if args.config else {}
    def pick(flag, key, default, conv=lambda x: x):
        if flag is not None:
            return flag
        if key in conf:
            return conv(conf[key])
        return default
    digits = pick(args.digits, "digits", None, int)
    if digits is None:
        digits = _default_digits()
    cfg = RunConfig(
        digits=digits,
        identity=pick(_str_list(args.identity) if args.identity is not None else None,
                      "identity", ["main"], _str_list),
        k_list=pick(_int_list(args.k_list) if args.k_list is not None else None,
                    "k_list", [1], _int_list),
        m_list=pick(_int_list(args.m_list) if args.m_list is not None else None,
                    "m_list", [1], _int_list),
        theta_list=pick(_str_list(args.theta_list) if args.theta_list is not None else None,
                        "theta_list", ["0"], _str_list),
        out=pick(args.out, "out", None),
        format=pick(args.format, "format", "csv"),
        jobs=pick(args.jobs, "jobs", 0, int),
        trace=bool(args.trace or conf.get("trace") in ("1", "true", "yes")),
        timing=bool(getattr(args, "timing", False) or conf.get("timing") in ("1", "true", "yes")),
    )
    if "all" in cfg.identity:
        cfg.identity = list(identities.IDENTITY_NAMES)
    for name in cfg.identity:
        if name not in identities.IDENTITY_NAMES:
            raise UsageError(f"unknown identity {name!r}")
    return cfg


# ---------------------------------------------------------------------------
# psi

def cmd_psi(args) -> int:
    digits = args.digits or _default_digits()
    ctx = with_precision(digits)
    xs = _str_list(args.x)
    if not xs:
        raise UsageError("--x must give at least one positive value")
    sink: list | None = None
    if args.trace:
        sink = []
        mellin.set_trace_sink(sink)
    rows = []
    try:
        for xs_raw in xs:
            with ctx.scoped():
                x = mpf(xs_raw)
                rho = mpf(args.rho)
            if not x > 0 or not rho > 0:
                raise UsageError("rho and x must be positive")
            try:
                req = PsiRequest(rho=rho, k=args.k, x=x, strategy=args.strategy)
            except special.DomainError as exc:
                raise UsageError(str(exc))
            val = psi(req, ctx)
            with ctx.scoped():
                print(f"psi(rho={mp.nstr(rho, 12)}, k={args.k}, x={mp.nstr(x, 12)}) = "
                      f"{mp.nstr(val.value, digits)}  "
                      f"(error ~ {mp.nstr(val.error_estimate, 3)}, strategy {val.strategy})")
                rows.append((mp.nstr(x, 17), mp.nstr(val.value, digits)))
    finally:
        mellin.set_trace_sink(None)
    if args.trace and sink is not None:
        print(json.dumps(sink, indent=2))
    if args.out:
        if args.format == "json":
            body = json.dumps([{"x": x, "psi": v} for x, v in rows], indent=2) + "\n"
        else:
            body = "x,psi\n" + "".join(f"{x},{v}\n" for x, v in rows)
        with open(args.out, "w") as fh:
            fh.write(body)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args) -> int:
    digits = args.digits or int(os.environ.get("ZTL_DIGITS", "40") if False else 40)
    ok = selftest.run(digits=digits, name_filter=args.filter or "")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--digits", type=int, default=None,
                   help="working precision in decimal digits (default 50, or ZTL_DIGITS)")
    p.add_argument("--out", default=None, help="write results to this path")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--trace", action="store_true",
                   help="print JSON refinement traces of every quadrature")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ztl",
        description="High-precision verification of odd-zeta transformation identities")
    sub = ap.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="verify one identity at one parameter point")
    pv.add_argument("identity", choices=identities.IDENTITY_NAMES)
    pv.add_argument("--k", type=int, default=1)
    pv.add_argument("--m", type=int, default=None)
    pv.add_argument("--theta", default=None)
    pv.add_argument("--alpha", default=None, help="alternative to --theta: theta = log(alpha/pi)")
    pv.add_argument("--timing", action="store_true", help="include real seconds in file output")
    _add_common(pv)
    pv.set_defaults(fn=cmd_verify)

    ps = sub.add_parser("sweep", help="verify identities over a parameter grid")
    ps.add_argument("--identity", default=None,
                    help="comma list of identities or 'all' (default: main)")
    ps.add_argument("--k", dest="k_list", default=None, help="comma list of k values")
    ps.add_argument("--m", dest="m_list", default=None, help="comma list of m values")
    ps.add_argument("--theta", dest="theta_list", default=None, help="comma list of theta values")
    ps.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: available parallelism)")
    ps.add_argument("--config", default=None, help="key=value config file; flags override")
    ps.add_argument("--timing", action="store_true",
                    help="include real seconds in output (breaks byte-stability)")
    _add_common(ps)
    ps.set_defaults(fn=cmd_sweep)

    pp = sub.add_parser("psi", help="evaluate the generalized Koshliakov function")
    pp.add_argument("--rho", required=True)
    pp.add_argument("--k", type=int, default=1)
    pp.add_argument("--x", required=True, help="evaluation point, or comma list for plot data")
    pp.add_argument("--strategy", default="auto",
                    choices=("auto", "inverse_mellin", "term_sum", "closed_form"))
    _add_common(pp)
    pp.set_defaults(fn=cmd_psi)

    pt = sub.add_parser("selftest", help="run the module property suites")
    pt.add_argument("--digits", type=int, default=None, help="default 40")
    pt.add_argument("--filter", default=None, help="run only checks whose name contains this")
    pt.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse uses code 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (special.DomainError, PrecisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except mellin.QuadratureError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        if exc.trace:
            print(json.dumps(exc.trace[-3:], indent=2), file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
