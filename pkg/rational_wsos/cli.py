#!/usr/bin/env python3
"""
Command-line front end for rational_wsos.

Usage:
    rational-wsos solve  --cone CONE --poly POLY --out CERT [--trace TRACE] [--init CERT1]
    rational-wsos verify --cone CONE --cert CERT --poly POLY
    rational-wsos gram   --cone CONE --cert CERT --poly POLY [--out DEC]
    rational-wsos init   --cone CONE --out CERT1
    rational-wsos bound  --case chebyshev --d 3 --eps 1/8 --t-norm2-sq 51

Exit codes:
    0 success, 1 certificate rejected, 2 parse or usage error,
    3 initial certificate precondition failed, 4 iteration limit reached,
    5 cone digest mismatch, 6 Gram block not PSD
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .barrier import BarrierContext, hessian, in_dual_interior
from .bounds import bound_case_report
from .certify import Certificate, decomposition_residual, gram_recover, shift_by_constant
from .config import configure_logging
from .errors import (
    DegreeOverflow,
    DigestMismatch,
    DimensionMismatch,
    InitNotValid,
    MaxIters,
    NotInterior,
    NotPD,
    NotUnisolvent,
    ParseError,
    WsosError,
)
from .exactarith import as_rational, is_psd
from .io import (
    cone_digest,
    read_certificate,
    read_cone,
    read_poly,
    write_certificate,
    write_decomposition,
    write_trace,
)
from .polybasis import ConeSpec, lambda_apply
from .solver import NORM_BOUNDS, STOP_MODES, SolverParams, algorithm1, algorithm2, check_init_precondition, default_interior_point

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_INIT = 3
EXIT_MAX_ITERS = 4
EXIT_DIGEST = 5
EXIT_NOT_PSD = 6

INPUT_ERRORS = (ParseError, DimensionMismatch, DegreeOverflow, NotUnisolvent, ValueError)


@dataclass
class CliConfig:
    subcommand: str
    cone: Optional[str] = None
    poly: Optional[str] = None
    cert: Optional[str] = None
    init: Optional[str] = None
    out: Optional[str] = None
    trace: Optional[str] = None
    params: Optional[SolverParams] = None


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ParseError, TypeError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} (use n or num/den)")


def _load_cone(path: str) -> Tuple[ConeSpec, BarrierContext, str]:
    spec = read_cone(path)
    ctx = BarrierContext.from_spec(spec)
    return spec, ctx, cone_digest(spec)


def _check_digest(cert: Certificate, digest: str) -> None:
    if not cert.cone_digest:
        logger.warning("certificate has no cone digest; it is not tied to a cone")
        print(f"⚠️  Certificate carries no cone digest; checking it against cone {digest[:12]}... anyway")
        return
    if cert.cone_digest != digest:
        raise DigestMismatch(f"certificate was computed for cone {cert.cone_digest[:12]}..., not {digest[:12]}...")


def _params_from_args(args) -> SolverParams:
    norm_bound = "tight" if args.tight_norm else args.norm_bound
    return SolverParams(
        r=args.r,
        r_N=args.rn,
        tolerance=args.tol,
        max_iters=args.max_iters,
        stop_mode=args.stop_mode,
        rho_c_constant=args.rho_c,
        norm_bound=norm_bound,
    )


def _initial_certificate(ctx: BarrierContext, spec: ConeSpec, params: SolverParams, digest: str) -> Certificate:
    x0 = default_interior_point(spec, ctx=ctx)
    cert = algorithm2(ctx, x0, params, cone_digest=digest)
    if not cert.verified:
        raise InitNotValid("initialization returned a point that fails the precondition")
    return cert


def cmd_solve(args) -> int:
    params = _params_from_args(args)
    spec, ctx, digest = _load_cone(args.cone)
    t = read_poly(args.poly, U=spec.U)

    try:
        if args.init:
            init = read_certificate(args.init)
            _check_digest(init, digest)
            x_init = init.x
        else:
            x_init = _initial_certificate(ctx, spec, params, digest).x
    except (InitNotValid, NotInterior, NotUnisolvent, MaxIters) as e:
        print(f"❌ Initialization failed: {e}")
        return EXIT_INIT

    try:
        c, cert, trace = algorithm1(ctx, t, params, x_init, cone_digest=digest)
    except InitNotValid as e:
        print(f"❌ Initial certificate rejected: {e}")
        return EXIT_INIT
    except MaxIters as e:
        print(f"⚠️  {e}")
        if e.result is not None:
            c, cert, trace = e.result
            write_certificate(cert, args.out)
            if args.trace:
                write_trace(trace, args.trace)
            print(f"⚠️  Partial bound c = {c} (~{float(c):.12g}) written to {args.out}")
        return EXIT_MAX_ITERS

    write_certificate(cert, args.out)
    if args.trace:
        write_trace(trace, args.trace)
    if not cert.verified:
        print(f"❌ Final certificate failed exact re-verification (c = {c})")
        return EXIT_REJECTED
    print(f"✅ Certified lower bound c = {c} (~{float(c):.12g}) after {len(trace)} iterations")
    print(f"   certificate written to {args.out}")
    return EXIT_OK


def _load_certified_pair(args):
    spec, ctx, digest = _load_cone(args.cone)
    cert = read_certificate(args.cert)
    t = read_poly(args.poly, U=spec.U)
    if len(cert.x) != spec.U:
        raise ParseError(f"certificate has {len(cert.x)} components, cone has U={spec.U}")
    _check_digest(cert, digest)
    c = cert.c if cert.c is not None else Fraction(0)
    return ctx, cert, shift_by_constant(ctx, t, c), c, digest


def cmd_verify(args) -> int:
    ctx, cert, s, c, _ = _load_certified_pair(args)
    if not in_dual_interior(ctx, cert.x):
        print("❌ Certificate is not in the interior of the dual cone")
        return EXIT_REJECTED
    h = hessian(ctx, cert.x)
    blocks = lambda_apply(ctx.op, h.solve(s)).blocks
    verdicts = [is_psd(b) for b in blocks]
    for i, ok in enumerate(verdicts, 1):
        print(f"   block {i} ({blocks[i - 1].order}x{blocks[i - 1].order}): {'PSD' if ok else 'not PSD'}")
    if all(verdicts):
        print(f"✅ Certificate proves t - c*1 is WSOS for c = {c}")
        return EXIT_OK
    print(f"❌ Certificate does not prove the bound c = {c}")
    return EXIT_REJECTED


def cmd_gram(args) -> int:
    ctx, cert, s, c, digest = _load_certified_pair(args)
    if not in_dual_interior(ctx, cert.x):
        print("❌ Certificate is not in the interior of the dual cone")
        return EXIT_REJECTED
    dec = gram_recover(ctx, cert.x, s)
    residual = decomposition_residual(ctx, dec, s)
    if args.out:
        write_decomposition(dec, args.out, cone_digest=digest)
    nonzero = sum(1 for r in residual if r)
    print(f"   reconstruction residual: {'exactly zero' if not nonzero else f'{nonzero} nonzero coefficients'}")
    for i, (block, ok) in enumerate(zip(dec.gram_blocks, dec.psd_flags), 1):
        print(f"   Gram block {i} ({block.order}x{block.order}): {'PSD' if ok else 'not PSD'}")
    if nonzero:
        print("❌ Decomposition does not reproduce the polynomial")
        return EXIT_REJECTED
    if not dec.verified:
        print(f"❌ Some Gram blocks are not PSD; x does not certify c = {c}")
        return EXIT_NOT_PSD
    print(f"✅ WSOS decomposition of t - c*1 recovered for c = {c}")
    return EXIT_OK


def cmd_init(args) -> int:
    params = _params_from_args(args)
    spec, ctx, digest = _load_cone(args.cone)
    try:
        cert = _initial_certificate(ctx, spec, params, digest)
    except MaxIters as e:
        print(f"⚠️  {e}")
        return EXIT_MAX_ITERS
    except (InitNotValid, NotInterior, NotUnisolvent) as e:
        print(f"❌ Initialization failed: {e}")
        return EXIT_INIT
    write_certificate(cert, args.out)
    if not check_init_precondition(ctx, cert.x, params):
        print("❌ Written certificate fails the precondition check")
        return EXIT_INIT
    print(f"✅ Initial certificate written to {args.out} ({cert.iterations} iterations)")
    return EXIT_OK


def cmd_bound(args) -> int:
    report = bound_case_report(
        args.case,
        args.d,
        args.t_norm2_sq,
        eps=args.eps,
        tau=args.tau,
        mu=args.mu,
    )
    width = max(len(k) for k in report.as_dict())
    for key, value in report.as_dict().items():
        print(f"{key:<{width}}  {value}")
    print(f"{'bitsize_float':<{width}}  ~{float(report.bitsize_bound):.6g}")
    return EXIT_OK


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=_rational_arg, default=Fraction(1, 10 ** 6), help="Stop when the bound improves by at most this (default: 1/1000000).")
    p.add_argument("--r", type=_rational_arg, default=Fraction(1, 4), help="Radius r in (0, 1/4] (default: 1/4).")
    p.add_argument("--rn", type=_rational_arg, default=Fraction(1, 7), help="Rounding radius r_N (default: 1/7).")
    p.add_argument("--max-iters", type=int, default=200, dest="max_iters", help="Iteration limit (default: 200).")
    p.add_argument("--stop-mode", choices=STOP_MODES, default="delta_c", dest="stop_mode", help="Stopping rule (default: delta_c).")
    p.add_argument("--rho-c", type=_rational_arg, default=None, dest="rho_c", help="Convergence constant C for --stop-mode rho_C.")
    p.add_argument("--norm-bound", choices=NORM_BOUNDS, default="trace", dest="norm_bound", help="Upper bound on ||H^(1/2)|| used for N (default: trace).")
    p.add_argument("--tight-norm", action="store_true", dest="tight_norm", help="Shorthand for --norm-bound tight.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rational-wsos",
        description="Certified WSOS lower bounds with exact rational dual certificates.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log every iteration at DEBUG level.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="Compute a certified lower bound and its certificate.")
    p.add_argument("--cone", required=True, help="Cone file (JSON).")
    p.add_argument("--poly", required=True, help="Polynomial file (JSON).")
    p.add_argument("--out", required=True, help="Certificate output path.")
    p.add_argument("--trace", default=None, help="Per-iteration trace output path (JSON lines).")
    p.add_argument("--init", default=None, help="Initial certificate of the constant-one polynomial.")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    for name, func, help_text in (
        ("verify", cmd_verify, "Check a certificate exactly."),
        ("gram", cmd_gram, "Recover the Gram matrices of a WSOS decomposition."),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--cone", required=True, help="Cone file (JSON).")
        p.add_argument("--cert", required=True, help="Certificate file (JSON).")
        p.add_argument("--poly", required=True, help="Polynomial file (JSON).")
        if name == "gram":
            p.add_argument("--out", default=None, help="Decomposition output path.")
        p.set_defaults(func=func)

    p = sub.add_parser("init", help="Compute an initial certificate for the constant-one polynomial.")
    p.add_argument("--cone", required=True, help="Cone file (JSON).")
    p.add_argument("--out", required=True, help="Certificate output path.")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("bound", help="Evaluate the certificate bit-size bound for a standard case.")
    p.add_argument("--case", required=True, choices=["monomial-line", "chebyshev", "monomial-interval", "lagrange"])
    p.add_argument("--d", type=int, required=True, help="Degree parameter d.")
    p.add_argument("--t-norm2-sq", type=_rational_arg, required=True, dest="t_norm2_sq", help="Squared 2-norm of the coefficient vector of t.")
    p.add_argument("--eps", type=_rational_arg, default=None, help="Lower bound on the minimum of t over the domain.")
    p.add_argument("--tau", type=int, default=None, help="Coefficient bit size, used to derive --eps for the interval cases.")
    p.add_argument("--mu", type=_rational_arg, default=None, help="Interpolant shift mu (lagrange case).")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.verbose)

    try:
        return args.func(args)
    except DigestMismatch as e:
        print(f"❌ {e}")
        return EXIT_DIGEST
    except INPUT_ERRORS as e:
        print(f"❌ Invalid input: {e}")
        return EXIT_USAGE
    except (NotInterior, NotPD) as e:
        print(f"❌ {e}")
        return EXIT_REJECTED
    except WsosError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
