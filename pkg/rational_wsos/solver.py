"""
Rational-arithmetic lower bound solver

``algorithm1`` improves a certified lower bound c of a polynomial t over a
WSOS cone: each iteration takes a Newton step towards the gradient
certificate of t - c*1, rounds the step to a common denominator N chosen so
the rounded vector still certifies, solves a scalar quadratic for the next
bound, and picks the simplest rational in a safe sub-interval. Every
iterate is re-verified exactly.

``algorithm2`` produces the starting certificate: it drives x until
-g(x) is close to the constant-one polynomial in the local norm at x.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .barrier import (
    BarrierContext,
    HessianAt,
    dual_local_norm_sq,
    hessian,
    in_dual_interior,
    local_norm_sq,
    unit_boundary_direction,
)
from .bounds import MSpec, build_M
from .certify import Certificate, is_dual_certificate, shift_by_constant
from .config import get_max_sqrt_bits, get_sqrt_bits
from .errors import (
    DimensionMismatch,
    EmptyInterval,
    InitNotValid,
    MaxIters,
    NoRealRoot,
    NotInterior,
    NotUnisolvent,
    RoundingFailed,
)
from .exactarith import (
    RationalInterval,
    RationalLike,
    SymMatrix,
    as_rational,
    as_vector,
    bit_size,
    dot,
    is_psd,
    min_denominator_rational,
    round_nearest,
    sqrt_ceil,
    sqrt_interval,
    vec_scale,
    vec_sub,
)
from .polybasis import ConeSpec, Node, basis_values, build_lambda, evaluate, lambda_adjoint, lambda_apply

__all__ = [
    "NORM_BOUNDS",
    "STOP_MODES",
    "SolverParams",
    "IterationRecord",
    "IterationTrace",
    "BoundUpdate",
    "SolveResult",
    "newton_step",
    "rounding_denominator",
    "round_certificate",
    "c_update",
    "round_c",
    "initial_bound",
    "check_init_precondition",
    "algorithm1",
    "algorithm2",
    "default_interior_point",
]

logger = logging.getLogger(__name__)

NORM_BOUNDS = ("trace", "frobenius", "tight")
STOP_MODES = ("delta_c", "rho_C")


@dataclass(frozen=True)
class SolverParams:
    """Radii, stopping rule and rounding options.

    r must lie in (0, 1/4] and r_N strictly between r^2/(1-2r) and r/(1+2r).
    """

    r: Fraction = Fraction(1, 4)
    r_N: Fraction = Fraction(1, 7)
    tolerance: Fraction = Fraction(1, 10 ** 6)
    max_iters: int = 200
    stop_mode: str = "delta_c"
    rho_c_constant: Optional[Fraction] = None
    norm_bound: str = "trace"
    sqrt_bits: int = field(default_factory=get_sqrt_bits)
    root_bits: int = 32

    def __post_init__(self):
        r, r_N = as_rational(self.r), as_rational(self.r_N)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "r_N", r_N)
        object.__setattr__(self, "tolerance", as_rational(self.tolerance))
        if not (0 < r <= Fraction(1, 4)):
            raise ValueError(f"r must lie in (0, 1/4], got {r}")
        if not (r * r / (1 - 2 * r) < r_N < r / (1 + 2 * r)):
            raise ValueError(f"r_N={r_N} outside the window ({r * r / (1 - 2 * r)}, {r / (1 + 2 * r)}) for r={r}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.stop_mode not in STOP_MODES:
            raise ValueError(f"stop_mode must be one of {STOP_MODES}, got {self.stop_mode!r}")
        if self.stop_mode == "rho_C":
            if self.rho_c_constant is None or as_rational(self.rho_c_constant) <= 0:
                raise ValueError("stop_mode rho_C needs a positive rho_c_constant")
            object.__setattr__(self, "rho_c_constant", as_rational(self.rho_c_constant))
        if self.norm_bound not in NORM_BOUNDS:
            raise ValueError(f"norm_bound must be one of {NORM_BOUNDS}, got {self.norm_bound!r}")
        if self.sqrt_bits < 1 or self.root_bits < 1:
            raise ValueError("enclosure precisions must be >= 1")

    @property
    def target_radius(self) -> Fraction:
        """r/(r+1), the local-norm radius the bound update aims for."""
        return self.r / (self.r + 1)

    @property
    def kappa(self) -> Fraction:
        return (1 + self.r_N) / (self.r_N - self.r * self.r / (1 - 2 * self.r))

    @property
    def rho(self) -> Fraction:
        return self.target_radius - self.r_N / (1 - self.r_N)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    c: Fraction
    delta_c: Fraction
    N: int
    max_bits_x: int
    verified: bool

    def as_dict(self) -> Dict[str, object]:
        return {
            "iter": self.iteration,
            "c": str(self.c),
            "delta_c": str(self.delta_c),
            "N": str(self.N),
            "max_bits_x": self.max_bits_x,
            "verified": self.verified,
        }


@dataclass
class IterationTrace:
    records: List[IterationRecord] = field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def c_values(self) -> List[Fraction]:
        return [rec.c for rec in self.records]

    def is_increasing(self) -> bool:
        cs = self.c_values()
        return all(a < b for a, b in zip(cs, cs[1:]))


@dataclass(frozen=True)
class BoundUpdate:
    """Quadratic A + B c + C c^2 = 0 for the next bound, and its larger root."""

    interval: RationalInterval
    quad: Tuple[Fraction, Fraction, Fraction]
    hessian: HessianAt
    h_t: Tuple[Fraction, ...]
    h_one: Tuple[Fraction, ...]

    def value(self, c: Fraction) -> Fraction:
        A, B, C = self.quad
        return A + B * c + C * c * c


class SolveResult(NamedTuple):
    c: Fraction
    certificate: Certificate
    trace: IterationTrace


def _check_len(ctx: BarrierContext, v: Sequence, what: str) -> None:
    if len(v) != ctx.U:
        raise DimensionMismatch(f"{what} of length {len(v)} for U={ctx.U}")


def newton_step(
    ctx: BarrierContext,
    x: Sequence[Fraction],
    t: Sequence[Fraction],
    c: Fraction,
    h: Optional[HessianAt] = None,
) -> Tuple[Fraction, ...]:
    """x+ = 2x - H(x)^-1 (t - c*1)."""
    x = as_vector(x)
    _check_len(ctx, x, "dual vector")
    if h is None:
        if not in_dual_interior(ctx, x):
            raise NotInterior("Newton step from a point outside the dual interior")
        h = hessian(ctx, x)
    step = h.solve(shift_by_constant(ctx, t, as_rational(c)))
    return tuple(2 * xi - si for xi, si in zip(x, step))


def rounding_denominator(h: HessianAt, params: SolverParams) -> int:
    """Smallest denominator allowed by the chosen upper bound on ||H^(1/2)||."""
    U = h.H.order
    kappa_sq = params.kappa ** 2
    trace_N = sqrt_ceil(U * kappa_sq * h.H.trace() / 4)
    if params.norm_bound == "trace":
        return trace_N
    if params.norm_bound == "frobenius":
        return sqrt_ceil(sqrt_ceil(Fraction(U * U) * kappa_sq * kappa_sq * h.H.frobenius_sq() / 16))

    # tight: smallest n with lambda_max(H) <= 4 n^2 / (U kappa^2)
    def large_enough(n: int) -> bool:
        return is_psd(SymMatrix.identity(U, Fraction(4 * n * n) / (U * kappa_sq)) - h.H)

    lo, hi = 1, trace_N
    while lo < hi:
        mid = (lo + hi) // 2
        if large_enough(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def round_certificate(
    ctx: BarrierContext,
    x_plus: Sequence[Fraction],
    params: SolverParams,
    h_plus: Optional[HessianAt] = None,
) -> Tuple[Tuple[Fraction, ...], int]:
    """Round x+ componentwise to the grid (1/N)Z^U, ties toward +infinity."""
    x_plus = as_vector(x_plus)
    if h_plus is None:
        if not in_dual_interior(ctx, x_plus):
            raise NotInterior("rounding a point outside the dual interior")
        h_plus = hessian(ctx, x_plus)
    N = rounding_denominator(h_plus, params)
    x_N = tuple(round_nearest(v, N) for v in x_plus)
    if not in_dual_interior(ctx, x_N):
        raise RoundingFailed(f"rounding to denominator {N} left the dual interior")
    return x_N, N


def _root_sqrt_bits(C: Fraction, params: SolverParams, bits: Optional[int]) -> int:
    if bits is not None:
        return bits
    two_c = 2 * C
    # widen the precision when dividing by a small 2C
    extra = max(0, two_c.denominator.bit_length() - two_c.numerator.bit_length() + 1)
    return max(params.sqrt_bits, params.root_bits + extra)


def c_update(
    ctx: BarrierContext,
    x_N: Sequence[Fraction],
    t: Sequence[Fraction],
    c: Fraction,
    params: SolverParams,
    mode: str = "alg1",
    h: Optional[HessianAt] = None,
    bits: Optional[int] = None,
) -> BoundUpdate:
    """Quadratic for c+ with ||x_N - H(x_N)^-1 p(c+)||_{x_N} = r/(r+1).

    p(c) is t - c*1 in mode alg1 and t + c*1 in mode alg2.
    """
    if mode not in ("alg1", "alg2"):
        raise ValueError(f"mode must be alg1 or alg2, got {mode!r}")
    x_N = as_vector(x_N)
    _check_len(ctx, x_N, "dual vector")
    if h is None:
        if not in_dual_interior(ctx, x_N):
            raise NotInterior("bound update at a point outside the dual interior")
        h = hessian(ctx, x_N)
    sigma = 1 if mode == "alg1" else -1
    h_t = h.solve(as_vector(t))
    h_one = h.solve(ctx.one)
    u = vec_sub(x_N, h_t)
    A = local_norm_sq(h, u) - params.target_radius ** 2
    B = 2 * sigma * dot(u, ctx.one)
    C = dot(ctx.one, h_one)
    disc = B * B - 4 * A * C
    if disc < 0:
        raise NoRealRoot(f"negative discriminant {disc} in the bound update")
    root = sqrt_interval(disc, _root_sqrt_bits(C, params, bits))
    interval = RationalInterval((-B + root.lo) / (2 * C), (-B + root.hi) / (2 * C))
    return BoundUpdate(interval, (A, B, C), h, h_t, h_one)


def round_c(
    c: Fraction,
    c_plus_interval: RationalInterval,
    mode: str = "alg1",
    quad: Optional[Tuple[Fraction, Fraction, Fraction]] = None,
) -> Fraction:
    """Simplest rational in the safe part of the target interval for the next bound."""
    c = as_rational(c)
    if mode == "alg1":
        lo = c + (c_plus_interval.hi - c) / 2
        hi = c_plus_interval.lo
    elif mode == "alg2":
        lo = c + (c_plus_interval.hi - c) / 2
        hi = c + 2 * (c_plus_interval.lo - c) / 3
    else:
        raise ValueError(f"mode must be alg1 or alg2, got {mode!r}")
    if lo > hi:
        raise EmptyInterval(f"target interval [{lo}, {hi}] is empty at this enclosure precision")
    c_new = min_denominator_rational(RationalInterval(lo, hi))
    if quad is not None:
        A, B, C = quad
        if A + B * c_new + C * c_new * c_new > 0:
            raise EmptyInterval(f"chosen bound {c_new} fails the quadratic check")
    return c_new


def _bound_step(
    ctx: BarrierContext,
    x_N: Tuple[Fraction, ...],
    t: Sequence[Fraction],
    c: Fraction,
    params: SolverParams,
    mode: str,
) -> Tuple[BoundUpdate, Fraction]:
    h = hessian(ctx, x_N)
    bits = None
    ceiling = get_max_sqrt_bits()
    while True:
        update = c_update(ctx, x_N, t, c, params, mode=mode, h=h, bits=bits)
        try:
            return update, round_c(c, update.interval, mode, update.quad)
        except EmptyInterval:
            current = _root_sqrt_bits(update.quad[2], params, bits)
            if current >= ceiling:
                raise
            bits = min(2 * current, ceiling)
            logger.debug(f"retrying bound update with {bits} sqrt bits")


def _max_bits(x: Sequence[Fraction]) -> int:
    return max((bit_size(v) for v in x), default=0)


def initial_bound(t_norm_sq: Fraction, dist_sq: Fraction, params: SolverParams) -> Fraction:
    """Integer c0 <= -||t||*_x / (r/(r+1) - ||-g(x) - 1||*_x), from squared norms."""
    radius = params.target_radius
    if dist_sq >= radius * radius:
        raise InitNotValid("initial certificate is not strictly inside the required radius")
    bits = params.sqrt_bits
    while True:
        g_hi = sqrt_interval(dist_sq, bits).hi
        if g_hi < radius:
            break
        bits *= 2
    t_hi = sqrt_interval(t_norm_sq, bits).hi
    c0 = math.floor(-t_hi / (radius - g_hi))
    return Fraction(min(c0, -1))


def check_init_precondition(ctx: BarrierContext, x: Sequence[Fraction], params: SolverParams) -> bool:
    """||-g(x) - 1||*_x <= r/(r+1), compared on squares."""
    x = as_vector(x)
    if not in_dual_interior(ctx, x):
        return False
    h = hessian(ctx, x)
    residual = vec_sub(lambda_adjoint(ctx.op, h.lambda_inv), ctx.one)
    return dual_local_norm_sq(h, residual) <= params.target_radius ** 2


def _certifies_shift(ctx: BarrierContext, update: BoundUpdate, c: Fraction) -> bool:
    # H^-1 (t - c 1) = H^-1 t - c H^-1 1
    w = tuple(a - c * b for a, b in zip(update.h_t, update.h_one))
    return all(is_psd(block) for block in lambda_apply(ctx.op, w).blocks)


def algorithm1(
    ctx: BarrierContext,
    t: Sequence[RationalLike],
    params: SolverParams,
    x_init: Sequence[RationalLike],
    cone_digest: str = "",
) -> SolveResult:
    """Certified lower bound of t with a rational dual certificate."""
    t = as_vector(t)
    x = as_vector(x_init)
    _check_len(ctx, t, "polynomial")
    _check_len(ctx, x, "initial certificate")
    if not in_dual_interior(ctx, x):
        raise InitNotValid("initial certificate is not in the dual interior")
    h = hessian(ctx, x)
    residual = vec_sub(lambda_adjoint(ctx.op, h.lambda_inv), ctx.one)
    dist_sq = dual_local_norm_sq(h, residual)
    if dist_sq > params.target_radius ** 2:
        raise InitNotValid(f"||-g(x) - 1||*_x^2 = {dist_sq} exceeds {params.target_radius ** 2}")
    c = initial_bound(dual_local_norm_sq(h, t), dist_sq, params)
    x = vec_scale(-1 / c, x)
    h = hessian(ctx, x)
    if not all(is_psd(b) for b in lambda_apply(ctx.op, h.solve(shift_by_constant(ctx, t, c))).blocks):
        raise InitNotValid(f"scaled initial certificate does not certify the bound {c}")
    logger.info(f"initial bound c0 = {c}")

    trace = IterationTrace()
    N = None
    for k in range(1, params.max_iters + 1):
        x_plus = newton_step(ctx, x, t, c, h)
        x_N, N = round_certificate(ctx, x_plus, params, hessian(ctx, x_plus))
        update, c_new = _bound_step(ctx, x_N, t, c, params, "alg1")
        if not _certifies_shift(ctx, update, c_new):
            raise RoundingFailed(f"iteration {k}: x_N does not certify the bound {c_new}")
        delta = c_new - c
        c, x, h = c_new, x_N, update.hessian
        record = IterationRecord(k, c, delta, N, _max_bits(x), True)
        trace.append(record)
        logger.debug(f"iter {k}: c={c} (~{float(c):.12g}), delta_c~{float(delta):.3g}, N={N}, bits={record.max_bits_x}")
        if params.stop_mode == "delta_c":
            done = delta <= params.tolerance
        else:
            done = delta <= params.rho * params.rho_c_constant * params.tolerance / 2
        if done:
            break
    else:
        cert = Certificate(x, c, N, cone_digest, True, iterations=params.max_iters)
        raise MaxIters(
            f"no convergence within {params.max_iters} iterations (last delta_c ~{float(trace.records[-1].delta_c):.3g})",
            result=SolveResult(c, cert, trace),
        )

    verified = is_dual_certificate(ctx, x, shift_by_constant(ctx, t, c), h)
    logger.info(f"finished after {len(trace)} iterations: c = {c} (~{float(c):.12g}), verified={verified}")
    return SolveResult(c, Certificate(x, c, N, cone_digest, verified, iterations=len(trace)), trace)


def algorithm2(
    ctx: BarrierContext,
    x0: Sequence[RationalLike],
    params: SolverParams,
    cone_digest: str = "",
) -> Certificate:
    """Certificate y with ||-g(y) - 1||*_y <= r/(r+1), starting from any interior x0."""
    x = as_vector(x0)
    _check_len(ctx, x, "starting point")
    direction = unit_boundary_direction(ctx)
    if direction is not None:
        v = ", ".join(str(e) for e in direction)
        raise InitNotValid(f"constant polynomial 1 is not interior to the cone (leading form along ({v}) is a dual vector orthogonal to 1)")
    if not in_dual_interior(ctx, x):
        raise NotInterior("starting point is not in the dual interior")
    h = hessian(ctx, x)
    s = lambda_adjoint(ctx.op, h.lambda_inv)
    radius_sq = params.target_radius ** 2
    c = Fraction(0)
    N = None
    for k in range(1, params.max_iters + 1):
        # Newton step for s + c*1
        x_plus = newton_step(ctx, x, s, -c, h)
        x_N, N = round_certificate(ctx, x_plus, params, hessian(ctx, x_plus))
        update, c = _bound_step(ctx, x_N, s, c, params, "alg2")
        x, h = x_N, update.hessian
        residual = vec_sub(lambda_adjoint(ctx.op, h.lambda_inv), vec_scale(c, ctx.one))
        dist_sq = dual_local_norm_sq(h, residual)
        logger.debug(f"init iter {k}: c={c}, squared distance {float(dist_sq):.4g}")
        if dist_sq <= radius_sq:
            y = vec_scale(c, x)
            verified = check_init_precondition(ctx, y, params)
            logger.info(f"initial certificate found after {k} iterations (c = {c})")
            return Certificate(y, None, N, cone_digest, verified, iterations=k)
    raise MaxIters(f"initialization did not finish within {params.max_iters} iterations")


def _default_points(spec: ConeSpec) -> Tuple[Node, ...]:
    D = spec.q_basis.degree + 1
    steps = [Fraction(k, 2 * D) for k in range(-D, D + 1)]
    points: List[Node] = [()]
    for _ in range(spec.n):
        points = [p + (v,) for p in points for v in steps]
    return tuple(points)


def default_interior_point(
    spec: ConeSpec,
    points: Optional[Sequence[Sequence[RationalLike]]] = None,
    ctx: Optional[BarrierContext] = None,
) -> Tuple[Fraction, ...]:
    """x = sum q(z_i) over sample points of the domain."""
    if points is not None:
        pts = tuple(tuple(as_vector(p)) if isinstance(p, (list, tuple)) else (as_rational(p),) for p in points)
    elif spec.points is not None:
        pts = spec.points
    else:
        pts = _default_points(spec)
    if len(set(pts)) != len(pts):
        raise NotUnisolvent("sample points contain duplicates")
    inside = [z for z in pts if all(evaluate(w, z) >= 0 for w in spec.weights)]
    if len(inside) < len(pts):
        logger.warning(f"dropped {len(pts) - len(inside)} sample points outside the domain")
    if not inside:
        raise NotUnisolvent("no sample point lies in the domain")
    # raises NotUnisolvent unless sum q(z) q(z)^T is positive definite
    build_M(spec.q_basis, MSpec(tuple(inside)))
    if ctx is None:
        ctx = BarrierContext.from_op(build_lambda(spec))
    x = [Fraction(0)] * spec.U
    for z in inside:
        for u, v in enumerate(basis_values(spec.q_basis, z)):
            x[u] += v
    x = tuple(x)
    if not in_dual_interior(ctx, x):
        raise NotUnisolvent("sample points do not give an interior dual vector")
    return x
