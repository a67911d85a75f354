"""
Log-det barrier of the dual WSOS cone

f(x) = -ln det Lambda(x) is never evaluated on the certification path; the
solver only needs the exact gradient and Hessian

    -g(x) = Lambda*(Lambda(x)^-1)
    H(x) v = Lambda*(Lambda(x)^-1 Lambda(v) Lambda(x)^-1)

together with the squared local norms they induce. ``barrier_value_interval``
encloses f(x) with mpmath interval logarithms for consistency checks.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from mpmath import libmp

from .errors import DimensionMismatch, NotFactorable, NotInterior, NotPD
from .exactarith import (
    BlockDiagMatrix,
    LDLFactor,
    RationalInterval,
    SymMatrix,
    as_rational,
    as_vector,
    dot,
    is_pd,
    is_psd,
    ldl_factor,
    sandwich,
)
from .polybasis import ConeSpec, LambdaOp, Node, build_lambda, lambda_adjoint, lambda_apply, leading_form

__all__ = [
    "BarrierContext",
    "HessianAt",
    "in_dual_interior",
    "neg_gradient",
    "hessian",
    "local_norm_sq",
    "dual_local_norm_sq",
    "unit_boundary_direction",
    "log_enclosure",
    "barrier_value_interval",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BarrierContext:
    """A Lambda operator together with its barrier parameter nu = sum L_i."""

    op: LambdaOp
    nu: int

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError(f"barrier parameter must be >= 1, got {self.nu}")
        if self.nu != self.op.nu:
            raise ValueError(f"barrier parameter {self.nu} does not match sum of block sizes {self.op.nu}")

    @classmethod
    def from_op(cls, op: LambdaOp) -> "BarrierContext":
        return cls(op, op.nu)

    @classmethod
    def from_spec(cls, spec: ConeSpec) -> "BarrierContext":
        return cls.from_op(build_lambda(spec))

    @property
    def U(self) -> int:
        return self.op.U

    @property
    def one(self) -> Tuple[Fraction, ...]:
        return self.op.one


@dataclass(frozen=True)
class HessianAt:
    """H(x) with its factorization and the blockwise inverse of Lambda(x)."""

    x: Tuple[Fraction, ...]
    H: SymMatrix
    lambda_inv: BlockDiagMatrix
    factor: LDLFactor

    def solve(self, s: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """H(x)^-1 s."""
        return self.factor.solve(as_vector(s))

    def apply(self, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return self.H.matvec(as_vector(v))


def _check_dim(ctx: BarrierContext, x: Sequence) -> None:
    if len(x) != ctx.U:
        raise DimensionMismatch(f"dual vector of length {len(x)} for U={ctx.U}")


def _factor_blocks(ctx: BarrierContext, x: Sequence[Fraction]) -> List[LDLFactor]:
    factors = []
    for i, block in enumerate(lambda_apply(ctx.op, x).blocks):
        try:
            factor = ldl_factor(block)
        except NotFactorable:
            raise NotInterior(f"Lambda_{i + 1}(x) is not positive definite")
        if any(d <= 0 for d in factor.D):
            raise NotInterior(f"Lambda_{i + 1}(x) is not positive definite")
        factors.append(factor)
    return factors


def _lambda_inverse(ctx: BarrierContext, x: Sequence[Fraction]) -> BlockDiagMatrix:
    return BlockDiagMatrix(tuple(f.inverse() for f in _factor_blocks(ctx, x)))


def in_dual_interior(ctx: BarrierContext, x: Sequence[Fraction]) -> bool:
    _check_dim(ctx, x)
    return all(is_pd(block) for block in lambda_apply(ctx.op, as_vector(x)).blocks)


def neg_gradient(ctx: BarrierContext, x: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Exact -g(x) = Lambda*(Lambda(x)^-1)."""
    _check_dim(ctx, x)
    return lambda_adjoint(ctx.op, _lambda_inverse(ctx, as_vector(x)))


def hessian(ctx: BarrierContext, x: Sequence[Fraction]) -> HessianAt:
    """Assemble H(x) column by column: column u is Lambda*(Y Lambda(e_u) Y)."""
    _check_dim(ctx, x)
    x = as_vector(x)
    inv = _lambda_inverse(ctx, x)
    columns = []
    for images in ctx.op.unit_images:
        blocks = tuple(sandwich(Y, A) for Y, A in zip(inv.blocks, images))
        columns.append(lambda_adjoint(ctx.op, BlockDiagMatrix(blocks)))
    H = SymMatrix.from_function(ctx.U, lambda u, v: columns[v][u])
    try:
        factor = ldl_factor(H)
    except NotFactorable:
        raise NotPD("Hessian is singular; the Lambda map is not injective")
    if any(d <= 0 for d in factor.D):
        raise NotPD("Hessian is singular; the Lambda map is not injective")
    return HessianAt(x, H, inv, factor)


def local_norm_sq(h: HessianAt, v: Sequence[Fraction]) -> Fraction:
    """Squared local norm v^T H(x) v."""
    if len(v) != h.H.order:
        raise DimensionMismatch(f"vector of length {len(v)} for U={h.H.order}")
    return h.H.quad_form(as_vector(v))


def dual_local_norm_sq(h: HessianAt, s: Sequence[Fraction]) -> Fraction:
    """Squared dual local norm s^T H(x)^-1 s."""
    if len(s) != h.H.order:
        raise DimensionMismatch(f"vector of length {len(s)} for U={h.H.order}")
    s = as_vector(s)
    return dot(s, h.solve(s))


def log_enclosure(q: Fraction, prec: int = 128) -> RationalInterval:
    """Rational interval containing ln(q), from mpmath's outward-rounded logarithm."""
    q = as_rational(q)
    if q <= 0:
        raise ValueError(f"logarithm of non-positive value {q}")
    lo = libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_floor)
    hi = libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_ceiling)
    a, b = libmp.mpi_log((lo, hi), prec)
    return RationalInterval(Fraction(*libmp.to_rational(a)), Fraction(*libmp.to_rational(b)))


def barrier_value_interval(ctx: BarrierContext, x: Sequence[Fraction], prec: int = 128) -> RationalInterval:
    """Enclosure of f(x) = -ln det Lambda(x) built from the exact determinant."""
    _check_dim(ctx, x)
    det = Fraction(1)
    for factor in _factor_blocks(ctx, as_vector(x)):
        det *= factor.determinant()
    enclosure = log_enclosure(det, prec)
    return RationalInterval(-enclosure.hi, -enclosure.lo)


def _candidate_directions(n: int) -> List[Node]:
    dirs = []
    for j in range(n):
        e = tuple(Fraction(1 if k == j else 0) for k in range(n))
        dirs += [e, tuple(-v for v in e)]
    if n > 1:
        dirs += [(Fraction(1),) * n, (Fraction(-1),) * n]
    return dirs


def unit_boundary_direction(ctx: BarrierContext) -> Optional[Node]:
    """A direction v whose leading-form functional shows 1 is not interior, or None.

    For v with x = leading_form(q, v) nonzero and Lambda(x) PSD, x lies in
    the dual cone and <1, x> = 0, so 1 sits on the boundary of the cone.
    Only coordinate and diagonal directions are tried: None is not a proof
    that 1 is interior.
    """
    basis = ctx.op.q_basis
    if basis is None or basis.degree == 0:
        return None
    for v in _candidate_directions(basis.n):
        x = leading_form(basis, v)
        if not any(x) or dot(ctx.one, x) > 0:
            continue
        if all(is_psd(block) for block in lambda_apply(ctx.op, x).blocks):
            logger.debug(f"leading form along {v} is a dual vector orthogonal to 1")
            return v
    return None
