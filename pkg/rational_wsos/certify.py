"""
Dual certificate checks and WSOS decomposition recovery

x certifies s when H(x)^-1 s lies in the dual cone, i.e. Lambda(H(x)^-1 s)
is PSD blockwise. The Gram matrices of an explicit decomposition are then
S_i = Lambda_i(x)^-1 Lambda_i(H(x)^-1 s) Lambda_i(x)^-1, and
Lambda*(S) = s holds for every interior x whether or not x certifies s.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .barrier import BarrierContext, HessianAt, hessian, in_dual_interior
from .errors import DimensionMismatch, NotInterior
from .exactarith import BlockDiagMatrix, SymMatrix, as_vector, is_psd, sandwich, vec_sub
from .polybasis import lambda_adjoint, lambda_apply

__all__ = [
    "Certificate",
    "WsosDecomposition",
    "shift_by_constant",
    "is_dual_certificate",
    "gram_recover",
    "decomposition_residual",
    "verify_decomposition",
]


@dataclass(frozen=True)
class Certificate:
    """A dual vector with the bound it certifies and the cone it belongs to."""

    x: Tuple[Fraction, ...]
    c: Optional[Fraction] = None
    N: Optional[int] = None
    cone_digest: str = ""
    verified: bool = False
    iterations: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x))
        if self.N is not None and self.N < 1:
            raise ValueError(f"rounding denominator must be positive, got {self.N}")


@dataclass(frozen=True)
class WsosDecomposition:
    """Gram blocks S_1..S_m with their PSD verdicts."""

    gram_blocks: Tuple[SymMatrix, ...]
    psd_flags: Tuple[bool, ...] = ()

    def __post_init__(self):
        blocks = tuple(self.gram_blocks)
        object.__setattr__(self, "gram_blocks", blocks)
        if not self.psd_flags:
            object.__setattr__(self, "psd_flags", tuple(is_psd(b) for b in blocks))

    @property
    def verified(self) -> bool:
        return all(self.psd_flags)

    def as_block_diag(self) -> BlockDiagMatrix:
        return BlockDiagMatrix(self.gram_blocks)


def shift_by_constant(ctx: BarrierContext, t: Sequence[Fraction], c: Fraction) -> Tuple[Fraction, ...]:
    """Coefficients of t - c*1 in the cone's q basis."""
    t = as_vector(t)
    if len(t) != ctx.U:
        raise DimensionMismatch(f"polynomial of length {len(t)} for U={ctx.U}")
    return vec_sub(t, tuple(c * e for e in ctx.one))


def _hessian_for(ctx: BarrierContext, x: Sequence[Fraction], h: Optional[HessianAt]) -> HessianAt:
    if h is not None:
        if h.x != tuple(x):
            raise ValueError("Hessian was assembled at a different point than x")
        return h
    if not in_dual_interior(ctx, x):
        raise NotInterior("x is not in the interior of the dual cone")
    return hessian(ctx, x)


def is_dual_certificate(
    ctx: BarrierContext, x: Sequence[Fraction], s: Sequence[Fraction], h: Optional[HessianAt] = None
) -> bool:
    """True iff Lambda(H(x)^-1 s) is PSD on every block."""
    h = _hessian_for(ctx, as_vector(x), h)
    w = h.solve(s)
    return all(is_psd(block) for block in lambda_apply(ctx.op, w).blocks)


def gram_recover(
    ctx: BarrierContext, x: Sequence[Fraction], s: Sequence[Fraction], h: Optional[HessianAt] = None
) -> WsosDecomposition:
    h = _hessian_for(ctx, as_vector(x), h)
    w = lambda_apply(ctx.op, h.solve(s))
    blocks = tuple(sandwich(Y, A) for Y, A in zip(h.lambda_inv.blocks, w.blocks))
    return WsosDecomposition(blocks)


def decomposition_residual(
    ctx: BarrierContext, dec: WsosDecomposition, s: Sequence[Fraction]
) -> Tuple[Fraction, ...]:
    """Lambda*(S) - s; all zeros for an exact decomposition."""
    return vec_sub(lambda_adjoint(ctx.op, dec.as_block_diag()), as_vector(s))


def verify_decomposition(ctx: BarrierContext, dec: WsosDecomposition, s: Sequence[Fraction]) -> bool:
    if tuple(b.order for b in dec.gram_blocks) != ctx.op.L or len(s) != ctx.U:
        return False
    if any(r != 0 for r in decomposition_residual(ctx, dec, s)):
        return False
    return all(is_psd(b) for b in dec.gram_blocks)
