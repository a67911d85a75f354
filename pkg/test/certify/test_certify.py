#!/usr/bin/env python3
"""
Dual certificate checks and recovery of explicit WSOS decompositions.
"""

import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils import (
    DISK_T_REF,
    DISK_X1_REF,
    disk_setup,
    ref_to_grlex,
    rand_spd,
    random_interior_point,
    run_tests,
    set_seed,
    small_cones,
)

from rational_wsos.barrier import BarrierContext, hessian, neg_gradient
from rational_wsos.certify import (
    WsosDecomposition,
    decomposition_residual,
    gram_recover,
    is_dual_certificate,
    shift_by_constant,
    verify_decomposition,
)
from rational_wsos.exactarith import BlockDiagMatrix, SymMatrix
from rational_wsos.polybasis import lambda_adjoint


def test_disk_certificate_for_c0():
    print("\nTesting x1 certifies t + 39 on the disk")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    t = ref_to_grlex(DISK_T_REF)
    s = shift_by_constant(ctx, t, Fraction(-39))
    assert s == ref_to_grlex((39, 2, 3, -1, -6, 1))
    assert is_dual_certificate(ctx, x1, s)
    dec = gram_recover(ctx, x1, s)
    assert dec.gram_blocks[0] == SymMatrix.from_rows([
        [Fraction(121, 12), 1, Fraction(-1, 2)],
        [1, Fraction(383, 12), -3],
        [Fraction(-1, 2), -3, Fraction(359, 12)],
    ])
    assert dec.gram_blocks[1] == SymMatrix.from_rows([[Fraction(347, 12)]])
    assert dec.verified
    assert all(r == 0 for r in decomposition_residual(ctx, dec, s))
    assert verify_decomposition(ctx, dec, s)
    # certificates are invariant under positive scaling
    assert is_dual_certificate(ctx, tuple(v / 39 for v in x1), s)
    print("✓ Gram matrices match the hand computation")


def test_non_certificate():
    print("\nTesting a polynomial with a negative minimum is not certified")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    t = ref_to_grlex(DISK_T_REF)
    for c in (Fraction(0), Fraction(-1), Fraction(-17, 10)):
        s = shift_by_constant(ctx, t, c)
        assert not is_dual_certificate(ctx, x1, s)
        dec = gram_recover(ctx, x1, s)
        # the identity Lambda*(S) = s holds even when S is not PSD
        assert all(r == 0 for r in decomposition_residual(ctx, dec, s))
        assert not dec.verified
        assert not verify_decomposition(ctx, dec, s)
    print("✓ Gram blocks flagged non-PSD")


def test_gradient_certificate_gram_is_inverse():
    print("\nTesting s = -g(x) gives S = Lambda(x)^-1")
    print("=" * 60)
    rng = set_seed(30)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        x = random_interior_point(spec, rng)
        s = neg_gradient(ctx, x)
        assert is_dual_certificate(ctx, x, s)
        dec = gram_recover(ctx, x, s)
        assert dec.gram_blocks == hessian(ctx, x).lambda_inv.blocks
        assert verify_decomposition(ctx, dec, s)
    print("✓ inverse moment matrices are Gram matrices of -g(x)")


def test_gram_reproduces_any_polynomial():
    print("\nTesting Lambda*(S(x, s)) = s for arbitrary interior x")
    print("=" * 60)
    rng = set_seed(31)
    count = 0
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        for _ in range(5):
            x = random_interior_point(spec, rng)
            s = lambda_adjoint(ctx.op, BlockDiagMatrix(tuple(rand_spd(rng, n, 3) for n in ctx.op.L)))
            dec = gram_recover(ctx, x, s)
            assert all(r == 0 for r in decomposition_residual(ctx, dec, s))
            count += 1
    print(f"✓ exact reconstruction at {count} random points")


def test_tampered_decomposition():
    print("\nTesting verify_decomposition rejects edits")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    s = shift_by_constant(ctx, ref_to_grlex(DISK_T_REF), Fraction(-39))
    dec = gram_recover(ctx, x1, s)
    bumped = WsosDecomposition((dec.gram_blocks[0], dec.gram_blocks[1].shifted(-1)))
    assert bumped.verified
    assert not verify_decomposition(ctx, bumped, s)
    assert not verify_decomposition(ctx, WsosDecomposition(dec.gram_blocks[:1]), s)
    print("✓ residual and shape checks")


def test_certificates_closed_under_positive_scaling():
    print("\nTesting verdicts are invariant under x -> alpha x, s -> beta s")
    print("=" * 60)
    rng = set_seed(32)
    count = 0
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        for _ in range(4):
            x = random_interior_point(spec, rng)
            alpha = Fraction(rng.randint(1, 40), rng.randint(1, 40))
            beta = Fraction(rng.randint(1, 40), rng.randint(1, 40))
            scaled_x = tuple(alpha * v for v in x)
            s = neg_gradient(ctx, x)
            assert is_dual_certificate(ctx, scaled_x, tuple(beta * v for v in s))
            other = lambda_adjoint(ctx.op, BlockDiagMatrix(tuple(rand_spd(rng, n, 3) for n in ctx.op.L)))
            other = tuple(v - 8 * e for v, e in zip(other, ctx.one))
            verdict = is_dual_certificate(ctx, x, other)
            assert is_dual_certificate(ctx, scaled_x, tuple(beta * v for v in other)) == verdict
            count += 1
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    t = ref_to_grlex(DISK_T_REF)
    assert not is_dual_certificate(ctx, tuple(3 * v for v in x1), tuple(Fraction(1, 7) * v for v in t))
    print(f"✓ {count} random (alpha, beta) pairs")


def test_stale_hessian_rejected():
    print("\nTesting a Hessian from another point is refused")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    s = shift_by_constant(ctx, ref_to_grlex(DISK_T_REF), Fraction(-39))
    h = hessian(ctx, x1)
    assert is_dual_certificate(ctx, x1, s, h)
    other = tuple(2 * v for v in x1)
    with pytest.raises(ValueError):
        is_dual_certificate(ctx, other, s, h)
    with pytest.raises(ValueError):
        gram_recover(ctx, other, s, h)
    print("✓ mismatched Hessian raises")


def main():
    return run_tests([
        test_disk_certificate_for_c0,
        test_non_certificate,
        test_gradient_certificate_gram_is_inverse,
        test_gram_reproduces_any_polynomial,
        test_tampered_decomposition,
        test_certificates_closed_under_positive_scaling,
        test_stale_hessian_rejected,
    ])


if __name__ == "__main__":
    sys.exit(main())
