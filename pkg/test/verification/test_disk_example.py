#!/usr/bin/env python3
"""
End-to-end check on the unit disk: t = 2 z1 + 3 z1^2 - z2 - 6 z1 z2 + z2^2.

The first iteration is compared against hand-computed values; the long run
checks that the certified bound approaches the true minimum from below.
"""

import os
import sys
from fractions import Fraction

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils import DISK_C_STAR, DISK_T_REF, DISK_X1_REF, DISK_X_N, DISK_X_PLUS, disk_setup, log, ref_to_grlex, run_tests

from rational_wsos.certify import gram_recover, is_dual_certificate, shift_by_constant, verify_decomposition
from rational_wsos.errors import MaxIters
from rational_wsos.exactarith import SymMatrix, vec_scale
from rational_wsos.solver import SolverParams, algorithm1, c_update, newton_step, round_c, round_certificate

# Quadratic for the first bound update, up to a positive factor.
FIRST_QUAD = (29387195615576, 1508777838050, 19170557325)
# c after 200 iterations with the Frobenius bound
C_200 = Fraction(-596606, 349365)


def _frobenius(**kwargs):
    return SolverParams(norm_bound="frobenius", tolerance=Fraction(1, 10 ** 40), **kwargs)


def test_first_iteration():
    print("\nTesting the first iteration step by step")
    print("=" * 60)
    spec, ctx = disk_setup()
    t = ref_to_grlex(DISK_T_REF)
    params = _frobenius()
    x = vec_scale(Fraction(1, 39), ref_to_grlex(DISK_X1_REF))
    x_plus = newton_step(ctx, x, t, Fraction(-39))
    assert x_plus == DISK_X_PLUS
    x_N, N = round_certificate(ctx, x_plus, params)
    assert N == 5029
    assert x_N == DISK_X_N
    # the tight norm bound rounds on a smaller grid
    assert round_certificate(ctx, x_plus, SolverParams(norm_bound="tight"))[1] == 4530
    update = c_update(ctx, x_N, t, Fraction(-39), params)
    A, B, C = update.quad
    assert A / C == Fraction(FIRST_QUAD[0], FIRST_QUAD[2])
    assert B / C == Fraction(FIRST_QUAD[1], FIRST_QUAD[2])
    log("root interval", update.interval)
    assert Fraction(-355, 10) < update.interval.lo <= update.interval.hi < Fraction(-353, 10)
    assert update.interval.width <= Fraction(1, 2 ** 32)
    assert update.value(update.interval.lo) <= 0 <= update.value(update.interval.hi)
    c1 = round_c(Fraction(-39), update.interval, "alg1", update.quad)
    assert c1 == -36
    print("✓ N = 5029, c1 = -36")


def test_gram_after_first_iteration():
    print("\nTesting the Gram matrices certifying t + 36")
    print("=" * 60)
    spec, ctx = disk_setup()
    s = shift_by_constant(ctx, ref_to_grlex(DISK_T_REF), Fraction(-36))
    assert is_dual_certificate(ctx, DISK_X_N, s)
    # the blocks below come from the Newton iterate before rounding
    assert is_dual_certificate(ctx, DISK_X_PLUS, s)
    dec = gram_recover(ctx, DISK_X_PLUS, s)
    d = 344769
    s1, s2, s3, s4 = (Fraction(v, d) for v in (3203164, 10242827, 9553289, 9208520))
    assert dec.gram_blocks[0] == SymMatrix.from_rows([[s1, 1, Fraction(-1, 2)], [1, s2, -3], [Fraction(-1, 2), -3, s3]])
    assert dec.gram_blocks[1] == SymMatrix.from_rows([[s4]])
    assert verify_decomposition(ctx, dec, s)
    print("✓ explicit WSOS decomposition of t + 36")


def test_algorithm1_first_iterate_matches():
    print("\nTesting algorithm1 reproduces the first iterate")
    print("=" * 60)
    spec, ctx = disk_setup()
    t = ref_to_grlex(DISK_T_REF)
    params = _frobenius(max_iters=1)
    with pytest.raises(MaxIters) as excinfo:
        algorithm1(ctx, t, params, ref_to_grlex(DISK_X1_REF))
    result = excinfo.value.result
    assert result.c == -36
    assert result.certificate.x == DISK_X_N
    assert result.certificate.N == 5029
    rec = result.trace.records[0]
    assert (rec.iteration, rec.c, rec.delta_c, rec.N) == (1, -36, 3, 5029)
    assert rec.as_dict()["c"] == "-36"
    print("✓ trace record matches")


@pytest.mark.slow
def test_two_hundred_iterations():
    print("\nTesting 200 iterations approach the true minimum")
    print("=" * 60)
    spec, ctx = disk_setup()
    t = ref_to_grlex(DISK_T_REF)
    params = _frobenius(max_iters=200)
    try:
        result = algorithm1(ctx, t, params, ref_to_grlex(DISK_X1_REF))
    except MaxIters as e:
        result = e.result
    c = result.c
    log("c after 200 iterations", c)
    assert len(result.trace) == 200
    assert c == C_200
    assert float(c) <= DISK_C_STAR + 1e-10
    assert float(c) >= DISK_C_STAR - 1e-9
    assert result.trace.is_increasing()
    assert is_dual_certificate(ctx, result.certificate.x, shift_by_constant(ctx, t, c))
    # linear convergence of the gap
    gaps = [DISK_C_STAR - float(v) for v in result.trace.c_values()]
    assert gaps[50] <= gaps[0] * 0.97 ** 50
    for rec in result.trace:
        assert rec.max_bits_x <= 32 + rec.iteration
    print(f"✓ gap ~{DISK_C_STAR - float(c):.3g}")


def main():
    return run_tests([
        test_first_iteration,
        test_gram_after_first_iteration,
        test_algorithm1_first_iterate_matches,
        test_two_hundred_iterations,
    ])


if __name__ == "__main__":
    sys.exit(main())
