#!/usr/bin/env python3
"""
Exact gradient, Hessian and local norms of the log-det barrier.
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
    log,
    ref_to_grlex,
    rand_vector,
    random_interior_point,
    run_tests,
    set_seed,
    small_cones,
)

from rational_wsos.barrier import (
    BarrierContext,
    barrier_value_interval,
    dual_local_norm_sq,
    hessian,
    in_dual_interior,
    local_norm_sq,
    neg_gradient,
)
from rational_wsos.errors import DimensionMismatch, NotInterior
from rational_wsos.exactarith import BlockDiagMatrix, dot, sandwich, sqrt_ceil, sqrt_interval, vec_add, vec_scale, vec_sub
from rational_wsos.polybasis import lambda_apply


def test_disk_gradient_certificate_of_one():
    print("\nTesting -g(x1) = 1 on the disk")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    assert in_dual_interior(ctx, x1)
    assert neg_gradient(ctx, x1) == ctx.one
    h = hessian(ctx, x1)
    # H(x) x = -g(x), so H(x1)^-1 1 = x1
    assert h.solve(ctx.one) == x1
    assert dual_local_norm_sq(h, ctx.one) == ctx.nu
    print("✓ x1 is the gradient certificate of the constant one")


def test_disk_initial_norms():
    print("\nTesting ||t||*_x1 and H(x1)^-1 (t + 39)")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    t = ref_to_grlex(DISK_T_REF)
    h = hessian(ctx, x1)
    t_sq = dual_local_norm_sq(h, t)
    log("||t||*^2", t_sq)
    assert t_sq == Fraction(1640, 27)
    w = h.solve(vec_add(t, vec_scale(39, ctx.one)))
    assert w == ref_to_grlex(
        (Fraction(484, 3), Fraction(16, 3), Fraction(1532, 27), Fraction(-8, 3), Fraction(-16, 3), Fraction(1436, 27))
    )
    print("✓ matches the hand computation")


def test_logarithmic_homogeneity():
    print("\nTesting H(x) x = -g(x), <-g(x), x> = nu and scaling")
    print("=" * 60)
    rng = set_seed(20)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        for _ in range(4):
            x = random_interior_point(spec, rng)
            h = hessian(ctx, x)
            ng = neg_gradient(ctx, x)
            assert h.apply(x) == ng
            assert dot(ng, x) == ctx.nu
            assert local_norm_sq(h, x) == ctx.nu
            alpha = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            ax = vec_scale(alpha, x)
            assert neg_gradient(ctx, ax) == vec_scale(1 / alpha, ng)
            assert hessian(ctx, ax).H == h.H.scaled(1 / (alpha * alpha))
        print(f"✓ {spec.q_basis.kind} U={ctx.U}, nu={ctx.nu}")


def test_hessian_is_positive_definite():
    print("\nTesting H(x) against its definition")
    print("=" * 60)
    rng = set_seed(21)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        x = random_interior_point(spec, rng)
        h = hessian(ctx, x)
        assert all(d > 0 for d in h.factor.D)
        v = rand_vector(rng, ctx.U)
        # v^T H v = <Y Lambda(v) Y, Lambda(v)> with Y = Lambda(x)^-1
        Lv = lambda_apply(ctx.op, v)
        YLY = BlockDiagMatrix(tuple(sandwich(Y, A) for Y, A in zip(h.lambda_inv.blocks, Lv.blocks)))
        assert local_norm_sq(h, v) == YLY.inner(Lv)
        assert dual_local_norm_sq(h, h.apply(v)) == local_norm_sq(h, v)
    print("✓ quadratic forms agree")


def test_dikin_ellipsoid_stays_interior():
    print("\nTesting ||u - x||_x <= 1/4 keeps u interior")
    print("=" * 60)
    rng = set_seed(22)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        x = random_interior_point(spec, rng)
        h = hessian(ctx, x)
        for _ in range(5):
            d = rand_vector(rng, ctx.U, 12, 2)
            if not any(d):
                continue
            u = vec_add(x, vec_scale(Fraction(1, 4 * sqrt_ceil(local_norm_sq(h, d))), d))
            assert in_dual_interior(ctx, u)
    print("✓ local-norm balls of radius 1/4 are interior")


def test_unit_local_ball_stays_interior():
    print("\nTesting ||u - x||_x < 1 keeps u interior")
    print("=" * 60)
    rng = set_seed(24)
    shrink = 1 - Fraction(1, 2 ** 10)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        for _ in range(4):
            x = random_interior_point(spec, rng)
            h = hessian(ctx, x)
            d = rand_vector(rng, ctx.U, 12, 2)
            if not any(d):
                continue
            delta = vec_scale(shrink / sqrt_interval(local_norm_sq(h, d), 64).hi, d)
            assert local_norm_sq(h, delta) < 1
            assert in_dual_interior(ctx, vec_add(x, delta))
            assert in_dual_interior(ctx, vec_sub(x, delta))
    print("✓ the open unit local-norm ball is interior")


def test_local_norms_change_slowly():
    print("\nTesting (1 - r) ||v||_x <= ||v||_y <= ||v||_x / (1 - r)")
    print("=" * 60)
    rng = set_seed(25)
    for spec in small_cones():
        ctx = BarrierContext.from_spec(spec)
        for _ in range(4):
            x = random_interior_point(spec, rng)
            hx = hessian(ctx, x)
            d = rand_vector(rng, ctx.U, 12, 2)
            if not any(d):
                continue
            tau = Fraction(rng.randint(1, 15), 16)
            y = vec_add(x, vec_scale(tau / sqrt_interval(local_norm_sq(hx, d), 64).hi, d))
            hy = hessian(ctx, y)
            # 1 - r_hi <= 1 - r, so squaring keeps both sides sound
            r_hi = sqrt_interval(local_norm_sq(hx, vec_sub(y, x)), 64).hi
            assert r_hi < 1
            shrink_sq = (1 - r_hi) ** 2
            for _ in range(3):
                v = rand_vector(rng, ctx.U)
                vx, vy = local_norm_sq(hx, v), local_norm_sq(hy, v)
                assert shrink_sq * vx <= vy
                assert shrink_sq * vy <= vx
    print("✓ Hessians at nearby points are comparable")


def test_not_interior():
    print("\nTesting error paths")
    print("=" * 60)
    spec, ctx = disk_setup()
    zero = (0,) * ctx.U
    assert not in_dual_interior(ctx, zero)
    with pytest.raises(NotInterior):
        neg_gradient(ctx, zero)
    with pytest.raises(NotInterior):
        hessian(ctx, (1, 0, 0, 1, 0, 1))
    with pytest.raises(DimensionMismatch):
        hessian(ctx, (1, 0, 0))
    print("✓ boundary points rejected")


def test_barrier_value_and_gradient():
    print("\nTesting the barrier value enclosure against the exact gradient")
    print("=" * 60)
    spec, ctx = disk_setup()
    x1 = ref_to_grlex(DISK_X1_REF)
    F0 = barrier_value_interval(ctx, x1, prec=200)
    # det Lambda(x1) = 4 * 4/3 * 4/3 * 4/3 = 256/27 and ln(256/27) = 2.24934...
    assert Fraction(-22494, 10000) < F0.lo <= F0.hi < Fraction(-22493, 10000)
    assert F0.width < Fraction(1, 2 ** 150)
    rng = set_seed(23)
    for _ in range(3):
        v = rand_vector(rng, ctx.U, 4, 1)
        h = hessian(ctx, x1)
        scale = sqrt_ceil(local_norm_sq(h, v))
        if scale == 0:
            continue
        v = vec_scale(Fraction(1, scale), v)
        for k in (4, 8, 12):
            step = Fraction(1, 2 ** k)
            xs = vec_add(x1, vec_scale(step, v))
            F1 = barrier_value_interval(ctx, xs, prec=200)
            secant_lo = (F1.lo - F0.hi) / step
            secant_hi = (F1.hi - F0.lo) / step
            # convexity: g(x).v <= secant <= g(x + step v).v
            d0 = -dot(neg_gradient(ctx, x1), v)
            d1 = -dot(neg_gradient(ctx, xs), v)
            assert secant_hi >= d0
            assert secant_lo <= d1
    print("✓ secants of the enclosed value bracket the exact directional derivatives")


def main():
    return run_tests([
        test_disk_gradient_certificate_of_one,
        test_disk_initial_norms,
        test_logarithmic_homogeneity,
        test_hessian_is_positive_definite,
        test_dikin_ellipsoid_stays_interior,
        test_unit_local_ball_stays_interior,
        test_local_norms_change_slowly,
        test_not_interior,
        test_barrier_value_and_gradient,
    ])


if __name__ == "__main__":
    sys.exit(main())
