import os
import random
import sys
from fractions import Fraction

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from rational_wsos.barrier import BarrierContext
from rational_wsos.exactarith import SymMatrix
from rational_wsos.polybasis import basis_values, disk_cone, interval_cone, line_cone

DATA_DIR = os.path.join(ROOT, "data")

# Disk example, coefficients in the order (1, z1, z1^2, z2, z1 z2, z2^2).
DISK_T_REF = (0, 2, 3, -1, -6, 1)
DISK_X1_REF = (4, 0, Fraction(4, 3), 0, 0, Fraction(4, 3))
DISK_C_STAR = -1.70768680307

# First disk iterate from x1/39 at c = -39, graded lex order.
DISK_X_PLUS = (
    Fraction(452, 4563),
    Fraction(-16, 4563),
    Fraction(8, 4563),
    Fraction(1276, 41067),
    Fraction(16, 4563),
    Fraction(1372, 41067),
)
# x+ rounded with the Frobenius bound, N = 5029
DISK_X_N = tuple(Fraction(v, 5029) for v in (498, -18, 9, 156, 18, 168))


def set_seed(seed=42):
    random.seed(seed)
    return random.Random(seed)


def ref_to_grlex(v):
    """Reorder a degree-2 bivariate vector from (1, z1, z1^2, z2, z1 z2, z2^2) to graded lex."""
    v = tuple(Fraction(e) for e in v)
    return (v[0], v[1], v[3], v[2], v[4], v[5])


def rand_rational(rng, num_bits=8, den_bits=4):
    num = rng.randint(-(1 << num_bits), 1 << num_bits)
    den = rng.randint(1, 1 << den_bits)
    return Fraction(num, den)


def rand_vector(rng, n, num_bits=8, den_bits=4):
    return tuple(rand_rational(rng, num_bits, den_bits) for _ in range(n))


def rand_spd(rng, n, num_bits=4):
    """B B^T + I for a random integer B."""
    B = [[Fraction(rng.randint(-(1 << num_bits), 1 << num_bits)) for _ in range(n)] for _ in range(n)]
    return SymMatrix.from_function(
        n, lambda i, j: sum((B[i][k] * B[j][k] for k in range(n)), Fraction(0)) + (1 if i == j else 0)
    )


def disk_setup(kind="monomial"):
    spec = disk_cone(2, kind)
    return spec, BarrierContext.from_spec(spec)


def small_cones():
    """A few cones small enough for exhaustive exact checks."""
    return [
        line_cone(1),
        line_cone(2, "chebyshev"),
        interval_cone(2),
        interval_cone(3, "chebyshev"),
        interval_cone(2, "lagrange"),
        disk_cone(2),
    ]


def bounded_cones():
    """The small cones on compact domains, where 1 is an interior point."""
    return [spec for spec in small_cones() if spec.n > 1 or len(spec.weights) > 1]


def random_interior_point(spec, rng, lo=1, hi=2):
    """sum alpha_i q(z_i) over the cone's sample points with alpha_i drawn from [lo, hi]."""
    x = [Fraction(0)] * spec.U
    for z in spec.points:
        alpha = Fraction(rng.randint(lo * 64, hi * 64), 64)
        for u, v in enumerate(basis_values(spec.q_basis, z)):
            x[u] += alpha * v
    return tuple(x)


def log(msg, value):
    if isinstance(value, Fraction):
        print(f"{msg}: {value} (~{float(value):.6g})", flush=True)
    else:
        print(f"{msg}: {value}", flush=True)


def run_tests(tests):
    """Run test functions standalone and print a PASSED/FAILED summary."""
    results = []
    for test_func in tests:
        try:
            test_func()
            results.append((test_func.__name__, True))
        except Exception as e:
            print(f"\n❌ Test {test_func.__name__} failed: {type(e).__name__}: {e}")
            results.append((test_func.__name__, False))

    print("\n" + "=" * 60)
    print("SUMMARY")
    print("=" * 60)
    for test_name, result in results:
        status = "✅ PASSED" if result else "❌ FAILED"
        print(f"{test_name}: {status}")

    passed = sum(1 for _, r in results if r)
    print(f"\nTotal: {passed}/{len(results)} tests passed")
    return 0 if passed == len(results) else 1
