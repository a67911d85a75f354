"""
Exact rational arithmetic for certificate computations

Rationals are ``fractions.Fraction`` values, which are kept in lowest terms
with a positive denominator on construction. This module adds the dense
symmetric matrix types used everywhere else, exact LDL^T based definiteness
tests and solves, integer square root bounds, and smallest-denominator
rational selection.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Sequence, Tuple, Union

from .errors import DimensionMismatch, EmptyInterval, NotFactorable, NotPD, ParseError

__all__ = [
    "Rational",
    "as_rational",
    "as_vector",
    "format_rational",
    "bit_size",
    "dot",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "SymMatrix",
    "BlockDiagMatrix",
    "RationalInterval",
    "LDLFactor",
    "ldl_factor",
    "is_pd",
    "is_psd",
    "solve_spd",
    "inverse_spd",
    "solve_linear",
    "sqrt_ceil",
    "sqrt_interval",
    "min_denominator_rational",
    "round_nearest",
    "sandwich",
]

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "num/den" string to a canonical Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise ParseError(f"not an exact rational: {value!r}")
        den = int(match.group(2)) if match.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {value!r}")
        return Fraction(int(match.group(1)), den)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def as_vector(values: Iterable[RationalLike]) -> Tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def format_rational(q: Fraction) -> str:
    """Canonical "num/den" (or "n") text form."""
    return str(q)


def bit_size(q: Fraction) -> int:
    """Larger of the numerator and denominator bit lengths."""
    return max(abs(q.numerator).bit_length(), q.denominator.bit_length())


def _check_len(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    _check_len(u, v)
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    _check_len(u, v)
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    _check_len(u, v)
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(alpha: Fraction, u: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(alpha * a for a in u)


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric matrix storing the upper triangle row by row."""

    order: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"matrix order must be >= 1, got {self.order}")
        expected = self.order * (self.order + 1) // 2
        if len(self.entries) != expected:
            raise DimensionMismatch(
                f"order {self.order} needs {expected} upper-triangle entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(as_rational(e) for e in self.entries))

    def _offset(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return i * self.order - i * (i - 1) // 2 + (j - i)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.order and 0 <= j < self.order):
            raise IndexError(f"index ({i}, {j}) out of range for order {self.order}")
        return self.entries[self._offset(i, j)]

    @classmethod
    def from_function(cls, order: int, fn: Callable[[int, int], RationalLike]) -> "SymMatrix":
        return cls(order, tuple(as_rational(fn(i, j)) for i in range(order) for j in range(i, order)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "SymMatrix":
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DimensionMismatch("rows do not form a square matrix")
        dense = [[as_rational(v) for v in row] for row in rows]
        for i in range(n):
            for j in range(i + 1, n):
                if dense[i][j] != dense[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        return cls(n, tuple(dense[i][j] for i in range(n) for j in range(i, n)))

    @classmethod
    def identity(cls, order: int, scale: RationalLike = 1) -> "SymMatrix":
        s = as_rational(scale)
        return cls.from_function(order, lambda i, j: s if i == j else 0)

    @classmethod
    def zeros(cls, order: int) -> "SymMatrix":
        return cls(order, (Fraction(0),) * (order * (order + 1) // 2))

    @classmethod
    def diagonal(cls, values: Sequence[RationalLike]) -> "SymMatrix":
        vals = as_vector(values)
        return cls.from_function(len(vals), lambda i, j: vals[i] if i == j else 0)

    def rows(self) -> List[List[Fraction]]:
        n = self.order
        out = [[Fraction(0)] * n for _ in range(n)]
        pos = 0
        for i in range(n):
            for j in range(i, n):
                out[i][j] = out[j][i] = self.entries[pos]
                pos += 1
        return out

    def _check_same_order(self, other: "SymMatrix") -> None:
        if self.order != other.order:
            raise DimensionMismatch(f"matrix orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        self._check_same_order(other)
        return SymMatrix(self.order, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        self._check_same_order(other)
        return SymMatrix(self.order, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "SymMatrix":
        return SymMatrix(self.order, tuple(-a for a in self.entries))

    def scaled(self, alpha: RationalLike) -> "SymMatrix":
        a = as_rational(alpha)
        return SymMatrix(self.order, tuple(a * e for e in self.entries))

    def shifted(self, mu: RationalLike) -> "SymMatrix":
        """Return A - mu*I."""
        return self - SymMatrix.identity(self.order, mu)

    def diagonal_entries(self) -> Tuple[Fraction, ...]:
        return tuple(self[i, i] for i in range(self.order))

    def trace(self) -> Fraction:
        return sum(self.diagonal_entries(), Fraction(0))

    def inner(self, other: "SymMatrix") -> Fraction:
        """Frobenius inner product <A, B> = sum_ij A_ij B_ij."""
        self._check_same_order(other)
        total = Fraction(0)
        pos = 0
        for i in range(self.order):
            for j in range(i, self.order):
                term = self.entries[pos] * other.entries[pos]
                total += term if i == j else 2 * term
                pos += 1
        return total

    def frobenius_sq(self) -> Fraction:
        return self.inner(self)

    def matvec(self, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        if len(v) != self.order:
            raise DimensionMismatch(f"vector of length {len(v)} against order {self.order}")
        return tuple(dot(row, v) for row in self.rows())

    def quad_form(self, v: Sequence[Fraction]) -> Fraction:
        return dot(v, self.matvec(v))

    def max_abs_row_sum(self) -> Fraction:
        return max(sum(abs(e) for e in row) for row in self.rows())

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows()) + "]"


@dataclass(frozen=True)
class BlockDiagMatrix:
    """Ordered direct sum of symmetric blocks."""

    blocks: Tuple[SymMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def order(self) -> int:
        return sum(b.order for b in self.blocks)

    @property
    def block_orders(self) -> Tuple[int, ...]:
        return tuple(b.order for b in self.blocks)

    @classmethod
    def zeros(cls, orders: Sequence[int]) -> "BlockDiagMatrix":
        return cls(tuple(SymMatrix.zeros(n) for n in orders))

    @classmethod
    def identity(cls, orders: Sequence[int]) -> "BlockDiagMatrix":
        return cls(tuple(SymMatrix.identity(n) for n in orders))

    def _check_shape(self, other: "BlockDiagMatrix") -> None:
        if self.block_orders != other.block_orders:
            raise DimensionMismatch(f"block orders differ: {self.block_orders} vs {other.block_orders}")

    def __add__(self, other: "BlockDiagMatrix") -> "BlockDiagMatrix":
        self._check_shape(other)
        return BlockDiagMatrix(tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "BlockDiagMatrix") -> "BlockDiagMatrix":
        self._check_shape(other)
        return BlockDiagMatrix(tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "BlockDiagMatrix":
        return BlockDiagMatrix(tuple(-a for a in self.blocks))

    def scaled(self, alpha: RationalLike) -> "BlockDiagMatrix":
        return BlockDiagMatrix(tuple(b.scaled(alpha) for b in self.blocks))

    def inner(self, other: "BlockDiagMatrix") -> Fraction:
        self._check_shape(other)
        return sum((a.inner(b) for a, b in zip(self.blocks, other.blocks)), Fraction(0))


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with rational end points."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise EmptyInterval(f"interval [{lo}, {hi}] is empty")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, q: RationalLike) -> "RationalInterval":
        return cls(as_rational(q), as_rational(q))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: RationalLike) -> bool:
        return self.lo <= as_rational(q) <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class LDLFactor:
    """A = L diag(D) L^T with L unit lower triangular (rows stored densely)."""

    L: Tuple[Tuple[Fraction, ...], ...]
    D: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.D)

    def reconstruct(self) -> SymMatrix:
        n = self.order
        return SymMatrix.from_function(
            n, lambda i, j: sum((self.L[i][k] * self.D[k] * self.L[j][k] for k in range(min(i, j) + 1)), Fraction(0))
        )

    def determinant(self) -> Fraction:
        return math.prod(self.D, start=Fraction(1))

    def solve(self, b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        n = self.order
        if len(b) != n:
            raise DimensionMismatch(f"right-hand side of length {len(b)} against order {n}")
        if any(d <= 0 for d in self.D):
            raise NotPD("factorization has a non-positive pivot")
        y = [Fraction(0)] * n
        for i in range(n):
            acc = as_rational(b[i])
            row = self.L[i]
            for k in range(i):
                if row[k]:
                    acc -= row[k] * y[k]
            y[i] = acc
        x = [Fraction(0)] * n
        for i in reversed(range(n)):
            acc = y[i] / self.D[i]
            for k in range(i + 1, n):
                lki = self.L[k][i]
                if lki:
                    acc -= lki * x[k]
            x[i] = acc
        return tuple(x)

    def inverse(self) -> SymMatrix:
        n = self.order
        cols = []
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            cols.append(self.solve(e))
        return SymMatrix.from_function(n, lambda i, j: cols[j][i])


def ldl_factor(A: SymMatrix) -> LDLFactor:
    """Exact LDL^T without pivoting.

    A zero pivot is accepted when the rest of its column in the Schur
    complement is zero; otherwise NotFactorable is raised.
    """
    n = A.order
    a = A.rows()
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    D: List[Fraction] = []
    for k in range(n):
        pivot = a[k][k]
        if pivot == 0:
            if any(a[i][k] != 0 for i in range(k + 1, n)):
                raise NotFactorable(f"zero pivot at position {k} with nonzero residual")
            D.append(pivot)
            continue
        D.append(pivot)
        for i in range(k + 1, n):
            if a[i][k]:
                L[i][k] = a[i][k] / pivot
        for i in range(k + 1, n):
            lik = L[i][k]
            if not lik:
                continue
            row = a[i]
            for j in range(k + 1, i + 1):
                ajk = a[j][k]
                if ajk:
                    row[j] -= lik * ajk
    return LDLFactor(tuple(tuple(row) for row in L), tuple(D))


def is_pd(A: SymMatrix) -> bool:
    """Exact positive definiteness: every elimination pivot strictly positive."""
    n = A.order
    a = A.rows()
    for k in range(n):
        pivot = a[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k]
            if not f:
                continue
            f = f / pivot
            row = a[i]
            for j in range(k + 1, i + 1):
                ajk = a[j][k]
                if ajk:
                    row[j] -= f * ajk
    return True


def is_psd(A: SymMatrix) -> bool:
    """Exact positive semidefiniteness by symmetric elimination with diagonal pivoting."""
    a = A.rows()
    active = list(range(A.order))
    while active:
        p = max(active, key=lambda i: a[i][i])
        pivot = a[p][p]
        if pivot < 0:
            return False
        if pivot == 0:
            # Largest remaining diagonal is zero: PSD only if the Schur complement vanishes.
            return all(a[i][j] == 0 for i in active for j in active)
        active.remove(p)
        prow = a[p]
        for i in active:
            f = a[i][p]
            if not f:
                continue
            f = f / pivot
            row = a[i]
            for j in active:
                if prow[j]:
                    row[j] -= f * prow[j]
    return True


def solve_spd(A: SymMatrix, b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Exact solution of A x = b for positive definite A."""
    try:
        factor = ldl_factor(A)
    except NotFactorable as e:
        raise NotPD(f"matrix is not positive definite: {e}")
    return factor.solve(as_vector(b))


def inverse_spd(A: SymMatrix) -> SymMatrix:
    try:
        factor = ldl_factor(A)
    except NotFactorable as e:
        raise NotPD(f"matrix is not positive definite: {e}")
    if any(d <= 0 for d in factor.D):
        raise NotPD("matrix is not positive definite")
    return factor.inverse()


def solve_linear(rows: Sequence[Sequence[RationalLike]], b: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
    """Exact Gaussian elimination for a square, possibly non-symmetric system."""
    n = len(rows)
    if len(b) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"system is not {n}x{n} with a right-hand side of length {n}")
    a = [[as_rational(v) for v in r] + [as_rational(bi)] for r, bi in zip(rows, b)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise NotFactorable(f"singular system: no pivot in column {k}")
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
        pivot = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            if not f:
                continue
            f = f / pivot
            row, krow = a[i], a[k]
            for j in range(k, n + 1):
                if krow[j]:
                    row[j] -= f * krow[j]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = a[i][n]
        for j in range(i + 1, n):
            if a[i][j]:
                acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return tuple(x)


def sqrt_ceil(q: RationalLike) -> int:
    """Smallest integer n >= sqrt(q)."""
    q = as_rational(q)
    if q < 0:
        raise ValueError(f"square root of negative value {q}")
    a, b = q.numerator, q.denominator
    n = math.isqrt(a // b)
    # isqrt(floor(q)) undershoots sqrt(q) by less than one.
    if n * n * b < a:
        n += 1
    return n


def sqrt_interval(q: RationalLike, bits: int) -> RationalInterval:
    """Enclose sqrt(q) in an interval of width at most 2**-bits."""
    q = as_rational(q)
    if q < 0:
        raise ValueError(f"square root of negative value {q}")
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    a, b = q.numerator, q.denominator
    scale = 1 << bits
    # sqrt(a/b) = sqrt(a*b)/b; work with floor(sqrt(a*b) * 2**bits).
    target = a * b * scale * scale
    s = math.isqrt(target)
    lo = Fraction(s, b * scale)
    if s * s == target:
        return RationalInterval(lo, lo)
    return RationalInterval(lo, Fraction(s + 1, b * scale))


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    # Continued-fraction descent for 0 < lo <= hi.
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def min_denominator_rational(interval: RationalInterval) -> Fraction:
    """Rational of smallest denominator in the interval, the largest such on ties."""
    lo, hi = interval.lo, interval.hi
    if lo <= 0 <= hi:
        simplest = Fraction(0)
    elif hi < 0:
        simplest = -_simplest_between(-hi, -lo)
    else:
        simplest = _simplest_between(lo, hi)
    q = simplest.denominator
    return Fraction(math.floor(hi * q), q)


def round_nearest(q: Fraction, N: int) -> Fraction:
    """Nearest multiple of 1/N, ties toward +infinity."""
    return Fraction(math.floor(q * N + Fraction(1, 2)), N)


def sandwich(Y: SymMatrix, A: SymMatrix) -> SymMatrix:
    """Y A Y for symmetric Y and A of the same order."""
    if Y.order != A.order:
        raise DimensionMismatch(f"matrix orders differ: {Y.order} vs {A.order}")
    y, a = Y.rows(), A.rows()
    n = Y.order
    ya = [[sum((y[i][k] * a[k][j] for k in range(n) if a[k][j]), Fraction(0)) for j in range(n)] for i in range(n)]
    return SymMatrix.from_function(n, lambda i, j: sum((ya[i][k] * y[k][j] for k in range(n)), Fraction(0)))
