"""
Conditioning constants, rounding denominators and bit-size bounds

Everything here evaluates closed-form bounds exactly. The matrix
M = sum alpha_i q(z_i) q(z_i)^T over sample points of the domain controls
the Hessian at a gradient certificate, which fixes the denominator N that a
rounded certificate needs; combined with the certificate norm bound it gives
the size of an integer certificate.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .barrier import log_enclosure
from .errors import NotPD, NotUnisolvent
from .exactarith import (
    RationalInterval,
    RationalLike,
    SymMatrix,
    as_rational,
    as_vector,
    is_pd,
    is_psd,
    sqrt_ceil,
)
from .polybasis import BasisId, ConeSpec, Node, basis_values

__all__ = [
    "CASES",
    "MSpec",
    "BoundReport",
    "build_M",
    "chebyshev_extrema_M",
    "hilbert_M",
    "hankel_cond_bound",
    "lambda_min_lower",
    "cond_upper",
    "hessian_norm_bound",
    "denominator_N",
    "denominator_N_from_norm",
    "k1_lower",
    "gradient_norm_bound",
    "eps_lower_interval",
    "integer_certificate",
    "log2_enclosure",
    "bitsize_bound",
    "bitsize_bound_from_norm",
    "bound_case_report",
]

logger = logging.getLogger(__name__)

CASES = ("monomial_line", "chebyshev_interval", "monomial_interval", "lagrange")

# Relative width at which the lambda_min bisection stops.
LAMBDA_MIN_REL_WIDTH = Fraction(1, 16)

# Upper value used for the Hankel conditioning constant 3.21.
HANKEL_BASE = Fraction(321, 100)


@dataclass(frozen=True)
class MSpec:
    """Sample points of the domain with positive weights."""

    points: Tuple[Node, ...]
    alphas: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        points = tuple(tuple(as_vector(p)) if isinstance(p, (list, tuple)) else (as_rational(p),) for p in self.points)
        alphas = as_vector(self.alphas) if self.alphas else (Fraction(1),) * len(points)
        if len(alphas) != len(points):
            raise ValueError(f"{len(points)} points but {len(alphas)} weights")
        if any(a <= 0 for a in alphas):
            raise ValueError("point weights must be positive")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "alphas", alphas)


@dataclass(frozen=True)
class BoundReport:
    U: int
    nu: int
    cond_M_upper: Fraction
    k1_lower: Fraction
    t_norm2_sq: Fraction
    epsilon_lower: Optional[Fraction]
    N: int
    inf_norm_bound: Fraction
    bitsize_bound: Fraction
    bitsize_interval: RationalInterval

    def as_dict(self) -> dict:
        return {
            "U": self.U,
            "nu": self.nu,
            "cond_M_upper": str(self.cond_M_upper),
            "k1_lower": str(self.k1_lower),
            "t_norm2_sq": str(self.t_norm2_sq),
            "epsilon_lower": None if self.epsilon_lower is None else str(self.epsilon_lower),
            "N": str(self.N),
            "inf_norm_bound": str(self.inf_norm_bound),
            "bitsize_bound": str(self.bitsize_bound),
        }


def build_M(basis: Union[BasisId, ConeSpec], spec: MSpec) -> SymMatrix:
    """M = sum alpha_i q(z_i) q(z_i)^T, required to be positive definite."""
    if isinstance(basis, ConeSpec):
        basis = basis.q_basis
    U = basis.dim
    if len(spec.points) < U:
        raise NotUnisolvent(f"{len(spec.points)} points cannot be unisolvent for dimension {U}")
    acc = [[Fraction(0)] * U for _ in range(U)]
    for alpha, z in zip(spec.alphas, spec.points):
        q = basis_values(basis, z)
        for i in range(U):
            if not q[i]:
                continue
            aqi = alpha * q[i]
            row = acc[i]
            for j in range(i, U):
                row[j] += aqi * q[j]
    M = SymMatrix.from_function(U, lambda i, j: acc[i][j])
    if not is_pd(M):
        raise NotUnisolvent("sample points are not unisolvent: M is not positive definite")
    return M


def chebyshev_extrema_M(d: int) -> SymMatrix:
    """M for the degree-2d Chebyshev basis at the 2d+1 extrema cos(pi l / 2d), unit weights."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    size = 2 * d + 1

    def entry(i: int, j: int) -> int:
        if i == j:
            return 2 * d + 1 if i in (0, 2 * d) else d + 1
        return 1 if (i - j) % 2 == 0 else 0

    return SymMatrix.from_function(size, entry)


def hilbert_M(U: int) -> SymMatrix:
    return SymMatrix.from_function(U, lambda i, j: Fraction(1, i + j + 1))


def hankel_cond_bound(d: int) -> Fraction:
    """Conditioning bound 3.21^(2d+1)/2 for the best Hankel M of order 2d+1."""
    return HANKEL_BASE ** (2 * d + 1) / 2


def lambda_min_lower(M: SymMatrix, rel_width: Fraction = LAMBDA_MIN_REL_WIDTH) -> Fraction:
    """Positive rational lo <= lambda_min(M) found by exact bisection on M - mu*I."""
    if not is_pd(M):
        raise NotPD("lambda_min bound requested for a matrix that is not positive definite")
    hi = min(M.diagonal_entries())
    if is_psd(M.shifted(hi)):
        return hi
    lo = Fraction(0)
    while hi - lo > lo * rel_width:
        mid = (lo + hi) / 2
        if is_psd(M.shifted(mid)):
            lo = mid
        else:
            hi = mid
    return lo


def cond_upper(M: SymMatrix) -> Fraction:
    """Upper bound on lambda_max/lambda_min: max absolute row sum over a lambda_min lower bound."""
    bound = M.max_abs_row_sum() / lambda_min_lower(M)
    logger.debug(f"cond(M) <= {bound} (~{float(bound):.4g}) for order {M.order}")
    return bound


def hessian_norm_bound(cond_m: RationalLike, t: Sequence[RationalLike]) -> Fraction:
    """cond(M) * ||t||_2^2."""
    t = as_vector(t)
    return as_rational(cond_m) * sum((v * v for v in t), Fraction(0))


def denominator_N_from_norm(U: int, cond_m: RationalLike, t_norm2_sq: RationalLike) -> int:
    """ceil((3/2) sqrt(U cond(M)) ||t||_2) given ||t||_2^2."""
    return sqrt_ceil(Fraction(9, 4) * U * as_rational(cond_m) * as_rational(t_norm2_sq))


def denominator_N(U: int, cond_m: RationalLike, t: Sequence[RationalLike]) -> int:
    t = as_vector(t)
    return denominator_N_from_norm(U, cond_m, sum((v * v for v in t), Fraction(0)))


def k1_lower(case: str, mu: Optional[RationalLike] = None) -> Fraction:
    """Closed-form lower bounds on k1 for the standard cases."""
    case = case.replace("-", "_")
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    if case == "lagrange":
        if mu is None:
            raise ValueError("the lagrange case needs mu")
        mu = as_rational(mu)
        if mu <= 0:
            raise ValueError(f"mu must be positive, got {mu}")
        return 1 / mu
    return Fraction(1)


def gradient_norm_bound(nu: int, k1: RationalLike, eps: RationalLike) -> Fraction:
    """nu / (k1 eps), bounding the sup norm of a gradient certificate."""
    k1, eps = as_rational(k1), as_rational(eps)
    if k1 <= 0 or eps <= 0:
        raise ValueError("k1 and eps must be positive")
    return Fraction(nu) / (k1 * eps)


def eps_lower_interval(d: int, tau: int) -> Fraction:
    """3^floor(d/2) / (2^((2d-1) tau) (d+1)^(2d)): lower bound on the minimum over [-1, 1]
    of a positive integer polynomial of degree d with coefficient bit size tau."""
    if d < 1 or tau < 1:
        raise ValueError(f"need d >= 1 and tau >= 1, got d={d}, tau={tau}")
    return Fraction(3 ** (d // 2), 2 ** ((2 * d - 1) * tau) * (d + 1) ** (2 * d))


def integer_certificate(y_N: Sequence[RationalLike], N: int) -> Tuple[int, ...]:
    """N * y_N; raises ValueError if some denominator does not divide N."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    out = []
    for i, q in enumerate(as_vector(y_N)):
        scaled = q * N
        if scaled.denominator != 1:
            raise ValueError(f"component {i} = {q} does not have a denominator dividing {N}")
        out.append(scaled.numerator)
    return tuple(out)


def log2_enclosure(q: RationalLike, prec: int = 64) -> RationalInterval:
    q = as_rational(q)
    ln_q = log_enclosure(q, prec)
    ln2 = log_enclosure(Fraction(2), prec)
    lo = ln_q.lo / (ln2.hi if ln_q.lo >= 0 else ln2.lo)
    hi = ln_q.hi / (ln2.lo if ln_q.hi >= 0 else ln2.hi)
    return RationalInterval(lo, hi)


def bitsize_bound_from_norm(
    U: int,
    cond_m: RationalLike,
    t_norm2_sq: RationalLike,
    nu: int,
    k1: RationalLike,
    eps: RationalLike,
) -> BoundReport:
    cond_m, t_norm2_sq = as_rational(cond_m), as_rational(t_norm2_sq)
    k1, eps = as_rational(k1), as_rational(eps)
    N = denominator_N_from_norm(U, cond_m, t_norm2_sq)
    inf_norm = Fraction(1, 2) + N * gradient_norm_bound(nu, k1, eps)
    bits = log2_enclosure(inf_norm)
    return BoundReport(
        U=U,
        nu=nu,
        cond_M_upper=cond_m,
        k1_lower=k1,
        t_norm2_sq=t_norm2_sq,
        epsilon_lower=eps,
        N=N,
        inf_norm_bound=inf_norm,
        bitsize_bound=bits.hi,
        bitsize_interval=bits,
    )


def bitsize_bound(
    U: int,
    cond_m: RationalLike,
    t: Sequence[RationalLike],
    nu: int,
    k1: RationalLike,
    eps: RationalLike,
) -> BoundReport:
    """1/2 + ceil((3/2) sqrt(U cond(M)) ||t||_2) nu / (k1 eps), with a log2 enclosure."""
    t = as_vector(t)
    return bitsize_bound_from_norm(U, cond_m, sum((v * v for v in t), Fraction(0)), nu, k1, eps)


def bound_case_report(
    case: str,
    d: int,
    t_norm2_sq: RationalLike,
    eps: Optional[RationalLike] = None,
    tau: Optional[int] = None,
    mu: Optional[RationalLike] = None,
) -> BoundReport:
    """Bit-size bound for one of the standard cases.

    The real-line case covers degree 2d; the interval and Lagrange cases
    cover degree 2d+1 (U = nu = 2d+2).
    """
    case = case.replace("-", "_")
    if case == "chebyshev":
        case = "chebyshev_interval"
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    k1 = k1_lower(case, mu)
    if case == "monomial_line":
        U, nu, cond_m = 2 * d + 1, d + 1, hankel_cond_bound(d)
    elif case == "chebyshev_interval":
        U, nu, cond_m = 2 * d + 2, 2 * d + 2, Fraction(4)
    elif case == "monomial_interval":
        U, nu = 2 * d + 2, 2 * d + 2
        cond_m = cond_upper(hilbert_M(U))
    else:
        U, nu, cond_m = 2 * d + 2, 2 * d + 2, Fraction(1)
    if eps is None:
        if tau is None or case not in ("chebyshev_interval", "monomial_interval"):
            raise ValueError(f"case {case} needs an explicit eps")
        degree = 2 * d + 1
        # Chebyshev coefficients of bit size tau give monomial ones of bit size <= 2 deg + tau.
        tau_monomial = tau + 2 * degree if case == "chebyshev_interval" else tau
        eps = eps_lower_interval(degree, tau_monomial)
    return bitsize_bound_from_norm(U, cond_m, t_norm2_sq, nu, k1, eps)
