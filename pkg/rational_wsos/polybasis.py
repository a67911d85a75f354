"""
Polynomial bases and the Lambda operator of a WSOS cone

Three bases are supported: monomials, tensor Chebyshev polynomials of the
first kind, and Lagrange interpolants at explicit rational nodes.
Multivariate exponents are listed in graded lexicographic order
(1, z1, z2, z1^2, z1 z2, z2^2, ...), which fixes the meaning of every
coefficient vector read from or written to a file.

Conversions go through a sparse monomial form ``{exponent: coefficient}``.
Lagrange coefficients are the values at the nodes, so products into a
Lagrange target are formed by evaluation.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DegreeOverflow, DimensionMismatch, NotFactorable, NotUnisolvent
from .exactarith import BlockDiagMatrix, RationalLike, SymMatrix, as_rational, as_vector, solve_linear

__all__ = [
    "KINDS",
    "Exponent",
    "Node",
    "graded_lex_exponents",
    "BasisId",
    "PolyVec",
    "ConeSpec",
    "LambdaOp",
    "to_monomial",
    "from_monomial",
    "evaluate",
    "basis_values",
    "basis_product_expand",
    "leading_form",
    "build_lambda",
    "lambda_apply",
    "lambda_adjoint",
    "line_cone",
    "interval_cone",
    "disk_cone",
]

logger = logging.getLogger(__name__)

KINDS = ("monomial", "chebyshev", "lagrange")

Exponent = Tuple[int, ...]
Node = Tuple[Fraction, ...]
Terms = Dict[Exponent, Fraction]


def _compositions(n: int, k: int) -> Iterable[Exponent]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def graded_lex_exponents(n: int, degree: int) -> Tuple[Exponent, ...]:
    """All exponents of total degree <= degree, by degree then lexicographically descending."""
    return tuple(alpha for k in range(degree + 1) for alpha in _compositions(n, k))


def _as_node(value, n: int) -> Node:
    if isinstance(value, (list, tuple)):
        node = as_vector(value)
    else:
        node = (as_rational(value),)
    if len(node) != n:
        raise DimensionMismatch(f"node {value!r} does not have {n} coordinates")
    return node


@dataclass(frozen=True)
class BasisId:
    """Identifies a polynomial basis: kind, variable count, degree and (Lagrange) nodes."""

    kind: str
    n: int
    degree: int
    nodes: Optional[Tuple[Node, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1 or self.degree < 0:
            raise ValueError(f"invalid basis shape n={self.n}, degree={self.degree}")
        if self.kind == "lagrange":
            if self.nodes is None:
                raise NotUnisolvent("a lagrange basis needs interpolation nodes")
            nodes = tuple(_as_node(z, self.n) for z in self.nodes)
            if len(nodes) != self.dim:
                raise NotUnisolvent(f"lagrange basis of dimension {self.dim} got {len(nodes)} nodes")
            if len(set(nodes)) != len(nodes):
                raise NotUnisolvent("lagrange nodes are not pairwise distinct")
            object.__setattr__(self, "nodes", nodes)
        elif self.nodes is not None:
            raise ValueError(f"{self.kind} basis does not take nodes")

    @property
    def exponents(self) -> Tuple[Exponent, ...]:
        return graded_lex_exponents(self.n, self.degree)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def index(self, alpha: Exponent) -> int:
        return _exponent_index(self.n, self.degree)[alpha]


@lru_cache(maxsize=None)
def _exponent_index(n: int, degree: int) -> Dict[Exponent, int]:
    return {alpha: i for i, alpha in enumerate(graded_lex_exponents(n, degree))}


@dataclass(frozen=True)
class PolyVec:
    """A polynomial as its coefficient vector in a basis."""

    basis: BasisId
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = as_vector(self.coeffs)
        if len(coeffs) != self.basis.dim:
            raise DimensionMismatch(f"basis of dimension {self.basis.dim} got {len(coeffs)} coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, basis: BasisId) -> "PolyVec":
        return cls(basis, (Fraction(0),) * basis.dim)

    @classmethod
    def unit(cls, basis: BasisId, u: int) -> "PolyVec":
        return cls(basis, tuple(Fraction(1 if i == u else 0) for i in range(basis.dim)))

    @classmethod
    def constant_one(cls, basis: BasisId) -> "PolyVec":
        return from_monomial({(0,) * basis.n: Fraction(1)}, basis)


# ---------------------------------------------------------------------------
# Sparse monomial helpers
# ---------------------------------------------------------------------------

def _total_degree(terms: Terms) -> int:
    return max((sum(alpha) for alpha, c in terms.items() if c), default=0)


def _mul_terms(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for alpha, ca in a.items():
        if not ca:
            continue
        for beta, cb in b.items():
            if not cb:
                continue
            key = tuple(x + y for x, y in zip(alpha, beta))
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v}


def _monomial_value(alpha: Exponent, z: Node) -> Fraction:
    value = Fraction(1)
    for zk, ak in zip(z, alpha):
        if ak:
            value *= zk ** ak
    return value


def _eval_terms(terms: Terms, z: Node) -> Fraction:
    return sum((c * _monomial_value(alpha, z) for alpha, c in terms.items()), Fraction(0))


@lru_cache(maxsize=None)
def _chebyshev_in_monomials(k: int) -> Tuple[Fraction, ...]:
    """Coefficients of T_k in powers 1, z, ..., z^k."""
    if k == 0:
        return (Fraction(1),)
    if k == 1:
        return (Fraction(0), Fraction(1))
    prev, cur = _chebyshev_in_monomials(k - 2), _chebyshev_in_monomials(k - 1)
    out = [Fraction(0)] * (k + 1)
    for i, c in enumerate(cur):
        out[i + 1] += 2 * c
    for i, c in enumerate(prev):
        out[i] -= c
    return tuple(out)


@lru_cache(maxsize=None)
def _power_in_chebyshev(k: int) -> Tuple[Fraction, ...]:
    """Coefficients of z^k in T_0, ..., T_k."""
    if k == 0:
        return (Fraction(1),)
    prev = _power_in_chebyshev(k - 1)
    out = [Fraction(0)] * (k + 1)
    for b, c in enumerate(prev):
        if not c:
            continue
        if b == 0:
            out[1] += c
        else:
            out[b + 1] += c / 2
            out[b - 1] += c / 2
    return tuple(out)


def _tensor_expand(alpha: Exponent, table) -> Terms:
    terms: Terms = {(): Fraction(1)}
    for ak in alpha:
        univariate = table(ak)
        terms = {
            key + (e,): c * cu
            for key, c in terms.items()
            for e, cu in enumerate(univariate)
            if cu
        }
    return terms


def _chebyshev_values(z: Fraction, degree: int) -> List[Fraction]:
    values = [Fraction(1), z]
    while len(values) <= degree:
        values.append(2 * z * values[-1] - values[-2])
    return values[: degree + 1]


@lru_cache(maxsize=None)
def _vandermonde(basis: BasisId) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(_monomial_value(alpha, z) for alpha in basis.exponents) for z in basis.nodes)


def _interpolate(basis: BasisId, values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    try:
        return solve_linear(_vandermonde(basis), values)
    except NotFactorable:
        raise NotUnisolvent(f"lagrange nodes are not unisolvent for degree {basis.degree} in {basis.n} variables")


# ---------------------------------------------------------------------------
# Basis conversions
# ---------------------------------------------------------------------------

def to_monomial(p: PolyVec) -> Terms:
    """Sparse monomial form of a polynomial given in any basis."""
    basis = p.basis
    if basis.kind == "monomial":
        return {alpha: c for alpha, c in zip(basis.exponents, p.coeffs) if c}
    if basis.kind == "chebyshev":
        out: Terms = {}
        for alpha, c in zip(basis.exponents, p.coeffs):
            if not c:
                continue
            for beta, cb in _tensor_expand(alpha, _chebyshev_in_monomials).items():
                out[beta] = out.get(beta, Fraction(0)) + c * cb
        return {k: v for k, v in out.items() if v}
    coeffs = _interpolate(basis, p.coeffs)
    return {alpha: c for alpha, c in zip(basis.exponents, coeffs) if c}


def from_monomial(terms: Dict[Exponent, RationalLike], basis: BasisId) -> PolyVec:
    """Coefficient vector in ``basis`` of a sparse monomial polynomial."""
    terms = {tuple(alpha): as_rational(c) for alpha, c in terms.items()}
    for alpha, c in terms.items():
        if len(alpha) != basis.n:
            raise DimensionMismatch(f"exponent {alpha} used with a basis in {basis.n} variables")
        if c and sum(alpha) > basis.degree:
            raise DegreeOverflow(f"term of degree {sum(alpha)} exceeds basis degree {basis.degree}")
    if basis.kind == "lagrange":
        return PolyVec(basis, tuple(_eval_terms(terms, z) for z in basis.nodes))
    coeffs = [Fraction(0)] * basis.dim
    for alpha, c in terms.items():
        if not c:
            continue
        if basis.kind == "monomial":
            coeffs[basis.index(alpha)] += c
        else:
            for beta, cb in _tensor_expand(alpha, _power_in_chebyshev).items():
                coeffs[basis.index(beta)] += c * cb
    return PolyVec(basis, tuple(coeffs))


def evaluate(p: PolyVec, z: Sequence[RationalLike]) -> Fraction:
    return _eval_terms(to_monomial(p), _as_node(z, p.basis.n))


def basis_values(basis: BasisId, z: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
    """The vector q(z) of basis polynomials evaluated at z."""
    z = _as_node(z, basis.n)
    if basis.kind == "monomial":
        return tuple(_monomial_value(alpha, z) for alpha in basis.exponents)
    if basis.kind == "chebyshev":
        tables = [_chebyshev_values(zk, basis.degree) for zk in z]
        out = []
        for alpha in basis.exponents:
            value = Fraction(1)
            for table, ak in zip(tables, alpha):
                value *= table[ak]
            out.append(value)
        return tuple(out)
    vander = _vandermonde(basis)
    transposed = [[row[j] for row in vander] for j in range(basis.dim)]
    monomials = [_monomial_value(alpha, z) for alpha in basis.exponents]
    try:
        return solve_linear(transposed, monomials)
    except NotFactorable:
        raise NotUnisolvent("lagrange nodes are not unisolvent")


def leading_form(basis: BasisId, v: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
    """Top-degree homogeneous part of each basis polynomial, evaluated at v.

    As a dual vector this is the functional p -> lim p(s v) / s^degree.
    """
    v = _as_node(v, basis.n)
    out = []
    for u in range(basis.dim):
        terms = to_monomial(PolyVec.unit(basis, u))
        top = {alpha: c for alpha, c in terms.items() if sum(alpha) == basis.degree}
        out.append(_eval_terms(top, v))
    return tuple(out)


def _chebyshev_product(p: PolyVec, q: PolyVec, target: BasisId) -> PolyVec:
    coeffs = [Fraction(0)] * target.dim
    index = _exponent_index(target.n, target.degree)
    for alpha, ca in zip(p.basis.exponents, p.coeffs):
        if not ca:
            continue
        for beta, cb in zip(q.basis.exponents, q.coeffs):
            if not cb:
                continue
            # T_a T_b = (T_{a+b} + T_{|a-b|}) / 2 in each variable
            parts: Dict[Exponent, Fraction] = {(): ca * cb}
            for a, b in zip(alpha, beta):
                parts_next: Dict[Exponent, Fraction] = {}
                for key, c in parts.items():
                    for e in (a + b, abs(a - b)):
                        k = key + (e,)
                        parts_next[k] = parts_next.get(k, Fraction(0)) + c / 2
                parts = parts_next
            for gamma, c in parts.items():
                if not c:
                    continue
                if sum(gamma) > target.degree:
                    raise DegreeOverflow(f"product term of degree {sum(gamma)} exceeds target degree {target.degree}")
                coeffs[index[gamma]] += c
    return PolyVec(target, tuple(coeffs))


def basis_product_expand(p: PolyVec, q: PolyVec, target: BasisId) -> PolyVec:
    """Exact coefficient vector of p*q in the target basis."""
    if not (p.basis.n == q.basis.n == target.n):
        raise DimensionMismatch(
            f"incompatible variable counts: {p.basis.n}, {q.basis.n} and target {target.n}"
        )
    if p.basis.kind == q.basis.kind == target.kind == "chebyshev":
        return _chebyshev_product(p, q, target)
    p_terms, q_terms = to_monomial(p), to_monomial(q)
    if target.kind == "lagrange":
        degree = _total_degree(p_terms) + _total_degree(q_terms)
        if degree > target.degree:
            raise DegreeOverflow(f"product of degree {degree} exceeds target degree {target.degree}")
        return PolyVec(target, tuple(_eval_terms(p_terms, z) * _eval_terms(q_terms, z) for z in target.nodes))
    return from_monomial(_mul_terms(p_terms, q_terms), target)


# ---------------------------------------------------------------------------
# Cones and the Lambda operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeSpec:
    """Data of a WSOS cone: weights in the q basis, degrees and bases.

    ``points`` optionally lists sample points of the domain {w_i >= 0}; they
    feed default_interior_point and the conditioning matrix M.
    """

    n: int
    q_basis: BasisId
    weights: Tuple[PolyVec, ...]
    degrees: Tuple[int, ...]
    p_bases: Tuple[BasisId, ...]
    points: Optional[Tuple[Node, ...]] = None

    def __post_init__(self):
        weights = tuple(self.weights)
        degrees = tuple(int(d) for d in self.degrees)
        p_bases = tuple(self.p_bases)
        if not weights:
            raise ValueError("a cone needs at least one weight")
        if not (len(weights) == len(degrees) == len(p_bases)):
            raise DimensionMismatch(
                f"{len(weights)} weights, {len(degrees)} degrees and {len(p_bases)} p bases"
            )
        if self.q_basis.n != self.n:
            raise DimensionMismatch(f"q basis in {self.q_basis.n} variables for a cone in {self.n}")
        for i, (w, d, pb) in enumerate(zip(weights, degrees, p_bases)):
            if w.basis != self.q_basis:
                raise ValueError(f"weight {i} is not expressed in the q basis")
            if pb.n != self.n or pb.degree != d:
                raise DimensionMismatch(f"p basis {i} has n={pb.n}, degree={pb.degree}; expected n={self.n}, degree={d}")
            w_terms = to_monomial(w)
            if not w_terms:
                raise ValueError(f"weight {i} is the zero polynomial")
            if _total_degree(w_terms) + 2 * d > self.q_basis.degree:
                raise DegreeOverflow(
                    f"weight {i} of degree {_total_degree(w_terms)} with d={d} exceeds q degree {self.q_basis.degree}"
                )
        points = None
        if self.points is not None:
            points = tuple(_as_node(z, self.n) for z in self.points)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "p_bases", p_bases)
        object.__setattr__(self, "points", points)

    @classmethod
    def create(
        cls,
        n: int,
        q_basis: BasisId,
        weights: Sequence[Union[PolyVec, Sequence[RationalLike]]],
        degrees: Sequence[int],
        p_bases: Optional[Sequence[BasisId]] = None,
        points: Optional[Sequence] = None,
    ) -> "ConeSpec":
        """Build a cone from raw q-basis coefficient lists, defaulting the p bases."""
        weight_vecs = tuple(w if isinstance(w, PolyVec) else PolyVec(q_basis, tuple(w)) for w in weights)
        if p_bases is None:
            kind = "monomial" if q_basis.kind == "monomial" else "chebyshev"
            p_bases = tuple(BasisId(kind, n, d) for d in degrees)
        return cls(n, q_basis, weight_vecs, tuple(degrees), tuple(p_bases), None if points is None else tuple(points))

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def U(self) -> int:
        return self.q_basis.dim

    @property
    def L(self) -> Tuple[int, ...]:
        return tuple(pb.dim for pb in self.p_bases)

    @property
    def nu(self) -> int:
        return sum(self.L)


SparseVec = Tuple[Tuple[int, Fraction], ...]


@dataclass(frozen=True)
class LambdaOp:
    """Exact Lambda_i maps as sparse coefficient tensors.

    ``tensors[i][j][k]`` lists (u, c) pairs so that
    Lambda_i(x)[j][k] = sum c * x[u].
    """

    U: int
    L: Tuple[int, ...]
    tensors: Tuple[Tuple[Tuple[SparseVec, ...], ...], ...]
    one: Tuple[Fraction, ...] = field(default=())
    q_basis: Optional[BasisId] = None

    @property
    def m(self) -> int:
        return len(self.L)

    @property
    def nu(self) -> int:
        return sum(self.L)

    def entry_vector(self, i: int, j: int, k: int) -> Tuple[Fraction, ...]:
        dense = [Fraction(0)] * self.U
        for u, c in self.tensors[i][j][k]:
            dense[u] = c
        return tuple(dense)

    @cached_property
    def unit_images(self) -> Tuple[Tuple[SymMatrix, ...], ...]:
        """``unit_images[u][i]`` is Lambda_i(e_u)."""
        images = []
        for u in range(self.U):
            blocks = []
            for i, Li in enumerate(self.L):
                table = self.tensors[i]
                blocks.append(
                    SymMatrix.from_function(Li, lambda j, k: dict(table[j][k]).get(u, 0))
                )
            images.append(tuple(blocks))
        return tuple(images)


def build_lambda(spec: ConeSpec) -> LambdaOp:
    """Expand w_i p_ij p_ik in the q basis for every block entry."""
    q_basis = spec.q_basis
    tensors = []
    for i, (w, pb) in enumerate(zip(spec.weights, spec.p_bases)):
        w_terms = to_monomial(w)
        p_terms = [to_monomial(PolyVec.unit(pb, j)) for j in range(pb.dim)]
        rows: List[List[SparseVec]] = [[() for _ in range(pb.dim)] for _ in range(pb.dim)]
        for j in range(pb.dim):
            wp = _mul_terms(w_terms, p_terms[j])
            for k in range(j, pb.dim):
                expanded = from_monomial(_mul_terms(wp, p_terms[k]), q_basis)
                entry = tuple((u, c) for u, c in enumerate(expanded.coeffs) if c)
                rows[j][k] = rows[k][j] = entry
        tensors.append(tuple(tuple(r) for r in rows))
        logger.debug(f"built Lambda_{i + 1}: {pb.dim}x{pb.dim} block over U={q_basis.dim}")
    one = PolyVec.constant_one(q_basis).coeffs
    return LambdaOp(q_basis.dim, spec.L, tuple(tensors), one, q_basis)


def lambda_apply(op: LambdaOp, x: Sequence[Fraction]) -> BlockDiagMatrix:
    if len(x) != op.U:
        raise DimensionMismatch(f"dual vector of length {len(x)} for U={op.U}")
    x = as_vector(x)
    blocks = []
    for Li, table in zip(op.L, op.tensors):
        blocks.append(
            SymMatrix.from_function(Li, lambda j, k: sum((c * x[u] for u, c in table[j][k]), Fraction(0)))
        )
    return BlockDiagMatrix(tuple(blocks))


def lambda_adjoint(op: LambdaOp, S: BlockDiagMatrix) -> Tuple[Fraction, ...]:
    if S.block_orders != op.L:
        raise DimensionMismatch(f"block orders {S.block_orders} do not match L={op.L}")
    out = [Fraction(0)] * op.U
    for block, table in zip(S.blocks, op.tensors):
        for j in range(block.order):
            for k in range(j, block.order):
                s = block[j, k]
                if not s:
                    continue
                if j != k:
                    s = 2 * s
                for u, c in table[j][k]:
                    out[u] += c * s
    return tuple(out)


# ---------------------------------------------------------------------------
# Standard cones
# ---------------------------------------------------------------------------

def _interior_grid(count: int) -> Tuple[Node, ...]:
    # count points strictly inside (-1, 1)
    return tuple((Fraction(-1) + Fraction(2 * (k + 1), count + 1),) for k in range(count))


def _uniform_nodes(count: int) -> Tuple[Node, ...]:
    if count == 1:
        return ((Fraction(0),),)
    return tuple((Fraction(-1) + Fraction(2 * k, count - 1),) for k in range(count))


def _univariate_q_basis(kind: str, degree: int, nodes=None) -> BasisId:
    if kind == "lagrange" and nodes is None:
        nodes = _uniform_nodes(degree + 1)
    return BasisId(kind, 1, degree, nodes if kind == "lagrange" else None)


def line_cone(d: int, kind: str = "monomial", nodes=None) -> ConeSpec:
    """Nonnegative univariate polynomials of degree 2d on the real line."""
    q_basis = _univariate_q_basis(kind, 2 * d, nodes)
    one = from_monomial({(0,): 1}, q_basis)
    return ConeSpec.create(1, q_basis, [one], [d], points=_interior_grid(2 * d + 1))


def interval_cone(degree: int, kind: str = "monomial", nodes=None) -> ConeSpec:
    """Polynomials of the given degree nonnegative on [-1, 1].

    Even degree 2d uses weights 1 and 1 - z^2; odd degree 2d+1 uses 1 - z
    and 1 + z.
    """
    if degree < 1:
        raise ValueError(f"interval cone needs degree >= 1, got {degree}")
    q_basis = _univariate_q_basis(kind, degree, nodes)
    d = degree // 2
    if degree % 2 == 0:
        weights = [from_monomial({(0,): 1}, q_basis), from_monomial({(0,): 1, (2,): -1}, q_basis)]
        degrees = [d, d - 1]
    else:
        weights = [from_monomial({(0,): 1, (1,): -1}, q_basis), from_monomial({(0,): 1, (1,): 1}, q_basis)]
        degrees = [d, d]
    return ConeSpec.create(1, q_basis, weights, degrees, points=_interior_grid(degree + 1))


def disk_cone(degree: int = 2, kind: str = "monomial", nodes=None) -> ConeSpec:
    """Bivariate polynomials of even degree nonnegative on the unit disk."""
    if degree < 2 or degree % 2:
        raise ValueError(f"disk cone needs an even degree >= 2, got {degree}")
    if kind == "lagrange" and nodes is None:
        raise NotUnisolvent("a lagrange disk cone needs explicit nodes")
    q_basis = BasisId(kind, 2, degree, nodes if kind == "lagrange" else None)
    d = degree // 2
    weights = [
        from_monomial({(0, 0): 1}, q_basis),
        from_monomial({(0, 0): 1, (2, 0): -1, (0, 2): -1}, q_basis),
    ]
    k = d + 1
    points = tuple(
        (Fraction(a, 2 * k), Fraction(b, 2 * k)) for a in range(-k, k + 1) for b in range(-k, k + 1)
    )
    return ConeSpec.create(2, q_basis, weights, [d, d - 1], points=points)
