"""
JSON file formats for cones, polynomials, certificates, decompositions and traces

Every rational is written as a canonical "num/den" (or "n") string; floats
are rejected on read. ``cone_digest`` hashes the canonical JSON of a cone so
a certificate can be tied to the cone it was computed for.
"""

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..certify import Certificate, WsosDecomposition
from ..errors import ParseError, WsosError
from ..exactarith import SymMatrix, as_rational, as_vector, format_rational
from ..polybasis import BasisId, ConeSpec, PolyVec
from ..solver import IterationRecord, IterationTrace

__all__ = [
    "cone_to_dict",
    "cone_from_dict",
    "cone_digest",
    "canonical_json",
    "read_cone",
    "write_cone",
    "read_poly",
    "write_poly",
    "read_certificate",
    "write_certificate",
    "read_decomposition",
    "write_decomposition",
    "read_trace",
    "write_trace",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _fmt_vec(v: Sequence[Fraction]) -> List[str]:
    return [format_rational(q) for q in v]


def _parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise ParseError(f"{where}: floating-point value {value!r}; write rationals as strings")
    try:
        return as_rational(value)
    except TypeError:
        raise ParseError(f"{where}: expected a rational, got {value!r}")


def _parse_vec(values: Any, where: str) -> Tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list, got {type(values).__name__}")
    return tuple(_parse_rational(v, f"{where}[{i}]") for i, v in enumerate(values))


def _require(obj: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _load(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})")
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror or e}")


def _dump(obj: Any, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

def _node_out(node: Tuple[Fraction, ...]) -> Any:
    return format_rational(node[0]) if len(node) == 1 else _fmt_vec(node)


def _node_in(value: Any, n: int, where: str) -> Tuple[Fraction, ...]:
    node = _parse_vec(value, where) if isinstance(value, list) else (_parse_rational(value, where),)
    if len(node) != n:
        raise ParseError(f"{where}: node has {len(node)} coordinates, expected {n}")
    return node


def _basis_to_dict(basis: BasisId) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": basis.kind, "degree": basis.degree}
    if basis.nodes is not None:
        out["nodes"] = [_node_out(z) for z in basis.nodes]
    return out


def _basis_from_dict(obj: Any, n: int, where: str) -> BasisId:
    kind = _require(obj, "kind", where)
    degree = _require(obj, "degree", where)
    if not isinstance(degree, int) or isinstance(degree, bool):
        raise ParseError(f"{where}: degree must be an integer")
    nodes = None
    if obj.get("nodes") is not None:
        raw = obj["nodes"]
        if not isinstance(raw, list):
            raise ParseError(f"{where}: nodes must be a list")
        nodes = tuple(_node_in(z, n, f"{where}.nodes[{i}]") for i, z in enumerate(raw))
    try:
        return BasisId(kind, n, degree, nodes)
    except ValueError as e:
        raise ParseError(f"{where}: {e}")


def cone_to_dict(spec: ConeSpec) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "n": spec.n,
        "q_basis": _basis_to_dict(spec.q_basis),
        "weights": [_fmt_vec(w.coeffs) for w in spec.weights],
        "degrees": list(spec.degrees),
        "p_bases": [_basis_to_dict(pb) for pb in spec.p_bases],
    }
    if spec.points is not None:
        out["points"] = [_node_out(z) for z in spec.points]
    return out


def cone_from_dict(obj: Any) -> ConeSpec:
    """Build a ConeSpec; structural problems surface as ParseError, cone errors as raised."""
    n = _require(obj, "n", "cone")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"cone: n must be a positive integer, got {n!r}")
    q_basis = _basis_from_dict(_require(obj, "q_basis", "cone"), n, "cone.q_basis")
    weights_raw = _require(obj, "weights", "cone")
    if not isinstance(weights_raw, list):
        raise ParseError("cone: weights must be a list")
    weights = [_parse_vec(w, f"cone.weights[{i}]") for i, w in enumerate(weights_raw)]
    degrees = _require(obj, "degrees", "cone")
    if not isinstance(degrees, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in degrees):
        raise ParseError("cone: degrees must be a list of integers")
    p_bases = None
    if obj.get("p_bases") is not None:
        if not isinstance(obj["p_bases"], list):
            raise ParseError("cone: p_bases must be a list")
        p_bases = [_basis_from_dict(pb, n, f"cone.p_bases[{i}]") for i, pb in enumerate(obj["p_bases"])]
    points = None
    if obj.get("points") is not None:
        if not isinstance(obj["points"], list):
            raise ParseError("cone: points must be a list")
        points = [_node_in(z, n, f"cone.points[{i}]") for i, z in enumerate(obj["points"])]
    try:
        return ConeSpec.create(n, q_basis, weights, degrees, p_bases, points)
    except ValueError as e:
        raise ParseError(f"cone: {e}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def cone_digest(spec: ConeSpec) -> str:
    """SHA-256 hex digest of the canonical JSON form of the cone."""
    return hashlib.sha256(canonical_json(cone_to_dict(spec)).encode("utf-8")).hexdigest()


def read_cone(path: PathLike) -> ConeSpec:
    spec = cone_from_dict(_load(path))
    logger.debug(f"read cone from {path}: n={spec.n}, U={spec.U}, L={spec.L}")
    return spec


def write_cone(spec: ConeSpec, path: PathLike) -> None:
    _dump(cone_to_dict(spec), path)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def read_poly(path: PathLike, U: Optional[int] = None) -> Tuple[Fraction, ...]:
    """Coefficients from ``{"coeffs": [...]}`` or a bare list, checked against U if given."""
    obj = _load(path)
    raw = obj["coeffs"] if isinstance(obj, dict) and "coeffs" in obj else obj
    coeffs = _parse_vec(raw, f"{path}")
    if U is not None and len(coeffs) != U:
        raise ParseError(f"{path}: polynomial has {len(coeffs)} coefficients, cone has U={U}")
    return coeffs


def write_poly(coeffs: Union[PolyVec, Sequence[Fraction]], path: PathLike) -> None:
    if isinstance(coeffs, PolyVec):
        coeffs = coeffs.coeffs
    _dump({"coeffs": _fmt_vec(as_vector(coeffs))}, path)


# ---------------------------------------------------------------------------
# Certificates and decompositions
# ---------------------------------------------------------------------------

def _optional_rational(obj: Dict[str, Any], key: str, where: str) -> Optional[Fraction]:
    value = obj.get(key)
    return None if value is None else _parse_rational(value, f"{where}.{key}")


def read_certificate(path: PathLike) -> Certificate:
    obj = _load(path)
    x = _parse_vec(_require(obj, "x", "certificate"), "certificate.x")
    digest = _require(obj, "cone_digest", "certificate")
    if not isinstance(digest, str):
        raise ParseError("certificate: cone_digest must be a string")
    N = _optional_rational(obj, "N", "certificate")
    if N is not None and N.denominator != 1:
        raise ParseError(f"certificate: N must be an integer, got {N}")
    iterations = obj.get("iterations")
    try:
        return Certificate(
            x=x,
            c=_optional_rational(obj, "c", "certificate"),
            N=None if N is None else int(N),
            cone_digest=digest,
            verified=bool(obj.get("verified", False)),
            iterations=None if iterations is None else int(iterations),
        )
    except (ValueError, WsosError) as e:
        raise ParseError(f"certificate: {e}")


def write_certificate(cert: Certificate, path: PathLike) -> None:
    out: Dict[str, Any] = {"cone_digest": cert.cone_digest, "x": _fmt_vec(cert.x)}
    if cert.c is not None:
        out["c"] = format_rational(cert.c)
    if cert.N is not None:
        out["N"] = str(cert.N)
    if cert.iterations is not None:
        out["iterations"] = cert.iterations
    out["verified"] = cert.verified
    _dump(out, path)


def _matrix_out(A: SymMatrix) -> List[List[str]]:
    return [_fmt_vec(row) for row in A.rows()]


def _matrix_in(raw: Any, where: str) -> SymMatrix:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise ParseError(f"{where}: expected a list of rows")
    rows = [_parse_vec(r, f"{where}[{i}]") for i, r in enumerate(raw)]
    try:
        return SymMatrix.from_rows(rows)
    except (ValueError, WsosError) as e:
        raise ParseError(f"{where}: {e}")


def read_decomposition(path: PathLike) -> Tuple[WsosDecomposition, str]:
    """Returns the decomposition and the cone digest it was written for."""
    obj = _load(path)
    digest = _require(obj, "cone_digest", "decomposition")
    raw = _require(obj, "gram_blocks", "decomposition")
    if not isinstance(raw, list):
        raise ParseError("decomposition: gram_blocks must be a list")
    blocks = tuple(_matrix_in(b, f"decomposition.gram_blocks[{i}]") for i, b in enumerate(raw))
    return WsosDecomposition(blocks), digest


def write_decomposition(dec: WsosDecomposition, path: PathLike, cone_digest: str = "") -> None:
    _dump(
        {
            "cone_digest": cone_digest,
            "gram_blocks": [_matrix_out(b) for b in dec.gram_blocks],
            "psd": list(dec.psd_flags),
        },
        path,
    )


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

def write_trace(trace: IterationTrace, path: PathLike) -> None:
    """One JSON object per line and per iteration."""
    with open(path, "w", encoding="utf-8") as f:
        for rec in trace:
            f.write(canonical_json(rec.as_dict()) + "\n")


def read_trace(path: PathLike) -> IterationTrace:
    trace = IterationTrace()
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [line for line in f if line.strip()]
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror or e}")
    for lineno, line in enumerate(lines, 1):
        where = f"{path}:{lineno}"
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"{where}: invalid JSON ({e})")
        N = _parse_rational(_require(obj, "N", where), f"{where}.N")
        if N.denominator != 1 or N < 1:
            raise ParseError(f"{where}: N must be a positive integer, got {N}")
        trace.append(
            IterationRecord(
                iteration=int(_require(obj, "iter", where)),
                c=_parse_rational(_require(obj, "c", where), f"{where}.c"),
                delta_c=_parse_rational(_require(obj, "delta_c", where), f"{where}.delta_c"),
                N=int(N),
                max_bits_x=int(_require(obj, "max_bits_x", where)),
                verified=bool(obj.get("verified", False)),
            )
        )
    return trace
