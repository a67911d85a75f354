__version__ = "0.1.0"

from .errors import (
    WsosError,
    NotFactorable,
    NotPD,
    NotInterior,
    NotUnisolvent,
    DegreeOverflow,
    DimensionMismatch,
    NoRealRoot,
    EmptyInterval,
    InitNotValid,
    MaxIters,
    RoundingFailed,
    DigestMismatch,
    ParseError,
)

from .exactarith import (
    Rational,
    SymMatrix,
    BlockDiagMatrix,
    RationalInterval,
    as_rational,
    ldl_factor,
    is_pd,
    is_psd,
    solve_spd,
    solve_linear,
    sqrt_ceil,
    sqrt_interval,
    min_denominator_rational,
    round_nearest,
)

from .polybasis import (
    BasisId,
    PolyVec,
    ConeSpec,
    LambdaOp,
    build_lambda,
    lambda_apply,
    lambda_adjoint,
    basis_product_expand,
    line_cone,
    interval_cone,
    disk_cone,
)

from .barrier import (
    BarrierContext,
    in_dual_interior,
    neg_gradient,
    hessian,
    local_norm_sq,
    dual_local_norm_sq,
    barrier_value_interval,
)

from .certify import (
    Certificate,
    WsosDecomposition,
    is_dual_certificate,
    gram_recover,
    verify_decomposition,
)

from .bounds import (
    MSpec,
    BoundReport,
    build_M,
    cond_upper,
    denominator_N,
    bitsize_bound,
    bound_case_report,
)

from .solver import (
    SolverParams,
    IterationTrace,
    SolveResult,
    newton_step,
    round_certificate,
    c_update,
    round_c,
    algorithm1,
    algorithm2,
    default_interior_point,
)

from .io import cone_digest, read_cone, write_cone, read_certificate, write_certificate

__all__ = [
    'WsosError', 'NotFactorable', 'NotPD', 'NotInterior', 'NotUnisolvent', 'DegreeOverflow',
    'DimensionMismatch', 'NoRealRoot', 'EmptyInterval', 'InitNotValid', 'MaxIters',
    'RoundingFailed', 'DigestMismatch', 'ParseError',
    'Rational', 'SymMatrix', 'BlockDiagMatrix', 'RationalInterval', 'as_rational',
    'ldl_factor', 'is_pd', 'is_psd', 'solve_spd', 'solve_linear', 'sqrt_ceil', 'sqrt_interval',
    'min_denominator_rational', 'round_nearest',
    'BasisId', 'PolyVec', 'ConeSpec', 'LambdaOp', 'build_lambda', 'lambda_apply', 'lambda_adjoint',
    'basis_product_expand', 'line_cone', 'interval_cone', 'disk_cone',
    'BarrierContext', 'in_dual_interior', 'neg_gradient', 'hessian', 'local_norm_sq',
    'dual_local_norm_sq', 'barrier_value_interval',
    'Certificate', 'WsosDecomposition', 'is_dual_certificate', 'gram_recover', 'verify_decomposition',
    'MSpec', 'BoundReport', 'build_M', 'cond_upper', 'denominator_N', 'bitsize_bound', 'bound_case_report',
    'SolverParams', 'IterationTrace', 'SolveResult', 'newton_step', 'round_certificate', 'c_update',
    'round_c', 'algorithm1', 'algorithm2', 'default_interior_point',
    'cone_digest', 'read_cone', 'write_cone', 'read_certificate', 'write_certificate',
]
