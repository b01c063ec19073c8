"""Weighted sum-of-squares interpolation certificates."""

from ._core import (
    Certificate,
    Error,
    InsufficientMargin,
    InvalidInput,
    NotUnisolvent,
    OutOfDomain,
    Problem,
    SolveError,
    SolveResult,
    UnknownPreset,
    VerificationReport,
    WeightDegreeMismatch,
    certificate_to_json,
    check_linear_independence,
    eval_G,
    eval_p_B,
    eval_p_lambda,
    extract_certificate,
    fd_gradient_check,
    fd_hessian_check,
    grad_G,
    hankel_structure_check,
    hess_G,
    lagrange_cone_membership,
    min_eig_M,
    preset,
    preset_catalog,
    random_in_domain_lambda,
    read_certificate_json,
    regularize_epsilon,
    segment_problem,
    solve,
    triangle_problem,
    verify_certificate,
    write_certificate_json,
    write_trace_csv,
)

__all__ = [
    "Certificate",
    "Error",
    "InsufficientMargin",
    "InvalidInput",
    "NotUnisolvent",
    "OutOfDomain",
    "Problem",
    "SolveError",
    "SolveResult",
    "UnknownPreset",
    "VerificationReport",
    "WeightDegreeMismatch",
    "certificate_to_json",
    "check_linear_independence",
    "eval_G",
    "eval_p_B",
    "eval_p_lambda",
    "extract_certificate",
    "fd_gradient_check",
    "fd_hessian_check",
    "grad_G",
    "hankel_structure_check",
    "hess_G",
    "lagrange_cone_membership",
    "min_eig_M",
    "preset",
    "preset_catalog",
    "random_in_domain_lambda",
    "read_certificate_json",
    "regularize_epsilon",
    "segment_problem",
    "solve",
    "triangle_problem",
    "verify_certificate",
    "write_certificate_json",
    "write_trace_csv",
]
