"""Entire (affine) automorphic functions of closed-form entire functions.

For f entire, an automorphic function is a Phi with f(Phi(z)) = f(z). The
entire ones are Phi(z) = e^{i*pi*theta} z + b with theta rational; away from
translations each fixes a critical point z0 of f and its multiplier is an
n-th root of unity, n being the order of the zero of f - f(z0) at z0.
"""
from .expr import (
    ExprSyntaxError,
    NotEntireError,
    PolyForm,
    differentiate,
    evaluate,
    format_expr,
    parse,
    to_polynomial,
)
from .roots import CriticalPoint, NoConvergence, SearchBox, critical_points, polynomial_roots
from .series import TaylorSeries, compose_affine, expand, zero_order
from .symmetry import (
    AffineMap,
    RationalAngle,
    VerificationPolicy,
    VerificationReport,
    candidates,
    check_intersection_translation,
    check_translation,
    compose,
    find_symmetries_at,
    fixed_point,
    fixed_point_derivative_check,
    group_closure,
    invert,
    orbit,
    theta_height,
    verify,
    zero_order_at,
)

__version__ = "0.1.0"
