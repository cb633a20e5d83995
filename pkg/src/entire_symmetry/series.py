"""Truncated Taylor series about an arbitrary centre.

A :class:`TaylorSeries` holds a_0..a_N with a_j = f^(j)(c)/j!. Series for an
expression are built by structural recursion: sums and products of child
series, and the primitives via their exact rational Maclaurin coefficients
substituted with the (recentred) inner series.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import _kernels
from .expr import (
    Constant,
    ExprNode,
    IntegerPower,
    Negate,
    Primitive,
    Product,
    Sum,
    Variable,
)

DEFAULT_ORDER = 64
DEFAULT_ZERO_TOL = 1e-9


class CenterMismatch(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


class AllCoefficientsVanish(ArithmeticError):
    """No coefficient up to the truncation order clears the threshold; raise N."""


class TaylorSeries:
    __slots__ = ("center", "coeffs")

    def __init__(self, center, coeffs):
        coeffs = np.array(coeffs, dtype=np.complex128)
        if coeffs.ndim != 1 or coeffs.shape[0] < 1:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        coeffs.setflags(write=False)
        self.center = complex(center)
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    def __repr__(self):
        return f"TaylorSeries(center={self.center!r}, order={self.order}, coeffs={self.coeffs[:6]!r}...)"

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, j):
        return self.coeffs[j]

    def _check(self, other: "TaylorSeries"):
        if other.center != self.center:
            raise CenterMismatch(f"centres differ: {self.center} vs {other.center}")
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, TaylorSeries):
            return add(self, other)
        c = self.coeffs.copy()
        c[0] += other
        return TaylorSeries(self.center, c)

    __radd__ = __add__

    def __neg__(self):
        return TaylorSeries(self.center, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TaylorSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __call__(self, z):
        """Evaluate the truncated polynomial at z (scalar or array)."""
        h = np.asarray(z, dtype=np.complex128) - self.center
        out = _kernels.horner(self.coeffs, h)
        return complex(out) if out.ndim == 0 else out

    def allclose(self, other: "TaylorSeries", atol: float = 1e-12) -> bool:
        return other.order == self.order and bool(np.all(np.abs(self.coeffs - other.coeffs) <= atol))


def add(s: TaylorSeries, t: TaylorSeries) -> TaylorSeries:
    s._check(t)
    return TaylorSeries(s.center, s.coeffs + t.coeffs)


def mul(s: TaylorSeries, t: TaylorSeries) -> TaylorSeries:
    s._check(t)
    return TaylorSeries(s.center, _kernels.cauchy_product(s.coeffs, t.coeffs))


def scale(s: TaylorSeries, c: complex) -> TaylorSeries:
    return TaylorSeries(s.center, s.coeffs * complex(c))


def derivative(s: TaylorSeries) -> TaylorSeries:
    if s.order < 1:
        raise ValueError("derivative needs order >= 1")
    return TaylorSeries(s.center, s.coeffs[1:] * np.arange(1, s.order + 1))


def compose_affine(s: TaylorSeries, lam: complex, b: complex, center: complex) -> TaylorSeries:
    """Series of z -> s(lam*z + b) about ``center``; requires lam*center + b == s.center."""
    lam, b, center = complex(lam), complex(b), complex(center)
    image = lam * center + b
    if abs(image - s.center) > 1e-12 * max(1.0, abs(s.center)):
        raise CenterMismatch(f"lam*center + b = {image} does not match series centre {s.center}")
    powers = np.empty(s.order + 1, dtype=np.complex128)
    powers[0] = 1
    for j in range(1, s.order + 1):
        powers[j] = powers[j - 1] * lam
    return TaylorSeries(center, s.coeffs * powers)


def compose(outer: TaylorSeries, inner: TaylorSeries) -> TaylorSeries:
    """Series of outer(inner(z)) about inner's centre.

    Only the regime where inner(centre) equals outer's centre is supported,
    so the substituted increment has no constant term.
    """
    if outer.order != inner.order:
        raise OrderMismatch("outer and inner series need the same order")
    if abs(inner.coeffs[0] - outer.center) > 1e-12 * max(1.0, abs(outer.center)):
        raise CenterMismatch("inner series value at its centre must equal the outer centre")
    h = inner.coeffs.copy()
    h[0] = 0
    return TaylorSeries(inner.center, _kernels.substitute(outer.coeffs, h))


def zero_order(s: TaylorSeries, tol: float = DEFAULT_ZERO_TOL) -> int:
    """Smallest m with |a_m| > tol * max_j |a_j| (0 when the series does not vanish at its centre)."""
    mags = np.abs(s.coeffs)
    top = mags.max()
    if not np.isfinite(top):
        raise OverflowError("series coefficients are not finite")
    if top == 0:
        raise AllCoefficientsVanish(f"all {s.order + 1} coefficients vanish; increase the truncation order")
    hits = np.nonzero(mags > tol * top)[0]
    return int(hits[0])


# ---------------------------------------------------------------- expansion


@lru_cache(maxsize=None)
def _maclaurin(kind: str, n: int) -> np.ndarray:
    # exact rationals, rounded once
    coeffs = []
    for j in range(n + 1):
        inv = Fraction(1, factorial(j))
        if kind == "exp":
            c = inv
        elif kind == "sinh":
            c = inv if j % 2 == 1 else 0
        elif kind == "cosh":
            c = inv if j % 2 == 0 else 0
        elif kind == "sin":
            c = inv * (-1) ** ((j - 1) // 2) if j % 2 == 1 else 0
        elif kind == "cos":
            c = inv * (-1) ** (j // 2) if j % 2 == 0 else 0
        else:
            raise ValueError(kind)
        coeffs.append(complex(float(c)))
    arr = np.array(coeffs, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _substitute(kind: str, h: np.ndarray) -> np.ndarray:
    base = _maclaurin(kind, h.shape[0] - 1)
    if not np.any(h[2:]):
        # linear increment: a_j * c^j
        powers = np.empty(h.shape[0], dtype=np.complex128)
        powers[0] = 1
        for j in range(1, h.shape[0]):
            powers[j] = powers[j - 1] * h[1]
        return base * powers
    return _kernels.substitute(base, h)


def expand(f: ExprNode, center: complex, order: int = DEFAULT_ORDER) -> TaylorSeries:
    """Taylor series of ``f`` about ``center`` truncated at ``order``."""
    if order < 1:
        raise ValueError("truncation order must be >= 1")
    center = complex(center)
    with np.errstate(over="raise", invalid="raise"):
        try:
            coeffs = _expand(f, center, order + 1)
        except FloatingPointError as exc:
            raise OverflowError(f"series coefficients overflow: {exc}") from exc
    if not np.all(np.isfinite(coeffs)):
        raise OverflowError("series coefficients overflow")
    return TaylorSeries(center, coeffs)


def _expand(f: ExprNode, c: complex, n: int) -> np.ndarray:
    if isinstance(f, Constant):
        out = np.zeros(n, dtype=np.complex128)
        out[0] = f.value
        return out
    if isinstance(f, Variable):
        out = np.zeros(n, dtype=np.complex128)
        out[0] = c
        if n > 1:
            out[1] = 1
        return out
    if isinstance(f, Sum):
        acc = _expand(f.terms[0], c, n)
        for t in f.terms[1:]:
            acc = acc + _expand(t, c, n)
        return acc
    if isinstance(f, Product):
        acc = _expand(f.factors[0], c, n)
        for t in f.factors[1:]:
            acc = _kernels.cauchy_product(acc, _expand(t, c, n))
        return acc
    if isinstance(f, Negate):
        return -_expand(f.arg, c, n)
    if isinstance(f, IntegerPower):
        base = _expand(f.base, c, n)
        result = np.zeros(n, dtype=np.complex128)
        result[0] = 1
        e = f.exponent
        while e:
            if e & 1:
                result = _kernels.cauchy_product(result, base)
            e >>= 1
            if e:
                base = _kernels.cauchy_product(base, base)
        return result
    if isinstance(f, Primitive):
        u = _expand(f.arg, c, n)
        u0 = complex(u[0])
        h = u.copy()
        h[0] = 0
        k = f.kind
        if k == "exp":
            return cmath.exp(u0) * _substitute("exp", h)
        if k == "sin":
            return cmath.sin(u0) * _substitute("cos", h) + cmath.cos(u0) * _substitute("sin", h)
        if k == "cos":
            return cmath.cos(u0) * _substitute("cos", h) - cmath.sin(u0) * _substitute("sin", h)
        if k == "sinh":
            return cmath.sinh(u0) * _substitute("cosh", h) + cmath.cosh(u0) * _substitute("sinh", h)
        if k == "cosh":
            return cmath.cosh(u0) * _substitute("cosh", h) + cmath.sinh(u0) * _substitute("sinh", h)
    raise TypeError(f"unknown node {f!r}")
