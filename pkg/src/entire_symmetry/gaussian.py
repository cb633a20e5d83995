"""Exact Gaussian-rational numbers and dense polynomials over them.

Used wherever a result must not be rounded: polynomial coefficients parsed
from rational literals, translation parts of affine maps with multiplier in
{1, -1, i, -i}, and square-free factorisation ahead of root finding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        if isinstance(value, float):
            return cls(Fraction(value))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        """Exact dyadic value of a binary64 complex number."""
        return cls(Fraction(z.real), Fraction(z.imag))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def reciprocal(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are exact")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _maybe(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value))
    return None


ZERO = GaussianRational(Fraction(0))
ONE = GaussianRational(Fraction(1))
I = GaussianRational(Fraction(0), Fraction(1))


def rationalize(z: complex, max_denominator: int) -> GaussianRational:
    return GaussianRational(
        Fraction(z.real).limit_denominator(max_denominator),
        Fraction(z.imag).limit_denominator(max_denominator),
    )


# Dense polynomials: ascending coefficient lists of GaussianRational.

Poly = list


def poly_trim(p: Sequence[GaussianRational]) -> Poly:
    out = list(p)
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out or [ZERO]


def poly_degree(p: Sequence[GaussianRational]) -> int:
    p = poly_trim(p)
    if len(p) == 1 and not p[0]:
        return -1
    return len(p) - 1


def poly_add(p, q) -> Poly:
    n = max(len(p), len(q))
    return poly_trim([(p[k] if k < len(p) else ZERO) + (q[k] if k < len(q) else ZERO) for k in range(n)])


def poly_sub(p, q) -> Poly:
    return poly_add(p, [-c for c in q])


def poly_mul(p, q) -> Poly:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_scale(p, c) -> Poly:
    return poly_trim([a * c for a in p])


def poly_derivative(p) -> Poly:
    if len(p) <= 1:
        return [ZERO]
    return poly_trim([p[k] * k for k in range(1, len(p))])


def poly_eval(p, z) -> GaussianRational:
    acc = ZERO
    for c in reversed(p):
        acc = acc * z + c
    return acc


def poly_divmod(p, d) -> tuple[Poly, Poly]:
    d = poly_trim(d)
    dd = poly_degree(d)
    if dd < 0:
        raise ZeroDivisionError("polynomial division by zero")
    rem = poly_trim(p)
    if poly_degree(rem) < dd:
        return [ZERO], rem
    quot = [ZERO] * (len(rem) - dd)
    inv_lead = d[-1].reciprocal()
    rem = list(rem)
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k] * inv_lead
        quot[k - dd] = c
        if c:
            for j in range(dd + 1):
                rem[k - dd + j] = rem[k - dd + j] - c * d[j]
    return poly_trim(quot), poly_trim(rem[:dd] if dd > 0 else [ZERO])


def poly_monic(p) -> Poly:
    p = poly_trim(p)
    if poly_degree(p) < 0:
        return p
    inv = p[-1].reciprocal()
    return [c * inv for c in p]


def poly_gcd(p, q) -> Poly:
    a, b = poly_trim(p), poly_trim(q)
    while poly_degree(b) >= 0:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_compose_affine(p, lam, b) -> Poly:
    """Coefficients of z -> p(lam*z + b)."""
    inner = [b, lam]
    acc = [p[-1]]
    for c in reversed(p[:-1]):
        acc = poly_add(poly_mul(acc, inner), [c])
    return poly_trim(acc)


def square_free_decomposition(p) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lead * prod(f_k ** k) with each f_k monic and square-free."""
    p = poly_trim(p)
    if poly_degree(p) < 1:
        return []
    dp = poly_derivative(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = poly_sub(c, poly_derivative(b))
    out = []
    k = 1
    while poly_degree(b) >= 1:
        a = poly_gcd(b, d)
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = poly_sub(c, poly_derivative(b))
        if poly_degree(a) >= 1:
            out.append((poly_monic(a), k))
        k += 1
    return out
