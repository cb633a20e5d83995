"""Affine automorphic functions Phi(z) = e^{i*pi*theta} z + b of an entire f.

The search is anchored at a critical point z0 of f: with n the order of the
zero of f(z) - f(z0) at z0, the only affine candidates fixing z0 are the
rotations by e^{2*pi*i*k/n} about z0, k = 1..n-1. Each candidate is then
checked against f(Phi(z)) = f(z), exactly for Gaussian-rational polynomial
data and numerically otherwise.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _kernels
from .expr import ExprNode, differentiate, evaluate, format_expr, to_polynomial
from .gaussian import (
    ONE,
    ZERO,
    GaussianRational,
    I,
    poly_compose_affine,
    poly_derivative,
    poly_eval,
    rationalize,
)
from .series import (
    DEFAULT_ORDER,
    DEFAULT_ZERO_TOL,
    AllCoefficientsVanish,
    compose_affine,
    expand,
    zero_order,
)

VERIFIED_EXACT = "VerifiedExact"
VERIFIED_NUMERIC = "VerifiedNumeric"
REFUTED = "Refuted"
INDETERMINATE = "Indeterminate"

NO_SYMMETRY_MESSAGE = "no entire automorphic function related to this point"
DEDUP_TOL = 1e-10


class OrderOne(ValueError):
    """f - f(z0) has a simple zero at z0, so z0 is not a critical point."""


class TranslationHasNoFixedPoint(ValueError):
    pass


class EveryPointFixed(ValueError):
    pass


class NoMatchingRoot(ArithmeticError):
    """The multiplier at a fixed point is not an n-th root of unity."""


class PropositionViolation(AssertionError):
    """A map in Aut(f) and Aut(f') that is not a translation."""


# ---------------------------------------------------------------- angles


def _cis_pi(x: Fraction) -> complex:
    """e^{i*pi*x} for rational x, exact on quarter turns and reduced to |r| <= 1/4 otherwise."""
    k = round(2 * x)
    r = x - Fraction(k, 2)
    rot = (1, 1j, -1, -1j)[k % 4]
    if r == 0:
        return complex(rot)
    t = math.pi * float(r)
    return complex(rot) * complex(math.cos(t), math.sin(t))


@dataclass(frozen=True, order=True)
class RationalAngle:
    """theta = p/q taken modulo 2; the map multiplier is e^{i*pi*theta}."""

    value: Fraction = Fraction(0)

    def __post_init__(self):
        v = Fraction(self.value) % 2
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        try:
            return cls(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid angle {text!r}; expected p/q") from exc

    @property
    def p(self) -> int:
        return self.value.numerator

    @property
    def q(self) -> int:
        return self.value.denominator

    def multiplier(self) -> complex:
        return _cis_pi(self.value)

    def exact_multiplier(self) -> Optional[GaussianRational]:
        if self.q > 2:
            return None
        return (ONE, I, -ONE, -I)[int(2 * self.value)]

    def order(self) -> int:
        """Multiplicative order of the multiplier."""
        return (2 * self.q) // math.gcd(self.p, 2 * self.q)

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.value + other.value)

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return f"{self.p}/{self.q}"


def theta_height(angle: RationalAngle) -> int:
    """max(|p|, q) for the reduced angle in [0, 2); the height of 0 is 1."""
    return max(abs(angle.p), angle.q)


# ---------------------------------------------------------------- maps


@dataclass(frozen=True)
class AffineMap:
    angle: RationalAngle
    b: complex
    b_exact: Optional[GaussianRational] = None
    provenance: Optional[complex] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b) + 0j)
        if self.b_exact is not None:
            object.__setattr__(self, "b", complex(self.b_exact))

    @classmethod
    def translation(cls, b) -> "AffineMap":
        b_exact = b if isinstance(b, GaussianRational) else None
        return cls(RationalAngle(0), complex(b), b_exact)

    @property
    def multiplier(self) -> complex:
        return self.angle.multiplier()

    def __call__(self, z):
        return self.multiplier * z + self.b

    def is_identity(self) -> bool:
        return self.angle.is_zero() and self.b == 0

    def same_as(self, other: "AffineMap", tol: float = DEDUP_TOL) -> bool:
        return self.angle == other.angle and abs(self.b - other.b) <= tol * max(1.0, abs(self.b))

    def __str__(self):
        rot = "z" if self.angle.is_zero() else f"e^(i*pi*{self.angle})*z"
        if self.b == 0:
            return rot
        return f"{rot} + ({self.b.real:.17g}{self.b.imag:+.17g}i)"

    def to_dict(self) -> dict:
        return {
            "theta": str(self.angle),
            "multiplier": cjson(self.multiplier),
            "b": cjson(self.b),
            "exact": self.b_exact is not None and self.angle.q <= 2,
        }


IDENTITY = AffineMap(RationalAngle(0), 0j, ZERO)


def cjson(z) -> dict:
    z = complex(z)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def compose(phi1: AffineMap, phi2: AffineMap) -> AffineMap:
    """phi1 o phi2."""
    lam1 = phi1.angle.exact_multiplier()
    b_exact = None
    if lam1 is not None and phi1.b_exact is not None and phi2.b_exact is not None:
        b_exact = lam1 * phi2.b_exact + phi1.b_exact
    return AffineMap(phi1.angle + phi2.angle, phi1.multiplier * phi2.b + phi1.b, b_exact)


def invert(phi: AffineMap) -> AffineMap:
    inv_angle = -phi.angle
    lam_inv = inv_angle.exact_multiplier()
    b_exact = -(lam_inv * phi.b_exact) if lam_inv is not None and phi.b_exact is not None else None
    return AffineMap(inv_angle, -(inv_angle.multiplier() * phi.b), b_exact)


def fixed_point(phi: AffineMap) -> complex:
    """b / (1 - e^{i*pi*theta})."""
    if phi.angle.is_zero():
        if phi.b == 0:
            raise EveryPointFixed("the identity fixes every point")
        raise TranslationHasNoFixedPoint("a translation has no fixed point")
    exact = fixed_point_exact(phi)
    if exact is not None:
        return complex(exact)
    return phi.b / _one_minus(phi.angle)


def fixed_point_exact(phi: AffineMap) -> Optional[GaussianRational]:
    lam = phi.angle.exact_multiplier()
    if lam is None or phi.b_exact is None or phi.angle.is_zero():
        return None
    return phi.b_exact / (ONE - lam)


def _one_minus(angle: RationalAngle) -> complex:
    # 1 - e^{i*pi*x} = 2 sin^2(pi*x/2) - i sin(pi*x), without cancellation
    half = _cis_pi(angle.value / 2)
    s = half.imag
    full = angle.multiplier()
    return complex(2 * s * s, -full.imag)


# ---------------------------------------------------------------- zero order and candidates


def zero_order_at(f: ExprNode, z0: complex, order: int = DEFAULT_ORDER, tol: float = DEFAULT_ZERO_TOL) -> int:
    """Order n of the zero of f(z) - f(z0) at z0 (n >= 2 exactly at critical points)."""
    n = _raw_zero_order(f, z0, order, tol)
    if n == 1:
        raise OrderOne(f"f - f(z0) has a simple zero at {complex(z0)}: not a critical point")
    return n


def _raw_zero_order(f: ExprNode, z0: complex, order: int, tol: float) -> int:
    s = expand(f, complex(z0), order)
    c = s.coeffs.copy()
    c[0] = 0
    try:
        return zero_order(type(s)(s.center, c), tol)
    except AllCoefficientsVanish as exc:
        raise AllCoefficientsVanish(
            f"f - f(z0) vanishes to order > {order} at {complex(z0)}; increase the truncation order"
        ) from exc


def candidates(z0, n: int) -> list[AffineMap]:
    """The n-1 rotations about z0 by e^{2*pi*i*k/n}, k = 1..n-1.

    ``z0`` may be a GaussianRational, in which case quarter-turn candidates
    carry an exact translation part.
    """
    if n < 2:
        raise ValueError("candidates need n >= 2")
    z0_exact = z0 if isinstance(z0, GaussianRational) else None
    z0c = complex(z0)
    out = []
    for k in range(1, n):
        angle = RationalAngle(Fraction(2 * k, n))
        lam = angle.exact_multiplier()
        if z0_exact is not None and lam is not None:
            out.append(AffineMap(angle, 0j, z0_exact * (ONE - lam), provenance=z0c))
        else:
            out.append(AffineMap(angle, z0c * _one_minus(angle), None, provenance=z0c))
    return out


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class VerificationPolicy:
    series_order: int = DEFAULT_ORDER      # N, for zero orders
    check_order: int = 32                  # M, for series comparison
    samples: int = 32                      # S
    eps_accept: float = 1e-10
    eps_reject: float = 1e-6
    seed: int = 0
    radius: Optional[float] = None         # default 2 * (1 + |z0|)
    zero_tol: float = DEFAULT_ZERO_TOL
    critical_tol: float = 1e-9

    def to_dict(self) -> dict:
        return {
            "N": self.series_order,
            "M": self.check_order,
            "S": self.samples,
            "eps_accept": self.eps_accept,
            "eps_reject": self.eps_reject,
            "seed": self.seed,
            "radius": self.radius,
            "zero_tol": self.zero_tol,
        }


DEFAULT_POLICY = VerificationPolicy()


@dataclass(frozen=True)
class VerificationReport:
    status: str
    candidate: AffineMap
    function: ExprNode
    tier: str
    max_residual: float = 0.0
    series_residual: Optional[float] = None
    order: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    center: Optional[complex] = None
    radius: Optional[float] = None
    witness: Optional[complex] = None
    witness_residual: Optional[float] = None
    note: str = ""

    @property
    def verified(self) -> bool:
        return self.status in (VERIFIED_EXACT, VERIFIED_NUMERIC)

    def to_dict(self) -> dict:
        d = {
            "status": self.status,
            "tier": self.tier,
            "map": self.candidate.to_dict(),
            "function": format_expr(self.function),
            "max_residual": self.max_residual,
            "series_residual": self.series_residual,
            "order_M": self.order,
            "samples_S": self.samples,
            "seed": self.seed,
            "center": None if self.center is None else cjson(self.center),
            "radius": self.radius,
            "witness": None if self.witness is None else cjson(self.witness),
            "witness_residual": self.witness_residual,
        }
        if self.note:
            d["note"] = self.note
        return d


def relative_residual(f: ExprNode, phi: AffineMap, z: complex) -> float:
    fz = evaluate(f, z)
    return abs(evaluate(f, phi(z)) - fz) / (1 + abs(fz))


def _sample_disk(rng: np.random.Generator, center: complex, radius: float, count: int) -> list[complex]:
    r = radius * np.sqrt(rng.random(count))
    t = 2 * np.pi * rng.random(count)
    return [complex(center + ri * complex(math.cos(ti), math.sin(ti))) for ri, ti in zip(r, t)]


def _anchor_for(phi: AffineMap, anchor: Optional[complex]) -> complex:
    if not phi.angle.is_zero():
        return fixed_point(phi)
    return complex(anchor) if anchor is not None else 0j


def _worst_point(f, phi, points):
    worst, worst_z, evaluated = -1.0, None, 0
    for z in points:
        try:
            r = relative_residual(f, phi, z)
        except OverflowError:
            continue
        evaluated += 1
        if r > worst:
            worst, worst_z = r, z
    return worst, worst_z, evaluated


def verify(f: ExprNode, phi: AffineMap, policy: VerificationPolicy = DEFAULT_POLICY,
           anchor: Optional[complex] = None) -> VerificationReport:
    """Test f(phi(z)) == f(z). ``anchor`` centres sampling for translations (default 0)."""
    z0 = _anchor_for(phi, anchor)
    radius = policy.radius if policy.radius is not None else 2 * (1 + abs(z0))
    rng = np.random.default_rng(policy.seed)
    series_centers = [z0] + _sample_disk(rng, z0, radius, 2)
    points = _sample_disk(rng, z0, radius, policy.samples)
    common = dict(samples=policy.samples, seed=policy.seed, center=z0, radius=radius)

    poly = to_polynomial(f)
    lam_exact = phi.angle.exact_multiplier()
    if poly is not None and poly.exact and lam_exact is not None:
        # a float b is taken at its exact binary value
        declared = phi.b_exact is not None
        b_exact = phi.b_exact if declared else GaussianRational.from_complex(phi.b)
        a = list(poly.exact_coefficients)
        g = poly_compose_affine(a, lam_exact, b_exact)
        if g == a:
            return VerificationReport(VERIFIED_EXACT, phi, f, "exact", 0.0, **common)
        worst, wz, _ = _worst_point(f, phi, series_centers + points)
        if wz is not None and worst > policy.eps_reject:
            return VerificationReport(REFUTED, phi, f, "exact", worst, witness=wz,
                                      witness_residual=worst, **common)
        if declared:
            return VerificationReport(INDETERMINATE, phi, f, "exact", max(worst, 0.0), witness=wz,
                                      witness_residual=worst if wz is not None else None,
                                      note="exact coefficients differ below numeric resolution", **common)
        # rounded b of a possibly exact symmetry: fall through to the numeric tier

    lam = phi.multiplier
    series_res = 0.0
    for c in series_centers:
        try:
            direct = expand(f, c, policy.check_order)
            image = expand(f, phi(c), policy.check_order)
        except OverflowError:
            series_res = math.nan
            continue
        pulled = compose_affine(image, lam, phi.b, c)
        diff = float(np.max(np.abs(pulled.coeffs - direct.coeffs)))
        series_res = max(series_res, diff / (1 + float(np.max(np.abs(direct.coeffs)))))

    worst, wz, evaluated = _worst_point(f, phi, series_centers + points)
    common.update(order=policy.check_order)
    if evaluated == 0:
        return VerificationReport(INDETERMINATE, phi, f, "numeric", math.inf, series_res,
                                  note="every sample overflowed", **common)
    total = max(worst, series_res) if not math.isnan(series_res) else math.inf
    if total <= policy.eps_accept:
        return VerificationReport(VERIFIED_NUMERIC, phi, f, "numeric", total, series_res, **common)
    if worst > policy.eps_reject:
        return VerificationReport(REFUTED, phi, f, "numeric", total, series_res, witness=wz,
                                  witness_residual=worst, **common)
    return VerificationReport(INDETERMINATE, phi, f, "numeric", total, series_res, witness=wz,
                              witness_residual=worst, **common)


def check_translation(f: ExprNode, b, policy: VerificationPolicy = DEFAULT_POLICY,
                      anchor: Optional[complex] = None) -> VerificationReport:
    return verify(f, AffineMap.translation(b), policy, anchor)


# ---------------------------------------------------------------- the anchored search


@dataclass(frozen=True)
class AnchorScan:
    """Every candidate tried at one critical point, with its report."""

    anchor: complex
    order: int
    reports: tuple

    @property
    def verified(self) -> list:
        return [(r.candidate, r) for r in self.reports if r.verified]

    def to_dict(self) -> dict:
        verified = self.verified
        return {
            "anchor": cjson(self.anchor),
            "zero_order": self.order,
            "candidates": [r.to_dict() for r in self.reports],
            "symmetries": [m.to_dict() for m, _ in verified],
            "message": None if verified else NO_SYMMETRY_MESSAGE,
        }


def resolve_anchor(f: ExprNode, z0) -> Union[complex, GaussianRational]:
    """Exact anchor for Gaussian-rational polynomials, plain complex otherwise.

    A float anchor is replaced by a nearby small-denominator rational when f'
    vanishes there exactly; failing that, its exact binary value is used.
    """
    poly = to_polynomial(f)
    if poly is None or not poly.exact:
        return complex(z0)
    if isinstance(z0, GaussianRational):
        return z0
    z0 = complex(z0)
    dp = poly_derivative(list(poly.exact_coefficients))
    for max_den in (10**3, 10**6, 10**9, 10**12):
        cand = rationalize(z0, max_den)
        if abs(complex(cand) - z0) <= 1e-9 * (1 + abs(z0)) and not poly_eval(dp, cand):
            return cand
    return GaussianRational.from_complex(z0)


def scan_anchor(f: ExprNode, z0, policy: VerificationPolicy = DEFAULT_POLICY) -> AnchorScan:
    anchor = resolve_anchor(f, z0)
    n = zero_order_at(f, complex(anchor), policy.series_order, policy.zero_tol)
    reports = tuple(verify(f, phi, policy) for phi in candidates(anchor, n))
    return AnchorScan(complex(anchor), n, reports)


def find_symmetries_at(f: ExprNode, z0, policy: VerificationPolicy = DEFAULT_POLICY) -> list:
    """All verified (map, report) pairs among the rotations about the critical point z0.

    An empty list means no entire automorphic function is related to z0.
    """
    return scan_anchor(f, z0, policy).verified


# ---------------------------------------------------------------- structural checks


def fixed_point_derivative_check(f: ExprNode, phi: AffineMap, order: int = DEFAULT_ORDER,
                                 tol: float = DEFAULT_ZERO_TOL) -> tuple[int, int]:
    """(n, k) with n the zero order of f - f(z0) at the fixed point and multiplier == e^{2 pi i k/n}."""
    z0 = fixed_point(phi)
    n = _raw_zero_order(f, z0, order, tol)
    lam = phi.multiplier
    matches = [k for k in range(max(n, 1)) if abs(lam - _cis_pi(Fraction(2 * k, max(n, 1)))) <= 1e-10]
    if len(matches) != 1:
        raise NoMatchingRoot(f"multiplier {lam} is not a {n}-th root of unity at the fixed point {z0}")
    return n, matches[0]


def derivative_identity_residuals(f: ExprNode, phi: AffineMap, points, fprime: Optional[ExprNode] = None):
    """|Phi' f'(Phi(z)) - f'(z)| / (1 + |f'(z)|) at each point."""
    fprime = fprime if fprime is not None else differentiate(f)
    lam = phi.multiplier
    out = []
    for z in points:
        d = evaluate(fprime, z)
        out.append(abs(lam * evaluate(fprime, phi(z)) - d) / (1 + abs(d)))
    return out


@dataclass(frozen=True)
class IntersectionReport:
    f_report: VerificationReport
    fprime_report: VerificationReport

    @property
    def both_verified(self) -> bool:
        return self.f_report.verified and self.fprime_report.verified

    def to_dict(self) -> dict:
        return {
            "f": self.f_report.status,
            "f_prime": self.fprime_report.status,
            "both_verified": self.both_verified,
            "angle_zero": self.f_report.candidate.angle.is_zero(),
        }


def check_intersection_translation(f: ExprNode, phi: AffineMap, policy: VerificationPolicy = DEFAULT_POLICY,
                                   anchor: Optional[complex] = None) -> IntersectionReport:
    """Verify phi against f and f'; a map in both groups must be a translation."""
    rep = IntersectionReport(verify(f, phi, policy, anchor), verify(differentiate(f), phi, policy, anchor))
    if rep.both_verified and not phi.angle.is_zero():
        raise PropositionViolation(f"{phi} preserves both f and f' but is not a translation")
    return rep


# ---------------------------------------------------------------- groups and orbits


@dataclass(frozen=True)
class GroupClosure:
    elements: tuple
    truncated: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def to_dict(self) -> dict:
        return {
            "size": len(self.elements),
            "truncated": self.truncated,
            "elements": [m.to_dict() for m in self.elements],
        }


def group_closure(generators, cap: int = 64) -> GroupClosure:
    """Breadth-first closure under composition and inversion, stopping at ``cap`` elements."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = []
    for g in generators:
        for h in (g, invert(g)):
            if not any(h.same_as(x) for x in gens):
                gens.append(h)
    elements = [IDENTITY]
    queue = deque([IDENTITY])
    while queue:
        cur = queue.popleft()
        for g in gens:
            new = compose(g, cur)
            if any(new.same_as(e) for e in elements):
                continue
            if len(elements) >= cap:
                return GroupClosure(tuple(elements), True)
            elements.append(new)
            queue.append(new)
    return GroupClosure(tuple(elements), False)


@dataclass(frozen=True)
class OrbitReport:
    base: complex
    points: tuple
    generators: tuple
    depth: int
    min_distance: float
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "base": cjson(self.base),
            "depth": self.depth,
            "generators": [g.to_dict() for g in self.generators],
            "size": len(self.points),
            "points": [cjson(p) for p in self.points],
            "min_pairwise_distance": None if math.isinf(self.min_distance) else self.min_distance,
            "truncated": self.truncated,
        }


def min_pairwise_distance(points) -> float:
    return _kernels.min_pairwise_distance(np.asarray(list(points), dtype=np.complex128))


def orbit(z, generators, depth: int, max_points: int = 10_000) -> OrbitReport:
    """Points reachable from z by at most ``depth`` applications of the generators or their inverses."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    z = complex(z)
    moves = []
    for g in generators:
        moves.extend([g, invert(g)])
    points = [z]
    frontier = [z]
    truncated = False
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for g in moves:
                v = complex(g(w))
                if any(abs(v - p) <= DEDUP_TOL for p in points):
                    continue
                if len(points) >= max_points:
                    truncated = True
                    break
                points.append(v)
                nxt.append(v)
        frontier = nxt
        if truncated or not frontier:
            break
    return OrbitReport(z, tuple(points), tuple(generators), depth, min_pairwise_distance(points), truncated)
