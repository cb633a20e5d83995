"""Critical points of f: zeros of f'.

Polynomials go through Aberth-Ehrlich simultaneous iteration (after an exact
square-free split when the coefficients are Gaussian rationals, so multiple
roots come out with exact multiplicity and full accuracy). Transcendental
functions are searched by Newton iteration seeded on a grid over a
user-supplied box; that search is not guaranteed to find every zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .expr import ExprNode, PolyForm, differentiate, evaluate, evaluate_many, to_polynomial
from .gaussian import GaussianRational, poly_eval, rationalize, square_free_decomposition
from .series import DEFAULT_ORDER, expand, zero_order

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERATIONS = 500
RESIDUAL_LIMIT = 1e-9
DEDUP_DISTANCE = 1e-8
_EPS = np.finfo(float).eps


class NoConvergence(ArithmeticError):
    def __init__(self, max_iterations: int, best):
        super().__init__(f"root iteration did not converge within {max_iterations} iterations")
        self.max_iterations = max_iterations
        self.best = list(best)


class BoxRequired(ValueError):
    pass


class ConstantFunctionError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBox:
    lower: complex
    upper: complex
    resolution: int = 40

    def __post_init__(self):
        lo, hi = complex(self.lower), complex(self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if not (lo.real < hi.real and lo.imag < hi.imag):
            raise ValueError("box corners must span a non-empty rectangle (lower-left, upper-right)")
        if self.resolution < 2:
            raise ValueError("grid resolution must be at least 2")

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.lower.real - slack <= z.real <= self.upper.real + slack
                and self.lower.imag - slack <= z.imag <= self.upper.imag + slack)

    def grid(self) -> np.ndarray:
        xs = np.linspace(self.lower.real, self.upper.real, self.resolution)
        ys = np.linspace(self.lower.imag, self.upper.imag, self.resolution)
        return (xs[None, :] + 1j * ys[:, None]).ravel()


@dataclass(frozen=True)
class CriticalPoint:
    location: complex
    residual: float
    multiplicity: int
    exact: Optional[GaussianRational] = None


def _clean(z: complex) -> complex:
    """Drop rounding-level real/imaginary parts and negative zeros."""
    z = complex(z)
    mag = abs(z)
    re = 0.0 if abs(z.real) <= 4 * _EPS * mag else z.real
    im = 0.0 if abs(z.imag) <= 4 * _EPS * mag else z.imag
    return complex(re + 0.0, im + 0.0)


def _sort_key(z: complex):
    return (z.real, z.imag)


def _scale(coeffs: np.ndarray, z: complex) -> float:
    return float(np.sum(np.abs(coeffs) * abs(z) ** np.arange(coeffs.shape[0])))


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[0] - 1
    lead = coeffs[-1]
    centroid = -coeffs[-2] / (n * lead)
    radius = 0.0
    for k in range(n):
        if coeffs[k] != 0:
            radius = max(radius, abs(coeffs[k] / lead) ** (1.0 / (n - k)))
    radius = radius or 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return centroid + radius * np.exp(1j * angles)


def _aberth_roots(coeffs: np.ndarray, tol: float, max_iterations: int) -> np.ndarray:
    """All roots of a polynomial with nonzero constant term (ascending coefficients)."""
    n = coeffs.shape[0] - 1
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    z, _, converged = _kernels.aberth(coeffs, _initial_guesses(coeffs), tol, max_iterations)
    if not converged:
        res = np.abs(_kernels.horner(coeffs, z))
        scl = np.array([_scale(coeffs, zi) for zi in z])
        if not np.all(res <= tol * scl):
            raise NoConvergence(max_iterations, z)
    return z


def _split_zero_roots(coeffs: np.ndarray):
    m = 0
    while m < coeffs.shape[0] - 1 and coeffs[m] == 0:
        m += 1
    return m, coeffs[m:]


def _numeric_clusters(coeffs: np.ndarray, tol: float, max_iterations: int):
    m, rest = _split_zero_roots(coeffs)
    out = [(0j, m, None)] if m else []
    if rest.shape[0] > 1:
        roots = [complex(r) for r in _aberth_roots(rest, tol, max_iterations)]
        radius = 1e3 * tol
        # single-linkage merge of clustered approximations of a multiple root
        parent = list(range(len(roots)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if abs(roots[i] - roots[j]) < radius:
                    parent[find(i)] = find(j)
        groups: dict = {}
        for i, r in enumerate(roots):
            groups.setdefault(find(i), []).append(r)
        for members in groups.values():
            out.append((complex(np.mean(members)), len(members), None))
    return out


def _snap(factor, root: complex) -> Optional[GaussianRational]:
    for max_den in (10**3, 10**6, 10**9, 10**12):
        cand = rationalize(root, max_den)
        if abs(complex(cand) - root) > 1e-6 * (1 + abs(root)):
            continue
        if not poly_eval(factor, cand):
            return cand
    return None


def _exact_clusters(exact_coeffs, tol: float, max_iterations: int):
    out = []
    for factor, mult in square_free_decomposition(list(exact_coeffs)):
        if len(factor) == 2:
            r = -factor[0] / factor[1]
            out.append((complex(r), mult, r))
            continue
        numeric = np.array([complex(c) for c in factor], dtype=np.complex128)
        m, rest = _split_zero_roots(numeric)
        if m:
            # a square-free factor has at most a simple root at 0
            out.append((0j, mult, GaussianRational(0)))
        if rest.shape[0] > 1:
            for r in _aberth_roots(rest, tol, max_iterations):
                r = complex(r)
                snapped = _snap(factor, r)
                out.append((complex(snapped) if snapped is not None else r, mult, snapped))
    return out


def polynomial_root_clusters(p: PolyForm, tol: float = DEFAULT_TOL,
                             max_iterations: int = DEFAULT_MAX_ITERATIONS):
    """Distinct roots as ``(root, multiplicity, exact_or_None)``, sorted by (re, im)."""
    if p.degree < 1:
        raise ValueError("polynomial_roots needs degree >= 1")
    if p.exact:
        raw = _exact_clusters(p.exact_coefficients, tol, max_iterations)
    else:
        raw = _numeric_clusters(np.array(p.coefficients, dtype=np.complex128), tol, max_iterations)
    coeffs = np.array(p.coefficients, dtype=np.complex128)
    out = []
    for r, mult, ex in raw:
        r = complex(ex) if ex is not None else _clean(r)
        if abs(p(r)) > tol * _scale(coeffs, r) and ex is None:
            raise NoConvergence(max_iterations, [c[0] for c in raw])
        out.append((r, mult, ex))
    out.sort(key=lambda item: _sort_key(item[0]))
    return out


def polynomial_roots(p: PolyForm, tol: float = DEFAULT_TOL,
                     max_iterations: int = DEFAULT_MAX_ITERATIONS) -> list[complex]:
    """All deg(p) roots, repeated according to multiplicity."""
    out = []
    for r, mult, _ in polynomial_root_clusters(p, tol, max_iterations):
        out.extend([r] * mult)
    return out


# ---------------------------------------------------------------- critical points


def _multiplicity(fprime: ExprNode, z: complex, order: int) -> int:
    return max(1, zero_order(expand(fprime, z, order)))


def critical_points(f: ExprNode, box: Optional[SearchBox] = None, order: int = DEFAULT_ORDER,
                    max_newton: int = 100) -> list[CriticalPoint]:
    """Zeros of f' (all of them for polynomial f; those Newton finds inside ``box`` otherwise)."""
    fprime = differentiate(f)
    poly = to_polynomial(f)
    if poly is not None:
        if poly.degree < 1:
            raise ConstantFunctionError("f is constant")
        dp = poly.derivative()
        if dp.degree < 1:
            return []
        dcoeffs = np.array(dp.coefficients, dtype=np.complex128)
        found = []
        for r, _, ex in polynomial_root_clusters(dp):
            if box is not None and not box.contains(r):
                continue
            residual = abs(dp(r))
            if residual > RESIDUAL_LIMIT * (1 + _scale(dcoeffs, r)):
                continue
            found.append(CriticalPoint(r, residual, _multiplicity(fprime, r, order), ex))
        return found
    if box is None:
        raise BoxRequired("a search box is required for transcendental f")
    return _newton_grid(f, fprime, box, order, max_newton)


def _newton_grid(f, fprime, box: SearchBox, order: int, max_newton: int) -> list[CriticalPoint]:
    fpp = differentiate(fprime)
    z = box.grid()
    alive = np.ones(z.shape, dtype=bool)
    diag = abs(box.upper - box.lower)
    mid = (box.upper + box.lower) / 2
    for _ in range(max_newton):
        d1 = evaluate_many(fprime, z)
        d2 = evaluate_many(fpp, z)
        with np.errstate(all="ignore"):
            step = np.where(d2 != 0, d1 / d2, 0)
        ok = np.isfinite(step) & alive
        z = np.where(ok, z - step, z)
        alive &= ok & (np.abs(z - mid) < 10 * diag)
        moving = alive & (np.abs(step) > 4 * _EPS * (1 + np.abs(z)))
        if not moving.any():
            break

    candidates = []
    for zi in z[alive]:
        zi = _clean(complex(zi))
        if not box.contains(zi):
            continue
        try:
            res = abs(evaluate(fprime, zi))
        except OverflowError:
            continue
        if res > RESIDUAL_LIMIT:
            continue
        candidates.append((zi, res))
    candidates.sort(key=lambda c: (c[1], _sort_key(c[0])))

    kept: list[CriticalPoint] = []
    for zi, res in candidates:
        if any(abs(zi - k.location) < _dedup_radius(k) for k in kept):
            continue
        kept.append(CriticalPoint(zi, res, _multiplicity(fprime, zi, order)))
    kept.sort(key=lambda c: _sort_key(c.location))
    return kept


def _dedup_radius(cp: CriticalPoint) -> float:
    # a zero of multiplicity m is only resolvable to about eps**(1/m)
    if cp.multiplicity <= 1:
        return DEDUP_DISTANCE
    return max(DEDUP_DISTANCE, 100 * _EPS ** (1.0 / cp.multiplicity) * (1 + abs(cp.location)))
