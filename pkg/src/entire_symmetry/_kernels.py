"""Numeric inner loops, compiled with numba when available.

Set ``ENTIRE_SYMMETRY_NO_JIT=1`` to force the pure-numpy implementations.
Both paths follow the same operation order so their outputs agree to the
last bit on the operations that matter for reports (products, Horner,
substitution); ``benchmarks/bench_kernels.py`` times them side by side.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

JIT_DISABLED = os.environ.get("ENTIRE_SYMMETRY_NO_JIT", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not JIT_DISABLED

_EPS = np.finfo(np.float64).eps


# ---------------------------------------------------------------- numpy path
# numpy's SIMD complex multiply may fuse multiply-adds; the explicit real
# arithmetic below keeps rounding identical to the scalar compiled loops.

def _pack(re, im):
    out = np.empty(np.shape(re), dtype=np.complex128)
    out.real = re
    out.imag = im
    return out


def cmul_np(a, b):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag
    return _pack(ar * br - ai * bi, ar * bi + ai * br)


def cauchy_product_np(a, b):
    n = a.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        if a[i] != 0:
            out[i:] += cmul_np(a[i], b[: n - i])
    return out


def substitute_np(outer, inner):
    """Series of outer(inner(h)) for inner with zero constant term, Horner-style."""
    n = inner.shape[0]
    acc = np.zeros(n, dtype=np.complex128)
    acc[0] = outer[outer.shape[0] - 1]
    for j in range(outer.shape[0] - 2, -1, -1):
        acc = cauchy_product_np(acc, inner)
        acc[0] += outer[j]
    return acc


def horner_np(coeffs, h):
    h = np.asarray(h, dtype=np.complex128)
    acc = np.full(h.shape, coeffs[coeffs.shape[0] - 1], dtype=np.complex128)
    for j in range(coeffs.shape[0] - 2, -1, -1):
        acc = cmul_np(acc, h) + coeffs[j]
    return acc


def _horner_scale_np(coeffs, z):
    az = np.abs(z)
    acc = np.full(z.shape, abs(coeffs[coeffs.shape[0] - 1]), dtype=np.float64)
    for j in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * az + abs(coeffs[j])
    return acc


def cdiv_np(a, b):
    """Smith's complex division, spelled out so both paths round identically."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        big_re = np.abs(br) >= np.abs(bi)
        r1 = bi / br
        d1 = br + bi * r1
        r2 = br / bi
        d2 = bi + br * r2
        re = np.where(big_re, (ar + ai * r1) / d1, (ar * r2 + ai) / d2)
        im = np.where(big_re, (ai - ar * r1) / d1, (ai * r2 - ar) / d2)
    return _pack(re, im)


def aberth_np(coeffs, z, tol, max_iter):
    z = np.array(z, dtype=np.complex128)
    n = z.shape[0]
    dcoeffs = coeffs[1:] * np.arange(1, coeffs.shape[0]).astype(np.float64)
    done = np.zeros(n, dtype=np.bool_)
    it = 0
    while it < max_iter:
        it += 1
        p = horner_np(coeffs, z)
        dp = horner_np(dcoeffs, z)
        scale = _horner_scale_np(coeffs, z)
        done = done | (np.abs(p) <= 4.0 * _EPS * scale)
        if np.all(done):
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = cdiv_np(np.ones_like(diff), diff)
        np.fill_diagonal(inv, 0.0)
        # sequential row sums to mirror the compiled loop
        s = np.zeros(n, dtype=np.complex128)
        for j in range(n):
            s = s + inv[:, j]
        w = np.zeros(n, dtype=np.complex128)
        active = ~done
        ratio = cdiv_np(p[active], dp[active])
        w[active] = cdiv_np(ratio, 1.0 - cmul_np(ratio, s[active]))
        z = z - w
        step_small = np.abs(w) <= tol * (1.0 + np.abs(z))
        done = done | step_small
        if np.all(done):
            break
    return z, it, bool(np.all(done))


def min_pairwise_distance_np(points, block=256):
    # squared distances pick the pair (first minimum in row-major order, like
    # the compiled loop); one abs() at the end
    n = points.shape[0]
    xs, ys = points.real, points.imag
    best, bi, bj = np.inf, 0, 0
    for i0 in range(0, n - 1, block):
        rows = np.arange(i0, min(i0 + block, n - 1))
        cols = np.arange(i0 + 1, n)
        dx = xs[cols][None, :] - xs[rows][:, None]
        dy = ys[cols][None, :] - ys[rows][:, None]
        d2 = dx * dx + dy * dy
        d2[cols[None, :] <= rows[:, None]] = np.inf
        r, c = np.unravel_index(int(np.argmin(d2)), d2.shape)
        if d2[r, c] < best:
            best, bi, bj = d2[r, c], rows[r], cols[c]
    return abs(points[bi] - points[bj])


# ---------------------------------------------------------------- numba path

if numba is not None:
    njit = numba.njit(cache=True)

    @njit
    def cauchy_product_nb(a, b):
        n = a.shape[0]
        out = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            ai = a[i]
            if ai != 0:
                for j in range(n - i):
                    out[i + j] += ai * b[j]
        return out

    @njit
    def substitute_nb(outer, inner):
        n = inner.shape[0]
        acc = np.zeros(n, dtype=np.complex128)
        acc[0] = outer[outer.shape[0] - 1]
        for j in range(outer.shape[0] - 2, -1, -1):
            acc = cauchy_product_nb(acc, inner)
            acc[0] += outer[j]
        return acc

    @njit
    def _horner_flat_nb(coeffs, h):
        out = np.empty(h.shape[0], dtype=np.complex128)
        m = coeffs.shape[0]
        for k in range(h.shape[0]):
            acc = coeffs[m - 1]
            hk = h[k]
            for j in range(m - 2, -1, -1):
                acc = acc * hk + coeffs[j]
            out[k] = acc
        return out

    def horner_nb(coeffs, h):
        h = np.asarray(h, dtype=np.complex128)
        flat = _horner_flat_nb(coeffs, h.ravel())
        return flat.reshape(h.shape)

    @njit
    def cdiv_nb(a, b):
        ar, ai, br, bi = a.real, a.imag, b.real, b.imag
        if abs(br) >= abs(bi):
            r = bi / br
            d = br + bi * r
            return complex((ar + ai * r) / d, (ai - ar * r) / d)
        r = br / bi
        d = bi + br * r
        return complex((ar * r + ai) / d, (ai * r - ar) / d)

    @njit
    def aberth_nb(coeffs, z0, tol, max_iter):
        z = z0.copy()
        n = z.shape[0]
        m = coeffs.shape[0]
        done = np.zeros(n, dtype=np.bool_)
        w = np.zeros(n, dtype=np.complex128)
        p = np.zeros(n, dtype=np.complex128)
        dp = np.zeros(n, dtype=np.complex128)
        it = 0
        while it < max_iter:
            it += 1
            alldone = True
            for i in range(n):
                zi = z[i]
                acc = coeffs[m - 1]
                sc = abs(coeffs[m - 1])
                azi = abs(zi)
                for j in range(m - 2, -1, -1):
                    acc = acc * zi + coeffs[j]
                    sc = sc * azi + abs(coeffs[j])
                # separate derivative pass, same order as the numpy path
                dacc = coeffs[m - 1] * (m - 1)
                for j in range(m - 2, 0, -1):
                    dacc = dacc * zi + coeffs[j] * j
                p[i] = acc
                dp[i] = dacc
                if abs(acc) <= 4.0 * 2.220446049250313e-16 * sc:
                    done[i] = True
                if not done[i]:
                    alldone = False
            if alldone:
                break
            for i in range(n):
                w[i] = 0j
                if done[i]:
                    continue
                s = 0j
                for j in range(n):
                    if j != i:
                        s = s + cdiv_nb(1.0 + 0j, z[i] - z[j])
                    else:
                        s = s + 0j
                ratio = cdiv_nb(p[i], dp[i])
                w[i] = cdiv_nb(ratio, 1.0 - ratio * s)
            alldone = True
            for i in range(n):
                z[i] = z[i] - w[i]
                if abs(w[i]) <= tol * (1.0 + abs(z[i])):
                    done[i] = True
                if not done[i]:
                    alldone = False
            if alldone:
                break
        converged = True
        for i in range(n):
            if not done[i]:
                converged = False
        return z, it, converged

    @njit
    def min_pairwise_distance_nb(points):
        n = points.shape[0]
        best = np.inf
        bi = 0
        bj = 0
        for i in range(n - 1):
            xi = points[i].real
            yi = points[i].imag
            for j in range(i + 1, n):
                dx = points[j].real - xi
                dy = points[j].imag - yi
                d2 = dx * dx + dy * dy
                if d2 < best:
                    best = d2
                    bi = i
                    bj = j
        return abs(points[bi] - points[bj])


if USE_NUMBA:
    cauchy_product = cauchy_product_nb
    substitute = substitute_nb
    horner = horner_nb
    _aberth = aberth_nb
    _min_pairwise = min_pairwise_distance_nb
else:
    cauchy_product = cauchy_product_np
    substitute = substitute_np
    horner = horner_np
    _aberth = aberth_np
    _min_pairwise = min_pairwise_distance_np


def aberth(coeffs, z0, tol, max_iter):
    """Run Aberth-Ehrlich iterations on ascending ``coeffs`` from initial guesses ``z0``.

    Returns ``(roots, iterations, converged)``.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    z, it, ok = _aberth(coeffs, z0, float(tol), int(max_iter))
    return z, int(it), bool(ok)


def min_pairwise_distance(points) -> float:
    pts = np.ascontiguousarray(points, dtype=np.complex128)
    if pts.shape[0] < 2:
        return float("inf")
    return float(_min_pairwise(pts))


def warmup() -> None:
    """Trigger compilation of every kernel (no-op on the numpy path)."""
    a = np.array([1.0, 2.0, 0.5], dtype=np.complex128)
    b = np.array([0.0, 1.0, 0.0], dtype=np.complex128)
    cauchy_product(a, b)
    substitute(a, b)
    horner(a, np.array([0.5 + 0.5j]))
    aberth(np.array([-1.0, 0.0, 1.0]), np.array([0.3 + 1.1j, -0.7 - 0.2j]), 1e-12, 50)
    min_pairwise_distance(np.array([0j, 1 + 0j, 3j]))
